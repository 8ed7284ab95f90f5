//! Map primitives, composition, and the dilatation quotient.
//!
//! Derivatives are carried in Wirtinger form `(w_z, w_z̄)`; the singular
//! values of the real Jacobian are `|w_z| ± |w_z̄|`, which makes the
//! dilatation independent of orientation.

use std::fmt;

use num_complex::Complex64;

use super::expr::Expr;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Radial profile: an expression in `r` together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub source: String,
    pub expr: Expr,
    pub derivative: Expr,
}

impl Profile {
    pub fn parse(src: &str) -> Result<Profile> {
        let expr = Expr::parse(src, "r")?;
        let derivative = expr.derivative();
        Ok(Profile { source: src.trim().to_string(), expr, derivative })
    }

    pub fn zero() -> Profile {
        Profile::parse("0").unwrap()
    }

    pub fn at(&self, r: f64) -> f64 {
        self.expr.eval_real(r)
    }

    pub fn slope(&self, r: f64) -> f64 {
        self.derivative.eval_real(r)
    }
}

/// Holomorphic map given by an expression in `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Holomorphic {
    pub source: String,
    pub expr: Expr,
    pub derivative: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QCMapSpec {
    Identity,
    /// `w = z·exp(g(|z|) + i·η(|z|))`.
    RadialLog { g: Profile, eta: Profile },
    /// `w = z + a·z̄/|z|`, injective for `|z| > 2|a|`.
    Ellipse { a: f64 },
    /// `x + iy ↦ x + iKy`.
    Affine { k: f64 },
    /// `w = z·|z|^{s−1}`.
    Power { s: f64 },
    Conformal(Holomorphic),
    /// `outer ∘ inner`.
    Compose(Box<QCMapSpec>, Box<QCMapSpec>),
    /// A map with declared isolated exceptional points.
    Except(Box<QCMapSpec>, Vec<Point>),
}

/// Value and Wirtinger derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub w: Complex64,
    pub dz: Complex64,
    pub dzbar: Complex64,
}

impl QCMapSpec {
    pub fn radial(g: &str, eta: &str) -> Result<QCMapSpec> {
        Ok(QCMapSpec::RadialLog { g: Profile::parse(g)?, eta: Profile::parse(eta)? })
    }

    pub fn conformal(src: &str) -> Result<QCMapSpec> {
        let expr = Expr::parse(src, "z")?;
        let derivative = expr.derivative();
        Ok(QCMapSpec::Conformal(Holomorphic { source: src.trim().to_string(), expr, derivative }))
    }

    pub fn compose(outer: QCMapSpec, inner: QCMapSpec) -> QCMapSpec {
        QCMapSpec::Compose(Box::new(outer), Box::new(inner))
    }

    /// Parses the map grammar:
    /// `identity`, `radial:g=<expr>;eta=<expr>`, `ellipse:a=<num>`, `affine:K=<num>`,
    /// `power:s=<num>`, `conformal:<expr in z>`, `compose(<spec>,<spec>)`,
    /// `except(<spec>;x,y;…)`.
    pub fn parse(src: &str) -> Result<QCMapSpec> {
        let s = src.trim();
        let bad = |m: &str| Error::Parse(format!("{m} in map '{s}'"));
        if let Some(inner) = strip_call(s, "compose") {
            let parts = split_top(inner, ',');
            if parts.len() != 2 {
                return Err(bad("compose takes two maps"));
            }
            return Ok(QCMapSpec::compose(QCMapSpec::parse(parts[0])?, QCMapSpec::parse(parts[1])?));
        }
        if let Some(inner) = strip_call(s, "except") {
            let parts = split_top(inner, ';');
            let map = QCMapSpec::parse(parts[0])?;
            let mut pts = Vec::new();
            for p in &parts[1..] {
                let xy: Vec<&str> = p.split(',').collect();
                if xy.len() != 2 {
                    return Err(bad("exceptional points are written x,y"));
                }
                let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("bad coordinate"));
                pts.push(Point::new(num(xy[0])?, num(xy[1])?));
            }
            return Ok(QCMapSpec::Except(Box::new(map), pts));
        }
        if s == "identity" {
            return Ok(QCMapSpec::Identity);
        }
        let (kind, args) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        if kind.trim() == "conformal" {
            return QCMapSpec::conformal(args);
        }
        let mut kv = std::collections::BTreeMap::new();
        for part in args.split(';') {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |k: &str| -> Result<f64> {
            kv.get(k).ok_or_else(|| bad(&format!("missing '{k}'")))?.parse::<f64>().map_err(|_| bad(&format!("bad number for '{k}'")))
        };
        let spec = match kind.trim() {
            "radial" => QCMapSpec::radial(kv.get("g").map_or("0", |s| s), kv.get("eta").map_or("0", |s| s))?,
            "ellipse" => QCMapSpec::Ellipse { a: num("a")? },
            "affine" => QCMapSpec::Affine { k: num("K")? },
            "power" => QCMapSpec::Power { s: num("s")? },
            other => return Err(bad(&format!("unknown map kind '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            QCMapSpec::Affine { k } if !(*k >= 1.0 && k.is_finite()) => Err(Error::InvalidArgument(format!("affine needs K >= 1, got {k}"))),
            QCMapSpec::Power { s } if !(*s > 0.0 && s.is_finite()) => Err(Error::InvalidArgument(format!("power needs s > 0, got {s}"))),
            QCMapSpec::Ellipse { a } if !a.is_finite() => Err(Error::InvalidArgument("ellipse needs a finite a".into())),
            QCMapSpec::Compose(a, b) => {
                a.validate()?;
                b.validate()
            }
            QCMapSpec::Except(m, _) => m.validate(),
            _ => Ok(()),
        }
    }

    /// Smallest radius beyond which every primitive is valid, for maps
    /// whose validity is radial.
    pub fn min_radius(&self) -> f64 {
        match self {
            QCMapSpec::Ellipse { a } => 2.0 * a.abs(),
            QCMapSpec::Compose(_, inner) => inner.min_radius(),
            QCMapSpec::Except(m, _) => m.min_radius(),
            _ => 0.0,
        }
    }

    pub fn exceptional_points(&self) -> Vec<Point> {
        match self {
            QCMapSpec::Except(m, pts) => {
                let mut v = pts.clone();
                v.extend(m.exceptional_points());
                v
            }
            QCMapSpec::Compose(a, b) => {
                let mut v = a.exceptional_points();
                v.extend(b.exceptional_points());
                v
            }
            _ => Vec::new(),
        }
    }

    pub fn apply(&self, z: Point) -> Result<Point> {
        Ok(self.jet(z)?.w)
    }

    /// Value and Wirtinger derivatives at `z`.
    pub fn jet(&self, z: Point) -> Result<Jet> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let out = match self {
            QCMapSpec::Identity => Jet { w: z, dz: one, dzbar: zero },
            QCMapSpec::RadialLog { g, eta } => {
                let r = nonzero(z)?;
                let phi = Complex64::new(g.at(r), eta.at(r));
                let dphi = Complex64::new(g.slope(r), eta.slope(r));
                let e = phi.exp();
                Jet { w: z * e, dz: e * (one + dphi * (r / 2.0)), dzbar: e * dphi * z * z / (2.0 * r) }
            }
            QCMapSpec::Ellipse { a } => {
                let r = nonzero(z)?;
                if r <= 2.0 * a.abs() {
                    return Err(Error::DegeneratePoint(format!("ellipse({a}) is only used for |z| > {}", 2.0 * a.abs())));
                }
                Jet { w: z + a * z.conj() / r, dz: one - a * z.conj() / (2.0 * r * z), dzbar: Complex64::new(a / (2.0 * r), 0.0) }
            }
            QCMapSpec::Affine { k } => Jet {
                w: Complex64::new(z.re, k * z.im),
                dz: Complex64::new((1.0 + k) / 2.0, 0.0),
                dzbar: Complex64::new((1.0 - k) / 2.0, 0.0),
            },
            QCMapSpec::Power { s } => {
                let r = nonzero(z)?;
                let m = r.powf(s - 1.0);
                Jet { w: z * m, dz: Complex64::new((s + 1.0) / 2.0 * m, 0.0), dzbar: (s - 1.0) / 2.0 * m * z / z.conj() }
            }
            QCMapSpec::Conformal(h) => Jet { w: h.expr.eval(z), dz: h.derivative.eval(z), dzbar: zero },
            QCMapSpec::Compose(outer, inner) => {
                let i = inner.jet(z)?;
                let o = outer.jet(i.w)?;
                Jet { w: o.w, dz: o.dz * i.dz + o.dzbar * i.dzbar.conj(), dzbar: o.dz * i.dzbar + o.dzbar * i.dz.conj() }
            }
            QCMapSpec::Except(m, pts) => {
                if pts.iter().any(|&p| p == z) {
                    return Err(Error::DegeneratePoint(format!("({}, {}) is a declared exceptional point", z.re, z.im)));
                }
                m.jet(z)?
            }
        };
        if !(out.w.is_finite() && out.dz.is_finite() && out.dzbar.is_finite()) {
            return Err(Error::DegeneratePoint(format!("map is not finite at ({}, {})", z.re, z.im)));
        }
        Ok(out)
    }

    /// Real Jacobian `[[u_x, u_y], [v_x, v_y]]`.
    pub fn jacobian(&self, z: Point) -> Result<[[f64; 2]; 2]> {
        let j = self.jet(z)?;
        let dx = j.dz + j.dzbar;
        let dy = Complex64::new(0.0, 1.0) * (j.dz - j.dzbar);
        Ok([[dx.re, dy.re], [dx.im, dy.im]])
    }
}

fn nonzero(z: Point) -> Result<f64> {
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::DegeneratePoint("map is singular at the origin".into()));
    }
    Ok(r)
}

/// Dilatation quotient: largest over smallest directional derivative.
pub fn dilatation(map: &QCMapSpec, z: Point) -> Result<f64> {
    let j = map.jet(z)?;
    let (a, b) = (j.dz.norm(), j.dzbar.norm());
    let lo = (a - b).abs();
    let hi = a + b;
    if !(lo > 1e-14 * hi) {
        return Err(Error::DegeneratePoint(format!("singular Jacobian at ({}, {})", z.re, z.im)));
    }
    Ok(hi / lo)
}

fn strip_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(name)?.trim_start();
    let rest = rest.strip_prefix('(')?;
    rest.strip_suffix(')')
}

/// Splits on `sep` outside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

impl fmt::Display for QCMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QCMapSpec::Identity => write!(f, "identity"),
            QCMapSpec::RadialLog { g, eta } => write!(f, "radial:g={};eta={}", g.source, eta.source),
            QCMapSpec::Ellipse { a } => write!(f, "ellipse:a={a}"),
            QCMapSpec::Affine { k } => write!(f, "affine:K={k}"),
            QCMapSpec::Power { s } => write!(f, "power:s={s}"),
            QCMapSpec::Conformal(h) => write!(f, "conformal:{}", h.source),
            QCMapSpec::Compose(a, b) => write!(f, "compose({a},{b})"),
            QCMapSpec::Except(m, pts) => {
                write!(f, "except({m}")?;
                for p in pts {
                    write!(f, ";{},{}", p.re, p.im)?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn fd_dilatation(map: &QCMapSpec, z: Point) -> f64 {
        let h = 1e-6 * z.norm().max(1.0);
        let fx = (map.apply(z + h).unwrap() - map.apply(z - h).unwrap()) / (2.0 * h);
        let iy = Complex64::new(0.0, h);
        let fy = (map.apply(z + iy).unwrap() - map.apply(z - iy).unwrap()) / (2.0 * h);
        let dz = (fx - Complex64::i() * fy) / 2.0;
        let dzb = (fx + Complex64::i() * fy) / 2.0;
        (dz.norm() + dzb.norm()) / (dz.norm() - dzb.norm()).abs()
    }

    #[test]
    fn primitives() {
        let z = Point::new(1.0, 1.0);
        assert_eq!(dilatation(&QCMapSpec::conformal("z^2").unwrap(), z).unwrap(), 1.0);
        assert!((dilatation(&QCMapSpec::Affine { k: 3.0 }, Point::new(0.3, -2.0)).unwrap() - 3.0).abs() < 1e-14);
        let m = QCMapSpec::radial("0", "log(r)").unwrap();
        let expect = (1.25f64.sqrt() + 0.5).powi(2);
        for z in [Point::new(2.0, 0.0), Point::new(-5.0, 7.0)] {
            let d = dilatation(&m, z).unwrap();
            assert!((d - expect).abs() < 1e-12);
            assert!((fd_dilatation(&m, z) - d).abs() < 1e-6);
        }
        assert!((dilatation(&QCMapSpec::Power { s: 2.0 }, z).unwrap() - 2.0).abs() < 1e-14);
        assert!((dilatation(&QCMapSpec::Power { s: 0.25 }, z).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn symbolic_matches_differences() {
        let maps = [
            "radial:g=1/(1+r);eta=atan(r)",
            "radial:g=0.1*log(r);eta=0",
            "ellipse:a=1",
            "affine:K=2.5",
            "power:s=1.7",
            "conformal:z^3 + 2*z",
            "compose(affine:K=2,power:s=0.5)",
            "compose(ellipse:a=0.3,radial:g=0;eta=log(r))",
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for src in maps {
            let m = QCMapSpec::parse(src).unwrap();
            for _ in 0..1000 {
                let z = Point::from_polar(rng.gen_range(3.0..20.0), rng.gen_range(0.0..std::f64::consts::TAU));
                let d = dilatation(&m, z).unwrap();
                assert!((d - fd_dilatation(&m, z)).abs() < 1e-6 * d, "{src} at {z}");
            }
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for src in ["radial:g=1/(1+r);eta=0", "ellipse:a=1", "compose(affine:K=2,power:s=0.5)", "except(power:s=2;0,0)", "identity"] {
            let m = QCMapSpec::parse(src).unwrap();
            assert_eq!(QCMapSpec::parse(&m.to_string()).unwrap(), m);
        }
        assert!(QCMapSpec::parse("affine:K=0.5").is_err());
        assert!(QCMapSpec::parse("power:s=-1").is_err());
        assert!(QCMapSpec::parse("warp:x=1").is_err());
        assert!(QCMapSpec::parse("ellipse").is_err());
        assert!(dilatation(&QCMapSpec::Ellipse { a: 1.0 }, Point::new(1.5, 0.0)).is_err());
        assert!(dilatation(&QCMapSpec::parse("except(identity;1,2)").unwrap(), Point::new(1.0, 2.0)).is_err());
    }
}
