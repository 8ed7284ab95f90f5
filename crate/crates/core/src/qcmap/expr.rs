//! Small expression language with symbolic differentiation.
//!
//! Grammar (one free variable, `r` or `z`):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | var | 'i' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func  := log | exp | atan | sin | cos | sqrt
//! ```
//!
//! Evaluation is over complex numbers; radial profiles use the real part at real `r`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Log,
    Exp,
    Atan,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Atan => "atan",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "log" | "ln" => Func::Log,
            "exp" => Func::Exp,
            "atan" => Func::Atan,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: Complex64) -> Complex64 {
        match self {
            Func::Log => x.ln(),
            Func::Exp => x.exp(),
            Func::Atan => x.atan(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
}

fn c(x: f64) -> Expr {
    Expr::Const(Complex64::new(x, 0.0))
}

impl Expr {
    pub fn constant(x: f64) -> Expr {
        c(x)
    }

    pub fn parse(src: &str, var: &str) -> Result<Expr> {
        let mut p = Parser { toks: tokenize(src)?, pos: 0, var };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("unexpected '{}' in '{src}'", p.toks[p.pos])));
        }
        Ok(e)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        match self {
            Expr::Const(v) => *v,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => {
                let base = a.eval(x);
                match **b {
                    Expr::Const(k) if k.im == 0.0 && k.re.fract() == 0.0 && k.re.abs() <= 64.0 => base.powi(k.re as i32),
                    _ if base.im == 0.0 && base.re > 0.0 => {
                        let e = b.eval(x);
                        if e.im == 0.0 {
                            Complex64::new(base.re.powf(e.re), 0.0)
                        } else {
                            base.powc(e)
                        }
                    }
                    _ => base.powc(b.eval(x)),
                }
            }
            Expr::Neg(a) => -a.eval(x),
            Expr::Call(f, a) => f.apply(a.eval(x)),
        }
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval(Complex64::new(x, 0.0)).re
    }

    fn is_const(&self, v: f64) -> bool {
        matches!(self, Expr::Const(k) if *k == Complex64::new(v, 0.0))
    }

    fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(k) => Some(*k),
            _ => None,
        }
    }

    /// Symbolic derivative with respect to the variable.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        let d = match self {
            Const(_) => c(0.0),
            Var => c(1.0),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(mul(a.derivative(), (**b).clone()), mul((**a).clone(), b.derivative())),
            Div(a, b) => div(
                sub(mul(a.derivative(), (**b).clone()), mul((**a).clone(), b.derivative())),
                pow((**b).clone(), c(2.0)),
            ),
            Neg(a) => neg(a.derivative()),
            Pow(a, b) => match b.as_const() {
                Some(k) => mul(mul(Const(k), pow((**a).clone(), Const(k - 1.0))), a.derivative()),
                None => mul(
                    self.clone(),
                    add(
                        mul(b.derivative(), call(Func::Log, (**a).clone())),
                        div(mul((**b).clone(), a.derivative()), (**a).clone()),
                    ),
                ),
            },
            Call(f, a) => {
                let u = (**a).clone();
                let outer = match f {
                    Func::Log => div(c(1.0), u),
                    Func::Exp => self.clone(),
                    Func::Atan => div(c(1.0), add(c(1.0), pow(u, c(2.0)))),
                    Func::Sin => call(Func::Cos, u),
                    Func::Cos => neg(call(Func::Sin, u)),
                    Func::Sqrt => div(c(0.5), self.clone()),
                };
                mul(outer, a.derivative())
            }
        };
        d
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        _ if a.is_const(0.0) => b,
        _ if b.is_const(0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        _ if b.is_const(0.0) => a,
        _ if a.is_const(0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        _ if a.is_const(0.0) || b.is_const(0.0) => c(0.0),
        _ if a.is_const(1.0) => b,
        _ if b.is_const(1.0) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x / y),
        _ if a.is_const(0.0) => c(0.0),
        _ if b.is_const(1.0) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    if b.is_const(1.0) {
        a
    } else if b.is_const(0.0) {
        c(1.0)
    } else {
        Expr::Pow(Box::new(a), Box::new(b))
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(k) => Expr::Const(-k),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(k) if k.im == 0.0 => write!(f, "{}", k.re),
            Expr::Const(k) if k.re == 0.0 => write!(f, "({}*i)", k.im),
            Expr::Const(k) => write!(f, "({}+{}*i)", k.re, k.im),
            Expr::Var => write!(f, "x"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(g, a) => write!(f, "{}({a})", g.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(x) => write!(f, "{x}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let ch = b[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && (b[j] as char).is_ascii_digit() {
                    i = j;
                    while i < b.len() && (b[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s = &src[start..i];
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(src[start..i].to_string()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Sym(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{ch}' in '{src}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(x) => Ok(c(x)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == self.var {
                    return Ok(Expr::Var);
                }
                match name.as_str() {
                    "i" => return Ok(Expr::Const(Complex64::new(0.0, 1.0))),
                    "pi" => return Ok(c(std::f64::consts::PI)),
                    "e" => return Ok(c(std::f64::consts::E)),
                    _ => {}
                }
                let f = Func::from_name(&name).ok_or_else(|| Error::Parse(format!("unknown name '{name}'")))?;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Call(f, Box::new(arg)))
            }
            Tok::Sym(ch) => Err(Error::Parse(format!("unexpected '{ch}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, r: f64) -> f64 {
        Expr::parse(s, "r").unwrap().eval_real(r)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(ev("-2^2", 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("(1 + r) / 2", 3.0), 2.0);
        assert!((ev("0.1*log(r)", std::f64::consts::E) - 0.1).abs() < 1e-15);
        assert!((ev("atan(r)", 1.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(ev("1e-3 * r", 2.0), 2e-3);
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("1 +", "r").is_err());
        assert!(Expr::parse("foo(r)", "r").is_err());
        assert!(Expr::parse("z", "r").is_err());
        assert!(Expr::parse("(r", "r").is_err());
        assert!(Expr::parse("r $ 2", "r").is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        for s in ["1/(1+r)", "0.1*log(r)", "atan(r)", "r^2.5 - exp(-r)", "sqrt(r)*sin(r)", "r^r", "cos(log(r))/r"] {
            let e = Expr::parse(s, "r").unwrap();
            let d = e.derivative();
            for &x in &[0.7, 1.3, 4.0] {
                let h = 1e-5;
                let fd = (e.eval_real(x + h) - e.eval_real(x - h)) / (2.0 * h);
                assert!((d.eval_real(x) - fd).abs() < 1e-7 * fd.abs().max(1.0), "{s} at {x}");
            }
        }
    }

    #[test]
    fn complex_variable() {
        let e = Expr::parse("z^2 + i*z", "z").unwrap();
        let z = Complex64::new(1.0, 1.0);
        assert!((e.eval(z) - (z * z + Complex64::i() * z)).norm() < 1e-15);
        assert!((e.derivative().eval(z) - (2.0 * z + Complex64::i())).norm() < 1e-15);
    }
}
