//! Grötzsch and Teichmüller module functions through the arithmetic-geometric
//! mean.
//!
//! # Properties
//!
//! - `mu(r)` is the module of the unit disk slit along `[0, r]`, in the
//!   `log(R/r)` normalization: `mu(r) = (π/2) K(r') / K(r)`.
//! - `grotzsch_phi(P) = exp(mu(1/P))`, `teich_psi(P) = exp(2 mu(1/sqrt(1+P)))`.
//! - `mu(r) * mu(r') = π²/4` with `r' = sqrt(1 - r²)`.
//!
//! # Algorithm
//!
//! `K(k) = π / (2 agm(1, k'))`, so `mu(r) = (π/2) agm(1, r') / agm(1, r)`.
//! The complementary modulus is formed as `sqrt((1-r)(1+r))`, which keeps full
//! relative precision as `r → 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Result};

/// Result of an AGM evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticValue {
    pub value: f64,
    pub iterations: u32,
    pub converged: bool,
}

const AGM_MAX_ITER: u32 = 64;
const AGM_RTOL: f64 = 1e-15;

/// Gauss arithmetic-geometric mean with iteration diagnostics.
pub fn agm_value(a: f64, b: f64) -> Result<EllipticValue> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return invalid(format!("agm requires positive finite arguments, got ({a}, {b})"));
    }
    let (mut a, mut b) = (a, b);
    let mut iterations = 0;
    while iterations < AGM_MAX_ITER {
        if (a - b).abs() <= AGM_RTOL * a.max(b) {
            return Ok(EllipticValue { value: 0.5 * (a + b), iterations, converged: true });
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        iterations += 1;
    }
    let converged = (a - b).abs() <= AGM_RTOL * a.max(b);
    Ok(EllipticValue { value: 0.5 * (a + b), iterations, converged })
}

pub fn agm(a: f64, b: f64) -> Result<f64> {
    agm_value(a, b).map(|v| v.value)
}

fn complement(r: f64) -> f64 {
    ((1.0 - r) * (1.0 + r)).sqrt()
}

/// Complete elliptic integral of the first kind, modulus convention.
pub fn ellip_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return invalid(format!("ellip_k requires 0 <= k < 1, got {k}"));
    }
    Ok(PI / (2.0 * agm(1.0, complement(k))?))
}

/// Module of the Grötzsch ring `{|z| < 1} \ [0, r]`.
pub fn mu(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return invalid(format!("mu requires 0 < r < 1, got {r}"));
    }
    Ok(FRAC_PI_2 * agm(1.0, complement(r))? / agm(1.0, r)?)
}

/// `Φ(P)`: `log Φ(P)` is the module of the exterior of the unit disk slit along `[P, ∞)`.
pub fn grotzsch_phi(p: f64) -> Result<f64> {
    log_grotzsch_phi(p).map(f64::exp)
}

pub fn log_grotzsch_phi(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return invalid(format!("grotzsch_phi requires P > 1, got {p}"));
    }
    mu(1.0 / p)
}

/// `Ψ(P)`: `log Ψ(P)` is the module of the plane slit along `[-1, 0]` and `[P, ∞)`.
pub fn teich_psi(p: f64) -> Result<f64> {
    log_teich_psi(p).map(f64::exp)
}

pub fn log_teich_psi(p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return invalid(format!("teich_psi requires P > 0, got {p}"));
    }
    Ok(2.0 * mu(1.0 / (1.0 + p).sqrt())?)
}

/// Argument `Q` with `Ψ(P) = Φ(Q)`: `Q = 1 + 2P(1 + sqrt(1 + 1/P)) = (sqrt P + sqrt(1+P))²`.
pub fn psi_phi_argument(p: f64) -> f64 {
    let s = p.sqrt() + (1.0 + p).sqrt();
    s * s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `K(k)` from the hypergeometric series, summed until terms drop below 1e-17.
    fn k_series(k: f64) -> f64 {
        let k2 = k * k;
        let mut coef = 1.0f64;
        let mut pow = 1.0f64;
        let mut sum = 0.0;
        for n in 0..10_000 {
            let term = coef * coef * pow;
            sum += term;
            if term < 1e-17 {
                break;
            }
            let n = n as f64;
            coef *= (2.0 * n + 1.0) / (2.0 * n + 2.0);
            pow *= k2;
        }
        FRAC_PI_2 * sum
    }

    #[test]
    fn agm_fixed_point_and_homogeneity() {
        assert_eq!(agm(1.0, 1.0).unwrap(), 1.0);
        let lhs = agm(3.0, 6.0).unwrap();
        let rhs = 3.0 * agm(1.0, 2.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-14 * rhs);
        assert!((agm(2.0, 1.0).unwrap() - agm(1.0, 2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn agm_rejects_nonpositive() {
        assert!(agm(0.0, 1.0).is_err());
        assert!(agm(1.0, -2.0).is_err());
        assert!(agm(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn agm_matches_series_oracle() {
        // agm(1, sqrt 2) = π / (2 K(k)) with k' = sqrt 2 / ... rescaled:
        // agm(1, sqrt 2) = sqrt 2 * agm(1/sqrt 2, 1) and agm(1, 1/sqrt 2) = π / (2 K(1/sqrt 2)).
        let v = agm(1.0, 2f64.sqrt()).unwrap();
        let oracle = 2f64.sqrt() * PI / (2.0 * k_series(1.0 / 2f64.sqrt()));
        assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
        let info = agm_value(1.0, 2f64.sqrt()).unwrap();
        assert!(info.converged && info.iterations < 10);
    }

    #[test]
    fn ellip_k_values() {
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let k = ellip_k(1.0 / 2f64.sqrt()).unwrap();
        assert!((k - 1.854_074_677_301_372).abs() < 1e-10);
        assert!((k - k_series(1.0 / 2f64.sqrt())).abs() < 1e-13);
        for i in 1..9 {
            let a = ellip_k(i as f64 / 10.0).unwrap();
            let b = ellip_k((i + 1) as f64 / 10.0).unwrap();
            assert!(a < b);
            assert!((a - k_series(i as f64 / 10.0)).abs() < 1e-12);
        }
        assert!(ellip_k(1.0).is_err());
        assert!(ellip_k(1.0 - 1e-15).unwrap() > 18.0);
    }

    #[test]
    fn mu_values() {
        assert!((mu(1.0 / 2f64.sqrt()).unwrap() - FRAC_PI_2).abs() < 1e-14);
        let prod = mu(0.5).unwrap() * mu(0.75f64.sqrt()).unwrap();
        assert!((prod - PI * PI / 4.0).abs() < 1e-12);
        // (π/2) K(sqrt(3)/2) / K(1/2) from the series oracle.
        let oracle = FRAC_PI_2 * k_series(0.75f64.sqrt()) / k_series(0.5);
        assert!((mu(0.5).unwrap() - oracle).abs() < 1e-12);
        assert!((mu(0.5).unwrap() - 2.0094).abs() < 1e-4);
        assert!(mu(0.0).is_err() && mu(1.0).is_err());
    }

    #[test]
    fn phi_and_psi_closed_values() {
        let phi = grotzsch_phi(2f64.sqrt()).unwrap();
        assert!((phi / FRAC_PI_2.exp() - 1.0).abs() < 1e-14);
        let psi = teich_psi(1.0).unwrap();
        assert!((psi / PI.exp() - 1.0).abs() < 1e-14);
        assert!(grotzsch_phi(2.0).unwrap() > 2.0 && grotzsch_phi(10.0).unwrap() > 10.0);
        assert!(teich_psi(100.0).unwrap() < 16.0 * 101.0);
        // Ψ(P) = 16P + 8 + O(1/P): the ratio to 16P tends to 1 from above.
        let ratio = teich_psi(1e6).unwrap() / 16e6;
        assert!(ratio > 1.0 && ratio < 1.001);
        assert!((teich_psi(1e6).unwrap() - 16e6 - 8.0).abs() < 1e-3);
        assert!(grotzsch_phi(1.0).is_err() && teich_psi(0.0).is_err());
    }

    #[test]
    fn psi_relations() {
        for i in 0..100 {
            let p = 10f64.powf(-3.0 + 9.0 * i as f64 / 99.0);
            let psi = teich_psi(p).unwrap();
            let a = grotzsch_phi((1.0 + p).sqrt()).unwrap().powi(2);
            let b = grotzsch_phi(psi_phi_argument(p)).unwrap();
            assert!((a / psi - 1.0).abs() < 1e-12, "P={p}");
            assert!((b / psi - 1.0).abs() < 1e-12, "P={p}");
        }
    }

    #[test]
    fn printed_relation_only_agrees_at_one() {
        // Q = 1 + 2P(1 + sqrt(1 + P)) coincides with the correct argument at P = 1 only.
        let printed = |p: f64| 1.0 + 2.0 * p * (1.0 + (1.0 + p).sqrt());
        assert!((printed(1.0) - psi_phi_argument(1.0)).abs() < 1e-12);
        let p = 100.0;
        let off = grotzsch_phi(printed(p)).unwrap() / teich_psi(p).unwrap();
        assert!(off > 5.0);
    }
}
