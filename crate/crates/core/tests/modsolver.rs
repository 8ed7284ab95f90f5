use proptest::prelude::*;
use ringmod_core::geometry::{rasterize, DomainSpec, Point, QuadrilateralSpec, RingDomainSpec};
use ringmod_core::invariants::generators::random_convex_quad;
use ringmod_core::modsolver::{
    quad_modulus_extrapolated, reduced_modulus, richardson, ring_modulus_extrapolated, solve, At, ReducedOptions, SolverOptions,
};

/// Module of the ring between `|z| < big_r` and the disk `|z − d| ≤ r`, from
/// the Möbius map that makes both circles concentric.
fn eccentric_oracle(big_r: f64, r: f64, d: f64) -> f64 {
    ((big_r * big_r + r * r - d * d) / (2.0 * big_r * r)).acosh()
}

fn eccentric(c: Point, s: f64, big_r: f64, r: f64, d: f64) -> RingDomainSpec {
    RingDomainSpec::between(DomainSpec::disk(c, s * big_r), DomainSpec::disk(c + Point::new(s * d, 0.0), s * r))
}

#[test]
fn eccentric_disks_match_closed_form() {
    for (big_r, r, d) in [(3.0, 1.0, 0.5), (2.0, 0.5, 1.0), (5.0, 1.0, 3.0)] {
        let m = ring_modulus_extrapolated(&eccentric(Point::new(0.0, 0.0), 1.0, big_r, r, d), 256).unwrap();
        let exact = eccentric_oracle(big_r, r, d);
        assert!((m.value - exact).abs() < 2e-3, "R={big_r} r={r} d={d}: {} vs {exact}", m.value);
    }
}

#[test]
fn rectangle_is_exact() {
    let m = quad_modulus_extrapolated(&QuadrilateralSpec::rectangle(10.0, 2.0), 64).unwrap();
    assert!((m.value - 5.0).abs() < 1e-8, "{}", m.value);
    let c = quad_modulus_extrapolated(&QuadrilateralSpec::rectangle(10.0, 2.0).conjugate(), 64).unwrap();
    assert!((m.value * c.value - 1.0).abs() < 1e-8);
}

#[test]
fn grotzsch_cross_oracle() {
    for p in [1.5, 2.0, 4.0, 8.0] {
        let m = ring_modulus_extrapolated(&RingDomainSpec::Canonical(DomainSpec::grotzsch(p)), 256).unwrap();
        let exact = ringmod_core::elliptic::log_grotzsch_phi(p).unwrap();
        assert!((m.value - exact).abs() <= m.error_estimate.max(1e-4), "P={p}: {} +- {} vs {exact}", m.value, m.error_estimate);
    }
}

#[test]
fn maximum_principle_and_energy_descent() {
    let ring = eccentric(Point::new(0.0, 0.0), 1.0, 3.0, 1.0, 1.2);
    let grid = rasterize(&ring, 64).unwrap();
    let sol = solve(grid, &SolverOptions { record_energy: true, ..Default::default() }).unwrap();
    assert!(sol.maximum_principle_holds(0.0));
    assert!(sol.potential.iter().all(|&u| u > 0.0 && u < 1.0));
    let h = &sol.energy_history;
    assert!(h.len() > 2);
    assert!(h.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "energy rose");
    assert!((h.last().unwrap() - sol.energy).abs() < 1e-8 * sol.energy);
}

#[test]
fn reduced_module_of_disk() {
    let opts = ReducedOptions::default();
    let d = DomainSpec::disk(Point::new(0.0, 0.0), 2.0);
    let m = reduced_modulus(&d, At::Finite(Point::new(0.0, 0.0)), opts).unwrap();
    assert!((m.value - 2f64.ln()).abs() < 1e-3, "{}", m.value);
    // Conformal radius (R² − |a|²)/R at an off-center point.
    let a = Point::new(0.8, 0.3);
    let m = reduced_modulus(&d, At::Finite(a), opts).unwrap();
    let exact = ((4.0 - a.norm_sqr()) / 2.0).ln();
    assert!((m.value - exact).abs() < 5e-3, "{} vs {exact}", m.value);
}

#[test]
fn reduced_module_rejects_bad_points() {
    let d = DomainSpec::disk(Point::new(0.0, 0.0), 1.0);
    assert!(reduced_modulus(&d, At::Finite(Point::new(2.0, 0.0)), ReducedOptions::default()).is_err());
    let ring = DomainSpec::annulus(1.0, 2.0);
    assert!(reduced_modulus(&ring, At::Finite(Point::new(1.5, 0.0)), ReducedOptions::default()).is_err());
}

#[test]
fn richardson_on_first_order_sequence() {
    let vals: Vec<f64> = [16.0, 32.0, 64.0].iter().map(|n| 1.0 + 0.5 / n).collect();
    let (v, err, order) = richardson(&vals);
    assert!((v - 1.0).abs() < 1e-12);
    assert!(err > 0.0);
    assert!((order.unwrap() - 1.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn annulus_calibration(r in 0.05f64..5.0, ratio in 1.1f64..100.0) {
        let m = ring_modulus_extrapolated(&RingDomainSpec::annulus(r, r * ratio), 128).unwrap();
        prop_assert!((m.value - ratio.ln()).abs() <= m.error_estimate + 1e-9, "{} +- {} vs {}", m.value, m.error_estimate, ratio.ln());
    }

    #[test]
    fn rigid_motion_invariance(x in -5.0f64..5.0, y in -5.0f64..5.0, s in 0.2f64..5.0, d in 0.0f64..1.5) {
        let base = ring_modulus_extrapolated(&eccentric(Point::new(0.0, 0.0), 1.0, 3.0, 1.0, d), 128).unwrap();
        let moved = ring_modulus_extrapolated(&eccentric(Point::new(x, y), s, 3.0, 1.0, d), 128).unwrap();
        prop_assert!((base.value - moved.value).abs() <= base.error_estimate + moved.error_estimate + 1e-9);
    }

    #[test]
    fn quad_duality(seed in 0u64..10_000) {
        use rand::SeedableRng;
        let q = random_convex_quad(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = quad_modulus_extrapolated(&q, 64).unwrap();
        let b = quad_modulus_extrapolated(&q.conjugate(), 64).unwrap();
        let rel = a.error_estimate / a.value + b.error_estimate / b.value;
        prop_assert!((a.value * b.value - 1.0).abs() <= 2.0 * rel + 1e-9, "{} * {} (rel err {rel})", a.value, b.value);
    }
}
