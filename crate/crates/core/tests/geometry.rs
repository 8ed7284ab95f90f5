use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use ringmod_core::geometry::{
    curve_radii, logarithmic_area, logarithmic_length, polygon, rasterize, reduced_logarithmic_area, CellLabel, CurveSamples, DomainSpec,
    Point, RingDomainSpec,
};
use ringmod_core::invariants::generators::StarCurve;

fn wobbly(n: usize, a: f64, k: f64) -> CurveSamples {
    CurveSamples::from_fn(n, |t| Point::from_polar(1.0 + a * (k * t).cos(), t))
}

#[test]
fn circle_log_length_is_two_pi() {
    let l = logarithmic_length(&CurveSamples::circle(3.0, 4096)).unwrap();
    assert!((l - TAU).abs() < 1e-5);
}

#[test]
fn radial_segment_log_length() {
    let l = logarithmic_length(&CurveSamples::open(vec![Point::new(1.0, 0.0), Point::new(5.0, 0.0)])).unwrap();
    assert!((l - 5f64.ln()).abs() < 1e-14);
}

#[test]
fn through_origin_is_rejected() {
    let c = CurveSamples::open(vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]);
    assert!(logarithmic_length(&c).is_err());
}

#[test]
fn annulus_log_area() {
    let a = logarithmic_area(&RingDomainSpec::annulus(0.5, 4.0), None).unwrap();
    assert!((a - TAU * 8f64.ln()).abs() < 1e-9);
}

#[test]
fn disk_reduced_log_area() {
    // The log image is the half-strip below log 2; its area above log ρ minus 2π log(1/ρ) is 2π log 2.
    let a = reduced_logarithmic_area(&DomainSpec::disk(Point::new(0.0, 0.0), 2.0)).unwrap();
    assert!((a - TAU * 2f64.ln()).abs() < 1e-6, "{a}");
}

#[test]
fn disk_rasterization_cell_counts() {
    let ring = RingDomainSpec::annulus(1.0, 2.0);
    let g = rasterize(&ring, 64).unwrap();
    assert!(g.count(CellLabel::Interior) > 0);
}

#[test]
fn polygon_queries() {
    let sq = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(2.0, 2.0), Point::new(0.0, 2.0)];
    assert!((polygon::signed_area(&sq) - 4.0).abs() < 1e-15);
    assert!(polygon::contains(&sq, Point::new(1.0, 1.0)));
    assert!(!polygon::contains(&sq, Point::new(3.0, 1.0)));
    assert!((polygon::boundary_distance(&sq, Point::new(1.0, 0.5)) - 0.5).abs() < 1e-15);
    assert!(polygon::is_simple(&sq));
    let bow = [Point::new(0.0, 0.0), Point::new(2.0, 2.0), Point::new(2.0, 0.0), Point::new(0.0, 2.0)];
    assert!(!polygon::is_simple(&bow));
}

#[test]
fn domain_json_round_trip() {
    let specs = vec![
        DomainSpec::disk(Point::new(0.5, -1.0), 2.0),
        DomainSpec::annulus(1.0, 3.0),
        DomainSpec::grotzsch(2.0),
        DomainSpec::teichmuller(1.0, 4.0),
        DomainSpec::slit_annulus(5.0, 2.0),
        DomainSpec::plane_minus_ray(Point::new(1.0, 0.0), Point::new(1.0, 0.0)),
        DomainSpec::complement_of(DomainSpec::disk(Point::new(0.0, 0.0), 1.0)),
    ];
    for s in specs {
        let text = serde_json::to_string(&s).unwrap();
        let back: DomainSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
    }
    let ring: RingDomainSpec = serde_json::from_str(r#"{"kind": "annulus", "r": 1, "R": 2}"#).unwrap();
    assert_eq!(ring, RingDomainSpec::annulus(1.0, 2.0));
}

#[test]
fn invalid_domains() {
    assert!(DomainSpec::annulus(2.0, 1.0).validate().is_err());
    assert!(DomainSpec::disk(Point::new(0.0, 0.0), -1.0).validate().is_err());
    assert!(RingDomainSpec::between(DomainSpec::disk(Point::new(0.0, 0.0), 1.0), DomainSpec::disk(Point::new(0.0, 0.0), 2.0))
        .validate()
        .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_length_rotation_and_scaling(a in 0.0f64..0.5, k in 1u32..6, c in 0.01f64..100.0, rot in 0.0f64..TAU) {
        let base = wobbly(512, a, k as f64);
        let l0 = logarithmic_length(&base).unwrap();
        let moved = CurveSamples::closed(base.points.iter().map(|p| p * Point::from_polar(c, rot)).collect());
        let l1 = logarithmic_length(&moved).unwrap();
        prop_assert!((l0 - l1).abs() < 1e-9 * l0);
    }

    #[test]
    fn radii_scale(a in 0.0f64..0.5, k in 1u32..6, c in 0.01f64..100.0) {
        let base = wobbly(256, a, k as f64);
        let (r1, r2, w) = curve_radii(&base).unwrap();
        let (s1, s2, v) = curve_radii(&base.scaled(c)).unwrap();
        prop_assert!((s1 - c * r1).abs() < 1e-12 * c);
        prop_assert!((s2 - c * r2).abs() < 1e-12 * c);
        prop_assert!((w - v).abs() < 1e-12);
    }

    #[test]
    fn log_area_scaling(r in 0.1f64..2.0, ratio in 1.1f64..50.0, c in 0.1f64..10.0) {
        let a = logarithmic_area(&RingDomainSpec::annulus(r, r * ratio), None).unwrap();
        let b = logarithmic_area(&RingDomainSpec::annulus(c * r, c * r * ratio), None).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a);
        prop_assert!((a - TAU * ratio.ln()).abs() < 1e-9 * a);
    }

    #[test]
    fn star_polygon_is_simple(seed in 0u64..1000) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = StarCurve::random(&mut rng, 1.0, 4, 0.3);
        let vs = s.vertices(128);
        prop_assert!(polygon::is_simple(&vs));
        prop_assert!(polygon::signed_area(&vs) > 0.0);
        let (lo, hi) = s.bounds(128);
        prop_assert!(lo > 0.0 && lo <= 1.0 && hi >= 1.0);
        prop_assert!(hi - lo < 2.0 * PI);
    }
}
