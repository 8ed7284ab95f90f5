use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringmod_core::geometry::Point;
use ringmod_core::qcmap::{
    circularity_criterion, dilatation, image_circle_stats, ladder, t3_bounds, type_condition, verify_t3, CurveFamily, DilatationProfile,
    Direction, ExperimentOptions, QCMapSpec,
};

/// Axis ratio of the central-difference Jacobian.
fn fd_dilatation(map: &QCMapSpec, z: Point) -> f64 {
    let h = 1e-6 * z.norm().max(1.0);
    let d = |dz: Point| (map.apply(z + dz).unwrap() - map.apply(z - dz).unwrap()) / (2.0 * h);
    let fx = d(Point::new(h, 0.0));
    let fy = d(Point::new(0.0, h));
    let (a, b, c, e) = (fx.re, fy.re, fx.im, fy.im);
    let s = a * a + b * b + c * c + e * e;
    let det = (a * e - b * c).abs();
    let disc = (s * s - 4.0 * det * det).max(0.0).sqrt();
    ((s + disc) / (s - disc)).sqrt()
}

const MAPS: &[&str] = &[
    "identity",
    "affine:K=3",
    "power:s=2",
    "power:s=0.5",
    "ellipse:a=1",
    "radial:g=1/(1+r);eta=0",
    "radial:g=0.1*log(r);eta=sin(r)",
    "radial:g=0;eta=log(r)",
    "conformal:z + 0.1*z^2",
    "compose(affine:K=2,radial:g=0.2*log(r);eta=0)",
];

#[test]
fn dilatation_matches_finite_differences() {
    for src in MAPS {
        let map = QCMapSpec::parse(src).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let z = Point::from_polar(rng.gen_range(2.5..8.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let a = dilatation(&map, z).unwrap();
            let b = fd_dilatation(&map, z);
            assert!((a - b).abs() <= 1e-6 * a.max(1.0), "{src} at {z}: {a} vs {b}");
            assert!(a >= 1.0 - 1e-12);
        }
    }
}

#[test]
fn parse_errors() {
    for bad in ["", "spiral:k=1", "affine:K=0.5", "power:s=-1", "radial:g=1/(", "compose(identity)", "conformal:z +* 2"] {
        assert!(QCMapSpec::parse(bad).is_err(), "{bad} parsed");
    }
}

#[test]
fn t3_bounds_hold_for_sample_maps() {
    let opts = ExperimentOptions::default();
    for src in ["affine:K=2", "radial:g=0.3*log(r);eta=0", "radial:g=0;eta=0.5*log(r)", "ellipse:a=1"] {
        let map = QCMapSpec::parse(src).unwrap();
        let rep = verify_t3(&map, 3.0, 10.0, &opts).unwrap();
        assert_eq!(rep.get_bool("holds"), Some(true), "{src}: {:?}", rep.summary);
    }
}

#[test]
fn t3_bounds_for_constant_profile() {
    let p = DilatationProfile::parse("2", 1.0).unwrap();
    let (lo, hi) = t3_bounds(&p, 1.0, std::f64::consts::E).unwrap();
    assert!((lo - 0.5).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
    assert!(DilatationProfile::parse("0.5", 1.0).is_err());
}

#[test]
fn type_conditions() {
    let p = DilatationProfile::parse("1", 1.0).unwrap();
    let rep = type_condition(&p, Direction::PlaneToDisk).unwrap();
    assert_eq!(rep.get_text("verdict"), Some("map excluded"));
    let p = DilatationProfile::parse("log(r)^2", 3.0).unwrap();
    let rep = type_condition(&p, Direction::PlaneToDisk).unwrap();
    assert_eq!(rep.get_text("verdict"), Some("not excluded"));
    let p = DilatationProfile::parse("1", 0.0).unwrap();
    let rep = type_condition(&p, Direction::DiskToPlane).unwrap();
    assert_eq!(rep.get_text("verdict"), Some("map excluded"));
}

#[test]
fn circularity_deficiency_nonnegative() {
    let opts = ExperimentOptions::default();
    for fam in [CurveFamily::Circles, CurveFamily::Ellipses { ratio: 2.0 }, CurveFamily::Map(QCMapSpec::parse("ellipse:a=1").unwrap())] {
        let d = circularity_criterion(&fam, 1.0, 2.0, 3.5, &opts).unwrap();
        assert!(d.value >= -d.error - 1e-9, "{fam:?}: {} +- {}", d.value, d.error);
    }
}

#[test]
fn ladder_endpoints() {
    let l = ladder(1.0, 3.0, 5);
    assert_eq!(l, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radial_shift_is_g(c in -0.5f64..0.5, a in 0.0f64..2.0, lambda in 0.0f64..10.0) {
        let map = QCMapSpec::radial(&format!("{c}*log(r) + {a}/(1+r)"), "0.3*log(r)").unwrap();
        let s = image_circle_stats(&map, lambda, 256).unwrap();
        let r = lambda.exp();
        let g = c * lambda + a / (1.0 + r);
        prop_assert!((s.shift1 - g).abs() < 1e-8);
        prop_assert!((s.shift2 - g).abs() < 1e-8);
        prop_assert!(s.omega.abs() < 1e-8);
    }

    #[test]
    fn power_map_image_radius(s in 0.2f64..4.0, lambda in -3.0f64..3.0) {
        let map = QCMapSpec::parse(&format!("power:s={s}")).unwrap();
        let st = image_circle_stats(&map, lambda, 128).unwrap();
        prop_assert!((st.shift1 - (s - 1.0) * lambda).abs() < 1e-9);
        prop_assert!((st.omega).abs() < 1e-9);
        prop_assert!((dilatation(&map, Point::from_polar(lambda.exp(), 0.3)).unwrap() - s.max(1.0 / s)).abs() < 1e-9);
    }
}
