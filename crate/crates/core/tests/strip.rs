use std::f64::consts::PI;

use proptest::prelude::*;
use ringmod_core::strip::{
    ahlfors_check, refined_constant, refined_distortion_check, theta_module_bound, theta_profile, Strip, StripDomainSpec, StripOptions,
};

fn opts() -> StripOptions {
    StripOptions::default()
}

#[test]
fn refined_constant_frozen() {
    // 4 log 2/π + log(1/(1 − 8e^{−2π}))/π, evaluated once and frozen.
    assert!((refined_constant(2.0).unwrap() - 0.887334).abs() < 1e-6);
    assert!(refined_constant(0.5).is_err());
}

#[test]
fn straight_strip_margin_is_four() {
    for (b, x1, x2) in [(1.0, 0.0, 5.0), (2.0, -3.0, 7.0), (0.5, 1.0, 2.5)] {
        let rep = ahlfors_check(&StripDomainSpec::straight(b), x1, x2, &opts()).unwrap();
        assert!((rep.get_f64("margin").unwrap() - 4.0).abs() < 1e-9);
        assert!((rep.get_f64("integral").unwrap() - (x2 - x1) / b).abs() < 1e-9);
    }
}

#[test]
fn straight_strip_hypothesis_not_met() {
    assert!(ahlfors_check(&StripDomainSpec::straight(2.0), 0.0, 3.0, &opts()).is_err());
    assert!(ahlfors_check(&StripDomainSpec::straight(2.0), 3.0, 0.0, &opts()).is_err());
}

#[test]
fn geometric_fixtures_hold() {
    let o = StripOptions { resolution: 128, ..opts() };
    for spec in [StripDomainSpec::comb(0.2), StripDomainSpec::comb(0.6)] {
        let a = ahlfors_check(&spec, 0.5, 9.5, &o).unwrap();
        assert_eq!(a.get_bool("holds"), Some(true), "{:?}", a.summary);
        let r = refined_distortion_check(&spec, 0.5, 9.5, &o).unwrap();
        assert_eq!(r.get_bool("holds"), Some(true), "{:?}", r.summary);
        let t = theta_module_bound(&spec, 0.5, 9.5, &o).unwrap();
        assert_eq!(t.get_bool("holds"), Some(true), "{:?}", t.summary);
    }
}

#[test]
fn sector_width_bound() {
    let rep = theta_module_bound(&StripDomainSpec::sector(PI / 6.0), 2.0, 20.0, &StripOptions { resolution: 128, ..opts() }).unwrap();
    assert_eq!(rep.get_bool("holds"), Some(true), "{:?}", rep.summary);
}

#[test]
fn zigzag_cross_cuts() {
    let spec = StripDomainSpec::zigzag();
    let xs: Vec<f64> = (1..40).map(|k| 0.25 * k as f64).collect();
    let prof = theta_profile(&spec, &xs, &opts()).unwrap();
    assert!(prof.diagnostics.is_empty(), "{:?}", prof.diagnostics);
    assert!(prof.components.iter().any(|&c| c == 3));
    assert!(prof.theta.iter().all(|&t| t > 0.0 && t <= 5.0));
}

#[test]
fn strip_json_round_trip() {
    for s in [StripDomainSpec::sector(0.5), StripDomainSpec::comb(0.3)] {
        let back: StripDomainSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn refinement_never_weaker(i in 2.0f64 + 1e-9..200.0) {
        let c = refined_constant(i).unwrap();
        prop_assert!(c <= 4.0);
        prop_assert!(c >= 4.0 * std::f64::consts::LN_2 / PI - 1e-15);
    }

    #[test]
    fn sector_inequalities(beta in 0.2f64..1.4, x1 in 0.5f64..3.0, span in 8.0f64..60.0) {
        let spec = StripDomainSpec::sector(beta);
        let x2 = x1 + span;
        match ahlfors_check(&spec, x1, x2, &opts()) {
            Ok(a) => {
                prop_assert_eq!(a.get_bool("holds"), Some(true));
                let r = refined_distortion_check(&spec, x1, x2, &opts()).unwrap();
                prop_assert_eq!(r.get_bool("holds"), Some(true));
                prop_assert!(r.get_f64("margin").unwrap() <= a.get_f64("margin").unwrap() + 1e-9);
            }
            Err(e) => prop_assert!(e.to_string().contains("not above 2"), "{e}"),
        }
    }

    #[test]
    fn raster_matches_boundary_order(x in 0.1f64..9.9, gap in 0.1f64..0.9) {
        for spec in [StripDomainSpec::zigzag(), StripDomainSpec::comb(gap)] {
            let strip = Strip::new(&spec, (x, x), &opts()).unwrap();
            if strip.on_vertex_line(x) {
                continue;
            }
            if let Ok(exact) = strip.cross_cut(x) {
                if let Ok(raster) = strip.cross_cut_raster(x) {
                    prop_assert_eq!(exact.cut, raster.cut);
                }
            }
        }
    }

    #[test]
    fn theta_refinement_stability(x in 0.1f64..9.9) {
        let spec = StripDomainSpec::zigzag();
        let a = theta_profile(&spec, &[x], &StripOptions { resolution: 128, ..opts() }).unwrap();
        let b = theta_profile(&spec, &[x], &StripOptions { resolution: 256, ..opts() }).unwrap();
        let cell = 10.0 / 128.0;
        prop_assert!((a.theta[0] - b.theta[0]).abs() <= 2.0 * cell);
    }
}
