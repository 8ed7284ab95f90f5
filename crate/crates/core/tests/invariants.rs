use std::f64::consts::{PI, TAU};

use ringmod_core::geometry::{logarithmic_area, DomainSpec, Point, RingDomainSpec};
use ringmod_core::invariants::{self, Status, SuiteOptions, VerifierReport};
use ringmod_core::modsolver::{reduced_modulus, ring_modulus_extrapolated, At, ReducedOptions};

fn opts() -> SuiteOptions {
    SuiteOptions { resolution: 64, ..Default::default() }
}

fn clean(r: &VerifierReport) {
    assert_eq!(r.violations, 0, "{}: worst margin {:?}", r.suite, r.worst_margin);
    assert!(r.skipped < r.trials, "{}: every trial skipped", r.suite);
}

#[test]
fn all_suites_small_runs() {
    let o = opts();
    clean(&invariants::check_monotonicity(6, 1, &o));
    clean(&invariants::check_superadditivity(6, 1, &o));
    clean(&invariants::check_log_area(6, 1, &o));
    clean(&invariants::check_reduced_sum(6, 1, &o));
    clean(&invariants::check_quad_inequalities(6, 1, &o));
    let hi = SuiteOptions { resolution: 128, ..Default::default() };
    clean(&invariants::check_grotzsch_extremal(3, 1, &hi));
    clean(&invariants::check_teich_extremal(3, 1, &hi));
    clean(&invariants::check_slit_annulus_extremal(3, 1, &hi));
    clean(&invariants::check_circle_containment(6, 1, PI, &hi));
}

#[test]
fn suites_are_deterministic() {
    let o = opts();
    let a = invariants::check_superadditivity(4, 77, &o);
    let b = invariants::check_superadditivity(4, 77, &SuiteOptions { jobs: 3, ..o });
    assert_eq!(a.records.len(), b.records.len());
    for (x, y) in a.records.iter().zip(&b.records) {
        assert_eq!(x.inputs, y.inputs);
        assert_eq!(x.lhs.to_bits(), y.lhs.to_bits());
        assert_eq!(x.rhs.to_bits(), y.rhs.to_bits());
    }
    let c = invariants::check_superadditivity(4, 78, &o);
    assert_ne!(a.records[0].inputs, c.records[0].inputs);
}

#[test]
fn records_are_consistent() {
    let r = invariants::check_log_area(5, 3, &opts());
    for rec in &r.records {
        match &rec.status {
            Status::Pass => assert!(rec.margin >= -rec.slack),
            Status::Violation => assert!(rec.margin < -rec.slack),
            Status::Skipped(why) => assert!(!why.is_empty()),
        }
    }
    let rep = r.to_report();
    assert!(rep.passed());
}

#[test]
fn superadditivity_equality_for_nested_annuli() {
    let m = |r, big_r| ring_modulus_extrapolated(&RingDomainSpec::annulus(r, big_r), 128).unwrap();
    let (a, b, whole) = (m(1.0, 2.0), m(2.0, 5.0), m(1.0, 5.0));
    let err = a.error_estimate + b.error_estimate + whole.error_estimate;
    assert!((whole.value - a.value - b.value).abs() <= 2.0 * err + 1e-9);
}

#[test]
fn log_area_equality_for_annulus() {
    let ring = RingDomainSpec::annulus(0.5, 3.0);
    let area = logarithmic_area(&ring, None).unwrap();
    let m = ring_modulus_extrapolated(&ring, 128).unwrap();
    assert!((area - TAU * m.value).abs() <= 2.0 * TAU * m.error_estimate + 1e-9);
}

#[test]
fn reduced_sum_equality_for_circle() {
    let opts = ReducedOptions::default();
    let inside = reduced_modulus(&DomainSpec::disk(Point::new(0.0, 0.0), 1.5), At::Finite(Point::new(0.0, 0.0)), opts).unwrap();
    let outside =
        reduced_modulus(&DomainSpec::complement_of(DomainSpec::disk(Point::new(0.0, 0.0), 1.5)), At::Infinity, opts).unwrap();
    let err = inside.error_estimate + outside.error_estimate;
    assert!((inside.value + outside.value).abs() <= 2.0 * err + 1e-3, "{} + {}", inside.value, outside.value);
}

#[test]
fn threshold_scan_crosses_at_one() {
    let rep = invariants::teichmuller_threshold_scan(&[0.5, 1.0, 2.0], 64).unwrap();
    assert_eq!(rep.rows.len(), 3);
}
