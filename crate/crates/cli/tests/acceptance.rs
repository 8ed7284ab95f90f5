//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! runtime; the process fails if any criterion fails or exceeds its budget.

use std::f64::consts::{E, FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ringmod_core::elliptic::{grotzsch_phi, log_grotzsch_phi, mu, psi_phi_argument, teich_psi};
use ringmod_core::geometry::{DomainSpec, RingDomainSpec};
use ringmod_core::invariants::{self, SuiteOptions, VerifierReport};
use ringmod_core::modsolver::ring_modulus_extrapolated;
use ringmod_core::modulsatz::{bump_family_probe, ModulsatzOptions};
use ringmod_core::qcmap::{ladder, main_lemma_experiment, twb_experiment, verify_t3, ExperimentOptions, QCMapSpec};
use ringmod_core::report::Report;
use ringmod_core::strip::{ahlfors_check, refined_constant_sweep, StripDomainSpec, StripOptions};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn num(rep: &Report, key: &str) -> Result<f64, String> {
    rep.get_f64(key).ok_or_else(|| format!("report '{}' has no numeric '{key}'", rep.title))
}

fn flag(rep: &Report, key: &str) -> Result<bool, String> {
    rep.get_bool(key).ok_or_else(|| format!("report '{}' has no flag '{key}'", rep.title))
}

fn elliptic_exactness() -> Outcome {
    let phi = grotzsch_phi(2f64.sqrt()).map_err(|e| e.to_string())?;
    let psi = teich_psi(1.0).map_err(|e| e.to_string())?;
    ensure(rel(phi, FRAC_PI_2.exp()) <= 1e-10, format!("Phi(sqrt 2) = {phi}"))?;
    ensure(rel(psi, PI.exp()) <= 1e-10, format!("Psi(1) = {psi}"))?;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let p = 10f64.powf(-3.0 + 9.0 * i as f64 / 99.0);
        let a = grotzsch_phi((1.0 + p).sqrt()).unwrap().powi(2);
        let b = grotzsch_phi(psi_phi_argument(p)).unwrap();
        let c = teich_psi(p).unwrap();
        worst = worst.max(rel(a, b)).max(rel(a, c));
    }
    ensure(worst <= 1e-9, format!("relations disagree by {worst:e}"))?;
    Ok(format!("Phi(sqrt 2), Psi(1) exact; relations agree to {worst:.1e}"))
}

fn grid_vs_elliptic() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [1.5, 2.0, 4.0, 8.0] {
        let m = ring_modulus_extrapolated(&RingDomainSpec::Canonical(DomainSpec::grotzsch(p)), 256).map_err(|e| e.to_string())?;
        let exact = mu(1.0 / p).unwrap();
        let d = (m.value - exact).abs();
        worst = worst.max(d);
        ensure(d <= 1e-2, format!("P = {p}: grid {} vs {exact}", m.value))?;
    }
    Ok(format!("largest deviation {worst:.2e} at resolution 256"))
}

fn annulus_calibration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let r = rng.gen_range(0.2..2.0);
        let big_r = r * rng.gen_range(1.2f64..20.0);
        let m = ring_modulus_extrapolated(&RingDomainSpec::annulus(r, big_r), 256).map_err(|e| e.to_string())?;
        let d = (m.value - (big_r / r).ln()).abs();
        worst = worst.max(d);
        ensure(d <= 1e-3, format!("annulus({r}, {big_r}): {} vs {}", m.value, (big_r / r).ln()))?;
    }
    Ok(format!("20 annuli, largest deviation {worst:.2e}"))
}

fn grotzsch_asymptotics() -> Outcome {
    let ps: Vec<f64> = (0..50).map(|k| 1.01f64 * (1000.0f64 / 1.01).powf(k as f64 / 49.0)).collect();
    let ratios: Vec<f64> = ps.iter().map(|&p| grotzsch_phi(p).unwrap() / (4.0 * p)).collect();
    ensure(ratios.windows(2).all(|w| w[0] < w[1]), "Phi(P)/4P is not strictly increasing")?;
    let last = *ratios.last().unwrap();
    ensure(last > 0.99999 && last < 1.0, format!("Phi(1000)/4000 = {last}"))?;
    for &p in &ps {
        let psi = teich_psi(p).unwrap();
        ensure(psi < 16.0 * (p + 1.0), format!("Psi({p}) = {psi} exceeds 16(P+1)"))?;
    }
    let _ = log_grotzsch_phi(1000.0).unwrap();
    Ok(format!("ratio increasing to {last:.9} at P = 1000; Psi < 16(P+1) on all 50"))
}

fn inequality_suites() -> Outcome {
    let opts = SuiteOptions { resolution: 64, ..Default::default() };
    let runs: [(&str, fn(usize, u64, &SuiteOptions) -> VerifierReport); 5] = [
        ("monotonicity", invariants::check_monotonicity),
        ("superadditivity", invariants::check_superadditivity),
        ("log-area", invariants::check_log_area),
        ("reduced-sum", invariants::check_reduced_sum),
        ("quad-inequalities", invariants::check_quad_inequalities),
    ];
    let mut parts = Vec::new();
    for (name, f) in runs {
        let r = f(1000, 2024, &opts);
        ensure(r.violations == 0, format!("{name}: {} violations, worst margin {:?}", r.violations, r.worst_margin))?;
        parts.push(format!("{name} 0/{} ({} skipped)", r.trials, r.skipped));
    }
    Ok(parts.join(", "))
}

fn t3_sharpness() -> Outcome {
    let opts = ExperimentOptions { resolution: 256, ..Default::default() };
    let rep = verify_t3(&QCMapSpec::parse("power:s=2").unwrap(), 1.0, E, &opts).map_err(|e| e.to_string())?;
    let m = num(&rep, "module")?;
    let upper = num(&rep, "upper")?;
    ensure((m - 2.0).abs() <= 1e-3, format!("image module {m}"))?;
    ensure((upper - 2.0).abs() <= 1e-3 && (m - upper).abs() <= 1e-3, format!("upper bound {upper} vs module {m}"))?;
    ensure(rep.passed(), "power map violates the bounds")?;
    let id = verify_t3(&QCMapSpec::parse("identity").unwrap(), 1.0, E, &opts).map_err(|e| e.to_string())?;
    ensure(flag(&id, "upper_attained")? && flag(&id, "lower_attained")?, "identity does not attain both bounds")?;
    Ok(format!("power: module {m:.6}, upper {upper:.6}; identity attains both bounds"))
}

fn main_lemma_triptych() -> Outcome {
    let opts = ExperimentOptions::default();
    let run = |m: &str, a: f64, b: f64| main_lemma_experiment(&QCMapSpec::parse(m).unwrap(), &ladder(a, b, 25), &opts).map_err(|e| e.to_string());
    let a = run("radial:g=1/(1+r);eta=0", 0.0, 12.0)?;
    ensure(a.get_text("hypothesis integral") == Some("convergent"), "(a) hypothesis integral not convergent")?;
    let (s1, s2) = (num(&a, "final shift1")?, num(&a, "final shift2")?);
    ensure(s1.abs() <= 1e-3 && s2.abs() <= 1e-3, format!("(a) shifts {s1}, {s2} at lambda 12"))?;
    let b = run("radial:g=0.1*log(r);eta=0", 0.0, 12.0)?;
    ensure(b.get_text("hypothesis integral") == Some("divergent"), "(b) hypothesis integral not divergent")?;
    let slope = num(&b, "shift2 slope")?;
    ensure((slope - 0.1).abs() <= 1e-3, format!("(b) slope {slope}"))?;
    let c = run("ellipse:a=1", 1.0, 8.0)?;
    let omega = c.column("omega").unwrap();
    let lam = c.column("lambda").unwrap();
    for (l, w) in lam.iter().zip(&omega) {
        let exact = ((l.exp() + 1.0) / (l.exp() - 1.0)).ln();
        ensure((w - exact).abs() <= 1e-9, format!("(c) omega({l}) = {w}, closed form {exact}"))?;
    }
    ensure(omega.windows(2).all(|w| w[1] < w[0]), "(c) omega is not decreasing")?;
    let (c1, c2) = (num(&c, "final shift1")?, num(&c, "final shift2")?);
    ensure(c1.abs() <= 1e-2 && c2.abs() <= 1e-2 && *omega.last().unwrap() <= 1e-2, format!("(c) shifts {c1}, {c2} at lambda 8"))?;
    Ok(format!("(a) shifts {:.1e}; (b) slope {slope:.6}; (c) omega(8) {:.2e}, shifts {c1:.1e}/{c2:.1e}", s1.abs().max(s2.abs()), omega.last().unwrap()))
}

fn twb_boundary_case() -> Outcome {
    let rep = twb_experiment(&QCMapSpec::parse("radial:g=0;eta=log(r)").unwrap(), &ladder(0.0, 12.0, 49), &ExperimentOptions::default())
        .map_err(|e| e.to_string())?;
    let moduli = rep.column("abs_w_over_z").unwrap();
    ensure(moduli.iter().all(|m| (m - 1.0).abs() <= 1e-12), "|w/z| is not identically 1")?;
    let traversal = num(&rep, "arg(w/z) traversal")?;
    ensure(traversal >= TAU, format!("arg(w/z) traverses only {traversal}"))?;
    let verdict = rep.get_text("verdict").unwrap_or_default().to_string();
    ensure(verdict == "Main Lemma conclusion holds, w ~ const*z conclusion fails", format!("verdict: {verdict}"))?;
    Ok(format!("|w/z| = 1, arg traverses {traversal:.3}; {verdict}"))
}

fn ahlfors_fixtures() -> Outcome {
    let opts = StripOptions::default();
    let straight = ahlfors_check(&StripDomainSpec::straight(2.0), 0.0, 10.0, &opts).map_err(|e| e.to_string())?;
    let margin = num(&straight, "margin")?;
    ensure(straight.passed() && (margin - 4.0).abs() <= 1e-9, format!("straight strip margin {margin}"))?;
    let sector = ahlfors_check(&StripDomainSpec::sector(PI / 6.0), 2.0, 40.0, &opts).map_err(|e| e.to_string())?;
    ensure(sector.passed() && sector.get_text("method") == Some("exact map"), "sector fixture fails")?;
    let is: Vec<f64> = (0..=200).map(|k| 2.0 + 1e-6 + 0.25 * k as f64).collect();
    let sweep = refined_constant_sweep(&is).map_err(|e| e.to_string())?;
    let c2 = num(&sweep, "constant at I = 2")?;
    ensure((c2 - 0.887).abs() <= 1e-3, format!("constant at I = 2 is {c2}"))?;
    ensure(flag(&sweep, "at most 4")?, "constant exceeds 4 for some I > 2")?;
    Ok(format!("straight margin {margin}, sector margin {:.4}, constant at 2 = {c2:.6}", num(&sector, "margin")?))
}

fn modulsatz_trend() -> Outcome {
    let rep = bump_family_probe(&[0.05, 0.1, 0.2], &ModulsatzOptions { resolution: 256, ..Default::default() }).map_err(|e| e.to_string())?;
    let delta = rep.column("delta").unwrap();
    ensure(delta.iter().all(|&d| d >= 0.0), format!("negative delta in {delta:?}"))?;
    ensure(flag(&rep, "epsilon increases with delta")?, "epsilon does not follow delta")?;
    ensure(flag(&rep, "ratio within one decade")?, format!("ratio spread {:?}", rep.get_f64("ratio spread")))?;
    ensure(rep.passed(), format!("probe errors: {:?}", rep.errors))?;
    Ok(format!("delta {delta:?}, ratio spread {:.3}", num(&rep, "ratio spread")?))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let ring = write(d, "ring.json", r#"{"outer": {"kind": "disk", "center": [0.3, 0], "radius": 3}, "inner": {"kind": "disk", "center": [0, 0], "radius": 1}}"#);
    let quad = write(d, "quad.json", r#"{"vertices": [[0, 0], [2, 0], [2.5, 1], [0, 1.2]], "marks": [0, 1, 2, 3]}"#);
    let disk = write(d, "disk.json", r#"{"kind": "disk", "center": [0.2, 0.1], "radius": 1}"#);
    let ext = write(d, "ext.json", r#"{"kind": "complement-of", "of": {"kind": "disk", "center": [0, 0], "radius": 1.5}}"#);
    let sector = write(d, "sector.json", r#"{"map": "exp(w - 0.5235987755982988*i)", "B": 1.0471975511965976}"#);
    let runs: Vec<Vec<&str>> = vec![
        vec!["phi", "2"],
        vec!["psi", "3"],
        vec!["modulus", "--domain", &ring, "--kind", "ring", "--extrapolate", "--resolution", "64"],
        vec!["modulus", "--domain", &quad, "--kind", "quad", "--resolution", "64"],
        vec!["reduced", "--domain", &disk, "--at", "0,0", "--resolution", "64"],
        vec!["verify", "--suite", "reduced-sum", "--trials", "4", "--seed", "11", "--resolution", "32"],
        vec!["verify", "--suite", "monotonicity", "--trials", "4", "--seed", "11", "--resolution", "32", "--jobs", "2"],
        vec!["qc", "--map", "ellipse:a=1", "--experiment", "oscillation", "--lambda-min", "1", "--lambda-max", "4", "--steps", "4"],
        vec!["strip", "--domain", &sector, "--x1", "2", "--x2", "40", "--check", "refined"],
        vec!["modulsatz", "--g1", &disk, "--g2", &ext, "--resolution", "64"],
        vec!["modulsatz", "--probe", "region-b", "--trials", "3", "--seed", "5", "--resolution", "32"],
    ];
    let exe = env!("CARGO_BIN_EXE_ringmod");
    for args in &runs {
        let mut outs = Vec::new();
        for _ in 0..2 {
            for format in ["csv", "text"] {
                let o = Command::new(exe).args(args).args(["--format", format]).env_remove("RINGMOD_RESOLUTION").output().map_err(|e| e.to_string())?;
                ensure(o.status.success(), format!("ringmod {} failed: {}", args.join(" "), String::from_utf8_lossy(&o.stderr)))?;
                outs.push(o.stdout);
            }
        }
        ensure(outs[0] == outs[2] && outs[1] == outs[3], format!("ringmod {} differs between runs", args.join(" ")))?;
    }
    Ok(format!("{} invocations byte-identical in csv and text", runs.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("elliptic exactness", 1, elliptic_exactness),
        ("grid vs elliptic oracle", 120, grid_vs_elliptic),
        ("round-annulus calibration", 60, annulus_calibration),
        ("Grotzsch function asymptotics", 1, grotzsch_asymptotics),
        ("inequality suites", 1800, inequality_suites),
        ("ring distortion sharpness", 60, t3_sharpness),
        ("circularity at infinity triptych", 300, main_lemma_triptych),
        ("boundary case of the w/z limit", 60, twb_boundary_case),
        ("strip distortion fixtures", 120, ahlfors_fixtures),
        ("Modulsatz trend", 600, modulsatz_trend),
        ("determinism", 600, determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let dt = t.elapsed();
        let over = dt > Duration::from_secs(*budget);
        let (ok, detail) = match out {
            Ok(d) if !over => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget} s budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("{} criterion {:2} {name} ({:.2} s): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1, dt.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
