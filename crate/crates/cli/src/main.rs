//! `ringmod`: conformal invariants and distortion experiments from the command line.

mod emit;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ringmod_core::elliptic::{grotzsch_phi, log_grotzsch_phi, log_teich_psi, teich_psi};
use ringmod_core::geometry::{DomainSpec, Point, QuadrilateralSpec, RingDomainSpec};
use ringmod_core::invariants::{self, SuiteOptions, VerifierReport};
use ringmod_core::modsolver::{
    quad_modulus_at, quad_modulus_extrapolated, reduced_modulus, ring_modulus_at, ring_modulus_extrapolated, At, ModulusResult,
    ReducedOptions,
};
use ringmod_core::modulsatz::{self, ModulsatzOptions};
use ringmod_core::qcmap::{self, DilatationProfile, Direction, ExperimentOptions, QCMapSpec};
use ringmod_core::report::Report;
use ringmod_core::strip::{self, StripDomainSpec, StripOptions};

use emit::{emit, Format, Outcome};

#[derive(Debug, Parser)]
#[command(name = "ringmod", version, about = "Conformal invariants of ring domains and distortion experiments for quasiconformal maps")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Finest grid resolution for module solves.
    #[arg(long, global = true, env = "RINGMOD_RESOLUTION", default_value_t = 128, value_parser = clap::value_parser!(u32).range(16..=4096))]
    resolution: u32,
    /// Tolerance for verdicts; each experiment has its own default.
    #[arg(long, global = true, value_parser = positive)]
    tolerance: Option<f64>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of concurrent solves.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    jobs: u32,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grötzsch module function Φ(P), P > 1.
    Phi { p: f64 },
    /// Teichmüller module function Ψ(P), P > 0.
    Psi { p: f64 },
    /// Module of a ring domain or quadrilateral described in a JSON file.
    Modulus {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, value_enum)]
        kind: ModulusKind,
        /// Richardson extrapolation over three resolutions.
        #[arg(long)]
        extrapolate: bool,
    },
    /// Reduced module of a simply connected domain at a point or at infinity.
    Reduced {
        #[arg(long)]
        domain: PathBuf,
        /// `x,y` or `inf`.
        #[arg(long, value_parser = parse_at)]
        at: At,
    },
    /// Seeded inequality suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Module threshold for the circle-containment suite.
        #[arg(long, default_value_t = PI)]
        threshold: f64,
    },
    /// Distortion experiments for a quasiconformal map.
    Qc {
        /// Map in the combinator grammar, e.g. `radial:g=1/(1+r);eta=0`.
        #[arg(long, required_unless_present = "profile")]
        map: Option<String>,
        #[arg(long, value_enum)]
        experiment: Experiment,
        #[arg(long, default_value_t = 0.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 8.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 17)]
        steps: usize,
        /// Points per sampled circle.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Dilatation bound C(r) for the type experiment.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long, value_enum, default_value_t = TypeDirection::PlaneToDisk)]
        direction: TypeDirection,
        /// Radius beyond which the profile is declared.
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
    },
    /// Width profile and distortion inequalities for a strip domain.
    Strip {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x1: f64,
        #[arg(long, allow_hyphen_values = true)]
        x2: f64,
        #[arg(long, value_enum)]
        check: StripCheck,
        /// Sample count for the profile table.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Modulsatz checks and probes.
    Modulsatz(ModulsatzArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["g1", "probe"]))]
struct ModulsatzArgs {
    /// Domain about 0 (or first subring with --ring).
    #[arg(long, requires = "g2")]
    g1: Option<PathBuf>,
    /// Domain about infinity (or second subring with --ring).
    #[arg(long, requires = "g1")]
    g2: Option<PathBuf>,
    /// Ambient annulus; switches to the ring form.
    #[arg(long, requires = "g1")]
    ring: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with_all = ["g1", "g2", "ring"])]
    probe: Option<Probe>,
    /// Comma-separated t values for the bump probe.
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
    t: Vec<f64>,
    /// Trials for the region-B sampler.
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModulusKind {
    Ring,
    Quad,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Monotonicity,
    Superadditivity,
    LogArea,
    ReducedSum,
    QuadInequalities,
    GrotzschExtremal,
    TeichExtremal,
    SlitAnnulusExtremal,
    CircleContainment,
    RegionB,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Experiment {
    Mainlemma,
    Twb,
    T3,
    Oscillation,
    T2,
    Type,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TypeDirection {
    PlaneToDisk,
    DiskToPlane,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StripCheck {
    Ahlfors,
    Refined,
    Thetabound,
    Profile,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Probe {
    Bump,
    RegionB,
}

fn parse_at(s: &str) -> std::result::Result<At, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(At::Infinity);
    }
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y or inf, got {s}"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(At::Finite(Point::new(x, y)))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn modulus_report(m: &ModulusResult, title: &str) -> Report {
    let mut rep = Report::new(title, &["resolution", "value"]);
    for &(n, v) in &m.levels {
        rep.push_row(vec![n.into(), v.into()]);
    }
    rep.set("value", m.value);
    rep.set("error", m.error_estimate);
    rep.set("resolution", m.resolution);
    rep.set("energy", m.energy);
    rep.set("extrapolated", m.extrapolated);
    if let Some(p) = m.observed_order {
        rep.set("observed order", p);
    }
    for d in &m.diagnostics {
        rep.set("diagnostic", d.as_str());
    }
    rep
}

fn suite_outcome(r: VerifierReport) -> Outcome {
    let headline = format!(
        "{}: {} trials, {} violations, {} skipped",
        r.suite, r.trials, r.violations, r.skipped
    );
    Outcome::new(r.to_report()).with_headline(headline)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let res = g.resolution as usize;
    let jobs = g.jobs as usize;
    Ok(match &cli.command {
        Command::Phi { p } => {
            let v = grotzsch_phi(*p)?;
            let l = log_grotzsch_phi(*p)?;
            let mut rep = Report::new("grotzsch phi", &[]);
            rep.set("P", *p);
            rep.set("Phi", v);
            rep.set("log Phi", l);
            Outcome::new(rep).with_headline(format!("Phi({p}) = {v}\nlog Phi({p}) = {l}"))
        }
        Command::Psi { p } => {
            let v = teich_psi(*p)?;
            let l = log_teich_psi(*p)?;
            let mut rep = Report::new("teichmuller psi", &[]);
            rep.set("P", *p);
            rep.set("Psi", v);
            rep.set("log Psi", l);
            Outcome::new(rep).with_headline(format!("Psi({p}) = {v}\nlog Psi({p}) = {l}"))
        }
        Command::Modulus { domain, kind, extrapolate } => {
            let m = match kind {
                ModulusKind::Ring => {
                    let ring: RingDomainSpec = read_json(domain)?;
                    if *extrapolate {
                        ring_modulus_extrapolated(&ring, res)?
                    } else {
                        ring_modulus_at(&ring, res)?
                    }
                }
                ModulusKind::Quad => {
                    let quad: QuadrilateralSpec = read_json(domain)?;
                    if *extrapolate {
                        quad_modulus_extrapolated(&quad, res)?
                    } else {
                        quad_modulus_at(&quad, res)?
                    }
                }
            };
            let what = match kind {
                ModulusKind::Ring => "ring module",
                ModulusKind::Quad => "quadrilateral module",
            };
            let headline = format!("{what} = {} +- {:e} (resolution {})", m.value, m.error_estimate, m.resolution);
            Outcome::new(modulus_report(&m, what)).with_headline(headline)
        }
        Command::Reduced { domain, at } => {
            let d: DomainSpec = read_json(domain)?;
            let m = reduced_modulus(&d, *at, ReducedOptions { resolution: res, ..Default::default() })?;
            let headline = format!("reduced module = {} +- {:e} (resolution {})", m.value, m.error_estimate, m.resolution);
            Outcome::new(modulus_report(&m, "reduced module")).with_headline(headline)
        }
        Command::Verify { suite, trials, threshold } => {
            let opts = SuiteOptions { resolution: res, tolerance: g.tolerance.unwrap_or(SuiteOptions::default().tolerance), jobs };
            let seed = g.seed;
            let r = match suite {
                Suite::Monotonicity => invariants::check_monotonicity(*trials, seed, &opts),
                Suite::Superadditivity => invariants::check_superadditivity(*trials, seed, &opts),
                Suite::LogArea => invariants::check_log_area(*trials, seed, &opts),
                Suite::ReducedSum => invariants::check_reduced_sum(*trials, seed, &opts),
                Suite::QuadInequalities => invariants::check_quad_inequalities(*trials, seed, &opts),
                Suite::GrotzschExtremal => invariants::check_grotzsch_extremal(*trials, seed, &opts),
                Suite::TeichExtremal => invariants::check_teich_extremal(*trials, seed, &opts),
                Suite::SlitAnnulusExtremal => invariants::check_slit_annulus_extremal(*trials, seed, &opts),
                Suite::CircleContainment => invariants::check_circle_containment(*trials, seed, *threshold, &opts),
                Suite::RegionB => modulsatz::region_b_sampler(*trials, seed, &opts),
            };
            suite_outcome(r)
        }
        Command::Qc { map, experiment, lambda_min, lambda_max, steps, samples, profile, direction, r_min } => {
            let opts = ExperimentOptions {
                samples: *samples,
                resolution: res,
                tolerance: g.tolerance.unwrap_or(ExperimentOptions::default().tolerance),
                jobs,
            };
            if let Experiment::Type = experiment {
                let Some(src) = profile else { bail!("--experiment type needs --profile") };
                let p = DilatationProfile::parse(src, *r_min)?;
                let d = match direction {
                    TypeDirection::PlaneToDisk => Direction::PlaneToDisk,
                    TypeDirection::DiskToPlane => Direction::DiskToPlane,
                };
                return Ok(Outcome::new(qcmap::type_condition(&p, d)?));
            }
            let Some(src) = map else { bail!("--map is required for this experiment") };
            let map = QCMapSpec::parse(src)?;
            if !(lambda_min < lambda_max) || *steps < 2 {
                bail!("need --lambda-min < --lambda-max and --steps >= 2");
            }
            let lambdas = qcmap::ladder(*lambda_min, *lambda_max, *steps);
            let rep = match experiment {
                Experiment::Mainlemma => qcmap::main_lemma_experiment(&map, &lambdas, &opts)?,
                Experiment::Twb => qcmap::twb_experiment(&map, &lambdas, &opts)?,
                Experiment::T3 => qcmap::verify_t3(&map, lambda_min.exp(), lambda_max.exp(), &opts)?,
                Experiment::T2 => qcmap::lemma_t2_check(&map, &lambdas, &opts)?,
                Experiment::Oscillation => oscillation(&map, &lambdas, &opts)?,
                Experiment::Type => unreachable!(),
            };
            Outcome::new(rep)
        }
        Command::Strip { domain, x1, x2, check, samples } => {
            let spec: StripDomainSpec = read_json(domain)?;
            let opts = StripOptions { samples: *samples, resolution: res, tolerance: g.tolerance.unwrap_or(StripOptions::default().tolerance), jobs };
            let rep = match check {
                StripCheck::Ahlfors => strip::ahlfors_check(&spec, *x1, *x2, &opts)?,
                StripCheck::Refined => strip::refined_distortion_check(&spec, *x1, *x2, &opts)?,
                StripCheck::Thetabound => strip::theta_module_bound(&spec, *x1, *x2, &opts)?,
                StripCheck::Profile => {
                    if *samples < 2 {
                        bail!("--samples must be at least 2");
                    }
                    let xs: Vec<f64> = (0..*samples).map(|k| x1 + (x2 - x1) * k as f64 / (*samples - 1) as f64).collect();
                    strip::theta_profile(&spec, &xs, &opts)?.to_report(&format!("width profile of {spec}"))
                }
            };
            Outcome::new(rep)
        }
        Command::Modulsatz(a) => {
            let opts = ModulsatzOptions { resolution: res, tolerance: g.tolerance.unwrap_or(ModulsatzOptions::default().tolerance), jobs };
            match (a.probe, &a.g1, &a.g2, &a.ring) {
                (Some(Probe::Bump), ..) => Outcome::new(modulsatz::bump_family_probe(&a.t, &opts)?),
                (Some(Probe::RegionB), ..) => {
                    let so = SuiteOptions { resolution: res, tolerance: opts.tolerance, jobs };
                    suite_outcome(modulsatz::region_b_sampler(a.trials, g.seed, &so))
                }
                (None, Some(g1), Some(g2), None) => {
                    let d1: DomainSpec = read_json(g1)?;
                    let d2: DomainSpec = read_json(g2)?;
                    Outcome::new(modulsatz::verify_special_modulsatz(&d1, &d2, &opts)?.to_report())
                }
                (None, Some(g1), Some(g2), Some(ring)) => {
                    let r: RingDomainSpec = read_json(ring)?;
                    let r1: RingDomainSpec = read_json(g1)?;
                    let r2: RingDomainSpec = read_json(g2)?;
                    Outcome::new(modulsatz::verify_modulsatz(&r, &r1, &r2, &opts)?.to_report())
                }
                _ => bail!("give --g1 and --g2, or --probe"),
            }
        }
    })
}

/// Oscillation and radial shifts of the images of `|z| = e^λ`.
fn oscillation(map: &QCMapSpec, lambdas: &[f64], opts: &ExperimentOptions) -> Result<Report> {
    let mut rep = Report::new(format!("image circles of {map}"), &["lambda", "r1", "r2", "omega", "shift1", "shift2"]);
    for &l in lambdas {
        let s = qcmap::image_circle_stats(map, l, opts.samples)?;
        rep.push_row(vec![l.into(), s.r1.into(), s.r2.into(), s.omega.into(), s.shift1.into(), s.shift2.into()]);
    }
    Ok(rep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| emit(&out, cli.global.format, cli.global.output.as_deref())) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
