use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use vpsz_core::certify::{self, CellRecord, RegionSpec, VerifyOptions};
use vpsz_core::conditions;
use vpsz_core::experiments::{self, ExponentField2D, Grid2D};
use vpsz_core::functionals::{self, Which};
use vpsz_core::rearrange;
use vpsz_core::{ExponentSpec, PiecewiseLinear, QuadratureConfig};

#[derive(Parser, Debug)]
#[command(name = "vpsz", version, about = "Rearrangement inequalities with variable exponents")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the meta block and wall times so output is reproducible byte for byte.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = positive_usize)]
    threads: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, env = "VPSZ_REL_TOL", default_value_t = 1e-10, value_parser = positive_f64)]
    rel_tol: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, env = "VPSZ_ABS_TOL", default_value_t = 1e-12, value_parser = positive_f64)]
    abs_tol: f64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetric decreasing rearrangement of a piecewise-linear u.
    Rearrange {
        /// u as {"breakpoints": [...], "values": [...]}
        #[arg(long = "in")]
        input: PathBuf,
        /// Sample x, u(x), u*(x) to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Number of CSV sample points.
        #[arg(long, default_value_t = 201, value_parser = positive_usize)]
        samples: usize,
    },
    /// Evaluate J(u) or I(u).
    Functional {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[arg(long, value_enum, default_value_t = WhichArg::I)]
        which: WhichArg,
    },
    /// Conditions on an exponent p.
    Check(CheckArgs),
    /// Interval certificates for A(w, q).
    Certify {
        #[command(subcommand)]
        what: CertifyCmd,
    },
    /// Numerical experiments.
    Experiment {
        #[command(subcommand)]
        what: ExperimentCmd,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WhichArg {
    #[value(name = "I")]
    I,
    #[value(name = "J")]
    J,
}

impl From<WhichArg> for Which {
    fn from(w: WhichArg) -> Which {
        match w {
            WhichArg::I => Which::I,
            WhichArg::J => Which::J,
        }
    }
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["thm4", "joint_k", "kcal_probe", "even"])))]
struct CheckArgs {
    #[arg(long)]
    p: PathBuf,
    /// The two sufficient conditions for joint convexity of K.
    #[arg(long)]
    thm4: bool,
    /// Mesh scan of det K''.
    #[arg(long)]
    joint_k: bool,
    #[arg(long, default_value_t = 200, value_parser = positive_usize, requires = "joint_k")]
    mesh_w: usize,
    #[arg(long, default_value_t = 101, value_parser = positive_usize, requires = "joint_k")]
    mesh_x: usize,
    /// Search d with det Kcal'' < 0 at (y, c).
    #[arg(long, num_args = 2, value_names = ["Y", "C"], allow_negative_numbers = true)]
    kcal_probe: Option<Vec<f64>>,
    /// Evenness of p.
    #[arg(long)]
    even: bool,
}

#[derive(Subcommand, Debug)]
enum CertifyCmd {
    /// sup over q >= 0 of the sharp coefficient is at most 0.63.
    Calc(MasterArgs),
    /// sup over 0 <= q <= 1.36 is at most 0.5.
    CalcHalf(MasterArgs),
    /// One region.
    Region(RegionArgs),
    /// Maximum of A(w, inf) on [1, 4].
    MaxAinf(MasterArgs),
}

#[derive(Args, Debug)]
struct MasterArgs {
    /// Bisection evaluations allowed per region.
    #[arg(long, default_value_t = certify::DEFAULT_BUDGET, value_parser = positive_u64)]
    budget: u64,
    /// Multiply the thresholds of the A regions.
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    threshold_scale: f64,
    /// Multiply every initial mesh step.
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    step_scale: f64,
}

#[derive(Args, Debug)]
struct RegionArgs {
    /// R1 ... R9 or Ainf.
    #[arg(long)]
    name: String,
    #[arg(long, value_parser = positive_f64)]
    step1: Option<f64>,
    #[arg(long, value_parser = positive_f64)]
    step2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = certify::DEFAULT_BUDGET, value_parser = positive_u64)]
    budget: u64,
    /// Retry failing cells with double-double intervals before bisecting.
    #[arg(long)]
    extended_precision: bool,
    /// Write every evaluated cell to this CSV file.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Search hats on which J increases under rearrangement.
    JCounterexample {
        #[arg(long)]
        p: PathBuf,
    },
    /// Random trials of I(u*) <= I(u) (or J).
    ISuite {
        #[arg(long)]
        p: PathBuf,
        #[arg(long, default_value_t = 1000, value_parser = positive_usize)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12, value_parser = positive_usize)]
        max_nodes: usize,
        #[arg(long, value_enum, default_value_t = WhichArg::I)]
        which: WhichArg,
        /// Per-trial gaps as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Double-ramp gaps against their limit as eps -> 0.
    Preconv {
        #[arg(long)]
        p: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        x1: f64,
        #[arg(long, allow_negative_numbers = true)]
        x2: f64,
        #[arg(long, value_parser = positive_f64)]
        s: f64,
        #[arg(long, value_parser = positive_f64)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.01, 0.005])]
        eps: Vec<f64>,
    },
    /// Random search for violations of the kernel inequality.
    Quasiconv {
        #[arg(long)]
        p: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = positive_usize)]
        m: usize,
        #[arg(long, default_value_t = 10_000, value_parser = positive_usize)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Steiner symmetrization of a sampled 2D field (illustrative).
    Steiner {
        /// {"columns": [p, ...]}
        #[arg(long)]
        p2d: PathBuf,
        /// {"nx": .., "ny": .., "samples": [...]}
        #[arg(long)]
        grid: PathBuf,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be positive and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive_usize(s).map(|v| v as u64)
}

/// Usage or numeric failure: exit code 1.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

struct Outcome {
    result: Value,
    ok: bool,
}

fn outcome<T: Serialize>(v: &T, ok: bool) -> Result<Outcome, Failure> {
    Ok(Outcome { result: serde_json::to_value(v)?, ok })
}

fn strip_wall_time(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time");
            m.values_mut().for_each(strip_wall_time);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_wall_time),
        _ => {}
    }
}

fn quad(cli: &Cli) -> Result<QuadratureConfig, Failure> {
    let cfg = QuadratureConfig { rel_tol: cli.rel_tol, abs_tol: cli.abs_tol, ..QuadratureConfig::default() };
    cfg.validate()?;
    Ok(cfg)
}

fn verify_opts(cli: &Cli, budget: u64) -> VerifyOptions {
    VerifyOptions { budget, threads: cli.threads, record_time: !cli.no_meta, ..VerifyOptions::default() }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.cmd {
        Command::Rearrange { input, csv, samples } => {
            let u: PiecewiseLinear = read_json(input)?;
            let us = rearrange::symmetrize(&u);
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["x", "u", "u_star"])?;
                let n = (*samples).max(2);
                for i in 0..n {
                    let x = (-1.0 + 2.0 * i as f64 / (n - 1) as f64).min(1.0);
                    w.serialize((x, u.eval(x)?, us.eval(x)?))?;
                }
                w.flush()?;
            }
            outcome(&us, true)
        }
        Command::Functional { u, p, which } => {
            let u: PiecewiseLinear = read_json(u)?;
            let p: ExponentSpec = read_json(p)?;
            let v = functionals::eval_functional((*which).into(), &u, &p, &quad(cli)?)?;
            outcome(&v, true)
        }
        Command::Check(args) => {
            let p: ExponentSpec = read_json(&args.p)?;
            if args.thm4 {
                let v = conditions::check_sufficient_thm4(&p)?;
                let ok = v.passed();
                Ok(Outcome { result: json!({ "passed": ok, "part1": v.part1, "part2": v.part2 }), ok })
            } else if args.joint_k {
                let v = conditions::check_joint_convexity_k(&p, args.mesh_w, args.mesh_x, conditions::DEFAULT_TOL)?;
                let ok = v.passed;
                outcome(&v, ok)
            } else if let Some(yc) = &args.kcal_probe {
                let d = conditions::kcal_negativity_probe(&p, yc[0], yc[1])?;
                Ok(Outcome { result: json!({ "y": yc[0], "c": yc[1], "negative_at_d": d }), ok: true })
            } else {
                let v = conditions::check_even(&p, conditions::DEFAULT_TOL);
                let ok = v.passed;
                outcome(&v, ok)
            }
        }
        Command::Certify { what } => certify_cmd(cli, what),
        Command::Experiment { what } => experiment_cmd(cli, what),
    }
}

fn certify_cmd(cli: &Cli, what: &CertifyCmd) -> Result<Outcome, Failure> {
    match what {
        CertifyCmd::Calc(m) | CertifyCmd::CalcHalf(m) | CertifyCmd::MaxAinf(m) => {
            let opts = VerifyOptions { threshold_scale: m.threshold_scale, step_scale: m.step_scale, ..verify_opts(cli, m.budget) };
            match what {
                CertifyCmd::Calc(_) => {
                    let c = certify::verify_calc(&opts)?;
                    let ok = c.pass;
                    outcome(&c, ok)
                }
                CertifyCmd::CalcHalf(_) => {
                    let c = certify::verify_calc_half(&opts)?;
                    let ok = c.pass;
                    outcome(&c, ok)
                }
                _ => {
                    let r = certify::maximize_a_inf(&opts)?;
                    outcome(&r, true)
                }
            }
        }
        CertifyCmd::Region(r) => {
            let mut spec = RegionSpec::preset(&r.name)?;
            if let Some(s) = r.step1 {
                spec.steps[0] = s;
            }
            if let Some(s) = r.step2 {
                spec.steps[1] = s;
            }
            if let Some(t) = r.threshold {
                spec.threshold = t;
            }
            spec.extended_precision |= r.extended_precision;
            let opts = verify_opts(cli, r.budget);
            let cert = match &r.dump {
                Some(path) => {
                    let mut w = csv::Writer::from_path(path)?;
                    let mut err: Option<csv::Error> = None;
                    let mut sink = |rec: &CellRecord| {
                        if err.is_none() {
                            err = w.serialize(rec).err();
                        }
                    };
                    let c = certify::verify_region_with_dump(&spec, &opts, Some(&mut sink))?;
                    if let Some(e) = err {
                        return Err(e.into());
                    }
                    w.flush()?;
                    c
                }
                None => certify::verify_region(&spec, &opts)?,
            };
            let ok = cert.pass;
            outcome(&cert, ok)
        }
    }
}

fn experiment_cmd(cli: &Cli, what: &ExperimentCmd) -> Result<Outcome, Failure> {
    let cfg = quad(cli)?;
    match what {
        ExperimentCmd::JCounterexample { p } => {
            let p: ExponentSpec = read_json(p)?;
            let r = experiments::find_j_counterexample(&p, &cfg)?;
            Ok(Outcome { result: json!({ "found": r.is_some(), "witness": r }), ok: true })
        }
        ExperimentCmd::ISuite { p, trials, seed, max_nodes, which, csv } => {
            let p: ExponentSpec = read_json(p)?;
            let reports = experiments::trial_suite((*which).into(), &p, *trials, *seed, *max_nodes, &cfg)?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["seed", "n_nodes", "original", "symmetrized", "gap", "pass"])?;
                for r in &reports {
                    w.serialize((&r.inputs["seed"].to_string(), &r.inputs["n_nodes"].to_string(), r.value_original, r.value_symmetrized, r.gap, r.pass))?;
                }
                w.flush()?;
            }
            let failures: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
            let min_gap = reports.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
            let ok = failures.is_empty();
            Ok(Outcome {
                result: json!({
                    "trials": reports.len(),
                    "failures": failures.len(),
                    "min_gap": min_gap,
                    "first_failure": failures.first(),
                    "tolerance": experiments::TRIAL_TOL,
                }),
                ok,
            })
        }
        ExperimentCmd::Preconv { p, x1, x2, s, t, eps } => {
            let p: ExponentSpec = read_json(p)?;
            let r = experiments::preconv_probe(&p, *x1, *x2, *s, *t, eps, &cfg)?;
            outcome(&r, true)
        }
        ExperimentCmd::Quasiconv { p, m, trials, seed } => {
            let p: ExponentSpec = read_json(p)?;
            let r = experiments::quasiconv_search(&p, *m, *trials, *seed)?;
            let ok = r.failures == 0;
            outcome(&r, ok)
        }
        ExperimentCmd::Steiner { p2d, grid } => {
            let p2d: ExponentField2D = read_json(p2d)?;
            let grid: Grid2D = read_json(grid)?;
            let r = experiments::steiner_grid_demo(&p2d, &grid)?;
            outcome(&r, true)
        }
    }
}

fn emit(cli: &Cli, mut result: Value) -> Result<(), Failure> {
    if cli.no_meta {
        strip_wall_time(&mut result);
    } else if let Value::Object(m) = &mut result {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        m.insert("meta".into(), json!({ "tool": "vpsz", "version": env!("CARGO_PKG_VERSION"), "unix_time": now }));
    }
    let mut text = serde_json::to_string_pretty(&result)?;
    text.push('\n');
    match &cli.out {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        // only fails if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli).and_then(|o| emit(&cli, o.result).map(|_| o.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
