//! Command-line front end. Curves go out as CSV, scalar results as JSON.
//!
//! Exit codes: 0 on success, 1 when a computation or I/O step fails, 2 for usage errors
//! (bad flags, unknown scheme or engine, an engine that does not match the spin count).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bosonic::{closed_form_point, enhancement_ratio, FockSpace};
use crate::error::Error;
use crate::metrology::{closed_form_bprime, moment_oracle, SpinCount};
use crate::protocols::Scheme;
use crate::report::{curve_csv, optimum_csv, to_json};
use crate::sweep::{
    find_threshold_with, optimize_with, sweep_curve, Engine, Evaluator, OptimumResult, SweepSpec,
    DEFAULT_T_GRID,
};
use crate::validation;

#[derive(Parser, Debug)]
#[command(name = "squeezesense", version, about = "Time-budgeted squeezed-state magnetometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sensitivity against the sensing fraction t/τ, one curve per twist value.
    Sweep(SweepArgs),
    /// Best sensitivity over t/τ for each twist value.
    Optimize(OptimizeArgs),
    /// Smallest twist strength whose optimized sensitivity beats scheme A.
    Threshold(ThresholdArgs),
    /// Closed-form values: N → ∞ limits, the finite-N B′ echo, the enhancement ratio, and
    /// the generating-function moment.
    Oracle(OracleArgs),
    /// Run the invariant suite; exit 0 iff every check passes.
    Validate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// Number of spins, or `inf` for the bosonic limit.
    #[arg(long = "n", value_parser = parse_spin_count)]
    n_spins: SpinCount,
    /// Engine; defaults to `spin` for finite N and `closed_form` for `inf`.
    #[arg(long, value_parser = parse_engine)]
    engine: Option<Engine>,
    /// Fock truncation dimension for `--engine fock`.
    #[arg(long, default_value_t = crate::bosonic::DEFAULT_TRUNCATION)]
    truncation: usize,
}

impl Common {
    fn engine(&self) -> Engine {
        self.engine.unwrap_or(match self.n_spins {
            SpinCount::Finite(_) => Engine::Spin,
            SpinCount::Infinite => Engine::ClosedForm,
        })
    }

    fn fock(&self) -> Result<FockSpace, Error> {
        FockSpace::new(self.truncation)
    }

    fn evaluator(&self) -> Result<Evaluator, Error> {
        Evaluator::new(self.n_spins, self.engine(), self.fock()?)
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Twist strengths ητ or χτ, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    twist: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_T_GRID)]
    t_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', required = true)]
    twist: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_T_GRID)]
    t_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    #[arg(long, default_value_t = 30.0)]
    hi: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    #[arg(long)]
    twist: Option<f64>,
    /// Sensing fraction t/τ.
    #[arg(long)]
    t: Option<f64>,
    /// Report the maximum over t/τ.
    #[arg(long)]
    optimum: bool,
    /// Finite N: the B′ echo closed form, or the moment order.
    #[arg(long = "n", value_parser = parse_spin_count, default_value = "inf")]
    n_spins: SpinCount,
    /// Ratio of the optimized C and B closed forms at `--twist`.
    #[arg(long, conflicts_with_all = ["scheme", "moment", "optimum", "t"])]
    ratio: bool,
    /// ⟨+|J−² e^{βJz}|+⟩ at β = −2i·phase, needs `--n` and `--phase`.
    #[arg(long, requires = "phase", conflicts_with_all = ["scheme", "twist", "optimum", "t"])]
    moment: bool,
    #[arg(long)]
    phase: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> Result<Scheme, Error> {
    s.parse()
}

fn parse_spin_count(s: &str) -> Result<SpinCount, Error> {
    s.parse()
}

fn parse_engine(s: &str) -> Result<Engine, Error> {
    s.parse()
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::EngineMismatch(_)
            | Error::WrongMethod { .. }
            | Error::InvalidDimension(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Compute(format!("cannot write output: {e}"))),
    }
}

fn sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let c = &args.common;
    let spec = SweepSpec::new(c.scheme, c.n_spins, args.twist.clone(), c.engine())
        .with_t_grid(args.t_points)
        .with_fock(c.fock()?);
    let records = sweep_curve(&spec)?;
    let text = match args.format {
        Format::Csv => curve_csv(&records, c.engine()),
        Format::Json => to_json(&records),
    };
    emit(out, args.out.as_ref(), &text)
}

#[derive(Serialize)]
struct OptimumReport<'a> {
    scheme: Scheme,
    n_spins: SpinCount,
    engine: Engine,
    optima: &'a [OptimumResult],
}

fn optimize(args: &OptimizeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let c = &args.common;
    let evaluator = c.evaluator()?;
    let results = args
        .twist
        .iter()
        .map(|&x| optimize_with(&evaluator, c.scheme, x, args.t_points))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match args.format {
        Format::Csv => optimum_csv(c.scheme, c.n_spins, &results, c.engine()),
        Format::Json => to_json(&OptimumReport {
            scheme: c.scheme,
            n_spins: c.n_spins,
            engine: c.engine(),
            optima: &results,
        }),
    };
    emit(out, args.out.as_ref(), &text)
}

#[derive(Serialize)]
struct ThresholdReport {
    scheme: Scheme,
    n_spins: SpinCount,
    engine: Engine,
    threshold: f64,
}

fn threshold(args: &ThresholdArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let c = &args.common;
    let evaluator = c.evaluator()?;
    let threshold = find_threshold_with(&evaluator, c.scheme, (args.lo, args.hi))?;
    let text = to_json(&ThresholdReport {
        scheme: c.scheme,
        n_spins: c.n_spins,
        engine: c.engine(),
        threshold,
    });
    emit(out, args.out.as_ref(), &text)
}

#[derive(Serialize)]
struct RatioReport {
    twist_times_tau: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct MomentReport {
    n_spins: usize,
    phase: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct FiniteEchoReport {
    scheme: Scheme,
    n_spins: usize,
    twist_times_tau: f64,
    sensing_fraction: f64,
    value: f64,
}

fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = if args.moment {
        let n = args.n_spins.finite().ok_or_else(|| usage("--moment needs a finite --n"))?;
        let phase = args.phase.expect("clap enforces --phase");
        let z = moment_oracle(n, phase)?;
        to_json(&MomentReport {
            n_spins: n,
            phase,
            re: z.re,
            im: z.im,
        })
    } else if args.ratio {
        let x = args.twist.ok_or_else(|| usage("--ratio needs --twist"))?;
        to_json(&RatioReport {
            twist_times_tau: x,
            ratio: enhancement_ratio(x)?,
        })
    } else {
        let scheme = args.scheme.ok_or_else(|| usage("--scheme is required"))?;
        let x = args.twist.ok_or_else(|| usage("--twist is required"))?;
        match (args.n_spins, args.t, args.optimum) {
            (SpinCount::Finite(n), Some(t), false) => {
                if scheme != Scheme::BPrime {
                    return Err(usage("a finite-N closed form exists only for scheme Bprime"));
                }
                to_json(&FiniteEchoReport {
                    scheme,
                    n_spins: n,
                    twist_times_tau: x,
                    sensing_fraction: t,
                    value: closed_form_bprime(n, x, t)?,
                })
            }
            (SpinCount::Finite(_), _, _) => {
                return Err(usage("a finite --n takes --t and no --optimum"));
            }
            (SpinCount::Infinite, None, true) => {
                to_json(&closed_form_point(scheme, x, 0.0, true)?.optimum.expect("requested"))
            }
            (SpinCount::Infinite, Some(t), with_optimum) => {
                to_json(&closed_form_point(scheme, x, t, with_optimum)?)
            }
            (SpinCount::Infinite, None, false) => return Err(usage("give --t or --optimum")),
        }
    };
    emit(out, args.out.as_ref(), &text)
}

fn validate(out: &mut dyn Write) -> Result<(), Failure> {
    let outcomes = validation::run_all();
    let io = |e: std::io::Error| Failure::Compute(format!("cannot write output: {e}"));
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{tag}  {}: {}", o.name, o.detail).map_err(io)?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed).map_err(io)?;
    if failed > 0 {
        return Err(Failure::Compute(format!("{failed} validation check(s) failed")));
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the subcommand, writing results to `out`
/// (or the `--out` file) and diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                2
            } else {
                let _ = out.write_all(rendered.as_bytes());
                0
            };
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => sweep(a, out),
        Command::Optimize(a) => optimize(a, out),
        Command::Threshold(a) => threshold(a, out),
        Command::Oracle(a) => oracle(a, out),
        Command::Validate => validate(out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
