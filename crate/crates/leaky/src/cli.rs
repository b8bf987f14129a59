//! Command-line front end. Results go to standard output, diagnostics to
//! standard error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leaky_core::opt::{column_generation, solve_full_lp, solve_marginal_lp, ColumnGenOptions, Termination};
use leaky_core::sampling::{comb_layout, comb_support};
use leaky_core::MixedStrategy;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bench::{csv_string, run_sweep, summarize, ExperimentConfig, OracleChoice, SweepSummary};
use crate::error::{CliError, CliResult};
use crate::eval::{estimate, EvalMode, Sampler, SamplerKind, DEFAULT_SAMPLES};
use crate::io::{load_instance, load_strategy, round12, strategy_json, write_atomic};
use crate::selftest::{self, Level};

#[derive(Debug, Parser)]
#[command(name = "leaky", version, about = "Security games with information leakage")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a defender mixed strategy.
    Solve(SolveArgs),
    /// Draw pure strategies from a sampler.
    Sample(SampleArgs),
    /// Evaluate a strategy file or a sampler under the instance's leakage.
    Evaluate(EvaluateArgs),
    /// Run a benchmark sweep and write its CSV.
    Sweep(SweepArgs),
    /// Run the built-in consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    /// No-leakage optimal coverage, realized by comb sampling.
    Baseline,
    /// Linear program over every pure strategy.
    OptFull,
    /// Column generation.
    OptColgen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Mc,
    /// Exact when available, otherwise Monte Carlo.
    Auto,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => EvalMode::Exact,
            ModeArg::Mc => EvalMode::MonteCarlo,
            ModeArg::Auto => EvalMode::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "opt-colgen")]
    pub method: SolveMethod,
    #[arg(long, value_enum, default_value = "auto")]
    pub oracle: OracleChoice,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    /// Strategy output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    pub instance: PathBuf,
    #[arg(long, value_parser = parse_sampler)]
    pub method: SamplerKind,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["strategy", "method"]))]
pub struct EvaluateArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub strategy: Option<PathBuf>,
    #[arg(long, value_parser = parse_sampler)]
    pub method: Option<SamplerKind>,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub level: LevelArg,
    #[arg(long, hide = true)]
    pub corrupt_oracle: bool,
}

impl ValueEnum for OracleChoice {
    fn value_variants<'a>() -> &'a [Self] {
        &[OracleChoice::Alg1, OracleChoice::Brute, OracleChoice::Auto]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            OracleChoice::Alg1 => "alg1",
            OracleChoice::Brute => "brute",
            OracleChoice::Auto => "auto",
        }))
    }
}

fn parse_sampler(s: &str) -> Result<SamplerKind, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

#[derive(Debug, Serialize)]
struct SolveOutput {
    utility: f64,
    iterations: usize,
}

#[derive(Debug, Serialize)]
struct EvaluateOutput {
    utility: f64,
    stderr: Option<f64>,
    mode: &'static str,
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = serde_json::to_string(value).map_err(|e| CliError::input(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn solve(args: &SolveArgs, out: &mut dyn Write) -> CliResult<()> {
    if !(args.tol > 0.0) {
        return Err(CliError::input("--tol must be positive"));
    }
    let (g, model) = load_instance(&args.instance)?;
    let (strategy, utility, iterations): (MixedStrategy, f64, usize) = match args.method {
        SolveMethod::Baseline => {
            let base = solve_marginal_lp(&g)?;
            (comb_support(&comb_layout(&base.coverage, g.k)?), base.utility, 0)
        }
        SolveMethod::OptFull => {
            let rep = solve_full_lp(&g, &model)?;
            (rep.strategy, rep.utility, rep.iterations)
        }
        SolveMethod::OptColgen => {
            let opts = ColumnGenOptions { oracle: args.oracle.into(), max_iters: args.max_iters, tol: args.tol };
            let rep = column_generation(&g, &model, &opts)?;
            if rep.termination == Termination::IterationCap {
                return Err(CliError::Convergence(format!(
                    "column generation stopped after {} iterations without an optimality certificate",
                    rep.iterations
                )));
            }
            (rep.strategy, rep.utility, rep.iterations)
        }
    };
    if let Some(path) = &args.out {
        write_atomic(path, strategy_json(&strategy).as_bytes())?;
    }
    print_json(out, &SolveOutput { utility: round12(utility), iterations })
}

fn sample(args: &SampleArgs, out: &mut dyn Write) -> CliResult<()> {
    let (g, _) = load_instance(&args.instance)?;
    let sampler = Sampler::for_game(args.method, &g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut text = String::new();
    for _ in 0..args.count {
        let s = sampler.sample(&mut rng)?;
        text.push_str(&serde_json::to_string(s.targets()).expect("indices serialize"));
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> CliResult<()> {
    let (g, model) = load_instance(&args.instance)?;
    let sampler = match (&args.strategy, args.method) {
        (Some(path), None) => Sampler::for_strategy(load_strategy(path, g.n(), g.k)?),
        (None, Some(kind)) => Sampler::for_game(kind, &g)?,
        _ => return Err(CliError::input("give exactly one of --strategy and --method")),
    };
    if args.mode == ModeArg::Mc && args.samples == 0 {
        return Err(CliError::input("--samples must be positive in mc mode"));
    }
    let est = estimate(&sampler, g.n(), args.mode.into(), args.samples, args.seed)?;
    let e = est.evaluate(&g, &model);
    print_json(
        out,
        &EvaluateOutput {
            utility: round12(e.utility),
            stderr: e.stderr.map(round12),
            mode: if est.is_exact() { "exact" } else { "mc" },
        },
    )
}

/// Reads and validates a sweep configuration file.
pub fn load_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let cfg: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("malformed config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = load_config(&args.config)?;
    let rows = run_sweep(&cfg)?;
    write_atomic(&args.out, csv_string(&rows)?.as_bytes())?;
    let summary: SweepSummary = summarize(&cfg, &rows);
    if summary.failed_cells > 0 {
        eprintln!("{} cells failed; see the status column", summary.failed_cells);
    }
    print_json(out, &summary)
}

fn run_selftest(args: &SelftestArgs, out: &mut dyn Write) -> CliResult<()> {
    let level = match args.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    for check in selftest::run(level, args.corrupt_oracle)? {
        writeln!(out, "ok {} ({:.1} ms)", check.name, check.elapsed.as_secs_f64() * 1e3)?;
    }
    Ok(())
}

/// Runs a parsed command, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Sample(a) => sample(a, out),
        Command::Evaluate(a) => evaluate(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Selftest(a) => run_selftest(a, out),
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.to_exit_code()
        }
    }
}
