//! Command-line front end. Exit codes: 0 success, 1 configuration error,
//! 2 a check failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::counterexamples::PhiKind;
use crate::error::{Result, VilenkinError};
use crate::experiments::{run, Experiment, Params};
use crate::group::{BaseSequence, DEFAULT_CEILING};
use crate::verify::{verify_all, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

/// Environment variable that lowers the largest admissible group order.
pub const CEILING_VAR: &str = "VLAB_CEILING";

#[derive(Parser, Debug)]
#[command(name = "vlab", version, about = "Experiments on finite Vilenkin groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fast transform against the naive one, and the round trip.
    TransformSelftest(RunArgs),
    /// Dirichlet kernel routes, L1 norms and Lebesgue constants.
    Kernels(RunArgs),
    /// Shell integrals of the Dirichlet kernels.
    Lemma2(RunArgs),
    /// Weighted maximal operator applied to random atoms.
    MaximalAtoms(RunArgs),
    /// Weak-type and L1 ratios for kernel blocks.
    Divergence(RunArgs),
    /// Weighted strong sums of partial sums of random atoms.
    StrongSum(RunArgs),
    /// Approximation by partial sums against the Hardy modulus.
    Approximation(RunArgs),
    /// Residual decay for functions with fast-decaying blocks.
    ModulusConvergence(RunArgs),
    /// Block martingale whose weak residuals do not decay.
    #[command(name = "counterexample-3b")]
    Counterexample3b(RunArgs),
    /// Block martingale whose L1 residuals do not decay.
    #[command(name = "counterexample-4b")]
    Counterexample4b(RunArgs),
    /// Logarithmic means of partial sums.
    GatLogMean(RunArgs),
    /// Runs the full acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// `walsh:N` or a comma separated base list such as `2,3,2`.
    #[arg(long)]
    bases: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// const1, log, loglog or critical.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of random functions or atoms.
    #[arg(long)]
    count: Option<usize>,
    /// JSON file whose fields override the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "vlab-verify")]
    out: PathBuf,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum BasesValue {
    Spec(String),
    List(Vec<usize>),
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    bases: Option<BasesValue>,
    p: Option<f64>,
    phi: Option<String>,
    kmax: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    count: Option<usize>,
}

/// The value of [`CEILING_VAR`], or the default when unset.
pub fn ceiling_from(value: Option<&str>) -> Result<usize> {
    let Some(text) = value else {
        return Ok(DEFAULT_CEILING);
    };
    let ceiling: usize = text
        .trim()
        .parse()
        .map_err(|_| VilenkinError::Domain(format!("{CEILING_VAR} must be a positive integer, got {text:?}")))?;
    if !(2..=DEFAULT_CEILING).contains(&ceiling) {
        return Err(VilenkinError::Domain(format!(
            "{CEILING_VAR} = {ceiling} is outside [2, {DEFAULT_CEILING}]"
        )));
    }
    Ok(ceiling)
}

fn experiment_of(command: &Command) -> Option<(Experiment, &RunArgs)> {
    let e = match command {
        Command::TransformSelftest(a) => (Experiment::TransformSelftest, a),
        Command::Kernels(a) => (Experiment::Kernels, a),
        Command::Lemma2(a) => (Experiment::Lemma2, a),
        Command::MaximalAtoms(a) => (Experiment::MaximalAtoms, a),
        Command::Divergence(a) => (Experiment::Divergence, a),
        Command::StrongSum(a) => (Experiment::StrongSum, a),
        Command::Approximation(a) => (Experiment::Approximation, a),
        Command::ModulusConvergence(a) => (Experiment::ModulusConvergence, a),
        Command::Counterexample3b(a) => (Experiment::Counterexample3b, a),
        Command::Counterexample4b(a) => (Experiment::Counterexample4b, a),
        Command::GatLogMean(a) => (Experiment::GatLogMean, a),
        Command::Verify(_) => return None,
    };
    Some(e)
}

/// Flags merged with the config file, validated against `ceiling`.
fn resolve(args: &RunArgs, ceiling: usize) -> Result<(Params, PathBuf)> {
    let config = match &args.config {
        Some(path) => serde_json::from_str::<ConfigFile>(&std::fs::read_to_string(path)?)?,
        None => ConfigFile::default(),
    };
    let base = match config.bases {
        Some(BasesValue::List(list)) => BaseSequence::with_ceiling(list, ceiling)?,
        Some(BasesValue::Spec(spec)) => BaseSequence::parse_with_ceiling(&spec, ceiling)?,
        None => BaseSequence::parse_with_ceiling(args.bases.as_deref().unwrap_or("walsh:8"), ceiling)?,
    };
    let p = config.p.or(args.p).unwrap_or(0.5);
    let phi = match config.phi.as_deref().or(args.phi.as_deref()) {
        None => PhiKind::Const1,
        Some(name) => PhiKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| VilenkinError::Domain(format!("unknown phi preset {name:?}")))?,
    };
    let mut params = Params::new(base).with_p(p).with_phi(phi);
    if let Some(k) = config.kmax.or(args.kmax) {
        params = params.with_kmax(k);
    }
    if let Some(seed) = config.seed.or(args.seed) {
        params = params.with_seed(seed);
    }
    if let Some(count) = config.count.or(args.count) {
        params = params.with_count(count);
    }
    let out = config
        .out
        .or_else(|| args.out.clone())
        .unwrap_or_else(|| PathBuf::from("vlab-out"));
    Ok((params, out))
}

fn run_experiment(experiment: Experiment, args: &RunArgs, ceiling: usize, stdout: &mut dyn Write) -> Result<i32> {
    let (params, out) = resolve(args, ceiling)?;
    let report = run(experiment, &params)?;
    let files = report.write(&out)?;
    writeln!(stdout, "{experiment}: {}", report.summary)?;
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        if check.detail.is_empty() {
            writeln!(stdout, "{status} {}", check.name)?;
        } else {
            writeln!(stdout, "{status} {}: {}", check.name, check.detail)?;
        }
    }
    for f in files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn run_verify(args: &VerifyArgs, ceiling: usize, stdout: &mut dyn Write) -> Result<i32> {
    // walsh:12 is the largest group in the suite.
    if ceiling < 1 << 12 {
        return Err(VilenkinError::Domain(format!(
            "verify needs {CEILING_VAR} >= 4096, got {ceiling}"
        )));
    }
    let report = verify_all(&VerifyOptions {
        seed: args.seed,
        ..VerifyOptions::default()
    })?;
    for c in &report.criteria {
        writeln!(stdout, "{c}")?;
    }
    report.write(&args.out)?;
    writeln!(stdout, "wrote {} tables to {}", report.tables.len(), args.out.display())?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parses `args` (including the program name) and runs the command.
/// `ceiling` is the raw value of [`CEILING_VAR`].
pub fn main_with(
    args: impl IntoIterator<Item = OsString>,
    ceiling: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = ceiling_from(ceiling).and_then(|ceiling| match experiment_of(&cli.command) {
        Some((experiment, args)) => run_experiment(experiment, args, ceiling, stdout),
        None => match &cli.command {
            Command::Verify(args) => run_verify(args, ceiling, stdout),
            _ => unreachable!("every other command is an experiment"),
        },
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_CONFIG
        }
    }
}
