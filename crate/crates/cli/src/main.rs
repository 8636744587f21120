//! Experiment runner for the `powerbound` library.
//!
//! Every subcommand resolves its parameters (defaults, then `--config`, then
//! flags), runs one experiment and writes a CSV or JSON report headed by the
//! tool version, the resolved configuration and the wall time.
//!
//! Exit status: 0 on success, 2 for parameter errors, 3 when a numerical
//! budget ran out. `reproduce` exits 1 if any criterion fails.

mod commands;
mod config;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use powerbound::reproduce::{run_suite, Suite};

use commands::*;
use config::{resolve, Common, Params};
use output::Report;

#[derive(Debug)]
pub enum CliError {
    Param(String),
    Core(powerbound::Error),
}

impl From<powerbound::Error> for CliError {
    fn from(e: powerbound::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) => 2,
            CliError::Core(e) if e.is_parameter_error() => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Param(m) => write!(f, "parameter error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "powerbound",
    version,
    about = "Numerical experiments on power-bounded operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compositional inverse of a family's Taylor series.
    Invert {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: InvertArgs,
    },
    /// Inverse of f/h by fixed-point iteration.
    FixedPointInvert {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: FixedPointArgs,
    },
    /// Critical point, f(ξ) and the boundary identity of an admissible family.
    Admissible {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: AdmissibleArgs,
    },
    /// A sharp threshold constant and its numerical cross-check.
    Threshold {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ThresholdArgs,
    },
    /// Per-ray Sinclair condition classification.
    SinclairScan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: SinclairArgs,
    },
    /// Grid scan for λ with |1 - λ^q| <= b over a family of powers q.
    GorinScan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: GorinArgs,
    },
    /// Checks the discrete Esterle implication on one operator.
    EsterleVerify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: EsterleArgs,
    },
    /// ‖T^n‖ and n‖T^{n+1} - T^n‖ for n up to n_max.
    PowerDiag {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: PowerDiagArgs,
    },
    /// Grid lower bound for the Ritt resolvent constant.
    Ritt {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: RittArgs,
    },
    /// sup_ξ t|σ(ξ)|e^{-t Re σ(ξ)} for a Volterra symbol.
    VolterraLimit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: VolterraLimitArgs,
    },
    /// Nyström matrix of a Volterra kernel.
    VolterraKernel {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: KernelArgs,
    },
    /// t‖A e^{tA}‖ for a discretized kernel.
    SemigroupCurve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: SemigroupArgs,
    },
    /// L1 norms of the multiplier kernels G(n) and their log-growth.
    L1Growth {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: GrowthArgs,
    },
    /// n times the L1 norm of the difference kernel D(n).
    L1Diff {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: DiffArgs,
    },
    /// Σ_k n e^{-n/k!}/k! over a log-spaced range of n.
    SeqDiffBound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: DiffBoundArgs,
    },
    /// The projection bound for n = 1..n_max.
    SeqProjBound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ProjBoundArgs,
    },
    /// Runs acceptance criteria: series, admissible, matrix, volterra, l1,
    /// seqdiag or all.
    Reproduce {
        suite: String,
        /// Also write a JSON report here.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
}

fn run<P: Params>(
    name: &str,
    common: &Common,
    flags: &P,
    f: impl FnOnce(&P, u64) -> Result<Report, CliError>,
) -> Result<(), CliError> {
    let r = resolve(flags, common)?;
    let start = Instant::now();
    let report = f(&r.params, r.seed)?;
    let text = output::render(name, &r.echo, start.elapsed(), &report);
    output::emit(output::target(r.output, name, &report).as_deref(), &text)
}

fn reproduce(suite: &str, out: Option<std::path::PathBuf>) -> Result<bool, CliError> {
    let suite: Suite = suite.parse()?;
    let start = Instant::now();
    let outcomes = run_suite(suite)?;
    for o in &outcomes {
        println!("{}", o.line());
    }
    let all = outcomes.iter().all(|o| o.passed());
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("{passed}/{} criteria PASS", outcomes.len());
    let report = Report::json(json!({ "all_passed": all, "criteria": outcomes }));
    if let Some(path) = output::target(out, "reproduce", &report) {
        let text = output::render("reproduce", &json!({ "suite": suite }), start.elapsed(), &report);
        output::write_atomic(&path, &text)?;
    }
    Ok(all)
}

fn dispatch(cmd: Command) -> Result<ExitCode, CliError> {
    use Command::*;
    match cmd {
        Invert { common, params } => run("invert", &common, &params, |p, _| invert(p)),
        FixedPointInvert { common, params } => run("fixed-point-invert", &common, &params, |p, _| fixed_point(p)),
        Admissible { common, params } => run("admissible", &common, &params, |p, _| admissible(p)),
        Threshold { common, params } => run("threshold", &common, &params, |p, _| threshold_cmd(p)),
        SinclairScan { common, params } => run("sinclair-scan", &common, &params, |p, _| sinclair(p)),
        GorinScan { common, params } => run("gorin-scan", &common, &params, |p, _| gorin(p)),
        EsterleVerify { common, params } => run("esterle-verify", &common, &params, esterle),
        PowerDiag { common, params } => run("power-diag", &common, &params, |p, _| power_diag(p)),
        Ritt { common, params } => run("ritt", &common, &params, |p, _| ritt(p)),
        VolterraLimit { common, params } => run("volterra-limit", &common, &params, |p, _| volterra_limit(p)),
        VolterraKernel { common, params } => run("volterra-kernel", &common, &params, |p, _| volterra_kernel(p)),
        SemigroupCurve { common, params } => run("semigroup-curve", &common, &params, |p, _| semigroup(p)),
        L1Growth { common, params } => run("l1-growth", &common, &params, |p, _| l1_growth(p)),
        L1Diff { common, params } => run("l1-diff", &common, &params, |p, _| l1_diff(p)),
        SeqDiffBound { common, params } => run("seq-diff-bound", &common, &params, |p, _| seq_diff(p)),
        SeqProjBound { common, params } => run("seq-proj-bound", &common, &params, |p, _| seq_proj(p)),
        Reproduce { suite, output } => {
            return Ok(if reproduce(&suite, output)? {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("powerbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
