use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use synclab_cli::commands::{cmd_commutant, cmd_decompose, cmd_suite, cmd_verify_drift, Overrides};

/// Numerical experiments on synchronization subspaces: build the operator
/// K = T_A (x) I - I (x) T_B, evolve states under nearly compatible
/// Hamiltonians, and verify drift, fidelity and symmetry-classification
/// bounds.
///
/// Exit codes: 0 all checks passed, 1 check failure, 2 parse error,
/// 3 dimension/precondition error, 4 internal numeric failure.
#[derive(Parser)]
#[command(name = "synclab", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute tolerance override for rank and kernel thresholds.
    #[arg(long, global = true, value_name = "X")]
    tol_abs: Option<f64>,

    /// Relative tolerance override for rank and kernel thresholds.
    #[arg(long, global = true, value_name = "X")]
    tol_rel: Option<f64>,

    /// Only print the final summary line per scenario.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a drift trajectory and check the linear drift bound and the
    /// spectral-gap fidelity floor; write the trajectory as CSV.
    VerifyDrift {
        /// Scenario file (JSON).
        #[arg(long)]
        scenario: PathBuf,
        /// Output CSV path; a JSON report lands next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decompose both representations into isotypic components and compare
    /// ker(K) with the diagonal isotypic projector.
    Decompose {
        #[arg(long)]
        scenario: PathBuf,
        /// Output report path (JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the algebra of equivariant Hamiltonians commuting with K.
    Commutant {
        #[arg(long)]
        scenario: PathBuf,
        /// Output report path (JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every scenario in a directory with its declared command and
    /// aggregate a summary.
    Suite {
        /// Directory of scenario files.
        #[arg(long)]
        dir: PathBuf,
        /// Output directory for CSVs, reports and summary.json.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let overrides = Overrides {
        tol_abs: cli.tol_abs,
        tol_rel: cli.tol_rel,
        quiet: cli.quiet,
    };

    let outcome = match &cli.command {
        Command::VerifyDrift { scenario, out } => {
            cmd_verify_drift(scenario, out, &overrides).map(|r| u8::from(!r.passed))
        }
        Command::Decompose { scenario, out } => {
            cmd_decompose(scenario, out, &overrides).map(|r| u8::from(!r.passed))
        }
        Command::Commutant { scenario, out } => {
            cmd_commutant(scenario, out, &overrides).map(|r| u8::from(!r.passed))
        }
        Command::Suite { dir, out } => cmd_suite(dir, out, &overrides).map(|s| s.exit_code()),
    };

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn main() -> ExitCode {
    // Numerical invariant violations deep in the solvers panic; report
    // them as internal numeric failures rather than a raw abort.
    match std::panic::catch_unwind(run) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("internal numeric failure");
            ExitCode::from(4)
        }
    }
}
