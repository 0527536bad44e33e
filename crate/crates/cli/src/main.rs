use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use consensus_cli::{execute, load_input, verify_builtin, CliError, Command, Flags, Outcome};
use consensus_core::PreequalizationMode;

/// Consensus analysis of DeGroot influence matrices.
#[derive(Debug, Parser)]
#[command(name = "consensus", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Structure, power limit, projector and weight vector of P.
    Analyze(FileArgs),
    /// Preequalize the initial opinions and iterate P to consensus.
    Simulate(FileArgs),
    /// Run every cross-check on the input, or on the built-in systems.
    Verify(VerifyArgs),
    /// Communication digraph in Graphviz DOT format.
    ExportDot(FileArgs),
}

#[derive(Debug, Args)]
struct FileArgs {
    /// JSON input document.
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// JSON input document (omit with --builtin).
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// Verify the built-in seven-agent and five-agent systems.
    #[arg(long)]
    builtin: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Orthogonal,
    Tilde,
}

#[derive(Debug, Args)]
struct Common {
    /// Convergence tolerance (conv_tol).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Iteration cap.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Preequalization operator for simulate.
    #[arg(long, value_enum, default_value = "orthogonal")]
    mode: Mode,
    /// Also report the resolvent (I + tau L)^-1 at this tau.
    #[arg(long)]
    tau: Option<f64>,
    /// Largest system (or final class) handed to brute-force enumeration.
    #[arg(long)]
    oracle_cap: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn flags(&self) -> Flags {
        Flags {
            tolerance: self.tolerance,
            max_iter: self.max_iter,
            mode: match self.mode {
                Mode::Orthogonal => PreequalizationMode::Orthogonal,
                Mode::Tilde => PreequalizationMode::Tilde,
            },
            tau: self.tau,
            oracle_cap: self.oracle_cap,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (outcome, output) = match cli.command {
        Cmd::Analyze(a) => (on_file(Command::Analyze, &a)?, a.common.output),
        Cmd::Simulate(a) => (on_file(Command::Simulate, &a)?, a.common.output),
        Cmd::ExportDot(a) => (on_file(Command::ExportDot, &a)?, a.common.output),
        Cmd::Verify(v) => {
            let flags = v.common.flags();
            let outcome = match &v.input {
                Some(path) => execute(Command::Verify, &load_input(path)?, &flags)?,
                None => verify_builtin(&flags)?,
            };
            (outcome, v.common.output)
        }
    };
    emit(&outcome.text, output)?;
    if outcome.failed_checks > 0 {
        return Err(CliError::VerificationFailed {
            failed: outcome.failed_checks,
        });
    }
    Ok(())
}

fn on_file(cmd: Command, a: &FileArgs) -> Result<Outcome, CliError> {
    execute(cmd, &load_input(&a.input)?, &a.common.flags())
}

fn emit(text: &str, output: Option<PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Write { path, source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
