use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gencal::check::run_check;
use gencal::dualize::tdualize;
use gencal::numeric::Mode;
use gencal::scenario::{load, to_text};
use gencal::suite::run_suite;
use gencal::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "gencal", version, about = "Generalised calibrations: scenario checks, T-duality and identity suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario file (JSON).
    #[arg(value_name = "SCENARIO", required_unless_present = "scenario")]
    path: Option<PathBuf>,
    /// Scenario file, as an alternative to the positional argument.
    #[arg(long = "scenario", value_name = "PATH", conflicts_with = "path")]
    scenario: Option<PathBuf>,
}

impl ScenarioArg {
    fn path(&self) -> &Path {
        self.path.as_deref().or(self.scenario.as_deref()).expect("clap enforces one of the two")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Calibration report for every pair of a scenario.
    Check {
        #[command(flatten)]
        input: ScenarioArg,
        /// Equality tolerance; overrides the scenario's `tol`.
        #[arg(long)]
        tol: Option<f64>,
        /// Arithmetic mode; overrides the scenario's `mode`.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded identity suites.
    Suite {
        /// exterior, clifford, genmetric, dirac, purespinor, calibration,
        /// tduality, fieldforms or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "float")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dual scenario along a direction; the log goes to standard error.
    Tdualize {
        #[command(flatten)]
        input: ScenarioArg,
        /// Coordinate direction `1..=n`; defaults to the scenario's duality section.
        #[arg(long)]
        direction: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Write the dual scenario here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Float,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Check { input, tol, mode, out } => {
            let scenario = load(&read(input.path())?, mode.map(Mode::from))?;
            let report = run_check(&scenario, tol)?;
            emit(&report.to_text(), out.as_deref())?;
            if out.is_some() {
                println!(
                    "{}: {} of {} expectations met",
                    report.status, report.expectations.met, report.expectations.total
                );
            }
            Ok(report.exit_code())
        }
        Command::Suite { suite, seed, mode, tol, out } => {
            let report = run_suite(&suite, seed, mode.into(), tol)?;
            print!("{}", report.to_text());
            if let Some(path) = out {
                emit(&report.to_json(), Some(&path))?;
            }
            Ok(report.exit_code())
        }
        Command::Tdualize { input, direction, mode, out } => {
            let scenario = load(&read(input.path())?, mode.map(Mode::from))?;
            let dual = tdualize(&scenario, direction)?;
            for line in &dual.log {
                eprintln!("{line}");
            }
            emit(&to_text(&dual.scenario), out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
