use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use polarize_cli::report::{ApproxTag, Report};
use polarize_cli::run::RunError;
use polarize_cli::{analyze_text, builtin, selftest};

#[derive(Parser)]
#[command(name = "polarize", version, about = "Exact checks for polarized endomorphisms and cone dynamics")]
struct Cli {
    /// Write the machine-readable report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Seed for randomized diagnostics and self-test suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest matrix or variety dimension accepted from a scenario.
    #[arg(long, global = true, default_value_t = 8)]
    max_dim: usize,
    /// Include wall-clock timing in the output and the JSON report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a scenario file.
    Analyze { file: PathBuf },
    /// Run a built-in scenario: ex1, ex2, ex-xu (= ex-xu-4-3), ex-xu-6-1.
    Examples { name: String },
    /// Run the seeded property suites.
    Selftest,
}

fn emit(cli: &Cli, mut report: Report, started: Instant) -> ExitCode {
    let ms = started.elapsed().as_secs_f64() * 1e3;
    print!("{}", report.to_text(cli.timing.then_some(ms)));
    if let Some(path) = &cli.json {
        if cli.timing {
            report.timing_ms = Some(ApproxTag { approx: ms });
        }
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    ExitCode::SUCCESS
}

fn fail(e: RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match &cli.command {
        Command::Analyze { file } => {
            let text = match std::fs::read_to_string(file) {
                Ok(t) => t,
                Err(e) => return fail(RunError::Schema(format!("cannot read {}: {e}", file.display()))),
            };
            let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            match analyze_text(&text, &stem, cli.seed, cli.max_dim) {
                Ok(r) => emit(&cli, r, started),
                Err(e) => fail(e),
            }
        }
        Command::Examples { name } => {
            let Some(text) = builtin(name) else {
                eprintln!("error: unknown example {name:?}; try ex1, ex2, ex-xu, ex-xu-4-3 or ex-xu-6-1");
                return ExitCode::from(2);
            };
            match analyze_text(text, name, cli.seed, cli.max_dim) {
                Ok(r) => emit(&cli, r, started),
                Err(e) => fail(e),
            }
        }
        Command::Selftest => {
            let results = selftest::run_all(cli.seed);
            let mut ok = true;
            for r in &results {
                match &r.outcome {
                    Ok(()) => println!("PASS {} ({} cases)", r.name, r.cases),
                    Err(e) => {
                        ok = false;
                        println!("FAIL {}: {e}", r.name);
                    }
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}
