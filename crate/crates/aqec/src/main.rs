use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use aqec::{AppError, ExperimentConfig};
use aqec_core::bounds::solve_recurrence;
use clap::{Parser, Subcommand};

/// Autonomous quantum error correction experiments and bounds.
///
/// Exit codes: 0 success, 1 usage or input error, 2 acceptance failure.
/// AQEC_WORKERS overrides the worker count of `run`.
#[derive(Parser)]
#[command(name = "aqec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a flat `key = value` config.
    Run {
        config: PathBuf,
        /// Also run the experiment's assertions and exit 2 if any fails.
        #[arg(long)]
        check: bool,
    },
    /// Re-hash the outputs of a run and re-check its assertions.
    Verify { manifest: PathBuf },
    /// Evaluate closed-form bounds over a CSV parameter table.
    Bounds {
        #[arg(long)]
        grid: PathBuf,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the absorbing-walk recurrence and print v, s_v, ln s_v.
    Recurrence {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p1: f64,
    },
}

fn print_checks(checks: &[aqec::Check]) -> bool {
    let mut ok = true;
    for c in checks {
        ok &= c.passed;
        let tag = c.criterion.map_or(String::new(), |k| format!("[{}] ", k));
        println!("{} {}{}: {}", if c.passed { "PASS" } else { "FAIL" }, tag, c.name, c.detail);
    }
    ok
}

fn execute(cmd: Command) -> Result<ExitCode, AppError> {
    match cmd {
        Command::Run { config, check } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = aqec::run(&cfg)?;
            println!(
                "{}: wrote {} curves in {:.1} s to {}",
                cfg.experiment,
                report.manifest.files.len(),
                report.manifest.wall_clock_seconds,
                report.manifest_path.display()
            );
            if check && !print_checks(&aqec::checks_for(cfg.experiment, &report.curves)) {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { manifest } => {
            let report = aqec::verify(&manifest)?;
            for (name, problem) in &report.files {
                match problem {
                    None => println!("PASS checksum {}", name),
                    Some(p) => println!("FAIL checksum {}: {}", name, p),
                }
            }
            print_checks(&report.checks);
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Bounds { grid, output } => {
            let input = std::fs::File::open(&grid)
                .map_err(|e| AppError::Usage(format!("cannot open {}: {}", grid.display(), e)))?;
            match output {
                Some(p) => {
                    let f = std::fs::File::create(&p).map_err(|source| AppError::Io { path: p.clone(), source })?;
                    aqec::grid::evaluate_grid(input, f)?;
                }
                None => {
                    aqec::grid::evaluate_grid(input, std::io::stdout().lock())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Recurrence { h, n, p1 } => {
            let r = solve_recurrence(h, n, p1)?;
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "v,s_v,ln_s_v");
            for (v, &ls) in r.log_s.iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", v, ls.exp(), ls);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
