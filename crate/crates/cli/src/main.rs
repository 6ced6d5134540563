use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use reduce_cli::catalog::{catalog, render};
use reduce_cli::{cmd_run, init_logging, run_suite, SuiteOptions};
use reduce_core::geometry::ScenarioId;

#[derive(Parser)]
#[command(name = "reduce", version, about = "Reduced Laplace-Beltrami operators on polar sections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble and solve one configuration; writes report.json,
    /// spectrum.csv and plot.csv to the configured output directory.
    Run { config: PathBuf },
    /// Run the invariant suites, optionally for one scenario.
    Verify {
        scenario: Option<ScenarioId>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        corrupt_catalog: bool,
    },
    /// List scenarios, representations with dim V^K, and oracles.
    Catalog,
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match cmd_run(&config) {
            Ok(report) => {
                for c in &report.checks.checks {
                    println!(
                        "{} {:<28} {:.3e}",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.residual
                    );
                }
                for (i, l) in report.spectrum.eigenvalues.iter().enumerate() {
                    println!("lambda[{i}] = {l}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::Verify {
            scenario,
            seed,
            corrupt_catalog,
        } => {
            let start = Instant::now();
            let report = run_suite(SuiteOptions {
                filter: scenario,
                seed,
                corrupt_catalog,
            });
            print!("{}", report.render());
            log::info!("suite finished in {:.1} s", start.elapsed().as_secs_f64());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Catalog => {
            print!("{}", render(&catalog()));
            ExitCode::SUCCESS
        }
    }
}
