//! Configuration-driven front end: `run`, `verify` and `catalog`.

pub mod catalog;
pub mod config;
pub mod error;
pub mod run;
pub mod verify;

pub use config::RunConfig;
pub use error::CliError;
pub use run::{cmd_run, run_pipeline, RunReport};
pub use verify::{run_suite, SuiteOptions, SuiteReport};

/// Installs the logger from `REDUCE_LOG` (`quiet`, `info` or `debug`;
/// default `quiet`).
pub fn init_logging() {
    let level = match std::env::var("REDUCE_LOG").as_deref() {
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        _ => log::LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}
