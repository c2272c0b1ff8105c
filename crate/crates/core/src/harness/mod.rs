//! Configuration, output writers and the `spectrum` / `verify` / `converge` commands.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

pub use commands::{
    cmd_converge, cmd_spectrum, cmd_verify, require_pass, spectrum_summary, verify_summary, CommandError, SpectrumRun,
};
pub use config::{load_config, parse_config, ConfigError, OutputFormat, RunConfig, VerifySettings};
pub use verify::{run_verify, run_verify_with, CheckResult, VerifyHooks, VerifyOutcome};
