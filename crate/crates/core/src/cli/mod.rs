//! Subcommand implementations for the `semzsl` binary.

pub mod baseline;
pub mod config;
pub mod eval;
pub mod gen;
pub mod gradcheck;
pub mod retrieve;
pub mod train;

use std::path::PathBuf;

use semzsl::error::{Error, Result};

/// Env var consulted when a subcommand gets no `--out` flag.
pub const OUT_DIR_ENV: &str = "SEMZSL_OUT_DIR";

/// Resolve the output directory: flag, then environment, then error.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> Result<PathBuf> {
    if let Some(dir) = flag {
        return Ok(dir);
    }
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
        return Ok(PathBuf::from(dir));
    }
    Err(Error::InvalidArgument(format!(
        "no output directory: pass --out or set {OUT_DIR_ENV}"
    )))
}

/// Process exit codes: 0 success, 1 threshold failure, 2 usage/data error.
pub fn exit_code_for(err: &Error) -> i32 {
    // Every library error is a usage or data problem from the CLI's view;
    // threshold failures are signalled by subcommands directly.
    let _ = err;
    2
}
