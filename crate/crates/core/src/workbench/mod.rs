//! Result cache, claim registry and reports behind the `dcover` binary.

pub mod cache;
pub mod claims;
pub mod report;

pub use cache::{default_cache_path, Cache, CacheLine, CACHE_ENV};
pub use claims::{claim, Claim, ClaimKind, Variety, VerificationRow, VerificationRun, Workbench, CLAIMS};
pub use report::{render, render_run, Format};

use crate::error::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Process exit status for a finished run or an error.
pub fn exit_code(outcome: &Result<bool, Error>) -> i32 {
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) if e.is_configuration() => EXIT_CONFIG,
        Err(_) => EXIT_FAIL,
    }
}
