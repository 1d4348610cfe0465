//! Command-line front end: cover documents, reports, homology runs and the
//! cross-check fuzzer.

pub mod document;
pub mod fuzz;
pub mod homology;
pub mod report;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID_INPUT: i32 = 1;
    pub const IDENTITY_FAILURE: i32 = 2;
}

/// `WORK_LIMIT` from the environment, or the default bound on `|G(P)|`.
pub fn work_limit() -> u64 {
    std::env::var("WORK_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(deftan::weakly::DEFAULT_WORK_LIMIT)
}
