//! Front end for the Maslov index library: run configurations, randomized
//! verification campaigns, canonical fixtures and JSON reports.

pub mod campaign;
pub mod commands;
pub mod config;
pub mod json;
pub mod report;
pub mod selftest;
pub mod suites;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}
