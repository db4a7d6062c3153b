//! Catalog loading, report emission and verification sweeps on top of
//! `oklab-core`.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod encode;
pub mod report;
pub mod suites;

pub use catalog::Catalog;
pub use config::{Format, RunConfig};
pub use report::{Check, Report};
pub use suites::{RunError, Runner, Suite};
