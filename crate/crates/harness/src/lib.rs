//! Experiment harness: family schedules, seeded experiments, property suites
//! and CSV reports on top of `msg-core`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod family;
pub mod report;
pub mod runner;
pub mod suites;

pub use error::{HarnessError, Result};
pub use family::{Characteristic, FamilyDescriptor, FamilyKind};
pub use report::ExperimentReport;
