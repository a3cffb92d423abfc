//! Scenario-driven verification and field commands behind the `vekua` binary.

pub mod checks;
pub mod profile;
pub mod report;
pub mod scenario;
