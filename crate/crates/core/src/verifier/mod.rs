//! Canned scenarios, randomized property checks and definition files, all
//! producing [`Report`]s.

pub mod definition;
pub mod properties;
pub mod report;
pub mod scenarios;

pub use definition::{run_definition_file, ScenarioDefinition};
pub use report::{Claim, Report, Trace, Value};
