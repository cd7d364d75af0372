//! Scenario runner for the codepth engine: scenario files, reports, the
//! persistent slice cache, and command dispatch.

pub mod cache;
pub mod error;
pub mod report;
pub mod run;
pub mod scenario;

pub use error::CliError;
pub use report::Report;
pub use run::{build_budget, run_scenario, scenario_ideal, Options, ScenarioIdeal};
pub use scenario::Scenario;
