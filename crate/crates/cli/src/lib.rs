//! Library side of the `polarize` command: scenario parsing, dispatch,
//! reports and the self-test suites.

pub mod report;
pub mod run;
pub mod scenario;
pub mod selftest;

use report::Report;
use run::{run_scenario, RunError};
use scenario::parse_scenario;

/// Built-in scenarios, by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("ex1", include_str!("../scenarios/ex1.json")),
    ("ex2", include_str!("../scenarios/ex2.json")),
    ("ex-xu-4-3", include_str!("../scenarios/ex-xu-4-3.json")),
    ("ex-xu-6-1", include_str!("../scenarios/ex-xu-6-1.json")),
];

/// Resolves a built-in name; `ex-xu` is short for `ex-xu-4-3`.
pub fn builtin(name: &str) -> Option<&'static str> {
    let name = if name == "ex-xu" { "ex-xu-4-3" } else { name };
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses and runs a scenario document.
pub fn analyze_text(text: &str, name: &str, seed: u64, max_dim: usize) -> Result<Report, RunError> {
    let sc = parse_scenario(text, name, max_dim)?;
    run_scenario(&sc, seed)
}
