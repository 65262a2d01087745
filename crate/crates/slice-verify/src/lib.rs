//! Independent oracles and the check suites run against `slice-core`:
//! a matrix-level slice reduction, exhaustive root-combinatorics checks and
//! randomized exact comparisons of the closed forms.

pub mod checks;
pub mod config;
pub mod oracle;
pub mod sample;
pub mod suite;
pub mod verdict;

pub use config::{LprimeRule, Mode, TrialConfig, ValuePool};
pub use oracle::{numeric_slice_oracle, OracleError, OracleOutput};
pub use suite::{replay, run_checks, run_suite, Suite};
pub use verdict::{Counterexample, Params, Report, Status, Verdict};
