//! Brute-force oracle, instance generators, class checks, diagnostics and cross-validation.

mod bench;
mod diagnostics;
mod generate;
mod oracle;
mod solve;
mod verify;

pub use bench::{cross_validate, BenchRecord, BenchReport, CorpusEntry, CorpusSpec};
pub use diagnostics::{diagnostics, Diagnostics, WidthEstimate};
pub use generate::{generate, GeneratorSpec, InstanceClass, SeededRng};
pub use oracle::{brute_force, brute_force_with_budget, DEFAULT_ORACLE_BUDGET};
pub use solve::{run_algorithm, Algorithm, SolveOptions, SolveOutcome};
pub use verify::{verify_class, ClassVerdict};
