//! Declarative verification of series identities and congruences.
pub mod eval;
pub mod expr;
pub mod registry;
pub mod report;
pub mod runner;

pub use eval::{DiskCache, Evaluator, Value};
pub use expr::{parse, parse_all, Expr};
pub use registry::{CheckKind, CheckSpec, Progression, Registry};
pub use runner::{CheckResult, FirstMismatch, RunConfig, Runner, Status};
