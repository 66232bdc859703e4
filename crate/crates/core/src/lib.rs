pub mod arith;
pub mod builders;
pub mod cli;
pub mod engine;
pub mod error;
pub mod frobenius;
pub mod harness;
pub mod series;

pub use error::{Error, Result};
pub use series::{exp, Exponent, Mismatch, ModSeries, PuiseuxSeries};
