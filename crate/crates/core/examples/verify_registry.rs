//! Running checks from the built-in registry and rendering the report.
//!
//! `cargo run --release --example verify_registry -- 'CPHI5-*'`

use cphi::harness::report;
use cphi::harness::{RunConfig, Runner};

fn main() -> cphi::Result<()> {
    let pattern = std::env::args().nth(1).unwrap_or_else(|| "CPHI5-*".to_string());
    let runner = Runner::builtin(RunConfig {
        prec: 60,
        ..RunConfig::default()
    });
    let results = runner.run_suite(&pattern)?;
    print!("{}", report::to_text(&results));
    println!("{}", report::to_json(&results[..1])?);
    Ok(())
}
