//! Growth ratios, Aitken acceleration and the density estimate of N in M.
//!
//!     cargo run --release --example density_estimate -- "shifted:1" full 3000

use freemagma::density::{estimate_density, DensityConfig, DensityValue};
use freemagma::GenFamily;

fn main() -> freemagma::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: GenFamily = args.first().map_or("shifted:1", String::as_str).parse()?;
    let m: GenFamily = args.get(1).map_or("full", String::as_str).parse()?;
    let horizon: usize = args.get(2).map_or(Ok(3000), |s| s.parse()).expect("horizon must be an integer");

    let config = DensityConfig::new(horizon).with_precision(8);
    let est = estimate_density(&n, &m, &config)?;

    println!("δ({n} : {m}) up to n = {horizon}");
    for s in est.trace.iter().rev().step_by(horizon / 8).rev() {
        println!("  ratio at n = {:<5} {}", s.n, s.value.to_significant(10));
    }
    if let Some(last) = est.accelerated.last() {
        println!("  accelerated (n = {}) {}", last.n, last.value.to_significant(10));
    }
    match &est.value {
        DensityValue::Converged { value } => println!("estimate {}", value.to_significant(8)),
        DensityValue::Oscillating { period, per_residue } => {
            println!("no limit: period {period}");
            for (r, v) in per_residue.iter().enumerate() {
                println!("  residue {r}: {}", v.to_significant(8));
            }
        }
        DensityValue::Inconclusive { last } => {
            println!("inconclusive; last value {}", last.as_ref().map_or("none".into(), |v| v.to_significant(8)))
        }
    }
    println!("diagnostics: {:?}", est.diagnostics.last_window_spread);
    Ok(())
}
