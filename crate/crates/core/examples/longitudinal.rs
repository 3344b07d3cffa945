//! Longitudinal subgroupoids: numerical semigroups, Frobenius numbers and the
//! per-residue asymptotes of their growth ratios.
//!
//!     cargo run --release --example longitudinal -- 4 6

use freemagma::density::{longitudinal_asymptote, longitudinal_convergence_check};
use freemagma::subgroupoid::{frobenius_by_scan, longitudinal_counting, semigroup_info};

fn main() -> freemagma::Result<()> {
    let mut a: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("generators are positive integers")).collect();
    if a.is_empty() {
        a = vec![3, 5];
    }

    let info = semigroup_info(&a)?;
    println!("A = {a:?}: gcd {}, reduced {:?}, Frobenius {}", info.gcd, info.reduced_generators, info.frobenius);
    println!("scan confirms Frobenius {}", frobenius_by_scan(&info.reduced_generators));
    println!("counting sequence {}", longitudinal_counting(&a, 12));

    let asym = longitudinal_asymptote(&a)?;
    for (r, q) in asym.per_residue.iter().enumerate() {
        println!("  n ≡ {r} mod {}: limit {q}", info.gcd);
    }
    println!("  mean over residues {}", asym.mean());

    let report = longitudinal_convergence_check(&a, 2000, 2e-3)?;
    for c in &report.residues {
        println!("  n = {}: empirical {:.6}, limit {:.6}", c.n, c.empirical, c.expected);
    }
    println!("within 2e-3: {}", report.passed());
    Ok(())
}
