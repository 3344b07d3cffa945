//! Motzkin paths with forbidden step pairs and coloured flat steps, and their
//! match with subgroupoid counting sequences.
//!
//!     cargo run --example motzkin_paths

use freemagma::motzkin::{count_paths, count_sequence, crosscheck_subgroupoid, enumerate_paths, PathSpec, Step};
use freemagma::GenFamily;

fn main() -> freemagma::Result<()> {
    let plain = PathSpec::plain(4);
    let restricted = PathSpec::plain(4).forbid_list("FU,FF")?;
    let bicolored = restricted.clone().color(Step::F, 2)?;

    for (label, spec) in [("plain", &plain), ("no FU, FF", &restricted), ("bicoloured F", &bicolored)] {
        let paths: Vec<String> = enumerate_paths(spec)?.iter().map(|p| p.render(spec)).collect();
        println!("{label:<13} {} paths: {}", count_paths(spec), paths.join(" "));
    }

    let seq: Vec<String> = count_sequence(&restricted, 14).iter().map(ToString::to_string).collect();
    println!("\nno FU, FF, lengths 0..14: {}", seq.join(", "));

    let a: GenFamily = "finite:[(1+1),(1+(1+1))]".parse()?;
    let b: GenFamily = "finite:[(1+1),((1+1)+1),(1+(1+1))]".parse()?;
    let ra = crosscheck_subgroupoid(&restricted, &a, 2, 20)?;
    let rb = crosscheck_subgroupoid(&bicolored, &b, 2, 20)?;
    println!("|{a}|_n = paths of length n-2: {}", ra.passed());
    println!("|{b}|_n = bicoloured paths of length n-2: {}", rb.passed());
    Ok(())
}
