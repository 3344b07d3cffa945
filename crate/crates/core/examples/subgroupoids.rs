//! Closures, membership, minimal generating sets and the counting theorem
//! checked against brute force.
//!
//!     cargo run --example subgroupoids -- "finite:[(1+1),(1+1)+(1+1),(1+(1+1))]"

use freemagma::sequences::cat_transform;
use freemagma::subgroupoid::{
    brute_count_default, closure_up_to, contains, generator_counting_sequence, minimal_generators, rank_lambda, GenFamily,
};
use freemagma::Term;

fn main() -> freemagma::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "finite:[(1+1),((1+1)+(1+1)),(1+(1+1))]".into());
    let family: GenFamily = spec.parse()?;
    let GenFamily::FiniteSet(gens) = &family else {
        println!("{family}: counting sequence {}", family.counting_sequence(16)?);
        return Ok(());
    };

    let minimal = minimal_generators(gens);
    println!("generators  {family}");
    println!("minimal     {}", GenFamily::finite(minimal.clone()));
    println!("rank, λ     {:?}", rank_lambda(gens));

    let closure = closure_up_to(gens, 7, 16)?;
    for (n, level) in closure.iter().enumerate().skip(1) {
        let shown: Vec<String> = level.iter().take(4).map(Term::to_string).collect();
        let more = if level.len() > 4 { ", ..." } else { "" };
        println!("  length {n}: {} element(s) {}{more}", level.len(), shown.join(", "));
    }

    let probe: Term = "(1+1)+(1+(1+1))".parse()?;
    println!("contains {probe}: {}", contains(gens, &probe));

    let brute = brute_count_default(gens, 12)?;
    let via = cat_transform(&generator_counting_sequence(&GenFamily::finite(minimal), 12)?);
    println!("brute force       {brute}");
    println!("catalan transform {via}");
    println!("agree: {}", brute == via);
    Ok(())
}
