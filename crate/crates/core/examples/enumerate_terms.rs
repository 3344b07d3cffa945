//! Terms of the cyclic free magma: construction, encoding, products and
//! enumeration by length.
//!
//!     cargo run --example enumerate_terms -- 5

use freemagma::term::{enumerate_terms, Term};

fn main() -> freemagma::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(4), |s| s.parse()).expect("length must be a positive integer");

    let two = Term::two();
    let three_plus = Term::right_comb(3)?;
    let three_minus = Term::left_comb(3)?;
    println!("3+ = {three_plus}, 3- = {three_minus}");
    println!("2·3+ = {} (length {})", two.product(&three_plus), two.product(&three_plus).len());
    println!("encoding of 3+ = {}", three_plus.encode());

    let parsed: Term = "(1+1)+(1+(1+1))".parse()?;
    println!("parsed {parsed}, length {}, depth {}", parsed.len(), parsed.depth());

    let terms = enumerate_terms(n)?;
    println!("\n{} terms of length {n}:", terms.len());
    for t in &terms {
        println!("  {:<24} {}", t.to_string(), t.encode());
    }
    Ok(())
}
