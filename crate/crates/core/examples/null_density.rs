//! The rank/length criterion for null density, next to the empirical growth
//! ratio it predicts goes to zero.
//!
//!     cargo run --release --example null_density

use freemagma::density::{fg_null_density_test, growth, ratio_trace};
use freemagma::sequences::catalan_c;
use freemagma::{GenFamily, Term};

fn main() -> freemagma::Result<()> {
    let horizon = 300;
    let full = growth(&catalan_c(horizon));

    let two = Term::two();
    let mut sixteen = vec![Term::right_comb(3)?];
    for k in 2..=16 {
        sixteen.push(two.product(&Term::right_comb(k)?));
    }

    let families = [
        GenFamily::finite(["(1+1)".parse()?]),
        "finite:[(1+1),(1+(1+1))]".parse()?,
        "finite:[(1+1),((1+1)+1),(1+(1+1))]".parse()?,
        GenFamily::finite(sixteen),
    ];
    for family in &families {
        let GenFamily::FiniteSet(gens) = family else { unreachable!() };
        let report = fg_null_density_test(gens)?;
        let trace = ratio_trace(&growth(&family.counting_sequence(horizon)?), &full, 400);
        let last = trace.samples.last().expect("nonempty trace");
        let name = if gens.len() > 4 { format!("{} generators", gens.len()) } else { family.to_string() };
        println!(
            "{name:<40} rank {:>2}, λ {}: {:?}; ratio at n = {horizon}: {:.3e}",
            report.rank,
            report.lambda,
            report.verdict,
            last.value.to_f64()
        );
    }
    Ok(())
}
