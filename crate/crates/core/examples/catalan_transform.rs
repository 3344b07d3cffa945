//! The Catalan transform and the sequence identities around it.
//!
//!     cargo run --example catalan_transform

use freemagma::sequences::{
    catalan_c, catalan_motzkin_identities, cat_transform, motzkin, motzkin_shift_identities, multinomial_count,
    series_identity_check, BigSeq,
};

fn main() {
    // Minimal-generator histograms and the counting sequences they produce.
    for (label, hist) in [
        ("<2>", vec![0, 1]),
        ("<2, 3+>", vec![0, 1, 1]),
        ("<2, 3-, 3+>", vec![0, 1, 2]),
        ("<3-, 3+>", vec![0, 0, 2]),
    ] {
        let a = BigSeq::from_i64s(&hist).resized(18);
        println!("{label:<12} {}", cat_transform(&a));
        let report = series_identity_check(&a, 32);
        println!("{:<12} Ψ = Ψ² + Φ to order 32: {}", "", report.passed());
    }

    println!("\nCatalan c_1..c_12: {}", catalan_c(12));
    println!("Motzkin m_1..m_12: {}", motzkin(12));

    // Generators of lengths 3 and 3: counting through per-length multiplicities.
    println!("multinomial count for lengths [3, 3] at n = 6: {}", multinomial_count(&[3, 3], 6));

    let ids = catalan_motzkin_identities(30);
    println!("\nM_n = Σ binom(n,2k) C_k holds to n = 30: {}", ids.motzkin_failure.is_none());
    for (d, fail) in &ids.catalan_offsets {
        println!("  C_(n{d:+}) = Σ binom(n,k) M_k: {}", fail.map_or("holds".to_string(), |n| format!("fails at n = {n}")));
    }
    let shift = motzkin_shift_identities(30);
    println!("m_(n+1) = m_n + Σ m_i m_(n-i) holds to n = 30: {}", shift.passed());
}
