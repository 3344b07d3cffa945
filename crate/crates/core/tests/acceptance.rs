//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use freemagma::density::{
    estimate_density, fg_null_density_test, longitudinal_asymptote_for_period, longitudinal_convergence_check,
    DensityConfig, NullVerdict,
};
use freemagma::motzkin::{count_paths, crosscheck_subgroupoid, PathSpec, Step};
use freemagma::sequences::{
    catalan_bounds_check, cat_transform, cat_transform_signed, series_identity_check, BigSeq,
};
use freemagma::subgroupoid::{brute_count_default, generator_counting_sequence, rank_lambda, GenFamily};
use freemagma::term::{enumerate_terms, Term};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ints(v: &[i64]) -> BigSeq {
    BigSeq::from_i64s(v)
}

fn fam(s: &str) -> GenFamily {
    s.parse().unwrap()
}

// Independent Catalan numbers C_k = binom(2k, k) / (k + 1).
fn catalan(k: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(2 * k - i) / BigInt::from(i + 1);
    }
    b / BigInt::from(k + 1)
}

// ---- criterion 1 ----

fn sequence_fixtures() -> Outcome {
    let cases: [(&str, Vec<i64>); 4] = [
        ("finite:[(1+1)]", vec![0, 1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42]),
        ("finite:[(1+1),(1+(1+1))]", vec![0, 1, 1, 1, 2, 3, 6, 11, 22, 44, 90, 187, 392, 832, 1778, 3831, 8304]),
        ("finite:[(1+1),((1+1)+1),(1+(1+1))]", vec![0, 1, 2, 1, 4, 6, 12, 29, 56, 134, 300, 682, 1624, 3772, 9016]),
        ("shifted:1", vec![0, 1, 1, 3, 7, 21, 62, 197, 637, 2123, 7196, 24807, 86608, 305792]),
    ];
    for (family, expected) in cases {
        let got = fam(family).counting_sequence(expected.len()).map_err(|e| e.to_string())?;
        ensure(got == ints(&expected), format!("{family}: got {got}"))?;
    }
    let printed = [0, 0, 2, 0, 0, 4, 0, 0, 16, 0, 0, 80, 0, 0, 448, 0, 0, 2688, 0, 0, 16896];
    let combs = fam("finite:[((1+1)+1),(1+(1+1))]").counting_sequence(21).unwrap();
    ensure(combs == ints(&printed), format!("<3-,3+>: got {combs}"))?;
    for n in 1..=60 {
        let closed = if n % 3 == 0 { (BigInt::one() << (n / 3)) * catalan(n / 3 - 1) } else { BigInt::zero() };
        let got = fam("finite:[((1+1)+1),(1+(1+1))]").counting_sequence(60).unwrap().at(n);
        ensure(got == closed, format!("<3-,3+> closed form fails at n = {n}"))?;
    }
    Ok("5 printed prefixes and 2^(n/3) c_(n/3) to n = 60".into())
}

// ---- criterion 2 ----

// Closure by length from scratch: N_n = G_n ∪ {x + y : x ∈ N_i, y ∈ N_(n-i)}.
fn naive_closure(gens: &[Term], n_max: usize) -> Vec<HashSet<Term>> {
    let mut by_len: Vec<HashSet<Term>> = vec![HashSet::new(); n_max + 1];
    for n in 1..=n_max {
        let mut level: HashSet<Term> = gens.iter().filter(|g| g.len() == n).cloned().collect();
        for i in 1..n {
            for x in &by_len[i] {
                for y in &by_len[n - i] {
                    level.insert(Term::sum(x.clone(), y.clone()));
                }
            }
        }
        by_len[n] = level;
    }
    by_len
}

// g is redundant when it splits as x + y with both halves in the closure.
fn naive_minimal(gens: &[Term]) -> Vec<Term> {
    let top = gens.iter().map(Term::len).max().unwrap_or(0);
    let closure = naive_closure(gens, top);
    gens.iter()
        .filter(|g| match g.split() {
            Some((x, y)) => !(closure[x.len()].contains(x) && closure[y.len()].contains(y)),
            None => true,
        })
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let terms: Vec<Term> = (1..=4).flat_map(|n| enumerate_terms(n).unwrap()).collect();
    let proper: Vec<Term> = terms.iter().filter(|t| t.len() >= 2).cloned().collect();
    let mut sets: Vec<Vec<Term>> = terms.iter().map(|t| vec![t.clone()]).collect();
    for i in 0..proper.len() {
        for j in i + 1..proper.len() {
            sets.push(vec![proper[i].clone(), proper[j].clone()]);
            for k in j + 1..proper.len() {
                sets.push(vec![proper[i].clone(), proper[j].clone(), proper[k].clone()]);
            }
        }
    }
    ensure(sets.len() >= 50, "too few generator sets")?;
    let n_max = 12;
    for gens in &sets {
        let naive: Vec<i64> = naive_closure(gens, n_max)[1..].iter().map(|s| s.len() as i64).collect();
        let naive = ints(&naive);
        let minimal = naive_minimal(gens);
        let hist = generator_counting_sequence(&GenFamily::finite(minimal), n_max).unwrap();
        let via = cat_transform(&hist);
        let brute = brute_count_default(gens, n_max).unwrap();
        ensure(naive == via && brute == via, format!("{gens:?}: naive {naive}, brute {brute}, transform {via}"))?;
    }
    Ok(format!("{} generator sets, every entry to n = {n_max}", sets.len()))
}

// ---- criterion 3 ----

// All 3^n step words, filtered; weight = product of colour multiplicities.
fn brute_paths(spec: &PathSpec) -> BigInt {
    let n = spec.length;
    let mut total = BigInt::zero();
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let word: Vec<Step> = (0..n)
            .map(|_| {
                let s = [Step::U, Step::D, Step::F][c % 3];
                c /= 3;
                s
            })
            .collect();
        let mut h = 0i64;
        let ok = word.iter().all(|s| {
            h += match s {
                Step::U => 1,
                Step::D => -1,
                Step::F => 0,
            };
            h >= 0
        }) && h == 0
            && word.windows(2).all(|w| !spec.forbidden.contains(&(w[0], w[1])));
        if ok {
            total += word.iter().map(|s| BigInt::from(spec.colors[*s as usize])).product::<BigInt>();
        }
    }
    total
}

fn motzkin_checks() -> Outcome {
    let plain = PathSpec::plain(4);
    let restricted = PathSpec::plain(4).forbid(Step::F, Step::U).forbid(Step::F, Step::F);
    let bicolored = restricted.clone().color(Step::F, 2).unwrap();
    let got = [count_paths(&plain), count_paths(&restricted), count_paths(&bicolored)];
    ensure(got == [9.into(), 3.into(), 6.into()], format!("length-4 counts {got:?}"))?;
    for spec in [&plain, &restricted, &bicolored] {
        for n in 0..=10 {
            let s = spec.with_length(n);
            ensure(count_paths(&s) == brute_paths(&s), format!("DP vs brute force at length {n}"))?;
        }
    }
    let a = crosscheck_subgroupoid(&restricted, &fam("finite:[(1+1),(1+(1+1))]"), 2, 14).unwrap();
    let b = crosscheck_subgroupoid(&bicolored, &fam("finite:[(1+1),((1+1)+1),(1+(1+1))]"), 2, 14).unwrap();
    ensure(a.passed() && b.passed(), format!("crosscheck mismatches {:?} {:?}", a.first_mismatch, b.first_mismatch))?;
    Ok("9 / 3 / 6 at length 4; both path families match to n = 14".into())
}

// ---- criterion 4 ----

fn longitudinal_checks() -> Outcome {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let p2 = longitudinal_asymptote_for_period(2).per_residue;
    let p3 = longitudinal_asymptote_for_period(3).per_residue;
    ensure(p2 == [q(4, 5), q(1, 5)], format!("p = 2: {p2:?}"))?;
    ensure(p3 == [q(16, 21), q(4, 21), q(1, 21)], format!("p = 3: {p3:?}"))?;
    for p in 1..=16u64 {
        let asym = longitudinal_asymptote_for_period(p);
        // Independent closed form 3 / (4^(r+1) (1 - 4^-p)) = 3 · 4^(p-r-1) / (4^p - 1).
        let four_p = BigInt::one() << (2 * p);
        for (r, v) in asym.per_residue.iter().enumerate() {
            let expected = BigRational::new(BigInt::from(3) << (2 * (p as usize - r - 1)), &four_p - 1);
            ensure(v == &expected, format!("p = {p}, r = {r}: {v}"))?;
        }
        ensure(asym.mean() == q(1, p as i64), format!("mean for p = {p} is {}", asym.mean()))?;
    }
    let mut worst = 0f64;
    for a in [vec![2u64], vec![3], vec![4], vec![4, 6], vec![6, 9]] {
        let r = longitudinal_convergence_check(&a, 2000, 2e-3).map_err(|e| e.to_string())?;
        worst = worst.max(r.worst().error);
        ensure(r.passed(), format!("A = {a:?}: worst error {:.3e}", r.worst().error))?;
    }
    Ok(format!("exact asymptotes, means 1/p for p = 1..16, worst error at n = 2000 is {worst:.2e}"))
}

// ---- criterion 5 ----

fn density_reproduction() -> Outcome {
    let mut lines = Vec::new();
    let mut failed = false;
    for (family, lo, hi) in [("shifted:1", 0.3530, 0.3542), ("shifted:(1+1)", 0.0663, 0.0674), ("shifted:(1+(1+1))", 0.0154, 0.0164)] {
        let start = Instant::now();
        let cfg = DensityConfig::new(5000).with_precision(8);
        let est = estimate_density(&fam(family), &GenFamily::full(), &cfg).map_err(|e| e.to_string())?;
        let v = est.value.point().map(|v| v.to_f64()).unwrap_or(f64::NAN);
        let ok = (lo..=hi).contains(&v);
        failed |= !ok;
        lines.push(format!("{family} = {v:.6} in [{lo}, {hi}]: {ok} ({:.1}s)", start.elapsed().as_secs_f64()));
    }
    if failed {
        Err(lines.join("; "))
    } else {
        Ok(lines.join("; "))
    }
}

// ---- criterion 6 ----

fn exact_ratio_at(numer: &BigSeq, denom: &BigSeq, n: usize) -> f64 {
    let a: BigInt = (1..=n).map(|k| numer.at(k)).sum();
    let b: BigInt = (1..=n).map(|k| denom.at(k)).sum();
    let scaled = (a * BigInt::from(10u64).pow(60)) / b;
    scaled.to_string().parse::<f64>().unwrap() / 1e60
}

fn nullity_checks() -> Outcome {
    let proper: Vec<Term> = (2..=4).flat_map(|n| enumerate_terms(n).unwrap()).collect();
    let mut count = 0;
    for i in 0..proper.len() {
        for j in i..proper.len() {
            for k in j..proper.len() {
                let gens: Vec<Term> = [&proper[i], &proper[j], &proper[k]].into_iter().cloned().collect();
                let r = fg_null_density_test(&gens).unwrap();
                ensure(r.rank <= 3, "rank above 3")?;
                ensure(r.verdict == NullVerdict::NullByTheorem, format!("{gens:?} → {r:?}"))?;
                count += 1;
            }
        }
    }
    let two = Term::two();
    let mut sixteen = vec![Term::right_comb(3).unwrap()];
    sixteen.extend((2..=16).map(|k| two.product(&Term::right_comb(k).unwrap())));
    ensure(rank_lambda(&sixteen) == Some((16, 3)), format!("rank/λ = {:?}", rank_lambda(&sixteen)))?;
    let r = fg_null_density_test(&sixteen).unwrap();
    ensure(r.verdict == NullVerdict::Inconclusive, format!("16-generator verdict {:?}", r.verdict))?;

    let cat = BigSeq::from_entries((0..300).map(catalan).collect());
    let mut ratios = Vec::new();
    for family in [
        "finite:[(1+1)]",
        "finite:[((1+1)+1),(1+(1+1))]",
        "finite:[(1+1),(1+(1+1))]",
        "finite:[(1+1),((1+1)+1),(1+(1+1))]",
        "finite:[((1+1)+(1+1)),(1+(1+(1+1)))]",
    ] {
        let f = fam(family);
        let GenFamily::FiniteSet(gens) = &f else { unreachable!() };
        ensure(fg_null_density_test(gens).unwrap().verdict == NullVerdict::NullByTheorem, format!("{family} verdict"))?;
        let r = exact_ratio_at(&f.counting_sequence(300).unwrap(), &cat, 300);
        ensure(r < 0.01, format!("{family}: ratio at n = 300 is {r}"))?;
        ratios.push(r);
    }
    let worst = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(format!("{count} rank ≤ 3 sets null; 16-generator set inconclusive; largest ratio at 300 is {worst:.2e}"))
}

// ---- criterion 7 ----

fn random_term(rng: &mut StdRng, n: usize) -> Term {
    if n == 1 {
        return Term::leaf();
    }
    let k = rng.gen_range(1..n);
    Term::sum(random_term(rng, k), random_term(rng, n - k))
}

fn big_pow(base: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), e)
}

fn property_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let mut t = || {
            let n = rng.gen_range(1..=12);
            random_term(&mut rng, n)
        };
        let (x, y, z) = (t(), t(), t());
        ensure(x.product(&y).product(&z) == x.product(&y.product(&z)), format!("associativity: {x} {y} {z}"))?;
        let left = x.product(&Term::sum(y.clone(), z.clone()));
        ensure(left == Term::sum(x.product(&y), x.product(&z)), format!("left distributivity: {x} {y} {z}"))?;
        ensure(x.product(&y).len() == x.len() * y.len(), format!("length multiplicativity: {x} {y}"))?;
    }
    let small: Vec<Term> = (1..=3).flat_map(|n| enumerate_terms(n).unwrap()).collect();
    let witness = small.iter().find_map(|x| {
        small.iter().find_map(|y| {
            small.iter().find_map(|z| {
                let lhs = Term::sum(y.clone(), z.clone()).product(x);
                (lhs != Term::sum(y.product(x), z.product(x))).then(|| (x.clone(), y.clone(), z.clone()))
            })
        })
    });
    let (wx, wy, wz) = witness.ok_or("no right-distributivity counterexample")?;

    for n in 4..=300usize {
        let c = catalan(n);
        let four_n = big_pow(4, n);
        ensure(four_n < &c * BigInt::from((n + 1) * (n + 1)) && c < four_n, format!("weak Catalan bound at n = {n}"))?;
    }
    let sharp = catalan_bounds_check(300);
    ensure(sharp.passed(), format!("{sharp:?}"))?;

    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let bases: Vec<Vec<i64>> = vec![
        vec![1],
        vec![0, 1],
        vec![0, 1, 1],
        vec![0, 1, 2],
        vec![3, -1, 0, 2],
    ];
    for alpha in [q(-1, 1), q(2, 1), q(1, 2), q(3, 1)] {
        for base in &bases {
            let a: Vec<BigRational> =
                (1..=30).map(|n| BigRational::from_integer(base.get(n - 1).copied().unwrap_or(0).into())).collect();
            let scaled: Vec<BigRational> = a.iter().enumerate().map(|(i, v)| v * num_traits::pow(alpha.clone(), i + 1)).collect();
            let lhs = cat_transform_signed(&scaled);
            let rhs: Vec<BigRational> =
                cat_transform_signed(&a).iter().enumerate().map(|(i, v)| v * num_traits::pow(alpha.clone(), i + 1)).collect();
            ensure(lhs == rhs, format!("scaling law fails for α = {alpha}, a = {base:?}"))?;
        }
    }

    for family in [
        "full",
        "finite:[(1+1)]",
        "finite:[(1+1),(1+(1+1))]",
        "finite:[(1+1),((1+1)+1),(1+(1+1))]",
        "finite:[((1+1)+1),(1+(1+1))]",
        "shifted:1",
        "shifted:(1+1)",
    ] {
        let g = generator_counting_sequence(&fam(family), 32).unwrap();
        ensure(series_identity_check(&g, 32).passed(), format!("{family}: Ψ ≠ Ψ² + Φ"))?;
        // (1 - 2Ψ)² = 1 - 4Φ, coefficient by coefficient.
        let psi = cat_transform(&g);
        let coef = |s: &BigSeq, k: usize| -> BigInt { if k == 0 { BigInt::zero() } else { s.at(k) } };
        let one_minus_2psi = |k: usize| if k == 0 { BigInt::one() } else { -(coef(&psi, k) * BigInt::from(2)) };
        for k in 0..=32 {
            let sq: BigInt = (0..=k).map(|i| one_minus_2psi(i) * one_minus_2psi(k - i)).sum();
            let rhs = if k == 0 { BigInt::one() } else { -(coef(&g, k) * BigInt::from(4)) };
            ensure(sq == rhs, format!("{family}: closed form fails at x^{k}"))?;
        }
    }
    Ok(format!("10^4 random triples; right-distributivity witness x = {wx}, y = {wy}, z = {wz}; bounds to 300; scaling; series to order 32"))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        (1, "sequence fixtures", Duration::from_secs(1), sequence_fixtures),
        (2, "oracle equivalence", Duration::from_secs(120), oracle_equivalence),
        (3, "motzkin cross-checks", Duration::from_secs(10), motzkin_checks),
        (4, "longitudinal asymptotics", Duration::from_secs(60), longitudinal_checks),
        (5, "density reproduction at n = 5000", Duration::from_secs(600), density_reproduction),
        (6, "nullity criterion", Duration::from_secs(120), nullity_checks),
        (7, "algebraic property suite", Duration::from_secs(60), property_suite),
    ];
    let mut all_ok = true;
    for (id, title, budget, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let ok = outcome.is_ok() && in_budget;
        all_ok &= ok;
        let detail = match outcome {
            Ok(s) | Err(s) => s,
        };
        let timing = format!("{:.2}s of {}s budget", elapsed.as_secs_f64(), budget.as_secs());
        println!("criterion {id} [{title}]: {} - {detail} ({timing})", if ok { "PASS" } else { "FAIL" });
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
