//! Verification suites run by `freemagma verify`.
//!
//! `fast` keeps every horizon at or below 300; `full` adds the long density
//! and longitudinal runs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::density::{
    estimate_density, fg_null_density_test, growth, longitudinal_asymptote_for_period, longitudinal_convergence_check,
    ratio_trace, seconds_since, DensityConfig, NullVerdict, REPRODUCTION_HORIZON,
};
use crate::error::{Error, Result};
use crate::motzkin::{count_paths, crosscheck_subgroupoid, PathSpec, Step};
use crate::sequences::{
    catalan_bounds_check, catalan_c, catalan_motzkin_identities, cat_transform, motzkin_numbers, motzkin_shift_identities,
    series_identity_check, BigSeq,
};
use crate::subgroupoid::{brute_count_default, generator_counting_sequence, minimal_generators, GenFamily};
use crate::term::{enumerate_terms, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Fast,
    Full,
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scope> {
        match s.trim() {
            "fast" => Ok(Scope::Fast),
            "full" => Ok(Scope::Full),
            other => Err(Error::Config(format!("unknown verify scope {other:?}; expected fast or full"))),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Fast => "fast",
            Scope::Full => "full",
        })
    }
}

/// Knobs for [`verify_with`]; any field missing from a JSON config keeps
/// its default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub scope: Scope,
    /// Horizon of the brute-force oracle comparison.
    pub oracle_n_max: usize,
    /// Longitudinal horizon and tolerance for the fast scope.
    pub fast_longitudinal_n_max: usize,
    pub fast_longitudinal_tolerance: f64,
    /// Longitudinal horizon and tolerance for the full scope.
    pub full_longitudinal_n_max: usize,
    pub full_longitudinal_tolerance: f64,
    /// Horizon of the full-scope density runs.
    pub density_horizon: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            scope: Scope::Fast,
            oracle_n_max: 12,
            fast_longitudinal_n_max: 300,
            fast_longitudinal_tolerance: 2e-2,
            full_longitudinal_n_max: 2000,
            full_longitudinal_tolerance: 2e-3,
            density_horizon: REPRODUCTION_HORIZON,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    /// Where the expected values come from.
    pub source: String,
    pub passed: bool,
    pub detail: String,
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub scope: Scope,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn verify_all(scope: Scope) -> VerifyReport {
    verify_with(&VerifyConfig { scope, ..VerifyConfig::default() })
}

pub fn verify_with(config: &VerifyConfig) -> VerifyReport {
    let mut checks = Vec::new();
    let mut run = |name: &str, source: &str, f: &dyn Fn() -> Result<(bool, String)>| {
        let start = Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        checks.push(CheckOutcome {
            name: name.to_string(),
            source: source.to_string(),
            passed,
            detail,
            runtime_seconds: seconds_since(start),
        });
    };

    for (name, source, family, expected) in sequence_fixtures() {
        run(name, source, &|| {
            let got = family.counting_sequence(expected.len())?;
            let want = BigSeq::from_i64s(&expected);
            Ok((got == want, format!("{}: {got}", family)))
        });
    }
    run("catalan c_20", "binomial closed form", &|| {
        let c = catalan_c(20);
        Ok((c.at(20) == BigInt::from(1_767_263_190u64), format!("c_20 = {}", c.at(20))))
    });
    run("motzkin numbers M_0..M_10", "OEIS A001006", &|| {
        let m = motzkin_numbers(11);
        let want: Vec<BigInt> = [1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188].into_iter().map(BigInt::from).collect();
        Ok((m == want, format!("{m:?}")))
    });
    run("brute-force oracle vs catalan transform", "exhaustive closure enumeration", &|| oracle_check(config.oracle_n_max));
    run("motzkin path fixtures", "direct enumeration of length-4 paths", &|| {
        let restricted = PathSpec::plain(4).forbid_list("FU,FF")?;
        let counts = [
            count_paths(&PathSpec::plain(4)),
            count_paths(&restricted),
            count_paths(&restricted.clone().color(Step::F, 2)?),
        ];
        Ok((counts == [9.into(), 3.into(), 6.into()], format!("plain, forbidden, bicoloured = {counts:?}")))
    });
    run("motzkin path cross-checks", "OEIS A007477, OEIS A253918", &|| {
        let restricted = PathSpec::plain(0).forbid_list("FU,FF")?;
        let a = crosscheck_subgroupoid(&restricted, &"finite:[(1+1),(1+(1+1))]".parse()?, 2, 14)?;
        let b = crosscheck_subgroupoid(
            &restricted.color(Step::F, 2)?,
            &"finite:[(1+1),((1+1)+1),(1+(1+1))]".parse()?,
            2,
            14,
        )?;
        Ok((a.passed() && b.passed(), format!("{:?} / {:?}", a.first_mismatch, b.first_mismatch)))
    });
    run("catalan-motzkin binomial identities", "exact tables to n = 30", &|| {
        let r = catalan_motzkin_identities(30);
        let s = motzkin_shift_identities(30);
        Ok((r.passed() && s.passed(), format!("verified offset {:?}, shift recurrence {:?}", r.verified_offset(), s.recurrence_failure)))
    });
    run("catalan bounds 4 <= n <= 300", "exact integer and rational arithmetic", &|| {
        let r = catalan_bounds_check(300);
        Ok((r.passed(), format!("{r:?}")))
    });
    run("series identity to order 32", "generating function Ψ = Ψ² + Φ", &|| {
        let mut worst = Vec::new();
        for (_, _, family, _) in sequence_fixtures() {
            let g = generator_counting_sequence(&family, 32)?;
            let r = series_identity_check(&g, 32);
            if !r.passed() {
                worst.push(format!("{family}: {:?}", r.first_failure));
            }
        }
        Ok((worst.is_empty(), if worst.is_empty() { "all fixtures".into() } else { worst.join("; ") }))
    });
    run("longitudinal asymptotes", "closed-form residue limits", &|| {
        let p2 = longitudinal_asymptote_for_period(2);
        let p3 = longitudinal_asymptote_for_period(3);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let exact = p2.per_residue == [q(4, 5), q(1, 5)] && p3.per_residue == [q(16, 21), q(4, 21), q(1, 21)];
        let means = (1..=16u64).all(|p| longitudinal_asymptote_for_period(p).mean() == q(1, p as i64));
        Ok((exact && means, format!("p=2 {:?}, p=3 {:?}", p2.per_residue, p3.per_residue)))
    });
    let (long_n, long_tol) = match config.scope {
        Scope::Fast => (config.fast_longitudinal_n_max, config.fast_longitudinal_tolerance),
        Scope::Full => (config.full_longitudinal_n_max, config.full_longitudinal_tolerance),
    };
    for a in [vec![2u64], vec![3], vec![4], vec![2, 3], vec![4, 6]] {
        run(&format!("longitudinal {a:?} at n = {long_n}"), "closed-form residue limits", &|| {
            let r = longitudinal_convergence_check(&a, long_n, long_tol)?;
            Ok((r.passed(), format!("worst error {:.3e} (residue {})", r.worst().error, r.worst().residue)))
        });
    }
    run("nullity criterion", "rank < 4^(λ-1)", &nullity_check);

    if config.scope == Scope::Full {
        for (family, lo, hi, published) in [
            ("shifted:1", 0.3530, 0.3542, "0.35361"),
            ("shifted:(1+1)", 0.0663, 0.0674, "0.06683"),
            ("shifted:(1+(1+1))", 0.0154, 0.0164, "0.01588"),
        ] {
            run(
                &format!("density {family} : full at n = {}", config.density_horizon),
                &format!("published estimate {published}"),
                &|| {
                    let cfg = DensityConfig::new(config.density_horizon).with_precision(8);
                    let est = estimate_density(&family.parse()?, &GenFamily::full(), &cfg)?;
                    let v = est.value.point().map(|v| v.to_f64());
                    let ok = v.is_some_and(|v| (lo..=hi).contains(&v));
                    Ok((ok, format!("{} in [{lo}, {hi}]", est.display_value(8))))
                },
            );
        }
    }
    VerifyReport { scope: config.scope, checks }
}

type Fixture = (&'static str, &'static str, GenFamily, Vec<i64>);

fn family(s: &str) -> GenFamily {
    s.parse().expect("fixture family syntax")
}

/// Published counting-sequence prefixes.
pub fn sequence_fixtures() -> Vec<Fixture> {
    vec![
        ("aerated catalan numbers", "aerated Catalan numbers", family("finite:[(1+1)]"), vec![0, 1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42]),
        (
            "<2, 3+>",
            "OEIS A007477",
            family("finite:[(1+1),(1+(1+1))]"),
            vec![0, 1, 1, 1, 2, 3, 6, 11, 22, 44, 90, 187, 392, 832, 1778, 3831, 8304],
        ),
        (
            "<2, 3-, 3+>",
            "OEIS A253918",
            family("finite:[(1+1),((1+1)+1),(1+(1+1))]"),
            vec![0, 1, 2, 1, 4, 6, 12, 29, 56, 134, 300, 682, 1624, 3772, 9016],
        ),
        (
            "<3-, 3+>",
            "2^(n/3) c_(n/3)",
            family("finite:[((1+1)+1),(1+(1+1))]"),
            vec![0, 0, 2, 0, 0, 4, 0, 0, 16, 0, 0, 80, 0, 0, 448, 0, 0, 2688, 0, 0, 16896],
        ),
        (
            "<M+1>",
            "Catalan transform of shifted Catalan numbers",
            family("shifted:1"),
            vec![0, 1, 1, 3, 7, 21, 62, 197, 637, 2123, 7196, 24807, 86608, 305792],
        ),
    ]
}

/// Generator sets drawn from all terms of length 1..=4: every singleton,
/// every pair and every triple of terms of length at least 2.
pub fn oracle_generator_sets() -> Vec<Vec<Term>> {
    let terms: Vec<Term> = (1..=4).flat_map(|n| enumerate_terms(n).expect("small enumeration")).collect();
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
    sets
}

fn oracle_check(n_max: usize) -> Result<(bool, String)> {
    let sets = oracle_generator_sets();
    for gens in &sets {
        let brute = brute_count_default(gens, n_max)?;
        let hist = generator_counting_sequence(&GenFamily::finite(minimal_generators(gens)), n_max)?;
        let via = cat_transform(&hist);
        if brute != via {
            let shown: Vec<String> = gens.iter().map(Term::to_string).collect();
            return Ok((false, format!("mismatch for {{{}}}: {brute} vs {via}", shown.join(","))));
        }
    }
    Ok((true, format!("{} generator sets agree to n = {n_max}", sets.len())))
}

/// Sets with rank at most 3 whose nullity verdict is checked empirically.
pub fn null_fixtures() -> Vec<GenFamily> {
    [
        "finite:[(1+1)]",
        "finite:[((1+1)+1),(1+(1+1))]",
        "finite:[(1+1),(1+(1+1))]",
        "finite:[(1+1),((1+1)+1),(1+(1+1))]",
        "finite:[((1+1)+(1+1)),(1+(1+(1+1)))]",
    ]
    .into_iter()
    .map(family)
    .collect()
}

/// `⟨3₊, 2·2, 2·3₊, …, 2·16₊⟩`: rank 16 and λ 3.
pub fn sixteen_generator_example() -> Vec<Term> {
    let two = Term::two();
    let mut gens = vec![Term::right_comb(3).expect("positive length")];
    gens.extend((2..=16).map(|k| two.product(&Term::right_comb(k).expect("positive length"))));
    gens
}

fn nullity_check() -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    let full = growth(&catalan_c(300));
    for fam in null_fixtures() {
        let GenFamily::FiniteSet(gens) = &fam else { unreachable!("fixtures are finite") };
        let r = fg_null_density_test(gens)?;
        let trace = ratio_trace(&growth(&fam.counting_sequence(300)?), &full, 12);
        let last = trace.samples.last().map(|s| s.value.to_f64()).unwrap_or(f64::NAN);
        ok &= r.verdict == NullVerdict::NullByTheorem && last < 0.01;
        notes.push(format!("{fam}: {:?}, ratio(300) = {last:.2e}", r.verdict));
    }
    let big = fg_null_density_test(&sixteen_generator_example())?;
    ok &= (big.rank, big.lambda, big.verdict) == (16, 3, NullVerdict::Inconclusive);
    notes.push(format!("16-generator example: rank {} λ {} {:?}", big.rank, big.lambda, big.verdict));
    Ok((ok, notes.join("; ")))
}
