//! Subgroupoids of the cyclic free magma described by generating data.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::sequences::{cat_transform, catalan_c, BigSeq};
use crate::term::{enumerate_terms_capped, sums_of_length, Encoding, Term, DEFAULT_ENUMERATION_CAP};

/// How a subgroupoid is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenFamily {
    /// `⟨terms⟩` for a finite set, kept sorted and free of duplicates. The
    /// empty set generates the empty subgroupoid.
    FiniteSet(Vec<Term>),
    /// `⟨𝕄 + a⟩`, generated by every term whose right summand is `a`.
    ShiftedFull(Term),
    /// `ℓ⁻¹(⟨A⟩)`: all terms whose length lies in the numerical semigroup `⟨A⟩`.
    Longitudinal(Vec<u64>),
    /// A subgroupoid known only through the counts of its minimal generators.
    ExplicitSeq(BigSeq),
}

impl GenFamily {
    pub fn finite(terms: impl IntoIterator<Item = Term>) -> Self {
        let set: BTreeSet<Term> = terms.into_iter().collect();
        GenFamily::FiniteSet(set.into_iter().collect())
    }

    /// The whole magma, `⟨1⟩`.
    pub fn full() -> Self {
        GenFamily::FiniteSet(vec![Term::leaf()])
    }

    pub fn shifted(a: Term) -> Self {
        GenFamily::ShiftedFull(a)
    }

    pub fn longitudinal(generators: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: BTreeSet<u64> = generators.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidFamily("longitudinal generator set is empty".into()));
        }
        if set.contains(&0) {
            return Err(Error::InvalidFamily("longitudinal generators must be positive".into()));
        }
        Ok(GenFamily::Longitudinal(set.into_iter().collect()))
    }

    pub fn explicit(seq: BigSeq) -> Result<Self> {
        if !seq.is_nonnegative() {
            return Err(Error::InvalidFamily("generator counts must be nonnegative".into()));
        }
        Ok(GenFamily::ExplicitSeq(seq))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            GenFamily::FiniteSet(_) => "finite",
            GenFamily::ShiftedFull(_) => "shifted",
            GenFamily::Longitudinal(_) => "longitudinal",
            GenFamily::ExplicitSeq(_) => "explicit",
        }
    }

    /// `|N|_n` for `n = 1..=n_max`.
    ///
    /// Finite and shifted families go through the Catalan transform of their
    /// minimal-generator counts; longitudinal families and `𝕄` itself are
    /// counted directly.
    pub fn counting_sequence(&self, n_max: usize) -> Result<BigSeq> {
        match self {
            GenFamily::Longitudinal(a) => Ok(longitudinal_counting(a, n_max)),
            GenFamily::FiniteSet(g) if g.len() == 1 && g[0].is_leaf() => Ok(catalan_c(n_max)),
            _ => Ok(cat_transform(&generator_counting_sequence(self, n_max)?)),
        }
    }
}

impl fmt::Display for GenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenFamily::FiniteSet(terms) if terms.len() == 1 && terms[0].is_leaf() => f.write_str("full"),
            GenFamily::FiniteSet(terms) => {
                let items: Vec<String> = terms.iter().map(Term::to_string).collect();
                write!(f, "finite:[{}]", items.join(","))
            }
            GenFamily::ShiftedFull(a) => write!(f, "shifted:{a}"),
            GenFamily::Longitudinal(a) => {
                let items: Vec<String> = a.iter().map(u64::to_string).collect();
                write!(f, "longitudinal:[{}]", items.join(","))
            }
            GenFamily::ExplicitSeq(seq) => write!(f, "explicit:[{seq}]"),
        }
    }
}

/// Parses `finite:[t1,t2]`, `shifted:t`, `longitudinal:[2,3]`, `seqfile:path`
/// and `full`. Lists may use `[]` or `{}`.
impl FromStr for GenFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenFamily> {
        let s = s.trim();
        if s == "full" {
            return Ok(GenFamily::full());
        }
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidFamily(format!("{s:?}: expected <kind>:<data> or 'full'")))?;
        match kind.trim() {
            "finite" => {
                let items = split_list(body)?;
                let terms = items.iter().map(|t| t.parse::<Term>()).collect::<Result<Vec<_>>>()?;
                Ok(GenFamily::finite(terms))
            }
            "shifted" => Ok(GenFamily::shifted(body.parse()?)),
            "longitudinal" => {
                let items = split_list(body)?;
                let gens = items
                    .iter()
                    .map(|x| x.trim().parse::<u64>().map_err(|_| Error::InvalidFamily(format!("bad integer {x:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                GenFamily::longitudinal(gens)
            }
            "seqfile" => {
                let path = PathBuf::from(body.trim());
                GenFamily::explicit(BigSeq::read_csv_file(&path)?)
            }
            other => Err(Error::InvalidFamily(format!("unknown family kind {other:?}"))),
        }
    }
}

// Splits "[a, (b+c), d]" on top-level commas.
fn split_list(body: &str) -> Result<Vec<String>> {
    let body = body.trim();
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .or_else(|| body.strip_prefix('{').and_then(|b| b.strip_suffix('}')))
        .ok_or_else(|| Error::InvalidFamily(format!("{body:?}: expected a bracketed list")))?;
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    if !current.trim().is_empty() || !items.is_empty() {
        items.push(current);
    }
    if items.iter().any(|i| i.trim().is_empty()) {
        return Err(Error::InvalidFamily(format!("{body:?}: empty list item")));
    }
    Ok(items)
}

/// Membership oracle for `⟨gens⟩`, memoised on canonical encodings.
///
/// `t ∈ ⟨G⟩` iff `t ∈ G`, or `t = x + y` with `x, y ∈ ⟨G⟩`.
#[derive(Debug, Clone)]
pub struct Membership {
    generators: HashSet<Encoding>,
    memo: HashMap<Encoding, bool>,
}

impl Membership {
    pub fn new(gens: &[Term]) -> Self {
        Membership { generators: gens.iter().map(Term::encode).collect(), memo: HashMap::new() }
    }

    pub fn contains(&mut self, t: &Term) -> bool {
        let key = t.encode();
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let found = self.generators.contains(&key)
            || t.split().is_some_and(|(x, y)| self.contains(x) && self.contains(y));
        self.memo.insert(key, found);
        found
    }
}

/// Whether `t ∈ ⟨gens⟩`.
pub fn contains(gens: &[Term], t: &Term) -> bool {
    Membership::new(gens).contains(t)
}

/// `(N)_k` for `k = 1..=n_max`; index 0 of the result is always empty.
pub type ByLength = Vec<Vec<Term>>;

/// Elements of `⟨gens⟩` grouped by length, each group sorted by encoding.
pub fn closure_up_to(gens: &[Term], n_max: usize, cap: usize) -> Result<ByLength> {
    if n_max > cap {
        return Err(Error::Capacity { requested: n_max, cap });
    }
    let mut by_len: ByLength = vec![Vec::new(); n_max + 1];
    for k in 1..=n_max {
        let mut level: BTreeSet<Term> = sums_of_length(&by_len, k).into_iter().collect();
        level.extend(gens.iter().filter(|g| g.len() == k).cloned());
        by_len[k] = level.into_iter().collect();
    }
    Ok(by_len)
}

/// The unique minimal generating set of `⟨gens⟩`, sorted.
///
/// A generator is dropped when it splits as `x + y` with both summands in
/// `⟨gens⟩`. Summands are strictly shorter than the generator, so only the
/// closure below the longest generator is ever consulted.
pub fn minimal_generators(gens: &[Term]) -> Vec<Term> {
    let unique: BTreeSet<Term> = gens.iter().cloned().collect();
    let unique: Vec<Term> = unique.into_iter().collect();
    let mut member = Membership::new(&unique);
    unique
        .iter()
        .filter(|g| !g.split().is_some_and(|(x, y)| member.contains(x) && member.contains(y)))
        .cloned()
        .collect()
}

/// Minimal generators of length at most `n_max`, grouped by length.
///
/// For finite families this is exact. For shifted and longitudinal families
/// the generators are enumerated term by term, so `n_max` is bounded by `cap`;
/// no claim is made about generators past `n_max`.
pub fn minimal_generating_up_to(family: &GenFamily, n_max: usize, cap: usize) -> Result<ByLength> {
    let mut by_len: ByLength = vec![Vec::new(); n_max + 1];
    match family {
        GenFamily::FiniteSet(gens) => {
            for g in minimal_generators(gens) {
                if g.len() <= n_max {
                    by_len[g.len()].push(g);
                }
            }
        }
        GenFamily::ShiftedFull(a) => {
            if n_max > cap {
                return Err(Error::Capacity { requested: n_max, cap });
            }
            for k in a.len() + 1..=n_max {
                let mut level: Vec<Term> = enumerate_terms_capped(k - a.len(), cap)?
                    .into_iter()
                    .map(|x| Term::sum(x, a.clone()))
                    .collect();
                level.sort();
                by_len[k] = level;
            }
        }
        GenFamily::Longitudinal(a) => {
            if n_max > cap {
                return Err(Error::Capacity { requested: n_max, cap });
            }
            let in_semigroup = semigroup_membership(a, n_max);
            for k in 1..=n_max {
                if !in_semigroup[k] {
                    continue;
                }
                by_len[k] = enumerate_terms_capped(k, cap)?
                    .into_iter()
                    .filter(|t| !t.split().is_some_and(|(x, y)| in_semigroup[x.len()] && in_semigroup[y.len()]))
                    .collect();
            }
        }
        GenFamily::ExplicitSeq(_) => {
            return Err(Error::UnsupportedVariant {
                variant: "explicit",
                reason: "only generator counts are known, not the generators themselves",
            })
        }
    }
    Ok(by_len)
}

/// `(rank, λ)` of `⟨gens⟩`: the size of its minimal generating set and the
/// shortest generator length. `None` for the empty subgroupoid.
pub fn rank_lambda(gens: &[Term]) -> Option<(usize, usize)> {
    let minimal = minimal_generators(gens);
    let lambda = minimal.iter().map(Term::len).min()?;
    Some((minimal.len(), lambda))
}

/// `|G|_n` for the minimal generating set `G` of the family.
pub fn generator_counting_sequence(family: &GenFamily, n_max: usize) -> Result<BigSeq> {
    match family {
        GenFamily::FiniteSet(gens) => {
            let mut hist: HashMap<usize, u64> = HashMap::new();
            for g in minimal_generators(gens) {
                *hist.entry(g.len()).or_default() += 1;
            }
            Ok(BigSeq::sparse(n_max, hist.into_iter().map(|(l, h)| (l, BigInt::from(h)))))
        }
        GenFamily::ShiftedFull(a) => Ok(shifted_catalan(a.len(), n_max)),
        GenFamily::Longitudinal(_) => Err(Error::UnsupportedVariant {
            variant: "longitudinal",
            reason: "longitudinal families are counted directly by longitudinal_counting",
        }),
        GenFamily::ExplicitSeq(seq) => Ok(seq.resized(n_max)),
    }
}

/// `c_{n-shift}` for `n > shift`, zero otherwise.
pub fn shifted_catalan(shift: usize, n_max: usize) -> BigSeq {
    let cat = catalan_c(n_max.saturating_sub(shift));
    BigSeq::sparse(n_max, cat.iter().map(|(k, v)| (k + shift, v.clone())))
}

/// `mask[n]` is true iff `n ∈ ⟨A⟩`, for `0 <= n <= n_max` (`0` excluded).
pub fn semigroup_membership(a: &[u64], n_max: usize) -> Vec<bool> {
    let mut mask = vec![false; n_max + 1];
    let gens: Vec<usize> = a.iter().filter_map(|&g| usize::try_from(g).ok()).filter(|&g| g >= 1).collect();
    for n in 1..=n_max {
        mask[n] = gens.iter().any(|&g| g == n || (g < n && mask[n - g]));
    }
    mask
}

/// `|ℓ⁻¹(⟨A⟩)|_n`: `c_n` when `n ∈ ⟨A⟩`, zero otherwise.
pub fn longitudinal_counting(a: &[u64], n_max: usize) -> BigSeq {
    let mask = semigroup_membership(a, n_max);
    let cat = catalan_c(n_max);
    BigSeq::sparse(n_max, cat.iter().filter(|(n, _)| mask[*n]).map(|(n, v)| (n, v.clone())))
}

/// Structure of the numerical semigroup `⟨A⟩ = gcd(A) · ⟨A'⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroupInfo {
    pub gcd: u64,
    /// `A / gcd(A)`, sorted and deduplicated.
    pub reduced_generators: Vec<u64>,
    /// Largest integer not in `⟨A'⟩`, or `-1` when `⟨A'⟩` is all of ℕ.
    pub frobenius: i64,
}

impl NumericalSemigroupInfo {
    /// Every length strictly above this is in `⟨A⟩` when it is a multiple of `gcd`.
    pub fn stable_from(&self) -> i64 {
        self.gcd as i64 * self.frobenius.max(0)
    }
}

/// gcd, reduced generators and Frobenius number of `⟨A⟩`.
///
/// Two coprime generators use `ab - a - b`; otherwise representability is
/// scanned up to Schur's bound `(a_min - 1)(a_max - 1) - 1`.
pub fn semigroup_info(a: &[u64]) -> Result<NumericalSemigroupInfo> {
    let set: BTreeSet<u64> = a.iter().copied().collect();
    if set.is_empty() || set.contains(&0) {
        return Err(Error::InvalidFamily("semigroup generators must be nonempty and positive".into()));
    }
    let gcd = set.iter().fold(0u64, |g, &x| g.gcd(&x));
    let reduced: BTreeSet<u64> = set.iter().map(|x| x / gcd).collect();
    let reduced: Vec<u64> = reduced.into_iter().collect();
    let frobenius = if reduced[0] == 1 {
        -1
    } else if reduced.len() == 2 {
        (reduced[0] * reduced[1]) as i64 - reduced[0] as i64 - reduced[1] as i64
    } else {
        frobenius_by_scan(&reduced)
    };
    Ok(NumericalSemigroupInfo { gcd, reduced_generators: reduced, frobenius })
}

/// Largest non-representable integer for coprime `gens`, by dynamic programming.
pub fn frobenius_by_scan(gens: &[u64]) -> i64 {
    let lo = *gens.iter().min().expect("nonempty generators");
    let hi = *gens.iter().max().expect("nonempty generators");
    let bound = ((lo - 1) * (hi - 1)) as usize + lo as usize;
    let mask = semigroup_membership(gens, bound);
    (1..=bound).rev().find(|&n| !mask[n]).map_or(-1, |n| n as i64)
}

/// Ground-truth `|⟨gens⟩|_n` by testing every term of length `n`.
pub fn brute_count(gens: &[Term], n_max: usize, cap: usize) -> Result<BigSeq> {
    if n_max > cap {
        return Err(Error::Capacity { requested: n_max, cap });
    }
    let mut member = Membership::new(gens);
    let mut counts = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let terms = enumerate_terms_capped(n, cap)?;
        counts.push(BigInt::from(terms.iter().filter(|t| member.contains(t)).count()));
    }
    Ok(BigSeq::from_entries(counts))
}

/// Brute-force count with the default enumeration cap.
pub fn brute_count_default(gens: &[Term], n_max: usize) -> Result<BigSeq> {
    brute_count(gens, n_max, DEFAULT_ENUMERATION_CAP)
}

/// Exact check that `⟨n_gens⟩ ⊆ ⟨m_gens⟩`: every generator of the first lies
/// in the second.
pub fn is_subgroupoid_of(n_gens: &[Term], m_gens: &[Term]) -> bool {
    let mut member = Membership::new(m_gens);
    n_gens.iter().all(|g| member.contains(g))
}

/// Counts as small integers, for tests and display.
pub fn to_u64s(seq: &BigSeq) -> Vec<u64> {
    seq.entries().iter().map(|v| v.to_u64().expect("count fits in u64")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn sizes(by_len: &ByLength) -> Vec<usize> {
        by_len[1..].iter().map(Vec::len).collect()
    }

    #[test]
    fn closure_examples() {
        let c = closure_up_to(&[t("2")], 4, 16).unwrap();
        assert_eq!(sizes(&c), vec![0, 1, 0, 1]);
        assert_eq!(c[4], vec![t("2+2")]);

        let full = closure_up_to(&[Term::leaf()], 3, 16).unwrap();
        assert_eq!(full[3], enumerate_terms_capped(3, 16).unwrap());

        let c = closure_up_to(&[Term::left_comb(3).unwrap(), Term::right_comb(3).unwrap()], 6, 16).unwrap();
        assert_eq!(sizes(&c), vec![0, 0, 2, 0, 0, 4]);

        assert!(matches!(closure_up_to(&[Term::leaf()], 17, 16), Err(Error::Capacity { .. })));
    }

    #[test]
    fn membership_examples() {
        assert!(contains(&[t("2")], &t("2+2")));
        assert!(!contains(&[t("2")], &Term::right_comb(3).unwrap()));
        assert!(contains(&[t("2"), t("1+2")], &t("2+(1+2)")));
        assert!(!contains(&[], &Term::leaf()));
    }

    #[test]
    fn minimal_examples() {
        assert_eq!(minimal_generators(&[t("2"), t("2+2")]), vec![t("2")]);
        assert_eq!(minimal_generators(&[t("2"), t("1+2")]), vec![t("2"), t("1+2")]);
        assert_eq!(minimal_generators(&[Term::leaf()]), vec![Term::leaf()]);
        assert_eq!(minimal_generators(&[t("1"), t("2"), t("1+2")]), vec![Term::leaf()]);
    }

    #[test]
    fn rank_and_lambda() {
        assert_eq!(rank_lambda(&[t("2"), t("1+2")]), Some((2, 2)));
        assert_eq!(rank_lambda(&[Term::leaf()]), Some((1, 1)));
        assert_eq!(rank_lambda(&[]), None);
    }

    #[test]
    fn generator_counts() {
        let shifted = generator_counting_sequence(&GenFamily::shifted(Term::leaf()), 6).unwrap();
        assert_eq!(to_u64s(&shifted), vec![0, 1, 1, 2, 5, 14]);
        let fam = GenFamily::finite([t("2"), Term::left_comb(3).unwrap(), Term::right_comb(3).unwrap()]);
        assert_eq!(to_u64s(&generator_counting_sequence(&fam, 5).unwrap()), vec![0, 1, 2, 0, 0]);
        let explicit = GenFamily::explicit(BigSeq::from_i64s(&[0, 1, 0, 0])).unwrap();
        assert_eq!(to_u64s(&generator_counting_sequence(&explicit, 4).unwrap()), vec![0, 1, 0, 0]);
        let long = GenFamily::longitudinal([2]).unwrap();
        assert!(matches!(generator_counting_sequence(&long, 4), Err(Error::UnsupportedVariant { .. })));
        let empty = GenFamily::finite([]);
        assert_eq!(to_u64s(&empty.counting_sequence(5).unwrap()), vec![0; 5]);
    }

    #[test]
    fn longitudinal_examples() {
        assert_eq!(to_u64s(&longitudinal_counting(&[2], 6)), vec![0, 1, 0, 5, 0, 42]);
        assert_eq!(longitudinal_counting(&[1], 12), catalan_c(12));
        let l23 = to_u64s(&longitudinal_counting(&[2, 3], 20));
        assert_eq!(l23[0], 0);
        assert!(l23[1..].iter().all(|&v| v > 0));
    }

    #[test]
    fn semigroup_examples() {
        let i = semigroup_info(&[3, 5]).unwrap();
        assert_eq!((i.gcd, i.frobenius), (1, 7));
        assert_eq!(frobenius_by_scan(&[3, 5]), 7);
        let i = semigroup_info(&[4, 6]).unwrap();
        assert_eq!((i.gcd, i.reduced_generators.clone(), i.frobenius), (2, vec![2, 3], 1));
        let i = semigroup_info(&[1]).unwrap();
        assert_eq!((i.gcd, i.frobenius), (1, -1));
        assert_eq!(semigroup_info(&[6, 10, 15]).unwrap().frobenius, 29);
        assert!(semigroup_info(&[]).is_err());
        assert!(semigroup_info(&[0, 3]).is_err());
    }

    #[test]
    fn brute_count_examples() {
        assert_eq!(to_u64s(&brute_count_default(&[t("2")], 8).unwrap()), vec![0, 1, 0, 1, 0, 2, 0, 5]);
        assert_eq!(to_u64s(&brute_count_default(&[Term::leaf()], 5).unwrap()), vec![1, 1, 2, 5, 14]);
        assert_eq!(
            to_u64s(&brute_count_default(&[t("2"), t("1+2")], 8).unwrap()),
            vec![0, 1, 1, 1, 2, 3, 6, 11]
        );
    }

    #[test]
    fn family_syntax() {
        let f: GenFamily = "finite:[(1+1),(1+(1+1))]".parse().unwrap();
        assert_eq!(f, GenFamily::finite([t("2"), t("1+2")]));
        assert_eq!(f.to_string().parse::<GenFamily>().unwrap(), f);
        assert_eq!("finite:{(1+1)}".parse::<GenFamily>().unwrap(), GenFamily::finite([t("2")]));
        assert_eq!("shifted:1".parse::<GenFamily>().unwrap(), GenFamily::shifted(Term::leaf()));
        assert_eq!("shifted:(1+1)".parse::<GenFamily>().unwrap(), GenFamily::shifted(t("2")));
        assert_eq!("longitudinal:[3, 2]".parse::<GenFamily>().unwrap(), GenFamily::Longitudinal(vec![2, 3]));
        assert_eq!("full".parse::<GenFamily>().unwrap(), GenFamily::full());
        assert_eq!("finite:[]".parse::<GenFamily>().unwrap(), GenFamily::FiniteSet(vec![]));
        for bad in ["", "finite", "finite:(1+1)", "finite:[1,,1]", "longitudinal:[]", "longitudinal:[0]", "bogus:1", "shifted:", "seqfile:/nonexistent/x.csv"] {
            assert!(bad.parse::<GenFamily>().is_err(), "{bad:?}");
        }
        assert!(GenFamily::explicit(BigSeq::from_i64s(&[1, -1])).is_err());
    }

    #[test]
    fn shifted_family_is_minimal_at_small_lengths() {
        for a in [Term::leaf(), t("2"), Term::right_comb(3).unwrap()] {
            let n_max = 9;
            let fam = GenFamily::shifted(a.clone());
            let gens: Vec<Term> = minimal_generating_up_to(&fam, n_max, 16).unwrap().concat();
            assert_eq!(minimal_generators(&gens), gens, "𝕄+{a} is its own minimal generating set");
            let brute = brute_count(&gens, n_max, 16).unwrap();
            assert_eq!(brute, fam.counting_sequence(n_max).unwrap(), "a = {a}");
        }
    }

    #[test]
    fn longitudinal_minimal_generators() {
        let fam = GenFamily::longitudinal([2]).unwrap();
        let g = minimal_generating_up_to(&fam, 6, 16).unwrap();
        // Length 2: the single term 2. Length 4: terms not splitting as even+even.
        assert_eq!(g[2], vec![t("2")]);
        assert_eq!(g[4].len(), 5 - 1);
        assert!(g[1].is_empty() && g[3].is_empty());
    }
}
