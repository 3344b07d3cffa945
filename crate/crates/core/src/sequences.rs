//! Exact integer sequence kernels.
//!
//! Every sequence here is 1-indexed: [`BigSeq::get(1)`](BigSeq::get) is the
//! entry for length 1, and the implicit entry at 0 is always zero. All
//! arithmetic is exact; divisions that the recurrences guarantee to be exact
//! are asserted.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::ops::{AddAssign, Mul};
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A finite prefix `a_1, …, a_n` of an integer sequence.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BigSeq {
    entries: Vec<BigInt>,
}

impl BigSeq {
    pub fn zeros(n_max: usize) -> Self {
        BigSeq { entries: vec![BigInt::zero(); n_max] }
    }

    /// Builds `a_1, a_2, …` from `values` in order.
    pub fn from_entries(values: Vec<BigInt>) -> Self {
        BigSeq { entries: values }
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        BigSeq { entries: values.iter().map(|&v| BigInt::from(v)).collect() }
    }

    /// Indicator-style sequence: `a_n = values[n]` for listed `n`, zero elsewhere.
    pub fn sparse(n_max: usize, values: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut seq = BigSeq::zeros(n_max);
        for (n, v) in values {
            if (1..=n_max).contains(&n) {
                seq.entries[n - 1] = v;
            }
        }
        seq
    }

    /// Horizon `n_max` of the prefix.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry `a_n` for `1 <= n <= len()`.
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        n.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    /// Entry `a_n`, with `a_0 = 0` and zero past the horizon.
    pub fn at(&self, n: usize) -> BigInt {
        self.get(n).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.entries
    }

    /// `(n, a_n)` pairs starting at `n = 1`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.entries.iter().enumerate().map(|(i, v)| (i + 1, v))
    }

    pub fn truncate(&mut self, n_max: usize) {
        self.entries.truncate(n_max);
    }

    /// Same prefix extended or truncated to `n_max`, padding with zeros.
    pub fn resized(&self, n_max: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.resize(n_max, BigInt::zero());
        BigSeq { entries }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }

    /// Partial sums `a_1 + … + a_n`.
    pub fn prefix_sums(&self) -> BigSeq {
        let mut acc = BigInt::zero();
        let entries = self
            .entries
            .iter()
            .map(|v| {
                acc += v;
                acc.clone()
            })
            .collect();
        BigSeq { entries }
    }

    /// Writes `n,value` rows under a `n,value` header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "value"])?;
        for (n, v) in self.iter() {
            w.write_record([n.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads `index,value` rows. A header row is optional; indices must cover
    /// `1..=N` exactly once, in any order.
    pub fn read_csv<R: Read>(reader: R) -> Result<BigSeq> {
        Self::read_csv_named(reader, Path::new("<input>"))
    }

    pub fn read_csv_file(path: &Path) -> Result<BigSeq> {
        let file = std::fs::File::open(path).map_err(|e| Error::SequenceFile { path: path.into(), message: e.to_string() })?;
        Self::read_csv_named(file, path)
    }

    fn read_csv_named<R: Read>(reader: R, path: &Path) -> Result<BigSeq> {
        let fail = |message: String| Error::SequenceFile { path: path.into(), message };
        let mut r = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut values: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (row, record) in r.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(fail(format!("row {}: expected 2 fields, found {}", row + 1, record.len())));
            }
            let index = match record[0].parse::<usize>() {
                Ok(i) => i,
                Err(_) if row == 0 => continue,
                Err(_) => return Err(fail(format!("row {}: bad index {:?}", row + 1, &record[0]))),
            };
            if index == 0 {
                return Err(fail(format!("row {}: indices start at 1", row + 1)));
            }
            let value: BigInt = record[1]
                .parse()
                .map_err(|_| fail(format!("row {}: bad integer {:?}", row + 1, &record[1])))?;
            if values.insert(index, value).is_some() {
                return Err(fail(format!("row {}: duplicate index {index}", row + 1)));
            }
        }
        let n_max = values.keys().next_back().copied().unwrap_or(0);
        if values.len() != n_max {
            let missing = (1..=n_max).find(|n| !values.contains_key(n)).unwrap_or(0);
            return Err(fail(format!("index {missing} is missing")));
        }
        Ok(BigSeq { entries: values.into_values().collect() })
    }
}

impl fmt::Debug for BigSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigSeq[")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Comma-separated entries.
impl fmt::Display for BigSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn exact_div(numer: BigInt, denom: &BigInt) -> BigInt {
    let (q, r) = numer.div_rem(denom);
    assert!(r.is_zero(), "inexact division in an integer recurrence");
    q
}

/// Catalan numbers `C_0, …, C_{count-1}` via `C_{k+1} = 2(2k+1) C_k / (k+2)`.
pub fn catalan_numbers(count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    let mut c = BigInt::one();
    for k in 0..count {
        out.push(c.clone());
        c = exact_div(c * (2 * (2 * k as u64 + 1)), &BigInt::from(k as u64 + 2));
    }
    out
}

/// `c_n = C_{n-1}` for `n = 1..=n_max`: the number of terms of length `n`.
pub fn catalan_c(n_max: usize) -> BigSeq {
    BigSeq { entries: catalan_numbers(n_max) }
}

/// Motzkin numbers `M_0, …, M_{count-1}`.
pub fn motzkin_numbers(count: usize) -> Vec<BigInt> {
    let mut m: Vec<BigInt> = Vec::with_capacity(count);
    for n in 0..count {
        let next = match n {
            0 | 1 => BigInt::one(),
            _ => {
                // M_n = M_{n-1} + sum_{k=0}^{n-2} M_k M_{n-2-k}
                let mut acc = m[n - 1].clone();
                for k in 0..=n - 2 {
                    acc += &m[k] * &m[n - 2 - k];
                }
                acc
            }
        };
        m.push(next);
    }
    m
}

/// `m_n = M_{n-1}` for `n = 1..=n_max`.
pub fn motzkin(n_max: usize) -> BigSeq {
    BigSeq { entries: motzkin_numbers(n_max) }
}

/// `binom(n, k)` by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| exact_div(acc * (n - i), &BigInt::from(i + 1)))
}

/// The Catalan transform over any ring-like coefficient type:
/// `b_1 = a_1`, `b_n = a_n + Σ_{i+j=n, 0<i,j<n} b_i b_j`.
///
/// The convolution is folded in half by symmetry; results are exact so the
/// summation order does not matter.
pub fn cat_transform_with<T>(a: &[T]) -> Vec<T>
where
    T: Clone + Zero + for<'x> AddAssign<&'x T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let mut b: Vec<T> = Vec::with_capacity(a.len());
    for n in 1..=a.len() {
        let mut half = T::zero();
        for i in 1..=(n - 1) / 2 {
            half += &(&b[i - 1] * &b[n - i - 1]);
        }
        let mut bn = half.clone();
        bn += &half;
        if n % 2 == 0 && n >= 2 {
            let mid = &b[n / 2 - 1];
            bn += &(mid * mid);
        }
        bn += &a[n - 1];
        b.push(bn);
    }
    b
}

/// Catalan transform of an integer sequence.
pub fn cat_transform(a: &BigSeq) -> BigSeq {
    BigSeq { entries: cat_transform_with(&a.entries) }
}

/// Catalan transform over exact rationals, for signed and scaled inputs.
pub fn cat_transform_signed(a: &[BigRational]) -> Vec<BigRational> {
    cat_transform_with(a)
}

/// Result of checking both Catalan–Motzkin binomial identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub n_max: usize,
    /// First `n` where `M_n = Σ_k binom(n, 2k) C_k` fails.
    pub motzkin_failure: Option<usize>,
    /// Offsets `d` tried for `C_{n+d} = Σ_{k=0}^{n} binom(n, k) M_k`, each
    /// with its first failing `n` (`None` when it held for all `n <= n_max`).
    pub catalan_offsets: Vec<(i64, Option<usize>)>,
}

impl IdentityReport {
    /// The offset under which the second identity holds on the whole range.
    pub fn verified_offset(&self) -> Option<i64> {
        self.catalan_offsets.iter().find(|(_, fail)| fail.is_none()).map(|(d, _)| *d)
    }

    pub fn passed(&self) -> bool {
        self.motzkin_failure.is_none() && self.verified_offset().is_some()
    }
}

/// Offsets scanned for the Catalan-from-Motzkin identity.
pub const CATALAN_OFFSETS: std::ops::RangeInclusive<i64> = -2..=3;

/// Checks `M_n = Σ_{k<=n/2} binom(n,2k) C_k` and finds the index offset `d`
/// for which `C_{n+d} = Σ_{k=0}^{n} binom(n,k) M_k` holds for `0 <= n <= n_max`.
/// The offset that holds is `d = 1`.
pub fn catalan_motzkin_identities(n_max: usize) -> IdentityReport {
    let cat = catalan_numbers(n_max + 5);
    let mot = motzkin_numbers(n_max + 1);
    let motzkin_failure = (0..=n_max).find(|&n| {
        let rhs: BigInt = (0..=n / 2).map(|k| binomial(n as u64, 2 * k as u64) * &cat[k]).sum();
        rhs != mot[n]
    });
    let catalan_offsets = CATALAN_OFFSETS
        .map(|d| {
            let fail = (0..=n_max).find(|&n| {
                let idx = n as i64 + d;
                let lhs = if idx < 0 { BigInt::zero() } else { cat[idx as usize].clone() };
                let rhs: BigInt = (0..=n).map(|k| binomial(n as u64, k as u64) * &mot[k]).sum();
                lhs != rhs
            });
            (d, fail)
        })
        .collect();
    IdentityReport { n_max, motzkin_failure, catalan_offsets }
}

/// `|𝕄_A|_n = c_n |A|^n`: terms of length `n` over an alphabet of `alphabet` letters.
pub fn alphabet_count(n: usize, alphabet: u64) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    &catalan_numbers(n)[n - 1] * num_traits::pow(BigInt::from(alphabet), n)
}

/// Shifted Motzkin relation for `m_n = M_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftReport {
    pub n_max: usize,
    /// First `n` where `m_{n+1} = m_n + Σ_{i+j=n} m_i m_j` fails.
    pub recurrence_failure: Option<usize>,
    /// First `n` where the literal `Cat(m)_n = m_{n+1}` fails; it does at `n = 3`.
    pub literal_failure: Option<usize>,
}

impl ShiftReport {
    pub fn passed(&self) -> bool {
        self.recurrence_failure.is_none()
    }
}

/// Checks the shifted Motzkin relations for `1 <= n <= n_max`.
pub fn motzkin_shift_identities(n_max: usize) -> ShiftReport {
    let m = motzkin(n_max + 1);
    let recurrence_failure = (1..=n_max).find(|&n| {
        let conv: BigInt = (1..n).map(|i| m.at(i) * m.at(n - i)).sum();
        m.at(n + 1) != m.at(n) + conv
    });
    let literal = cat_transform(&m.resized(n_max));
    let literal_failure = (1..=n_max).find(|&n| literal.at(n) != m.at(n + 1));
    ShiftReport { n_max, recurrence_failure, literal_failure }
}

/// Number of elements of length `n` in a subgroupoid whose minimal generators
/// have lengths `alphas` (one entry per generator).
///
/// Trees with `k` leaves are counted by `c_k`; each leaf carries one generator.
/// Generators are grouped by length: with `h_l` generators of length `l` and
/// `q_l` leaves assigned length `l`, a shape contributes
/// `multinomial(q) · Π h_l^{q_l} · c_{Σ q}`.
pub fn multinomial_count(alphas: &[usize], n: usize) -> BigInt {
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for &a in alphas {
        assert!(a >= 1, "generator lengths are positive");
        *hist.entry(a).or_default() += 1;
    }
    let groups: Vec<(usize, BigInt)> = hist.into_iter().map(|(l, h)| (l, BigInt::from(h))).collect();
    let cat = catalan_numbers(n + 1);
    let mut total = BigInt::zero();
    let mut q = vec![0usize; groups.len()];
    walk_compositions(&groups, 0, n, &mut q, &mut |q| {
        let k: usize = q.iter().sum();
        if k == 0 {
            return;
        }
        let mut term = multinomial(q) * &cat[k - 1];
        for ((_, h), &qi) in groups.iter().zip(q) {
            term *= num_traits::pow(h.clone(), qi);
        }
        total += term;
    });
    total
}

fn walk_compositions(
    groups: &[(usize, BigInt)],
    idx: usize,
    remaining: usize,
    q: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if idx == groups.len() {
        if remaining == 0 {
            visit(q);
        }
        return;
    }
    let len = groups[idx].0;
    for count in 0..=remaining / len {
        q[idx] = count;
        walk_compositions(groups, idx + 1, remaining - count * len, q, visit);
    }
    q[idx] = 0;
}

/// `(q_1 + … + q_r)! / (q_1! ⋯ q_r!)`, as a product of binomials.
pub fn multinomial(q: &[usize]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &qi in q {
        total += qi as u64;
        acc *= binomial(total, qi as u64);
    }
    acc
}

/// Dense truncated power series with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

/// Default truncation order for series checks.
pub const DEFAULT_SERIES_ORDER: usize = 64;

impl PowerSeries {
    /// Coefficients of `x^0 … x^order`, zero-padded or truncated.
    pub fn new(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        PowerSeries { coeffs }
    }

    /// `Σ_{n>=1} a_n x^n` (constant term zero).
    pub fn from_seq(a: &BigSeq, order: usize) -> Self {
        let coeffs = (0..=order).map(|n| a.at(n)).collect();
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| (0..=k).map(|i| &self.coeffs[i] * &other.coeffs[k - i]).sum())
            .collect();
        PowerSeries { coeffs }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        PowerSeries { coeffs: (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn scale(&self, by: &BigInt) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c * by).collect() }
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn shift(&self, k: usize) -> PowerSeries {
        let order = self.order();
        let mut coeffs = vec![BigInt::zero(); k.min(order + 1)];
        coeffs.extend(self.coeffs.iter().take(order + 1 - coeffs.len()).cloned());
        PowerSeries { coeffs }
    }

    /// Square root with constant term 1, when it has integer coefficients.
    /// Returns `None` if the constant term is not 1 or a coefficient is not
    /// integral.
    pub fn sqrt(&self) -> Option<PowerSeries> {
        if !self.coeffs[0].is_one() {
            return None;
        }
        let two = BigInt::from(2);
        let mut s: Vec<BigInt> = vec![BigInt::one()];
        for k in 1..=self.order() {
            let cross: BigInt = (1..k).map(|i| &s[i] * &s[k - i]).sum();
            let (q, r) = (&self.coeffs[k] - cross).div_rem(&two);
            if !r.is_zero() {
                return None;
            }
            s.push(q);
        }
        Some(PowerSeries { coeffs: s })
    }

    /// `(1 - sqrt(1 - 4 f)) / 2` for `f` with zero constant term.
    pub fn catalan_root(&self) -> Option<PowerSeries> {
        let mut inner = self.scale(&BigInt::from(-4));
        inner.coeffs[0] += 1;
        let root = inner.sqrt()?;
        let two = BigInt::from(2);
        let mut coeffs = Vec::with_capacity(root.coeffs.len());
        for (k, c) in root.coeffs.iter().enumerate() {
            let numer = if k == 0 { BigInt::one() - c } else { -c };
            let (q, r) = numer.div_rem(&two);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(PowerSeries { coeffs })
    }
}

/// Outcome of checking `Ψ = Ψ² + Φ` coefficient-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub order: usize,
    /// First coefficient index where the identity fails.
    pub first_failure: Option<usize>,
}

impl SeriesReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Verifies that the generating function `Ψ` of `cat_transform(a)` satisfies
/// `Ψ = Ψ² + Φ` up to `x^order`, where `Φ` is the generating function of `a`
/// with `a_0 = 0`.
pub fn series_identity_check(a: &BigSeq, order: usize) -> SeriesReport {
    let phi = PowerSeries::from_seq(&a.resized(order), order);
    let psi = PowerSeries::from_seq(&cat_transform(&a.resized(order)), order);
    let rhs = psi.mul(&psi).add(&phi);
    let first_failure = (0..=order).find(|&k| psi.coeff(k) != rhs.coeff(k));
    SeriesReport { order, first_failure }
}

/// Outcome of the Catalan bound checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub n_max: usize,
    /// First `n >= 4` violating `4^n / (n+1)^2 < C_n < 4^n`.
    pub weak_failure: Option<usize>,
    /// First `n >= 1` violating the two-sided bound with `sqrt(π n (4n∓1)/4n)`.
    pub sharp_failure: Option<usize>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.weak_failure.is_none() && self.sharp_failure.is_none()
    }
}

// Rational enclosure of π, tight enough for n in the thousands.
fn pi_bounds() -> (BigRational, BigRational) {
    let den = BigInt::from(10u64).pow(19);
    let lo = BigRational::new(BigInt::from(31_415_926_535_897_932_384_u128), den.clone());
    let hi = BigRational::new(BigInt::from(31_415_926_535_897_932_385_u128), den);
    (lo, hi)
}

/// Checks the weak Catalan bounds for `4 <= n <= n_max` and the sharp bounds
///
/// `4^n / ((n+1) sqrt(π n · 4n/(4n-1))) < C_n < 4^n / ((n+1) sqrt(π n · (4n+1)/(4n)))`
///
/// for `1 <= n <= n_max`, squaring both sides so everything stays rational.
pub fn catalan_bounds_check(n_max: usize) -> BoundsReport {
    let cat = catalan_numbers(n_max + 1);
    let weak_failure = (4..=n_max).find(|&n| {
        let four_n = BigInt::one() << (2 * n);
        let lower_ok = four_n < &cat[n] * BigInt::from((n + 1) * (n + 1));
        let upper_ok = cat[n] < four_n;
        !(lower_ok && upper_ok)
    });
    let (pi_lo, pi_hi) = pi_bounds();
    let sharp_failure = (1..=n_max).find(|&n| {
        let nn = BigInt::from(n);
        let four_2n = BigRational::from_integer(BigInt::one() << (4 * n));
        let c2n12 = BigRational::from_integer(&cat[n] * &cat[n] * BigInt::from((n + 1) * (n + 1)));
        // lower: 16^n < C_n² (n+1)² π n · 4n/(4n-1)
        let lower_factor = BigRational::new(&nn * &nn * 4, BigInt::from(4 * n - 1));
        let lower_ok = four_2n < &c2n12 * &pi_lo * &lower_factor;
        // upper: C_n² (n+1)² π n · (4n+1)/(4n) < 16^n
        let upper_factor = BigRational::new(&nn * BigInt::from(4 * n + 1), BigInt::from(4 * n));
        let upper_ok = &c2n12 * &pi_hi * &upper_factor < four_2n;
        !(lower_ok && upper_ok)
    });
    BoundsReport { n_max, weak_failure, sharp_failure }
}
