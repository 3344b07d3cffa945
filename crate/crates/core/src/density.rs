//! Growth sequences, density ratio traces and their acceleration.
//!
//! Ratios `|N|_{≤n} / |M|_{≤n}` are formed from exact big integers and only
//! converted to fixed-point decimals at the boundary. Aitken's Δ² process
//! then runs on those decimals.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::decimal::{aitken, ten_pow_neg, Fixed};
use crate::error::{Error, Result};
use crate::sequences::{catalan_c, BigSeq};
use crate::subgroupoid::{closure_up_to, is_subgroupoid_of, rank_lambda, semigroup_info, GenFamily};
use crate::term::Term;

/// Horizon used to reproduce published density estimates.
pub const REPRODUCTION_HORIZON: usize = 5000;
/// Horizon for routine runs.
pub const CI_HORIZON: usize = 1500;

/// `|X|_{≤n}`.
pub fn growth(a: &BigSeq) -> BigSeq {
    a.prefix_sums()
}

/// One sample of a ratio trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioSample {
    pub n: usize,
    pub value: Fixed,
}

/// Ratio trace plus the indices skipped because the denominator was zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatioTrace {
    pub samples: Vec<RatioSample>,
    pub skipped: Vec<usize>,
}

/// `numer_n / denom_n` at `digits` fractional digits, half-even rounded.
pub fn ratio_trace(numer: &BigSeq, denom: &BigSeq, digits: u32) -> RatioTrace {
    let mut trace = RatioTrace::default();
    for n in 1..=numer.len().min(denom.len()) {
        match Fixed::from_ratio(&numer.at(n), &denom.at(n), digits) {
            Some(value) => trace.samples.push(RatioSample { n, value }),
            None => trace.skipped.push(n),
        }
    }
    trace
}

/// Exact `|N|_{≤n} / |M|_{≤n}`, or `None` when the denominator is zero.
pub fn exact_ratio(numer_growth: &BigSeq, denom_growth: &BigSeq, n: usize) -> Option<BigRational> {
    let d = denom_growth.at(n);
    (!d.is_zero()).then(|| BigRational::new(numer_growth.at(n), d))
}

/// Parameters for [`estimate_density`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityConfig {
    pub n_max: usize,
    /// Significant digits in the reported value.
    pub precision: u32,
    /// Fractional digits carried through ratios and Aitken steps.
    pub working_digits: u32,
    /// Spread below which a window of estimates counts as settled.
    pub tolerance: f64,
    /// Number of trailing samples inspected per sequence or residue class.
    pub window: usize,
    /// Largest oscillation period tried.
    pub max_period: usize,
}

impl DensityConfig {
    pub fn new(n_max: usize) -> Self {
        DensityConfig { n_max, precision: 30, working_digits: 30, tolerance: 1e-6, window: 16, max_period: 8 }
    }

    /// Sets the reported precision; working digits never drop below 30 and
    /// keep 20 guard digits past the reported precision.
    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self.working_digits = (precision + 20).max(30);
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn epsilon(&self) -> Fixed {
        // Denominators within a few hundred ulps of zero carry no information.
        ten_pow_neg(self.working_digits.saturating_sub(3), self.working_digits)
    }

    fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        if self.precision < 6 {
            return Err(Error::Config("precision must be at least 6 significant digits".into()));
        }
        if self.window < 2 || self.max_period < 1 {
            return Err(Error::Config("window must be at least 2 and max_period at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// What the estimator concluded.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityValue {
    /// The accelerated trace settled within tolerance.
    Converged { value: Fixed },
    /// The ratio has no limit: residue classes mod `period` settle on
    /// different values.
    Oscillating { period: usize, per_residue: Vec<Fixed> },
    /// No settled value at this horizon; `last` is the final accelerated value.
    Inconclusive { last: Option<Fixed> },
}

impl DensityValue {
    /// The point estimate, whether or not it settled. `None` when oscillating.
    pub fn point(&self) -> Option<&Fixed> {
        match self {
            DensityValue::Converged { value } => Some(value),
            DensityValue::Inconclusive { last } => last.as_ref(),
            DensityValue::Oscillating { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub n_max: usize,
    /// Spread of the last `window` accelerated values.
    pub last_window_spread: Option<f64>,
    /// Difference between the last two accelerated values.
    pub last_step_delta: Option<f64>,
    /// Indices skipped for a zero denominator.
    pub zero_denominators: Vec<usize>,
    /// Indices whose ratio fell outside `[0, 1]`, which means `N ⊄ M`.
    pub out_of_range: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub value: DensityValue,
    pub trace: Vec<RatioSample>,
    /// Aitken values labelled by the index of the first of their three inputs.
    pub accelerated: Vec<RatioSample>,
    pub oscillation_period: Option<usize>,
    pub diagnostics: Diagnostics,
}

impl DensityEstimate {
    /// The reported point estimate rounded to `precision` significant digits.
    pub fn display_value(&self, precision: u32) -> String {
        match &self.value {
            DensityValue::Converged { value } => value.to_significant(precision),
            DensityValue::Inconclusive { last: Some(v) } => format!("{} (inconclusive)", v.to_significant(precision)),
            DensityValue::Inconclusive { last: None } => "inconclusive".into(),
            DensityValue::Oscillating { .. } => "undefined-oscillating".into(),
        }
    }
}

fn accelerate(samples: &[RatioSample], epsilon: &Fixed) -> Vec<RatioSample> {
    let values: Vec<Fixed> = samples.iter().map(|s| s.value.clone()).collect();
    aitken(&values, epsilon)
        .into_iter()
        .zip(samples)
        .filter_map(|(y, s)| y.map(|value| RatioSample { n: s.n, value }))
        .collect()
}

fn spread(values: &[&Fixed]) -> Option<f64> {
    let max = values.iter().max()?;
    let min = values.iter().min()?;
    Some(max.sub(min).to_f64())
}

// Per-class limit and spread: Aitken over the class subsequence when it is
// defined, otherwise the raw class values.
fn class_summary(class: &[RatioSample], config: &DensityConfig, epsilon: &Fixed) -> Option<(Fixed, f64)> {
    let accelerated = accelerate(class, epsilon);
    let source = if accelerated.len() >= config.window { &accelerated } else { class };
    if source.len() < config.window {
        return None;
    }
    let tail: Vec<&Fixed> = source[source.len() - config.window..].iter().map(|s| &s.value).collect();
    Some(((*tail.last()?).clone(), spread(&tail)?))
}

fn detect_period(samples: &[RatioSample], config: &DensityConfig, epsilon: &Fixed) -> Option<(usize, Vec<Fixed>)> {
    for period in 2..=config.max_period {
        let mut limits = Vec::with_capacity(period);
        let mut settled = true;
        for r in 0..period {
            let class: Vec<RatioSample> = samples.iter().filter(|s| s.n % period == r).cloned().collect();
            match class_summary(&class, config, epsilon) {
                Some((limit, spread)) if spread < config.tolerance => limits.push(limit),
                _ => {
                    settled = false;
                    break;
                }
            }
        }
        if !settled {
            continue;
        }
        let refs: Vec<&Fixed> = limits.iter().collect();
        if spread(&refs).is_some_and(|gap| gap > 10.0 * config.tolerance) {
            return Some((period, limits));
        }
    }
    None
}

/// Estimates `δ(N : M)` from the exact counting sequences of both families.
///
/// `N ⊆ M` is the caller's responsibility; it is checked exactly when both
/// are finite families, and any ratio outside `[0, 1]` is reported in the
/// diagnostics.
pub fn estimate_density(n: &GenFamily, m: &GenFamily, config: &DensityConfig) -> Result<DensityEstimate> {
    config.validate()?;
    if let (GenFamily::FiniteSet(ng), GenFamily::FiniteSet(mg)) = (n, m) {
        if !is_subgroupoid_of(ng, mg) {
            return Err(Error::InvalidFamily(format!("{n} is not contained in {m}")));
        }
    }
    let numer = growth(&n.counting_sequence(config.n_max)?);
    let denom = growth(&m.counting_sequence(config.n_max)?);
    Ok(estimate_from_growths(&numer, &denom, config))
}

/// The estimation pipeline on precomputed growth sequences.
pub fn estimate_from_growths(numer: &BigSeq, denom: &BigSeq, config: &DensityConfig) -> DensityEstimate {
    let epsilon = config.epsilon();
    let trace = ratio_trace(numer, denom, config.working_digits);
    let zero = Fixed::zero(config.working_digits);
    let unit = crate::decimal::one(config.working_digits);
    let out_of_range = trace.samples.iter().filter(|s| s.value < zero || s.value > unit).map(|s| s.n).collect();
    let accelerated = accelerate(&trace.samples, &epsilon);

    let tail: Vec<&Fixed> =
        accelerated.iter().rev().take(config.window).map(|s| &s.value).collect();
    let last_window_spread = if tail.len() == config.window { spread(&tail) } else { None };
    let last_step_delta = match accelerated.as_slice() {
        [.., a, b] => Some(b.value.sub(&a.value).to_f64()),
        _ => None,
    };

    let oscillation = detect_period(&trace.samples, config, &epsilon);
    let value = match &oscillation {
        Some((period, limits)) => DensityValue::Oscillating { period: *period, per_residue: limits.clone() },
        None => match (last_window_spread, accelerated.last()) {
            (Some(s), Some(last)) if s < config.tolerance => DensityValue::Converged { value: last.value.clone() },
            (_, last) => {
                // Sequences that hit their limit exactly leave Aitken undefined;
                // fall back to the raw trace for those.
                let raw_tail: Vec<&Fixed> = trace.samples.iter().rev().take(config.window).map(|s| &s.value).collect();
                match (raw_tail.len() == config.window).then(|| spread(&raw_tail)).flatten() {
                    Some(s) if s < config.tolerance && last.is_none() => {
                        DensityValue::Converged { value: raw_tail[0].clone() }
                    }
                    _ => DensityValue::Inconclusive {
                        last: last.map(|s| s.value.clone()).or_else(|| raw_tail.first().map(|v| (*v).clone())),
                    },
                }
            }
        },
    };

    DensityEstimate {
        value,
        oscillation_period: oscillation.map(|(p, _)| p),
        diagnostics: Diagnostics {
            n_max: numer.len().min(denom.len()),
            last_window_spread,
            last_step_delta,
            zero_denominators: trace.skipped.clone(),
            out_of_range,
        },
        trace: trace.samples,
        accelerated,
    }
}

/// Verdict of the rank/length nullity criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NullVerdict {
    /// `rank < 4^(λ-1)`, so the subgroupoid has null density.
    NullByTheorem,
    /// The criterion does not apply; nothing is claimed.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NullityReport {
    pub rank: usize,
    pub lambda: usize,
    pub verdict: NullVerdict,
}

/// Applies `rank(N) < 4^(λ(N) - 1) ⇒ δ(N : 𝕄) = 0` to `⟨gens⟩`.
pub fn fg_null_density_test(gens: &[Term]) -> Result<NullityReport> {
    let (rank, lambda) =
        rank_lambda(gens).ok_or_else(|| Error::InvalidFamily("the nullity criterion needs a nonempty generator set".into()))?;
    let bound = u32::try_from(lambda - 1).ok().and_then(|e| 4u128.checked_pow(e));
    let null = match bound {
        Some(b) => (rank as u128) < b,
        None => true,
    };
    let verdict = if null { NullVerdict::NullByTheorem } else { NullVerdict::Inconclusive };
    Ok(NullityReport { rank, lambda, verdict })
}

/// Limits of `|ℓ⁻¹(⟨A⟩)|_{≤n} / |𝕄|_{≤n}` along each residue class of `n` mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongitudinalAsymptote {
    pub p: u64,
    /// `3 / (4^(r+1) (1 - 4^-p))` for `r = 0..p`.
    pub per_residue: Vec<BigRational>,
}

impl LongitudinalAsymptote {
    pub fn mean(&self) -> BigRational {
        let total: BigRational = self.per_residue.iter().sum();
        total / BigRational::from_integer(BigInt::from(self.p))
    }

    pub fn for_length(&self, n: usize) -> &BigRational {
        &self.per_residue[n % self.per_residue.len()]
    }
}

/// Closed-form asymptote for `p` directly.
pub fn longitudinal_asymptote_for_period(p: u64) -> LongitudinalAsymptote {
    let four = |k: u64| BigInt::one() << (2 * k as usize);
    // 3 / (4^(r+1) (1 - 4^-p)) = 3·4^p / (4^(r+1) (4^p - 1))
    let per_residue = (0..p)
        .map(|r| BigRational::new(BigInt::from(3) * four(p), four(r + 1) * (four(p) - 1)))
        .collect();
    LongitudinalAsymptote { p, per_residue }
}

/// The asymptote of `ℓ⁻¹(⟨A⟩)`, which depends only on `p = gcd(A)`.
pub fn longitudinal_asymptote(a: &[u64]) -> Result<LongitudinalAsymptote> {
    Ok(longitudinal_asymptote_for_period(semigroup_info(a)?.gcd))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueCheck {
    pub residue: usize,
    /// Largest `n <= n_max` in this residue class.
    pub n: usize,
    pub empirical: f64,
    pub expected: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongitudinalReport {
    pub p: u64,
    pub n_max: usize,
    pub tolerance: f64,
    pub residues: Vec<ResidueCheck>,
    /// `c_{kp} / (c_p + … + c_{kp})` at the largest `kp <= n_max` against `1 - 4^-p`.
    pub auxiliary: ResidueCheck,
}

impl LongitudinalReport {
    pub fn worst(&self) -> &ResidueCheck {
        self.residues
            .iter()
            .max_by(|a, b| a.error.total_cmp(&b.error))
            .expect("at least one residue class")
    }

    pub fn passed(&self) -> bool {
        self.residues.iter().all(|r| r.error <= self.tolerance) && self.auxiliary.error <= self.tolerance
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    Fixed::from_rational(q, 40).to_f64()
}

/// Compares exact growth ratios of `ℓ⁻¹(⟨A⟩)` at the horizon with the
/// closed-form asymptote in every residue class.
pub fn longitudinal_convergence_check(a: &[u64], n_max: usize, tolerance: f64) -> Result<LongitudinalReport> {
    let info = semigroup_info(a)?;
    let p = info.gcd as usize;
    if (n_max as i64) <= info.stable_from() + p as i64 {
        return Err(Error::Config(format!(
            "horizon {n_max} must exceed gcd·Frobenius + p = {}",
            info.stable_from() + p as i64
        )));
    }
    let asymptote = longitudinal_asymptote_for_period(info.gcd);
    let numer = growth(&crate::subgroupoid::longitudinal_counting(a, n_max));
    let cat = catalan_c(n_max);
    let denom = growth(&cat);
    let residues = (0..p)
        .map(|r| {
            let n = n_max - (n_max - r) % p;
            let empirical = rational_to_f64(&exact_ratio(&numer, &denom, n).expect("growth of 𝕄 is positive"));
            let expected = rational_to_f64(&asymptote.per_residue[r]);
            ResidueCheck { residue: r, n, empirical, expected, error: (empirical - expected).abs() }
        })
        .collect();

    let k = n_max / p;
    let tail_sum: BigInt = (1..=k).map(|j| cat.at(j * p)).sum();
    let aux = rational_to_f64(&BigRational::new(cat.at(k * p), tail_sum));
    let aux_expected = 1.0 - 4f64.powi(-(p as i32));
    let auxiliary = ResidueCheck { residue: 0, n: k * p, empirical: aux, expected: aux_expected, error: (aux - aux_expected).abs() };

    Ok(LongitudinalReport { p: info.gcd, n_max, tolerance, residues, auxiliary })
}

/// Failures found by [`density_algebra_checks`]; empty means everything held.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlgebraReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `|aH|_{ℓ(a) n} = |H|_n` for `n <= n_max` and `|aH|_m = 0` when `ℓ(a) ∤ m`,
/// both sides counted by closure enumeration. `aH = ⟨a·g : g ∈ gens⟩` by left
/// distributivity.
pub fn translation_identity_check(h_gens: &[Term], a: &Term, n_max: usize, cap: usize) -> Result<AlgebraReport> {
    let scaled: Vec<Term> = h_gens.iter().map(|g| a.product(g)).collect();
    let la = a.len();
    let h = closure_up_to(h_gens, n_max, cap)?;
    let ah = closure_up_to(&scaled, la * n_max, cap.max(la * n_max))?;
    let mut report = AlgebraReport::default();
    for m in 1..=la * n_max {
        report.checks += 1;
        let expected = if m % la == 0 { h[m / la].len() } else { 0 };
        if ah[m].len() != expected {
            report.failures.push(format!("|aH|_{m} = {} but expected {expected} (a = {a})", ah[m].len()));
        }
    }
    Ok(report)
}

/// For nested `N ⊆ N' ⊆ N''`: every growth ratio lies in `[0, 1]` and
/// `(|N|/|N'|)·(|N'|/|N''|) = |N|/|N''|` exactly wherever defined.
pub fn ratio_chain_check(chain: &[GenFamily; 3], n_max: usize) -> Result<AlgebraReport> {
    let g: Vec<BigSeq> = chain.iter().map(|f| f.counting_sequence(n_max).map(|s| growth(&s))).collect::<Result<_>>()?;
    let mut report = AlgebraReport::default();
    let unit = BigRational::one();
    for n in 1..=n_max {
        let r01 = exact_ratio(&g[0], &g[1], n);
        let r12 = exact_ratio(&g[1], &g[2], n);
        let r02 = exact_ratio(&g[0], &g[2], n);
        for (name, r) in [("N:N'", &r01), ("N':N''", &r12), ("N:N''", &r02)] {
            if let Some(r) = r {
                report.checks += 1;
                if r.is_negative() || r > &unit {
                    report.failures.push(format!("ratio {name} = {r} outside [0, 1] at n = {n}"));
                }
            }
        }
        if let (Some(a), Some(b), Some(c)) = (r01, r12, r02) {
            report.checks += 1;
            if a * b != c {
                report.failures.push(format!("ratio product does not telescope at n = {n}"));
            }
        }
    }
    Ok(report)
}

/// Runs both algebra checks over the given fixtures.
pub fn density_algebra_checks(
    translations: &[(Vec<Term>, Term)],
    chains: &[[GenFamily; 3]],
    n_max: usize,
    cap: usize,
) -> Result<AlgebraReport> {
    let mut total = AlgebraReport::default();
    for (h, a) in translations {
        let r = translation_identity_check(h, a, n_max, cap)?;
        total.checks += r.checks;
        total.failures.extend(r.failures);
    }
    for chain in chains {
        let r = ratio_chain_check(chain, n_max)?;
        total.checks += r.checks;
        total.failures.extend(r.failures);
    }
    Ok(total)
}

/// Seconds elapsed since `start`, for reports.
pub(crate) fn seconds_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}
