//! Fixed-point decimals over big integers.
//!
//! A [`Fixed`] is `raw / 10^scale`. Conversions from exact rationals and
//! every division round half to even; addition, subtraction and negation
//! are exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fixed {
    raw: BigInt,
    scale: u32,
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), k as usize)
}

/// `numer / denom` rounded half to even. `denom` must be nonzero.
pub fn div_round_half_even(numer: &BigInt, denom: &BigInt) -> BigInt {
    let (q, r) = numer.div_mod_floor(denom);
    // r has the sign of denom; compare 2|r| with |denom|.
    let twice = (r.abs()) << 1usize;
    match twice.cmp(&denom.abs()) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal if q.is_even() => q,
        Ordering::Equal => q + 1,
    }
}

impl Fixed {
    pub fn zero(scale: u32) -> Self {
        Fixed { raw: BigInt::zero(), scale }
    }

    pub fn from_raw(raw: BigInt, scale: u32) -> Self {
        Fixed { raw, scale }
    }

    /// `numer / denom` at `scale` fractional digits; `None` when `denom == 0`.
    pub fn from_ratio(numer: &BigInt, denom: &BigInt, scale: u32) -> Option<Self> {
        if denom.is_zero() {
            return None;
        }
        Some(Fixed { raw: div_round_half_even(&(numer * pow10(scale)), denom), scale })
    }

    pub fn from_rational(q: &BigRational, scale: u32) -> Self {
        Fixed::from_ratio(q.numer(), q.denom(), scale).expect("rational has nonzero denominator")
    }

    pub fn from_f64(x: f64, scale: u32) -> Self {
        let q = BigRational::from_float(x).expect("finite float");
        Fixed::from_rational(&q, scale)
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.raw.clone(), pow10(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().expect("decimal string parses as f64")
    }

    /// Same value at another scale, rounding half to even when shrinking.
    pub fn rescale(&self, scale: u32) -> Fixed {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Fixed { raw: &self.raw * pow10(scale - self.scale), scale },
            Ordering::Less => Fixed { raw: div_round_half_even(&self.raw, &pow10(self.scale - scale)), scale },
        }
    }

    fn aligned<'a>(&'a self, other: &'a Fixed) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(other.scale);
        (self.rescale(scale).raw, other.rescale(scale).raw, scale)
    }

    pub fn add(&self, other: &Fixed) -> Fixed {
        let (a, b, scale) = self.aligned(other);
        Fixed { raw: a + b, scale }
    }

    pub fn sub(&self, other: &Fixed) -> Fixed {
        let (a, b, scale) = self.aligned(other);
        Fixed { raw: a - b, scale }
    }

    pub fn abs(&self) -> Fixed {
        Fixed { raw: self.raw.abs(), scale: self.scale }
    }

    /// Rounds to `digits` significant digits and renders in plain notation.
    pub fn to_significant(&self, digits: u32) -> String {
        if self.raw.is_zero() || digits == 0 {
            return Fixed::zero(0).to_string();
        }
        let int_digits = self.raw.abs().to_string().len() as i64;
        // Keep `digits` digits of `raw`, dropping the rest.
        let drop = int_digits - digits as i64;
        if drop <= 0 {
            return self.to_string();
        }
        let drop = drop as u32;
        let kept = div_round_half_even(&self.raw, &pow10(drop));
        if drop <= self.scale {
            Fixed { raw: kept, scale: self.scale - drop }.to_string()
        } else {
            (kept * pow10(drop - self.scale)).to_string()
        }
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.raw.abs().to_string();
        let sign = if self.raw.sign() == Sign::Minus { "-" } else { "" };
        let scale = self.scale as usize;
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = if digits.len() <= scale { format!("{}{digits}", "0".repeat(scale + 1 - digits.len())) } else { digits };
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One step of Aitken's Δ² process on fixed-point inputs of a common scale:
/// `(x0 x2 - x1²) / (x0 + x2 - 2 x1)`.
///
/// Numerator and denominator are formed exactly from the raw integers, so the
/// only rounding is the final division. Returns `None` when the denominator's
/// magnitude is below `epsilon`.
pub fn aitken_step(x0: &Fixed, x1: &Fixed, x2: &Fixed, epsilon: &Fixed) -> Option<Fixed> {
    let scale = x0.scale.max(x1.scale).max(x2.scale);
    let (a, b, c) = (x0.rescale(scale).raw, x1.rescale(scale).raw, x2.rescale(scale).raw);
    let denom = &a + &c - (&b << 1usize);
    if Fixed::from_raw(denom.abs(), scale) < *epsilon || denom.is_zero() {
        return None;
    }
    let numer = &a * &c - &b * &b;
    // numer is at scale 2s, denom at scale s: the quotient is at scale s.
    Some(Fixed { raw: div_round_half_even(&numer, &denom), scale })
}

/// Aitken's Δ² process over a whole sequence. Entry `i` of the output uses
/// inputs `i, i+1, i+2`; `None` marks a skipped (near-zero denominator) entry.
pub fn aitken(x: &[Fixed], epsilon: &Fixed) -> Vec<Option<Fixed>> {
    x.windows(3).map(|w| aitken_step(&w[0], &w[1], &w[2], epsilon)).collect()
}

/// `10^-k` at scale `scale`.
pub fn ten_pow_neg(k: u32, scale: u32) -> Fixed {
    if k > scale {
        return Fixed::zero(scale);
    }
    Fixed { raw: pow10(scale - k), scale }
}

/// `1` at the given scale.
pub fn one(scale: u32) -> Fixed {
    Fixed { raw: pow10(scale), scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn fx(s: &str, scale: u32) -> Fixed {
        let q: f64 = s.parse().unwrap();
        Fixed::from_f64(q, scale)
    }

    #[test]
    fn rounding_is_half_even() {
        let r = |n: i64, d: i64| div_round_half_even(&BigInt::from(n), &BigInt::from(d));
        assert_eq!(r(5, 2), BigInt::from(2));
        assert_eq!(r(7, 2), BigInt::from(4));
        assert_eq!(r(-5, 2), BigInt::from(-2));
        assert_eq!(r(-7, 2), BigInt::from(-4));
        assert_eq!(r(10, 3), BigInt::from(3));
        assert_eq!(r(11, 3), BigInt::from(4));
        assert_eq!(r(5, -2), BigInt::from(-2));
    }

    #[test]
    fn display_and_ratio() {
        let third = Fixed::from_ratio(&BigInt::from(1), &BigInt::from(3), 5).unwrap();
        assert_eq!(third.to_string(), "0.33333");
        let neg = Fixed::from_ratio(&BigInt::from(-2), &BigInt::from(3), 4).unwrap();
        assert_eq!(neg.to_string(), "-0.6667");
        assert_eq!(Fixed::from_raw(BigInt::from(12345), 2).to_string(), "123.45");
        assert_eq!(Fixed::from_raw(BigInt::from(7), 0).to_string(), "7");
        assert!(Fixed::from_ratio(&BigInt::from(1), &BigInt::zero(), 3).is_none());
        assert_eq!(fx("0.25", 6).to_f64(), 0.25);
    }

    #[test]
    fn significant_digits() {
        let x = Fixed::from_ratio(&BigInt::from(35361), &BigInt::from(100000), 30).unwrap();
        assert_eq!(x.to_significant(3), "0.354");
        let y = Fixed::from_ratio(&BigInt::from(1588), &BigInt::from(100000), 30).unwrap();
        assert_eq!(y.to_significant(2), "0.016");
        assert_eq!(Fixed::from_raw(BigInt::from(123456), 1).to_significant(2), "12000");
    }

    #[test]
    fn aitken_constant_and_geometric() {
        let eps = ten_pow_neg(25, 30);
        let c = fx("0.3", 30);
        assert_eq!(aitken(&[c.clone(), c.clone(), c.clone()], &eps), vec![None]);

        // x_n = L + 2^-n is accelerated to L exactly (up to rounding).
        let limit = Fixed::from_ratio(&BigInt::from(3), &BigInt::from(10), 30).unwrap();
        let xs: Vec<Fixed> = (1..12)
            .map(|n| limit.add(&Fixed::from_ratio(&BigInt::one(), &(BigInt::one() << n), 30).unwrap()))
            .collect();
        for y in aitken(&xs, &eps) {
            let err = y.unwrap().sub(&limit).abs();
            assert!(err <= ten_pow_neg(28, 30), "error {err}");
        }
    }

    #[test]
    fn ordering_across_scales() {
        assert!(fx("0.5", 2) > fx("0.25", 6));
        assert_eq!(fx("0.5", 2).cmp(&fx("0.5", 9)), Ordering::Equal);
        assert_eq!(fx("0.123456", 6).rescale(3).to_string(), "0.123");
        assert_eq!(fx("1.5", 1).sub(&fx("2", 0)).to_string(), "-0.5");
    }
}
