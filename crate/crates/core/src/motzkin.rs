//! Motzkin paths with forbidden step pairs and coloured steps.
//!
//! A path of length `n` takes `n` steps `U` (up), `D` (down) and `F` (flat),
//! never goes below height 0 and ends at height 0. A forbidden pair `(X, Y)`
//! bans step `Y` directly after step `X`, regardless of colours. A step with
//! multiplicity `k` can be painted in `k` colours independently, so a path
//! counts with weight `Π multiplicity(step)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sequences::BigSeq;
use crate::subgroupoid::GenFamily;

/// Longest path [`enumerate_paths`] will list.
pub const ENUMERATION_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    U,
    D,
    F,
}

impl Step {
    pub const ALL: [Step; 3] = [Step::U, Step::D, Step::F];

    fn index(self) -> usize {
        self as usize
    }

    fn letter(self) -> char {
        match self {
            Step::U => 'U',
            Step::D => 'D',
            Step::F => 'F',
        }
    }

    fn from_letter(c: char) -> Option<Step> {
        match c {
            'U' => Some(Step::U),
            'D' => Some(Step::D),
            'F' => Some(Step::F),
            _ => None,
        }
    }
}

/// Constraint bundle for a family of Motzkin paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpec {
    pub length: usize,
    pub forbidden: BTreeSet<(Step, Step)>,
    /// Colour multiplicity of `U`, `D`, `F`, in that order; each at least 1.
    pub colors: [u32; 3],
}

impl PathSpec {
    pub fn plain(length: usize) -> Self {
        PathSpec { length, forbidden: BTreeSet::new(), colors: [1, 1, 1] }
    }

    pub fn with_length(&self, length: usize) -> Self {
        PathSpec { length, ..self.clone() }
    }

    pub fn forbid(mut self, first: Step, second: Step) -> Self {
        self.forbidden.insert((first, second));
        self
    }

    /// Parses a comma-separated list such as `FU,FF`.
    pub fn forbid_list(mut self, list: &str) -> Result<Self> {
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let steps: Vec<Step> = item.chars().filter_map(Step::from_letter).collect();
            if steps.len() != 2 || item.chars().count() != 2 {
                return Err(Error::Parse {
                    input: list.to_string(),
                    position: 0,
                    message: format!("forbidden pair {item:?} must be two of U, D, F"),
                });
            }
            self.forbidden.insert((steps[0], steps[1]));
        }
        Ok(self)
    }

    pub fn color(mut self, step: Step, multiplicity: u32) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::Config("colour multiplicity must be at least 1".into()));
        }
        self.colors[step.index()] = multiplicity;
        Ok(self)
    }

    fn allowed(&self, prev: Option<Step>, next: Step) -> bool {
        prev.is_none_or(|p| !self.forbidden.contains(&(p, next)))
    }
}

/// Weighted number of paths satisfying `spec`.
///
/// Dynamic programming over `(height, last step)`; heights above the number
/// of remaining steps can never return to 0 and are pruned.
pub fn count_paths(spec: &PathSpec) -> BigInt {
    let n = spec.length;
    let top = n / 2;
    // ways[h][last]: last = 0..3 for a step, 3 for "no step yet".
    let mut ways = vec![vec![BigInt::zero(); 4]; top + 2];
    ways[0][3] = BigInt::one();
    for pos in 0..n {
        let remaining = n - pos - 1;
        let mut next = vec![vec![BigInt::zero(); 4]; top + 2];
        for h in 0..=top {
            for last in 0..4 {
                if ways[h][last].is_zero() {
                    continue;
                }
                let prev = (last < 3).then(|| Step::ALL[last]);
                for step in Step::ALL {
                    let nh = match step {
                        Step::U => h + 1,
                        Step::D if h == 0 => continue,
                        Step::D => h - 1,
                        Step::F => h,
                    };
                    if nh > remaining || !spec.allowed(prev, step) {
                        continue;
                    }
                    let w = &ways[h][last] * spec.colors[step.index()];
                    next[nh][step.index()] += w;
                }
            }
        }
        ways = next;
    }
    ways[0].iter().sum()
}

/// `count_paths` for every length `0..=n_max`.
pub fn count_sequence(spec: &PathSpec, n_max: usize) -> Vec<BigInt> {
    (0..=n_max).map(|n| count_paths(&spec.with_length(n))).collect()
}

/// One coloured path. Colours are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub steps: Vec<(Step, u32)>,
}

impl Path {
    /// Heights after each step, starting from 0.
    pub fn heights(&self) -> Vec<i64> {
        let mut h = 0i64;
        let mut out = vec![0];
        for (s, _) in &self.steps {
            h += match s {
                Step::U => 1,
                Step::D => -1,
                Step::F => 0,
            };
            out.push(h);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether the path stays non-negative, returns to 0 and avoids every
    /// forbidden pair of `spec`.
    pub fn satisfies(&self, spec: &PathSpec) -> bool {
        let h = self.heights();
        h.iter().all(|&x| x >= 0)
            && h.last() == Some(&0)
            && self.steps.windows(2).all(|w| !spec.forbidden.contains(&(w[0].0, w[1].0)))
            && self.steps.iter().all(|(s, c)| (1..=spec.colors[s.index()]).contains(c))
    }
}

/// Steps as letters. A step letter carries its colour index whenever some
/// occurrence of that letter has colour above 1, e.g. `UF2DF1`; use
/// [`Path::render`] to format against a known spec.
impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in &self.steps {
            write!(f, "{}", s.letter())?;
            if *c > 1 || self.colored(*s) {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl Path {
    /// Text form with a colour index on every step whose multiplicity in
    /// `spec` exceeds one.
    pub fn render(&self, spec: &PathSpec) -> String {
        let mut out = String::new();
        for (s, c) in &self.steps {
            out.push(s.letter());
            if spec.colors[s.index()] > 1 {
                out.push_str(&c.to_string());
            }
        }
        out
    }

    // A step is rendered with its colour if any occurrence has colour > 1.
    fn colored(&self, step: Step) -> bool {
        self.steps.iter().any(|(s, c)| *s == step && *c > 1)
    }
}

/// Parses `UUDD` or `UF2DF1`. A step without digits has colour 1.
impl FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Path> {
        let mut steps: Vec<(Step, u32)> = Vec::new();
        let mut chars = s.char_indices().peekable();
        while let Some((pos, c)) = chars.next() {
            let step = Step::from_letter(c).ok_or_else(|| Error::Parse {
                input: s.to_string(),
                position: pos,
                message: "expected U, D or F".into(),
            })?;
            let mut digits = String::new();
            while let Some((_, d)) = chars.peek().filter(|(_, d)| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let color = if digits.is_empty() {
                1
            } else {
                digits.parse().ok().filter(|&c: &u32| c >= 1).ok_or_else(|| Error::Parse {
                    input: s.to_string(),
                    position: pos,
                    message: "colour must be a positive integer".into(),
                })?
            };
            steps.push((step, color));
        }
        Ok(Path { steps })
    }
}

/// Every coloured path satisfying `spec`, in lexicographic order of
/// `(step, colour)` sequences with `U < D < F`.
pub fn enumerate_paths(spec: &PathSpec) -> Result<Vec<Path>> {
    if spec.length > ENUMERATION_CAP {
        return Err(Error::Capacity { requested: spec.length, cap: ENUMERATION_CAP });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(spec.length);
    extend_paths(spec, 0, &mut current, &mut out);
    Ok(out)
}

fn extend_paths(spec: &PathSpec, height: usize, current: &mut Vec<(Step, u32)>, out: &mut Vec<Path>) {
    let remaining = spec.length - current.len();
    if remaining == 0 {
        if height == 0 {
            out.push(Path { steps: current.clone() });
        }
        return;
    }
    let prev = current.last().map(|(s, _)| *s);
    for step in Step::ALL {
        let nh = match step {
            Step::U => height + 1,
            Step::D if height == 0 => continue,
            Step::D => height - 1,
            Step::F => height,
        };
        if nh > remaining - 1 || !spec.allowed(prev, step) {
            continue;
        }
        for color in 1..=spec.colors[step.index()] {
            current.push((step, color));
            extend_paths(spec, nh, current, out);
            current.pop();
        }
    }
}

/// Result of comparing path counts with a subgroupoid counting sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub n_max: usize,
    pub offset: usize,
    /// First `n` where the counts differ, with `(path count, family count)`.
    pub first_mismatch: Option<(usize, BigInt, BigInt)>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Checks `count_paths(length = n - offset) == |N|_n` for `1 <= n <= n_max`
/// (the path count is 0 when `n < offset`).
pub fn crosscheck_subgroupoid(spec: &PathSpec, family: &GenFamily, offset: usize, n_max: usize) -> Result<CrosscheckReport> {
    let counts: BigSeq = family.counting_sequence(n_max)?;
    let first_mismatch = (1..=n_max).find_map(|n| {
        let paths = n.checked_sub(offset).map_or_else(BigInt::zero, |len| count_paths(&spec.with_length(len)));
        let fam = counts.at(n);
        (paths != fam).then_some((n, paths, fam))
    });
    Ok(CrosscheckReport { n_max, offset, first_mismatch })
}
