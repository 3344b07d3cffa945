//! Terms of the cyclic free magma: full binary trees whose leaves are all the
//! single generator `1`.
//!
//! Terms are immutable and share subtrees through [`Arc`], so building `x + y`
//! costs one allocation regardless of the sizes of `x` and `y`. Equality,
//! hashing and ordering are structural.
//!
//! The canonical encoding is the preorder traversal with `1` for an internal
//! node and `0` for a leaf. It is a Łukasiewicz word, so it is self-delimiting
//! and decodes without lookahead. Terms of equal length have encodings of
//! equal bit length (`2n - 1`), and [`Ord`] on [`Term`] orders first by length
//! and then lexicographically by encoding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest length [`enumerate_terms`] accepts unless a larger cap is passed.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

#[derive(Debug, PartialEq, Eq, Hash)]
enum Node {
    Leaf,
    Sum { left: Term, right: Term, len: usize },
}

/// An element of the cyclic free magma.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term(Arc<Node>);

impl Term {
    /// The generator `1`.
    pub fn leaf() -> Term {
        Term(Arc::new(Node::Leaf))
    }

    /// The ordered sum `left + right`.
    pub fn sum(left: Term, right: Term) -> Term {
        let len = left.len() + right.len();
        Term(Arc::new(Node::Sum { left, right, len }))
    }

    /// `1 + 1`.
    pub fn two() -> Term {
        Term::sum(Term::leaf(), Term::leaf())
    }

    /// Number of leaves.
    pub fn len(&self) -> usize {
        match &*self.0 {
            Node::Leaf => 1,
            Node::Sum { len, .. } => *len,
        }
    }

    /// Always `false`: every term has at least one leaf.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_leaf(&self) -> bool {
        matches!(&*self.0, Node::Leaf)
    }

    /// The summands of `x + y`, or `None` for the generator.
    pub fn split(&self) -> Option<(&Term, &Term)> {
        match &*self.0 {
            Node::Leaf => None,
            Node::Sum { left, right, .. } => Some((left, right)),
        }
    }

    /// Left comb `n₋ = ((1+1)+1)+…+1`.
    pub fn left_comb(n: usize) -> Result<Term> {
        if n == 0 {
            return Err(Error::ZeroLength);
        }
        let mut t = Term::leaf();
        for _ in 1..n {
            t = Term::sum(t, Term::leaf());
        }
        Ok(t)
    }

    /// Right comb `n₊ = 1+(1+(…+1))`.
    pub fn right_comb(n: usize) -> Result<Term> {
        if n == 0 {
            return Err(Error::ZeroLength);
        }
        let mut t = Term::leaf();
        for _ in 1..n {
            t = Term::sum(Term::leaf(), t);
        }
        Ok(t)
    }

    /// Substitutes a copy of `self` for every leaf of `other`.
    ///
    /// Associative with unit `1`, left distributive over `+`, and
    /// `(x·y).len() == x.len() * y.len()`.
    pub fn product(&self, other: &Term) -> Term {
        match &*other.0 {
            Node::Leaf => self.clone(),
            Node::Sum { left, right, .. } => Term::sum(self.product(left), self.product(right)),
        }
    }

    /// `self · self · … · self` (`exp` factors); `pow(0)` is `1`.
    pub fn pow(&self, exp: u32) -> Term {
        (0..exp).fold(Term::leaf(), |acc, _| acc.product(self))
    }

    /// Number of leaves counted by walking the tree, ignoring the cached length.
    pub fn count_leaves(&self) -> usize {
        match self.split() {
            None => 1,
            Some((l, r)) => l.count_leaves() + r.count_leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.split() {
            None => 0,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn encode(&self) -> Encoding {
        let mut enc = Encoding::with_capacity(2 * self.len() - 1);
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t.split() {
                None => enc.push(false),
                Some((l, r)) => {
                    enc.push(true);
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        enc
    }

    pub fn decode(enc: &Encoding) -> Result<Term> {
        let mut bits = enc.iter().enumerate();
        let term = decode_one(&mut bits, enc.len())?;
        if let Some((pos, _)) = bits.next() {
            return Err(Error::Parse {
                input: enc.to_string(),
                position: pos,
                message: "trailing bits after a complete term".into(),
            });
        }
        Ok(term)
    }
}

// Iterative so that deep combs do not overflow the stack.
fn decode_one(bits: &mut impl Iterator<Item = (usize, bool)>, total: usize) -> Result<Term> {
    enum Frame {
        NeedLeft,
        NeedRight(Term),
    }
    let mut frames: Vec<Frame> = Vec::new();
    loop {
        let (_, bit) = bits.next().ok_or_else(|| Error::Parse {
            input: String::new(),
            position: total,
            message: "truncated encoding".into(),
        })?;
        if bit {
            frames.push(Frame::NeedLeft);
            continue;
        }
        let mut done = Term::leaf();
        loop {
            match frames.pop() {
                None => return Ok(done),
                Some(Frame::NeedLeft) => {
                    frames.push(Frame::NeedRight(done));
                    break;
                }
                Some(Frame::NeedRight(left)) => done = Term::sum(left, done),
            }
        }
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| cmp_preorder(self, other))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Encodings are prefix-free, so comparing left subtrees first and then right
// subtrees is the same as comparing preorder bit strings.
fn cmp_preorder(a: &Term, b: &Term) -> Ordering {
    if Arc::ptr_eq(&a.0, &b.0) {
        return Ordering::Equal;
    }
    match (a.split(), b.split()) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some((al, ar)), Some((bl, br))) => cmp_preorder(al, bl).then_with(|| cmp_preorder(ar, br)),
    }
}

/// Fully parenthesised additive notation: `1`, `(1+1)`, `(1+(1+1))`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.split() {
            None => f.write_str("1"),
            Some((l, r)) => write!(f, "({l}+{r})"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses additive notation. Whitespace is ignored, `+` is right-associative
/// when parentheses are omitted, and the shorthand `2` stands for `(1+1)`.
impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut p = TermParser { input: s, chars: &chars, pos: 0 };
        let t = p.sum()?;
        if p.pos != chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(t)
    }
}

struct TermParser<'a> {
    input: &'a str,
    chars: &'a [(usize, char)],
    pos: usize,
}

impl TermParser<'_> {
    fn error(&self, message: &str) -> Error {
        let position = self.chars.get(self.pos).map_or(self.input.len(), |(i, _)| *i);
        Error::Parse { input: self.input.to_string(), position, message: message.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn sum(&mut self) -> Result<Term> {
        let left = self.atom()?;
        if self.peek() == Some('+') {
            self.pos += 1;
            let right = self.sum()?;
            return Ok(Term::sum(left, right));
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            Some('1') => {
                self.pos += 1;
                Ok(Term::leaf())
            }
            Some('2') => {
                self.pos += 1;
                Ok(Term::two())
            }
            Some('(') => {
                self.pos += 1;
                let t = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(_) => Err(self.error("expected '1', '2' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Preorder bit string of a term, packed most-significant-bit first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Encoding {
    words: Vec<u64>,
    len: usize,
}

impl Encoding {
    pub fn with_capacity(bits: usize) -> Self {
        Encoding { words: Vec::with_capacity(bits.div_ceil(64)), len: 0 }
    }

    pub fn push(&mut self, bit: bool) {
        let (word, offset) = (self.len / 64, self.len % 64);
        if word == self.words.len() {
            self.words.push(0);
        }
        if bit {
            self.words[word] |= 1 << (63 - offset);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| self.words[i / 64] >> (63 - i % 64) & 1 == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.words[i / 64] >> (63 - i % 64) & 1 == 1)
    }
}

impl Ord for Encoding {
    fn cmp(&self, other: &Self) -> Ordering {
        // Unused trailing bits are zero, so word order is bit order up to the
        // shorter length; ties go to the shorter string.
        self.words.cmp(&other.words).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Encoding {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.iter().try_for_each(|b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl fmt::Debug for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Encoding({self})")
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Encoding> {
        let mut enc = Encoding::with_capacity(s.len());
        for (position, c) in s.char_indices() {
            match c {
                '0' => enc.push(false),
                '1' => enc.push(true),
                _ => {
                    return Err(Error::Parse {
                        input: s.to_string(),
                        position,
                        message: "encoding must contain only '0' and '1'".into(),
                    })
                }
            }
        }
        Ok(enc)
    }
}

/// Parses and decodes a bit string in one step.
pub fn decode_str(bits: &str) -> Result<Term> {
    let enc: Encoding = bits.parse()?;
    Term::decode(&enc).map_err(|e| match e {
        Error::Parse { position, message, .. } => Error::Parse { input: bits.to_string(), position, message },
        other => other,
    })
}

/// All terms of length `n`, sorted by encoding. Fails past `cap`.
pub fn enumerate_terms_capped(n: usize, cap: usize) -> Result<Vec<Term>> {
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    if n > cap {
        return Err(Error::Capacity { requested: n, cap });
    }
    let mut by_len: Vec<Vec<Term>> = vec![Vec::new(), vec![Term::leaf()]];
    for k in 2..=n {
        by_len.push(sums_of_length(&by_len, k));
    }
    Ok(by_len.swap_remove(n))
}

/// All terms of length `n` with the default cap.
pub fn enumerate_terms(n: usize) -> Result<Vec<Term>> {
    enumerate_terms_capped(n, DEFAULT_ENUMERATION_CAP)
}

/// Every `x + y` with `x ∈ by_len[i]`, `y ∈ by_len[k - i]`, sorted.
pub(crate) fn sums_of_length(by_len: &[Vec<Term>], k: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for i in 1..k {
        for x in &by_len[i] {
            for y in &by_len[k - i] {
                out.push(Term::sum(x.clone(), y.clone()));
            }
        }
    }
    out.sort();
    out
}
