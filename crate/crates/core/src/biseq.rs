//! Finitely described bi-infinite sequences.
//!
//! A [`BiSeq`] is a finite center word anchored at `center_lo`, flanked by a
//! left and a right [`Tail`]. Tails are indexed by their distance from the
//! first tail position, counted moving away from the center: the right tail
//! starts at `center_lo + center.len()` and the left tail at `center_lo - 1`.
//! A left `per:` word therefore reads right-to-left in sequence order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

/// A symbol. Sequences over the naturals use nonnegative values; integer
/// valued images (zero-locator) may be negative.
pub type Symbol = i64;

/// A finite block of symbols.
pub type Word = Vec<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiSeqError {
    #[error("periodic tail needs a nonempty word")]
    EmptyPeriod,
    #[error("empty interval [{0},{1}]")]
    BadInterval(i64, i64),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

fn parse_err(input: &str, reason: impl Into<String>) -> BiSeqError {
    BiSeqError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// How a sequence continues beyond its center.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    Constant(Symbol),
    /// Repeats the word outward, starting with `word[0]` next to the center.
    Periodic(Vec<Symbol>),
    /// `start + step * d` at distance `d`.
    Arithmetic {
        start: Symbol,
        step: Symbol,
    },
}

impl Tail {
    pub fn periodic(word: Vec<Symbol>) -> Result<Tail, BiSeqError> {
        if word.is_empty() {
            return Err(BiSeqError::EmptyPeriod);
        }
        Ok(Tail::Periodic(word).normalized())
    }

    pub fn arithmetic(start: Symbol, step: Symbol) -> Tail {
        Tail::Arithmetic { start, step }.normalized()
    }

    /// Symbol at distance `d` from the tail's first position.
    pub fn at(&self, d: u64) -> Symbol {
        match self {
            Tail::Constant(c) => *c,
            Tail::Periodic(w) => w[(d % w.len() as u64) as usize],
            Tail::Arithmetic { start, step } => start + step * d as i64,
        }
    }

    /// Period of the tail, or `None` for arithmetic tails.
    pub fn period(&self) -> Option<usize> {
        match self {
            Tail::Constant(_) => Some(1),
            Tail::Periodic(w) => Some(w.len()),
            Tail::Arithmetic { .. } => None,
        }
    }

    /// One period of a constant or periodic tail.
    pub fn period_word(&self) -> Option<Word> {
        match self {
            Tail::Constant(c) => Some(vec![*c]),
            Tail::Periodic(w) => Some(w.clone()),
            Tail::Arithmetic { .. } => None,
        }
    }

    /// The same tail observed from `d` positions further out.
    pub fn advance(&self, d: u64) -> Tail {
        match self {
            Tail::Constant(c) => Tail::Constant(*c),
            Tail::Periodic(w) => {
                let mut w = w.clone();
                let r = (d % w.len() as u64) as usize;
                w.rotate_left(r);
                Tail::Periodic(w)
            }
            Tail::Arithmetic { start, step } => Tail::Arithmetic {
                start: start + step * d as i64,
                step: *step,
            },
        }
    }

    /// The tail grown one position toward the center, if `s` is the symbol
    /// it would generate there.
    fn absorb(&self, s: Symbol) -> Option<Tail> {
        match self {
            Tail::Constant(c) => (*c == s).then(|| self.clone()),
            Tail::Periodic(w) => (*w.last()? == s).then(|| {
                let mut w = w.clone();
                w.rotate_right(1);
                Tail::Periodic(w)
            }),
            Tail::Arithmetic { start, step } => (start - step == s).then_some(Tail::Arithmetic {
                start: s,
                step: *step,
            }),
        }
    }

    fn normalized(self) -> Tail {
        match self {
            Tail::Periodic(w) => {
                let p = primitive_period(&w);
                if p == 1 {
                    Tail::Constant(w[0])
                } else {
                    Tail::Periodic(w[..p].to_vec())
                }
            }
            Tail::Arithmetic { start, step: 0 } => Tail::Constant(start),
            t => t,
        }
    }

    /// All symbols this tail can produce, when finitely many.
    pub fn finite_symbols(&self) -> Option<Vec<Symbol>> {
        self.period_word()
    }
}

fn primitive_period(w: &[Symbol]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && w.chunks(p).all(|c| c == &w[..p]))
        .unwrap_or(n)
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Constant(c) => write!(f, "const:{c}"),
            Tail::Periodic(w) => write!(f, "per:{}", join_symbols(w)),
            Tail::Arithmetic { start, step } => write!(f, "arith:{start},{step}"),
        }
    }
}

impl FromStr for Tail {
    type Err = BiSeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| parse_err(s, "expected `<kind>:<args>`"))?;
        match kind.trim() {
            "const" => Ok(Tail::Constant(parse_symbol(body)?)),
            "per" => Tail::periodic(parse_symbol_list(body)?),
            "arith" => {
                let args = parse_symbol_list(body)?;
                match args.as_slice() {
                    [start, step] => Ok(Tail::arithmetic(*start, *step)),
                    _ => Err(parse_err(s, "arith takes `<start>,<step>`")),
                }
            }
            other => Err(parse_err(s, format!("unknown tail kind `{other}`"))),
        }
    }
}

pub(crate) fn join_symbols(w: &[Symbol]) -> String {
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Formats a word as `[s0,s1,...]`.
pub fn format_word(w: &[Symbol]) -> String {
    format!("[{}]", join_symbols(w))
}

pub(crate) fn parse_symbol(s: &str) -> Result<Symbol, BiSeqError> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(s, "not an integer symbol"))
}

pub(crate) fn parse_symbol_list(s: &str) -> Result<Vec<Symbol>, BiSeqError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_symbol).collect()
}

/// Parses `[s0,s1,...]` (brackets optional).
pub fn parse_word(s: &str) -> Result<Word, BiSeqError> {
    let t = s.trim();
    let t = t.strip_prefix('[').unwrap_or(t);
    let t = t.strip_suffix(']').unwrap_or(t);
    parse_symbol_list(t)
}

/// A bi-infinite sequence in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiSeq {
    left: Tail,
    center_lo: i64,
    center: Word,
    right: Tail,
}

impl BiSeq {
    pub fn new(left: Tail, center_lo: i64, center: Word, right: Tail) -> BiSeq {
        BiSeq {
            left: left.normalized(),
            center_lo,
            center,
            right: right.normalized(),
        }
        .normalize()
    }

    pub fn constant(c: Symbol) -> BiSeq {
        BiSeq::new(Tail::Constant(c), 0, Vec::new(), Tail::Constant(c))
    }

    /// `center` placed at `center_lo` over a background of zeros.
    pub fn finite_support(center_lo: i64, center: Word) -> BiSeq {
        BiSeq::new(Tail::Constant(0), center_lo, center, Tail::Constant(0))
    }

    pub fn left(&self) -> &Tail {
        &self.left
    }

    pub fn right(&self) -> &Tail {
        &self.right
    }

    pub fn center_lo(&self) -> i64 {
        self.center_lo
    }

    /// One past the last center position; the right tail starts here.
    pub fn center_hi(&self) -> i64 {
        self.center_lo + self.center.len() as i64
    }

    pub fn center(&self) -> &[Symbol] {
        &self.center
    }

    pub fn symbol_at(&self, n: i64) -> Symbol {
        let hi = self.center_hi();
        if n < self.center_lo {
            self.left.at((self.center_lo - 1 - n) as u64)
        } else if n >= hi {
            self.right.at((n - hi) as u64)
        } else {
            self.center[(n - self.center_lo) as usize]
        }
    }

    /// `shift(x, k)_n = x_{n+k}`; `shift(x, 1)` is the left shift σ.
    pub fn shift(&self, k: i64) -> BiSeq {
        BiSeq::new(
            self.left.clone(),
            self.center_lo - k,
            self.center.clone(),
            self.right.clone(),
        )
    }

    pub fn restrict(&self, a: i64, b: i64) -> Result<Word, BiSeqError> {
        if a > b {
            return Err(BiSeqError::BadInterval(a, b));
        }
        Ok((a..=b).map(|n| self.symbol_at(n)).collect())
    }

    /// Canonical form: tails absorb every center margin they would generate.
    pub fn normalize(mut self) -> BiSeq {
        while let Some(&s) = self.center.last() {
            match self.right.absorb(s) {
                Some(t) => {
                    self.right = t;
                    self.center.pop();
                }
                None => break,
            }
        }
        let mut taken = 0;
        while let Some(&s) = self.center.get(taken) {
            match self.left.absorb(s) {
                Some(t) => {
                    self.left = t;
                    taken += 1;
                }
                None => break,
            }
        }
        self.center.drain(..taken);
        self.center_lo += taken as i64;
        if self.center.is_empty() {
            if let (Tail::Constant(a), Tail::Constant(b)) = (&self.left, &self.right) {
                if a == b {
                    self.center_lo = 0;
                }
            }
        }
        self
    }

    /// All symbols of the sequence when they form a finite set.
    pub fn finite_symbol_set(&self) -> Option<Vec<Symbol>> {
        let mut out = self.center.clone();
        out.extend(self.left.finite_symbols()?);
        out.extend(self.right.finite_symbols()?);
        out.sort_unstable();
        out.dedup();
        Some(out)
    }
}

/// First position `n >= from` where `x` and `y` differ.
pub fn first_difference_right(x: &BiSeq, y: &BiSeq, from: i64) -> Option<i64> {
    let p = from.max(x.center_hi()).max(y.center_hi());
    if let Some(n) = (from..p).find(|&n| x.symbol_at(n) != y.symbol_at(n)) {
        return Some(n);
    }
    let tx = x.right.advance((p - x.center_hi()) as u64);
    let ty = y.right.advance((p - y.center_hi()) as u64);
    tail_difference(&tx, &ty).map(|d| p + d as i64)
}

/// First position `n <= from` (scanning leftward) where `x` and `y` differ.
pub fn first_difference_left(x: &BiSeq, y: &BiSeq, from: i64) -> Option<i64> {
    let p = from.min(x.center_lo - 1).min(y.center_lo - 1);
    if let Some(n) = ((p + 1)..=from)
        .rev()
        .find(|&n| x.symbol_at(n) != y.symbol_at(n))
    {
        return Some(n);
    }
    let tx = x.left.advance((x.center_lo - 1 - p) as u64);
    let ty = y.left.advance((y.center_lo - 1 - p) as u64);
    tail_difference(&tx, &ty).map(|d| p - d as i64)
}

/// Smallest distance at which two tails anchored at the same position differ.
fn tail_difference(a: &Tail, b: &Tail) -> Option<u64> {
    let horizon = match (a.period(), b.period()) {
        (Some(p), Some(q)) => p.lcm(&q) as u64,
        // two points fix an arithmetic progression
        (None, None) => 2,
        // a progression with nonzero step never repeats, a periodic tail does
        (Some(p), None) | (None, Some(p)) => p as u64 + 1,
    };
    (0..horizon).find(|&d| a.at(d) != b.at(d))
}

/// Semantic equality: same symbol at every coordinate.
pub fn seq_equal(x: &BiSeq, y: &BiSeq) -> bool {
    first_difference_right(x, y, 0).is_none() && first_difference_left(x, y, -1).is_none()
}

/// Cantor distance, kept exact: either 0 or `2^-k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Zero,
    /// `2^-k` where `k` is the smallest `|n|` with `x_n != y_n`.
    Pow2Neg(u64),
}

impl Distance {
    /// 0 or 1.
    pub fn mantissa(&self) -> u8 {
        match self {
            Distance::Zero => 0,
            Distance::Pow2Neg(_) => 1,
        }
    }

    pub fn exponent(&self) -> Option<u64> {
        match self {
            Distance::Zero => None,
            Distance::Pow2Neg(k) => Some(*k),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Distance::Zero => 0.0,
            Distance::Pow2Neg(k) => 0.5f64.powi((*k).min(i32::MAX as u64) as i32),
        }
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Zero, Distance::Zero) => Ordering::Equal,
            (Distance::Zero, _) => Ordering::Less,
            (_, Distance::Zero) => Ordering::Greater,
            (Distance::Pow2Neg(a), Distance::Pow2Neg(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Zero => write!(f, "0"),
            Distance::Pow2Neg(k) => write!(f, "2^-{k}"),
        }
    }
}

pub fn cantor_distance(x: &BiSeq, y: &BiSeq) -> Distance {
    let right = first_difference_right(x, y, 0).map(|n| n.unsigned_abs());
    let left = first_difference_left(x, y, -1).map(|n| n.unsigned_abs());
    match (right, left) {
        (None, None) => Distance::Zero,
        (Some(a), Some(b)) => Distance::Pow2Neg(a.min(b)),
        (Some(k), None) | (None, Some(k)) => Distance::Pow2Neg(k),
    }
}

impl fmt::Display for BiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "left={};center@{}={};right={}",
            self.left,
            self.center_lo,
            format_word(&self.center),
            self.right
        )
    }
}

impl FromStr for BiSeq {
    type Err = BiSeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut left = None;
        let mut right = None;
        let mut center = None;
        for part in s.trim().split(';') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| parse_err(part, "expected `key=value`"))?;
            let key = key.trim();
            if key == "left" {
                left = Some(value.parse::<Tail>()?);
            } else if key == "right" {
                right = Some(value.parse::<Tail>()?);
            } else if let Some(lo) = key.strip_prefix("center@") {
                let lo: i64 = lo
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(part, "bad center offset"))?;
                let v = value.trim();
                if !(v.starts_with('[') && v.ends_with(']')) {
                    return Err(parse_err(part, "center must be bracketed"));
                }
                center = Some((lo, parse_word(v)?));
            } else {
                return Err(parse_err(part, format!("unknown key `{key}`")));
            }
        }
        let left = left.ok_or_else(|| parse_err(s, "missing left tail"))?;
        let right = right.ok_or_else(|| parse_err(s, "missing right tail"))?;
        let (lo, center) = center.ok_or_else(|| parse_err(s, "missing center"))?;
        Ok(BiSeq::new(left, lo, center, right))
    }
}
