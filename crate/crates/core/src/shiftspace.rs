//! Shift-space descriptions, membership, bounded language enumeration and
//! follower/predecessor probes.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::arre_invert;
use crate::biseq::{format_word, parse_word, BiSeq, Symbol, Tail, Word};
use crate::cylinder::FinMap;

/// Search bound used when membership in the arre image needs chain solving.
pub const DEFAULT_NMAX: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("symbol {0} is outside the alphabet")]
    SymbolOutsideAlphabet(Symbol),
    #[error("arithmetic tail cannot live over a finite alphabet")]
    UnboundedOverFinite,
    #[error("finite alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("symbol {0} listed twice in the alphabet")]
    DuplicateSymbol(Symbol),
    #[error("forbidden words must be nonempty")]
    EmptyForbiddenWord,
    #[error("block length must be at least 1")]
    ZeroLength,
    #[error("symbol {0} is not an allowed 1-block")]
    NotAllowed(Symbol),
    #[error("cannot parse shift space `{0}`")]
    Parse(String),
    #[error(transparent)]
    Arre(#[from] Box<arre_invert::ArreError>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphabetSpec {
    Finite(Vec<Symbol>),
    Naturals,
    /// Output alphabet for integer-valued images.
    Integers,
}

impl AlphabetSpec {
    pub fn finite(symbols: Vec<Symbol>) -> Result<AlphabetSpec, SpaceError> {
        if symbols.is_empty() {
            return Err(SpaceError::EmptyAlphabet);
        }
        let mut seen = HashSet::new();
        for &s in &symbols {
            if !seen.insert(s) {
                return Err(SpaceError::DuplicateSymbol(s));
            }
        }
        Ok(AlphabetSpec::Finite(symbols))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, AlphabetSpec::Finite(_))
    }

    pub fn contains(&self, s: Symbol) -> bool {
        match self {
            AlphabetSpec::Finite(list) => list.contains(&s),
            AlphabetSpec::Naturals => s >= 0,
            AlphabetSpec::Integers => true,
        }
    }

    /// Symbols considered by bounded searches.
    pub fn candidates(&self, bound: Symbol) -> Vec<Symbol> {
        match self {
            AlphabetSpec::Finite(list) => list.clone(),
            AlphabetSpec::Naturals => (0..=bound.max(0)).collect(),
            AlphabetSpec::Integers => (-bound.abs()..=bound.abs()).collect(),
        }
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<(), SpaceError> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(SpaceError::SymbolOutsideAlphabet(s))
        }
    }

    fn check_tail(&self, t: &Tail) -> Result<(), SpaceError> {
        match t {
            Tail::Constant(c) => self.check_symbol(*c),
            Tail::Periodic(w) => w.iter().try_for_each(|&s| self.check_symbol(s)),
            Tail::Arithmetic { start, step } => match self {
                AlphabetSpec::Finite(_) => Err(SpaceError::UnboundedOverFinite),
                AlphabetSpec::Naturals if *step < 0 => {
                    // eventually negative
                    Err(SpaceError::SymbolOutsideAlphabet(
                        start + step * (start / -step + 1),
                    ))
                }
                _ => self.check_symbol(*start),
            },
        }
    }

    pub fn check_seq(&self, x: &BiSeq) -> Result<(), SpaceError> {
        x.center().iter().try_for_each(|&s| self.check_symbol(s))?;
        self.check_tail(x.left())?;
        self.check_tail(x.right())
    }
}

impl fmt::Display for AlphabetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetSpec::Finite(list) => write!(f, "fin{}", format_word(list)),
            AlphabetSpec::Naturals => write!(f, "nat"),
            AlphabetSpec::Integers => write!(f, "int"),
        }
    }
}

impl FromStr for AlphabetSpec {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "nat" => Ok(AlphabetSpec::Naturals),
            "int" => Ok(AlphabetSpec::Integers),
            _ => {
                let list = t
                    .strip_prefix("fin")
                    .ok_or_else(|| SpaceError::Parse(s.to_string()))?;
                let list = parse_word(list).map_err(|_| SpaceError::Parse(s.to_string()))?;
                AlphabetSpec::finite(list)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltIn {
    /// Injective sequences over N in which 0 appears.
    InjectiveWithZero,
    /// The image of N^Z under `x_n + 2 x_{n+1}`.
    ArreImage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceKind {
    FullShift,
    ForbiddenBlocks(Vec<Word>),
    BuiltIn(BuiltIn),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSpaceSpec {
    pub alphabet: AlphabetSpec,
    pub kind: SpaceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    Unknown,
}

impl Membership {
    pub fn is_member(self) -> Option<bool> {
        match self {
            Membership::Member => Some(true),
            Membership::NotMember => Some(false),
            Membership::Unknown => None,
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Member => "member",
            Membership::NotMember => "not-member",
            Membership::Unknown => "unknown",
        })
    }
}

fn contains_factor(w: &[Symbol], forbidden: &[Word]) -> bool {
    forbidden
        .iter()
        .any(|f| f.len() <= w.len() && w.windows(f.len()).any(|win| win == f.as_slice()))
}

/// Distance into an arithmetic tail after which every symbol lies outside `[lo, hi]`.
fn escape_distance(start: Symbol, step: Symbol, lo: Symbol, hi: Symbol) -> i64 {
    if step > 0 {
        if start > hi {
            0
        } else {
            (hi - start) / step + 1
        }
    } else if start < lo {
        0
    } else {
        (start - lo) / (-step) + 1
    }
}

impl ShiftSpaceSpec {
    pub fn full(alphabet: AlphabetSpec) -> ShiftSpaceSpec {
        ShiftSpaceSpec {
            alphabet,
            kind: SpaceKind::FullShift,
        }
    }

    pub fn full_naturals() -> ShiftSpaceSpec {
        ShiftSpaceSpec::full(AlphabetSpec::Naturals)
    }

    pub fn forbidden(
        alphabet: AlphabetSpec,
        words: Vec<Word>,
    ) -> Result<ShiftSpaceSpec, SpaceError> {
        for w in &words {
            if w.is_empty() {
                return Err(SpaceError::EmptyForbiddenWord);
            }
            w.iter().try_for_each(|&s| alphabet.check_symbol(s))?;
        }
        Ok(ShiftSpaceSpec {
            alphabet,
            kind: SpaceKind::ForbiddenBlocks(words),
        })
    }

    pub fn injective_with_zero() -> ShiftSpaceSpec {
        ShiftSpaceSpec {
            alphabet: AlphabetSpec::Naturals,
            kind: SpaceKind::BuiltIn(BuiltIn::InjectiveWithZero),
        }
    }

    pub fn arre_image() -> ShiftSpaceSpec {
        ShiftSpaceSpec {
            alphabet: AlphabetSpec::Naturals,
            kind: SpaceKind::BuiltIn(BuiltIn::ArreImage),
        }
    }

    pub fn member(&self, x: &BiSeq) -> Result<Membership, SpaceError> {
        self.member_with_bound(x, DEFAULT_NMAX)
    }

    /// Membership; `n_max` bounds the chain search used for the arre image.
    pub fn member_with_bound(&self, x: &BiSeq, n_max: usize) -> Result<Membership, SpaceError> {
        self.alphabet.check_seq(x)?;
        let yes = |b: bool| {
            if b {
                Membership::Member
            } else {
                Membership::NotMember
            }
        };
        match &self.kind {
            SpaceKind::FullShift => Ok(Membership::Member),
            SpaceKind::ForbiddenBlocks(words) => Ok(yes(!forbidden_occurs(x, words))),
            SpaceKind::BuiltIn(BuiltIn::InjectiveWithZero) => Ok(yes(injective_with_zero(x))),
            SpaceKind::BuiltIn(BuiltIn::ArreImage) => {
                arre_invert::membership(x, n_max).map_err(|e| SpaceError::Arre(Box::new(e)))
            }
        }
    }

    /// Whether a single block is in the language.
    pub fn allows(&self, w: &[Symbol]) -> Result<bool, SpaceError> {
        Ok(self.oracle().allows(w))
    }

    fn oracle(&self) -> BlockOracle<'_> {
        match &self.kind {
            SpaceKind::ForbiddenBlocks(words) => match &self.alphabet {
                AlphabetSpec::Finite(list) => BlockOracle::finite_sft(list, words),
                _ => BlockOracle::Forbidden(&self.alphabet, words),
            },
            SpaceKind::FullShift => BlockOracle::Full(&self.alphabet),
            SpaceKind::BuiltIn(BuiltIn::InjectiveWithZero) => BlockOracle::Injective,
            SpaceKind::BuiltIn(BuiltIn::ArreImage) => BlockOracle::Arre,
        }
    }

    /// `L_n(X)` restricted to symbols `<= symbol_bound` (all symbols over a
    /// finite alphabet).
    pub fn allowed_blocks(
        &self,
        n: usize,
        symbol_bound: Symbol,
    ) -> Result<BTreeSet<Word>, SpaceError> {
        if n == 0 {
            return Err(SpaceError::ZeroLength);
        }
        let symbols = self.alphabet.candidates(symbol_bound);
        let oracle = self.oracle();
        Ok((0..n)
            .map(|_| symbols.iter().copied())
            .multi_cartesian_product()
            .filter(|w| oracle.allows(w))
            .collect())
    }

    /// `{b : ab ∈ L(X)}` up to the bound, with a flag telling whether the
    /// listing is provably the whole set.
    pub fn follower_set(&self, a: Symbol, symbol_bound: Symbol) -> Result<NeighborSet, SpaceError> {
        self.neighbors(a, symbol_bound, true)
    }

    /// `{b : ba ∈ L(X)}` up to the bound.
    pub fn predecessor_set(
        &self,
        a: Symbol,
        symbol_bound: Symbol,
    ) -> Result<NeighborSet, SpaceError> {
        self.neighbors(a, symbol_bound, false)
    }

    fn neighbors(
        &self,
        a: Symbol,
        bound: Symbol,
        forward: bool,
    ) -> Result<NeighborSet, SpaceError> {
        let oracle = self.oracle();
        if !self.alphabet.contains(a) || !oracle.allows(&[a]) {
            return Err(SpaceError::NotAllowed(a));
        }
        let symbols = self
            .alphabet
            .candidates(bound)
            .into_iter()
            .filter(|&b| {
                let w = if forward { [a, b] } else { [b, a] };
                oracle.allows(&w)
            })
            .collect();
        Ok(NeighborSet {
            symbols,
            exhaustive: self.alphabet.is_finite(),
        })
    }

    pub fn finiteness_probe(
        &self,
        side: Side,
        symbol_bound: Symbol,
    ) -> Result<FinitenessReport, SpaceError> {
        let oracle = self.oracle();
        let wide = symbol_bound.max(0) * 2 + 1;
        let mut probes = Vec::new();
        let sides: &[bool] = match side {
            Side::Right => &[true],
            Side::Left => &[false],
            Side::Bilateral => &[true, false],
        };
        for a in self.alphabet.candidates(symbol_bound) {
            if !oracle.allows(&[a]) {
                continue;
            }
            for &forward in sides {
                let near = self.neighbors(a, symbol_bound, forward)?;
                let far = self.neighbors(a, wide, forward)?;
                probes.push(SymbolProbe {
                    symbol: a,
                    side: if forward { Side::Right } else { Side::Left },
                    count: near.symbols.len(),
                    count_wide: far.symbols.len(),
                    exhaustive: near.exhaustive,
                });
            }
        }
        let verdict = if probes.iter().all(|p| p.exhaustive) {
            FinitenessVerdict::Finite
        } else if probes.iter().any(|p| p.count_wide > p.count) {
            FinitenessVerdict::Infinite
        } else {
            FinitenessVerdict::InconclusiveAtBound
        };
        Ok(FinitenessReport {
            side,
            symbol_bound,
            probes,
            verdict,
        })
    }

    /// Disjointness certificate for `C_X(h)`: `true` when the cylinder is
    /// provably empty inside this space. `false` means "not shown empty".
    pub fn cylinder_is_empty(&self, h: &FinMap) -> bool {
        if h.iter().any(|(_, s)| !self.alphabet.contains(s)) {
            return true;
        }
        match &self.kind {
            SpaceKind::BuiltIn(BuiltIn::InjectiveWithZero) => {
                let values: Vec<_> = h.iter().map(|(_, s)| s).collect();
                values.iter().collect::<HashSet<_>>().len() < values.len()
            }
            SpaceKind::ForbiddenBlocks(words) => {
                // contiguous runs of the domain that already contain a forbidden word
                let mut run: Vec<Symbol> = Vec::new();
                let mut last: Option<i64> = None;
                for (p, s) in h.iter() {
                    if last.is_some_and(|q| q + 1 != p) {
                        if contains_factor(&run, words) {
                            return true;
                        }
                        run.clear();
                    }
                    run.push(s);
                    last = Some(p);
                }
                contains_factor(&run, words)
            }
            _ => false,
        }
    }

    /// Draws a member of `C_X(h)`, or `None` when the sampler gives up.
    pub fn sample_in_cylinder<R: Rng + ?Sized>(
        &self,
        h: &FinMap,
        rng: &mut R,
        symbol_bound: Symbol,
    ) -> Option<BiSeq> {
        let (a, b) = h.hull().unwrap_or((0, 0));
        let (lo, hi) = (a.min(0) - 3, b.max(0) + 3);
        let bound = symbol_bound.max(1);
        match &self.kind {
            SpaceKind::BuiltIn(BuiltIn::InjectiveWithZero) => {
                let mut used: HashSet<Symbol> = h.iter().map(|(_, s)| s).collect();
                if used.len() < h.len() || used.iter().any(|&s| s < 0) {
                    return None;
                }
                let free: Vec<i64> = (lo..=hi).filter(|&p| h.get(p).is_none()).collect();
                let mut center: Vec<Option<Symbol>> = (lo..=hi).map(|p| h.get(p)).collect();
                let mut fresh: Vec<Symbol> = (1..=bound + (hi - lo + 1))
                    .filter(|s| !used.contains(s))
                    .collect();
                fresh.shuffle(rng);
                let mut order = free.clone();
                order.shuffle(rng);
                if !used.contains(&0) {
                    let p = *order.first()?;
                    center[(p - lo) as usize] = Some(0);
                    used.insert(0);
                    order.remove(0);
                }
                for p in order {
                    let s = fresh.pop()?;
                    used.insert(s);
                    center[(p - lo) as usize] = Some(s);
                }
                let top = used.iter().copied().max().unwrap_or(0) + 1;
                let even = if top % 2 == 0 { top } else { top + 1 };
                let x = BiSeq::new(
                    Tail::arithmetic(even + 1, 2),
                    lo,
                    center.into_iter().map(|s| s.unwrap_or(0)).collect(),
                    Tail::arithmetic(even, 2),
                );
                (self.member(&x).ok()? == Membership::Member).then_some(x)
            }
            SpaceKind::BuiltIn(BuiltIn::ArreImage) => (0..500).find_map(|_| {
                let x = BiSeq::finite_support(
                    lo,
                    (lo..=hi).map(|_| rng.gen_range(0..=bound)).collect(),
                );
                let y = arre_invert::image(&x);
                h.contains(&y).then_some(y)
            }),
            _ => {
                let symbols = self.alphabet.candidates(bound);
                (0..200).find_map(|_| {
                    let pick = |rng: &mut R| *symbols.choose(rng).expect("nonempty alphabet");
                    let center = (lo..=hi)
                        .map(|p| h.get(p).unwrap_or_else(|| pick(rng)))
                        .collect();
                    let left = Tail::Constant(pick(rng));
                    let right = Tail::Constant(pick(rng));
                    let x = BiSeq::new(left, lo, center, right);
                    (self.member(&x).ok()? == Membership::Member).then_some(x)
                })
            }
        }
    }
}

fn forbidden_occurs(x: &BiSeq, words: &[Word]) -> bool {
    let Some(lmax) = words.iter().map(|w| w.len() as i64).max() else {
        return false;
    };
    let fmin = words.iter().flatten().copied().min().unwrap_or(0);
    let fmax = words.iter().flatten().copied().max().unwrap_or(0);
    let hi = x.center_hi();
    let lo = x.center_lo();
    // starting positions beyond these repeat (periodic tails) or hit symbols
    // that no forbidden word uses (arithmetic tails)
    let s_hi = match x.right() {
        Tail::Arithmetic { start, step } => hi + escape_distance(*start, *step, fmin, fmax) + 1,
        t => hi + t.period().unwrap_or(1) as i64 + 1,
    };
    let s_lo = match x.left() {
        Tail::Arithmetic { start, step } => {
            lo - escape_distance(*start, *step, fmin, fmax) - lmax - 1
        }
        t => lo - t.period().unwrap_or(1) as i64 - lmax - 1,
    };
    (s_lo..=s_hi).any(|s| {
        words.iter().any(|w| {
            w.iter()
                .enumerate()
                .all(|(i, &sym)| x.symbol_at(s + i as i64) == sym)
        })
    })
}

fn injective_with_zero(x: &BiSeq) -> bool {
    let (
        Tail::Arithmetic {
            start: ls,
            step: lstep,
        },
        Tail::Arithmetic {
            start: rs,
            step: rstep,
        },
    ) = (x.left(), x.right())
    else {
        // constant and periodic tails repeat symbols
        return false;
    };
    let (ls, lstep, rs, rstep) = (*ls, *lstep, *rs, *rstep);
    let in_progression = |v: Symbol, start: Symbol, step: Symbol| {
        let diff = v - start;
        diff % step == 0 && diff / step >= 0
    };
    let center = x.center();
    let distinct: HashSet<_> = center.iter().collect();
    if distinct.len() != center.len() {
        return false;
    }
    if center
        .iter()
        .any(|&v| in_progression(v, ls, lstep) || in_progression(v, rs, rstep))
    {
        return false;
    }
    // two increasing progressions meet iff their offsets agree modulo gcd
    let g = num_integer::gcd(lstep, rstep);
    if (rs - ls) % g == 0 {
        return false;
    }
    center.contains(&0) || in_progression(0, ls, lstep) || in_progression(0, rs, rstep)
}

enum BlockOracle<'a> {
    Full(&'a AlphabetSpec),
    Forbidden(&'a AlphabetSpec, &'a [Word]),
    FiniteSft {
        forbidden: &'a [Word],
        state_len: usize,
        forward_alive: HashSet<Word>,
        backward_alive: HashSet<Word>,
    },
    Injective,
    Arre,
}

impl<'a> BlockOracle<'a> {
    /// Over a finite alphabet a forbidden-free word may still be a dead end,
    /// so extendability is decided on the graph of `(k)`-blocks, keeping only
    /// states with infinite forward (resp. backward) continuations.
    fn finite_sft(alphabet: &'a [Symbol], forbidden: &'a [Word]) -> BlockOracle<'a> {
        let lmax = forbidden.iter().map(Vec::len).max().unwrap_or(1);
        let k = lmax.saturating_sub(1).max(1);
        let states: Vec<Word> = (0..k)
            .map(|_| alphabet.iter().copied())
            .multi_cartesian_product()
            .filter(|w| !contains_factor(w, forbidden))
            .collect();
        let successors = |s: &Word| -> Vec<Word> {
            alphabet
                .iter()
                .filter_map(|&b| {
                    let mut edge = s.clone();
                    edge.push(b);
                    (!contains_factor(&edge, forbidden)).then(|| edge[1..].to_vec())
                })
                .collect()
        };
        let predecessors = |s: &Word| -> Vec<Word> {
            alphabet
                .iter()
                .filter_map(|&b| {
                    let mut edge = vec![b];
                    edge.extend_from_slice(s);
                    (!contains_factor(&edge, forbidden)).then(|| edge[..k].to_vec())
                })
                .collect()
        };
        let prune = |step: &dyn Fn(&Word) -> Vec<Word>| -> HashSet<Word> {
            let mut alive: HashSet<Word> = states.iter().cloned().collect();
            loop {
                let before = alive.len();
                alive = alive
                    .iter()
                    .filter(|s| step(s).iter().any(|t| alive.contains(t)))
                    .cloned()
                    .collect();
                if alive.len() == before {
                    return alive;
                }
            }
        };
        let forward_alive = prune(&successors);
        let backward_alive = prune(&predecessors);
        BlockOracle::FiniteSft {
            forbidden,
            state_len: k,
            forward_alive,
            backward_alive,
        }
    }

    fn allows(&self, w: &[Symbol]) -> bool {
        match self {
            BlockOracle::Full(alphabet) => w.iter().all(|&s| alphabet.contains(s)),
            // padding with a symbol larger than every forbidden symbol extends
            // any forbidden-free word to a point
            BlockOracle::Forbidden(alphabet, forbidden) => {
                w.iter().all(|&s| alphabet.contains(s)) && !contains_factor(w, forbidden)
            }
            BlockOracle::FiniteSft {
                forbidden,
                state_len,
                forward_alive,
                backward_alive,
            } => {
                let k = *state_len;
                if contains_factor(w, forbidden) {
                    return false;
                }
                if w.len() >= k {
                    backward_alive.contains(&w[..k]) && forward_alive.contains(&w[w.len() - k..])
                } else {
                    forward_alive.iter().any(|s| {
                        backward_alive.contains(s) && s.windows(w.len()).any(|win| win == w)
                    })
                }
            }
            BlockOracle::Injective => {
                w.iter().all(|&s| s >= 0) && w.iter().collect::<HashSet<_>>().len() == w.len()
            }
            BlockOracle::Arre => w.iter().all(|&s| s >= 0) && arre_invert::chain_solvable(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSet {
    pub symbols: BTreeSet<Symbol>,
    /// The listing is the complete set, not a truncation at the bound.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
    Bilateral,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
            Side::Bilateral => "bilateral",
        })
    }
}

impl FromStr for Side {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "right" => Ok(Side::Right),
            "left" => Ok(Side::Left),
            "bilateral" => Ok(Side::Bilateral),
            _ => Err(SpaceError::Parse(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinitenessVerdict {
    Finite,
    /// Some follower (or predecessor) count kept growing with the bound.
    Infinite,
    InconclusiveAtBound,
}

impl fmt::Display for FinitenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FinitenessVerdict::Finite => "finite",
            FinitenessVerdict::Infinite => "infinite",
            FinitenessVerdict::InconclusiveAtBound => "inconclusive-at-bound",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolProbe {
    pub symbol: Symbol,
    pub side: Side,
    pub count: usize,
    /// Count at the widened bound `2B + 1`.
    pub count_wide: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitenessReport {
    pub side: Side,
    pub symbol_bound: Symbol,
    pub probes: Vec<SymbolProbe>,
    pub verdict: FinitenessVerdict,
}

impl fmt::Display for FinitenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.probes {
            writeln!(
                f,
                "side={} symbol={} count={} count_wide={} exhaustive={}",
                p.side, p.symbol, p.count, p.count_wide, p.exhaustive
            )?;
        }
        write!(f, "verdict={}", self.verdict)
    }
}

impl fmt::Display for ShiftSpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpaceKind::FullShift => write!(f, "full:{}", self.alphabet),
            SpaceKind::ForbiddenBlocks(words) => {
                let body = words.iter().map(|w| format_word(w)).join(",");
                write!(f, "forbid:{}{{{}}}", self.alphabet, body)
            }
            SpaceKind::BuiltIn(BuiltIn::InjectiveWithZero) => {
                write!(f, "builtin:injective-with-zero")
            }
            SpaceKind::BuiltIn(BuiltIn::ArreImage) => write!(f, "builtin:arre-image"),
        }
    }
}

impl FromStr for ShiftSpaceSpec {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpaceError::Parse(s.to_string());
        let t = s.trim();
        let (kind, body) = t.split_once(':').ok_or_else(bad)?;
        match kind {
            "full" => Ok(ShiftSpaceSpec::full(body.parse()?)),
            "builtin" => match body {
                "injective-with-zero" => Ok(ShiftSpaceSpec::injective_with_zero()),
                "arre-image" => Ok(ShiftSpaceSpec::arre_image()),
                _ => Err(bad()),
            },
            "forbid" => {
                let (alpha, rest) = body.split_once('{').ok_or_else(bad)?;
                let rest = rest.strip_suffix('}').ok_or_else(bad)?;
                let alphabet: AlphabetSpec = alpha.parse()?;
                let mut words = Vec::new();
                let mut rest = rest.trim();
                while !rest.is_empty() {
                    let rest_open = rest.strip_prefix('[').ok_or_else(bad)?;
                    let (inner, after) = rest_open.split_once(']').ok_or_else(bad)?;
                    words.push(parse_word(inner).map_err(|_| bad())?);
                    rest = after.trim_start().trim_start_matches(',').trim_start();
                }
                ShiftSpaceSpec::forbidden(alphabet, words)
            }
            _ => Err(bad()),
        }
    }
}
