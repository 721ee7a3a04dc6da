//! Shift morphisms: windowed sliding block codes, barrier rules and the
//! data-dependent rules whose windows are read off the input itself.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::biseq::{format_word, parse_symbol, seq_equal, BiSeq, Symbol, Tail, Word};
use crate::cylinder::FinMap;
use crate::shiftspace::{AlphabetSpec, Membership, ShiftSpaceSpec, SpaceError};

/// Cap on the number of cells a single enumeration may produce.
pub const MAX_CELLS: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("empty interval [{0},{1}]")]
    BadInterval(i64, i64),
    #[error("input {0} is not in the domain space")]
    InputNotInSpace(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("no listed cylinder contains the point read from position {position}")]
    NoCylinder { position: i64 },
    #[error("{count} listed cylinders contain the point read from position {position}")]
    AmbiguousCylinder { position: i64, count: usize },
    #[error("input has no zero")]
    NoZero,
    #[error("input has more than one zero")]
    MultipleZeros,
    #[error("negative symbol {symbol} at {position} cannot size a window")]
    NegativeSymbol { position: i64, symbol: Symbol },
    #[error("no table entry for window {0}")]
    MissingTableEntry(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("cannot widen window ({memory},{anticipation}) to ({new_memory},{new_anticipation})")]
    NarrowerWindow {
        memory: usize,
        anticipation: usize,
        new_memory: usize,
        new_anticipation: usize,
    },
    #[error("enumeration would produce {0} cells")]
    TooLarge(u128),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

type Result<T> = std::result::Result<T, MorphismError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalRule {
    /// `φ(w) = Σ c_i w_i`.
    Linear(Vec<Symbol>),
    Table(BTreeMap<Word, Symbol>),
}

/// `Φ(x)_i = φ(x|[i-m, i+n])`. After widening, `φ` still reads only its
/// original core window `[-core_memory, core_anticipation]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedRule {
    memory: usize,
    anticipation: usize,
    core_memory: usize,
    core_anticipation: usize,
    local: LocalRule,
}

impl WindowedRule {
    pub fn new(memory: usize, anticipation: usize, local: LocalRule) -> Result<WindowedRule> {
        let width = memory + anticipation + 1;
        let ok = match &local {
            LocalRule::Linear(c) => c.len() == width,
            LocalRule::Table(t) => !t.is_empty() && t.keys().all(|w| w.len() == width),
        };
        if !ok {
            return Err(MorphismError::InvalidRule(format!(
                "local rule does not match window width {width}"
            )));
        }
        Ok(WindowedRule {
            memory,
            anticipation,
            core_memory: memory,
            core_anticipation: anticipation,
            local,
        })
    }

    /// `φ(uv) = u + 2v` with memory 0 and anticipation 1.
    pub fn arre() -> WindowedRule {
        WindowedRule::new(0, 1, LocalRule::Linear(vec![1, 2])).expect("well-formed")
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    pub fn width(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    pub fn local(&self) -> &LocalRule {
        &self.local
    }

    /// Relative positions of the core window.
    pub fn core_offsets(&self) -> std::ops::RangeInclusive<i64> {
        -(self.core_memory as i64)..=self.core_anticipation as i64
    }

    fn core<'a>(&self, window: &'a [Symbol]) -> &'a [Symbol] {
        let start = self.memory - self.core_memory;
        &window[start..start + self.core_memory + self.core_anticipation + 1]
    }

    /// `φ` applied to a full window of length `m + n + 1`.
    pub fn apply(&self, window: &[Symbol]) -> Result<Symbol> {
        if window.len() != self.width() {
            return Err(MorphismError::InvalidRule(format!(
                "window of length {} for width {}",
                window.len(),
                self.width()
            )));
        }
        let core = self.core(window);
        match &self.local {
            LocalRule::Linear(c) => Ok(c.iter().zip(core).map(|(a, b)| a * b).sum()),
            LocalRule::Table(t) => t
                .get(core)
                .copied()
                .ok_or_else(|| MorphismError::MissingTableEntry(format_word(core))),
        }
    }

    /// Same code presented with memory `new_memory` and anticipation `new_anticipation`.
    pub fn widen(&self, new_memory: usize, new_anticipation: usize) -> Result<WindowedRule> {
        if new_memory < self.memory || new_anticipation < self.anticipation {
            return Err(MorphismError::NarrowerWindow {
                memory: self.memory,
                anticipation: self.anticipation,
                new_memory,
                new_anticipation,
            });
        }
        Ok(WindowedRule {
            memory: new_memory,
            anticipation: new_anticipation,
            ..self.clone()
        })
    }

    /// Parses a table: one `word -> symbol` per line, `#` comments, and an
    /// optional `# memory=<m> anticipation=<n>` header.
    pub fn parse_table(text: &str) -> Result<WindowedRule> {
        let mut memory = None;
        let mut anticipation = None;
        let mut table = BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                for token in comment.split_whitespace() {
                    if let Some(v) = token.strip_prefix("memory=") {
                        memory = Some(v.parse().map_err(|_| MorphismError::Parse(line.into()))?);
                    } else if let Some(v) = token.strip_prefix("anticipation=") {
                        anticipation =
                            Some(v.parse().map_err(|_| MorphismError::Parse(line.into()))?);
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let (w, v) = line
                .split_once("->")
                .ok_or_else(|| MorphismError::Parse(line.into()))?;
            let w = w.trim().trim_start_matches('[').trim_end_matches(']');
            let w = w
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(parse_symbol)
                .collect::<std::result::Result<Word, _>>()
                .map_err(|_| MorphismError::Parse(line.into()))?;
            let v = parse_symbol(v).map_err(|_| MorphismError::Parse(line.into()))?;
            if table.insert(w, v).is_some() {
                return Err(MorphismError::Parse(format!("duplicate entry `{line}`")));
            }
        }
        let width = table
            .keys()
            .next()
            .map(Vec::len)
            .ok_or_else(|| MorphismError::InvalidRule("empty table".into()))?;
        let memory = memory.unwrap_or(0);
        let anticipation = anticipation.unwrap_or(width.saturating_sub(memory + 1));
        WindowedRule::new(memory, anticipation, LocalRule::Table(table))
    }
}

/// A finite list of cylinders with one output value each, read at coordinate 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrierRule {
    cells: Vec<(FinMap, Symbol)>,
    default: Option<Symbol>,
}

impl BarrierRule {
    pub fn new(cells: Vec<(FinMap, Symbol)>) -> BarrierRule {
        BarrierRule {
            cells,
            default: None,
        }
    }

    pub fn with_default(mut self, value: Symbol) -> BarrierRule {
        self.default = Some(value);
        self
    }

    pub fn cells(&self) -> &[(FinMap, Symbol)] {
        &self.cells
    }

    pub fn default_value(&self) -> Option<Symbol> {
        self.default
    }

    /// Largest `|p|` over all cell domains.
    pub fn reach(&self) -> i64 {
        self.cells
            .iter()
            .flat_map(|(h, _)| h.domain())
            .map(i64::abs)
            .max()
            .unwrap_or(0)
    }

    /// First pair of listed cells not shown disjoint inside `space`.
    pub fn overlapping_pair(&self, space: &ShiftSpaceSpec) -> Option<(usize, usize)> {
        (0..self.cells.len()).tuple_combinations().find(|&(i, j)| {
            match self.cells[i].0.join_with(&self.cells[j].0) {
                Err(_) => false,
                Ok(joined) => !space.cylinder_is_empty(&joined),
            }
        })
    }

    fn value_partial(
        &self,
        position: i64,
        lookup: &dyn Fn(i64) -> Option<Symbol>,
    ) -> Result<Option<Symbol>> {
        let shifted = |p: i64| lookup(p + position);
        let mut hits = Vec::new();
        let mut undecided = false;
        for (h, v) in &self.cells {
            match h.contains_partial(&shifted) {
                Some(true) => hits.push(*v),
                Some(false) => {}
                None => undecided = true,
            }
        }
        match (hits.len(), undecided) {
            (n, _) if n >= 2 => Err(MorphismError::AmbiguousCylinder { position, count: n }),
            (_, true) => Ok(None),
            (1, false) => Ok(Some(hits[0])),
            _ => self
                .default
                .map(Some)
                .ok_or(MorphismError::NoCylinder { position }),
        }
    }

    fn locate(&self, z: &BiSeq) -> Result<(FinMap, Symbol)> {
        let found: Vec<_> = self.cells.iter().filter(|(h, _)| h.contains(z)).collect();
        match found.as_slice() {
            [one] => Ok((*one).clone()),
            [] => Err(MorphismError::NoCylinder { position: 0 }),
            many => Err(MorphismError::AmbiguousCylinder {
                position: 0,
                count: many.len(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataDependent {
    /// `Φ(x)_n = Σ_{|j| <= x_n} x_{n+j}`.
    SumWindow,
    /// `Ψ(x)_j = x_{j - x_j} + x_{j + x_j}`.
    TwoPoint,
    /// `Ψ(x)_n = 0(x) - n`, where `0(x)` is the position of the unique zero.
    ZeroLocator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Windowed(WindowedRule),
    Barrier(BarrierRule),
    Data(DataDependent),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub rule: Rule,
    pub input: ShiftSpaceSpec,
    pub output: AlphabetSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FullImage {
    Full(BiSeq),
    /// Tails of the image are not representable; use window evaluation.
    WindowOnly,
}

/// Position of the unique zero of `x`.
pub fn zero_position(x: &BiSeq) -> Result<i64> {
    let lo = x.center_lo();
    let hi = x.center_hi();
    let mut zeros: Vec<i64> = x
        .center()
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == 0)
        .map(|(i, _)| lo + i as i64)
        .collect();
    let tail_zero = |t: &Tail| -> Result<Option<i64>> {
        match t {
            Tail::Arithmetic { start, step } => {
                let d = -start;
                Ok((d % step == 0 && d / step >= 0).then(|| d / step))
            }
            t if t.period_word().is_some_and(|w| w.contains(&0)) => {
                Err(MorphismError::MultipleZeros)
            }
            _ => Ok(None),
        }
    };
    if let Some(d) = tail_zero(x.left())? {
        zeros.push(lo - 1 - d);
    }
    if let Some(d) = tail_zero(x.right())? {
        zeros.push(hi + d);
    }
    match zeros.as_slice() {
        [z] => Ok(*z),
        [] => Err(MorphismError::NoZero),
        _ => Err(MorphismError::MultipleZeros),
    }
}

fn window_size(position: i64, symbol: Symbol) -> Result<i64> {
    if symbol < 0 {
        Err(MorphismError::NegativeSymbol { position, symbol })
    } else {
        Ok(symbol)
    }
}

/// The sequence `n ↦ z - n`.
fn descending_from(z: i64) -> BiSeq {
    BiSeq::new(Tail::arithmetic(1, 1), z, vec![0], Tail::arithmetic(-1, -1))
}

impl Morphism {
    pub fn arre() -> Morphism {
        Morphism {
            rule: Rule::Windowed(WindowedRule::arre()),
            input: ShiftSpaceSpec::full_naturals(),
            output: AlphabetSpec::Naturals,
        }
    }

    pub fn sum_window() -> Morphism {
        Morphism {
            rule: Rule::Data(DataDependent::SumWindow),
            input: ShiftSpaceSpec::full_naturals(),
            output: AlphabetSpec::Naturals,
        }
    }

    pub fn two_point() -> Morphism {
        Morphism {
            rule: Rule::Data(DataDependent::TwoPoint),
            input: ShiftSpaceSpec::full_naturals(),
            output: AlphabetSpec::Naturals,
        }
    }

    pub fn zero_locator() -> Morphism {
        Morphism {
            rule: Rule::Data(DataDependent::ZeroLocator),
            input: ShiftSpaceSpec::injective_with_zero(),
            output: AlphabetSpec::Integers,
        }
    }

    /// Windowed morphism on the full shift over the symbols its table reads.
    pub fn windowed(rule: WindowedRule) -> Morphism {
        let input = match rule.local() {
            LocalRule::Table(t) => {
                let symbols: BTreeSet<Symbol> = t.keys().flatten().copied().collect();
                ShiftSpaceSpec::full(AlphabetSpec::Finite(symbols.into_iter().collect()))
            }
            LocalRule::Linear(_) => ShiftSpaceSpec::full_naturals(),
        };
        Morphism {
            rule: Rule::Windowed(rule),
            input,
            output: AlphabetSpec::Integers,
        }
    }

    pub fn barrier(rule: BarrierRule, input: ShiftSpaceSpec) -> Morphism {
        Morphism {
            rule: Rule::Barrier(rule),
            input,
            output: AlphabetSpec::Integers,
        }
    }

    /// Built-in rule by name: `arre`, `sum-window`, `two-point`, `zero-locator`.
    pub fn named(name: &str) -> Result<Morphism> {
        match name.trim() {
            "arre" => Ok(Morphism::arre()),
            "sum-window" => Ok(Morphism::sum_window()),
            "two-point" => Ok(Morphism::two_point()),
            "zero-locator" => Ok(Morphism::zero_locator()),
            other => Err(MorphismError::Parse(other.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match &self.rule {
            Rule::Windowed(r) if *r == WindowedRule::arre() => "arre".into(),
            Rule::Windowed(r) => format!("windowed(m={},n={})", r.memory, r.anticipation),
            Rule::Barrier(b) => format!("barrier({} cells)", b.cells.len()),
            Rule::Data(DataDependent::SumWindow) => "sum-window".into(),
            Rule::Data(DataDependent::TwoPoint) => "two-point".into(),
            Rule::Data(DataDependent::ZeroLocator) => "zero-locator".into(),
        }
    }

    fn check_input(&self, x: &BiSeq) -> Result<()> {
        match self.input.member(x)? {
            Membership::NotMember => Err(MorphismError::InputNotInSpace(x.to_string())),
            _ => Ok(()),
        }
    }

    /// Coordinate `i` of the image of a partially known point; `None` when
    /// the known symbols do not determine it yet.
    pub fn coordinate_partial(
        &self,
        i: i64,
        lookup: &dyn Fn(i64) -> Option<Symbol>,
    ) -> Result<Option<Symbol>> {
        match &self.rule {
            Rule::Windowed(r) => {
                let lo = i - r.memory as i64;
                let window: Option<Word> = (0..r.width() as i64).map(|d| lookup(lo + d)).collect();
                window.map(|w| r.apply(&w)).transpose()
            }
            Rule::Barrier(b) => b.value_partial(i, lookup),
            Rule::Data(DataDependent::SumWindow) => {
                let Some(c) = lookup(i) else { return Ok(None) };
                let c = window_size(i, c)?;
                Ok((-c..=c).map(|j| lookup(i + j)).sum::<Option<Symbol>>())
            }
            Rule::Data(DataDependent::TwoPoint) => {
                let Some(c) = lookup(i) else { return Ok(None) };
                let c = window_size(i, c)?;
                Ok(lookup(i - c).zip(lookup(i + c)).map(|(a, b)| a + b))
            }
            Rule::Data(DataDependent::ZeroLocator) => Err(MorphismError::Unsupported(
                "zero-locator coordinates depend on the whole sequence".into(),
            )),
        }
    }

    fn coordinate(&self, x: &BiSeq, i: i64) -> Result<Symbol> {
        self.coordinate_partial(i, &|p| Some(x.symbol_at(p)))?
            .ok_or_else(|| MorphismError::Unsupported("coordinate left undetermined".into()))
    }

    /// `Ψ(x)|[a, b]`.
    pub fn eval_window(&self, x: &BiSeq, a: i64, b: i64) -> Result<Word> {
        if a > b {
            return Err(MorphismError::BadInterval(a, b));
        }
        self.check_input(x)?;
        if let Rule::Data(DataDependent::ZeroLocator) = self.rule {
            let z = zero_position(x)?;
            return Ok((a..=b).map(|n| z - n).collect());
        }
        (a..=b).map(|i| self.coordinate(x, i)).collect()
    }

    /// `Ψ(x)` as a tail-represented sequence when the tails of `x` allow it.
    pub fn eval_full(&self, x: &BiSeq) -> Result<FullImage> {
        self.check_input(x)?;
        let word_max = |t: &Tail| t.period_word().map(|w| w.into_iter().max().unwrap_or(0));
        // how far back (right tail) and forward (left tail) a coordinate deep
        // inside a tail can read
        let (back, forward, affine) = match &self.rule {
            Rule::Data(DataDependent::ZeroLocator) => {
                return Ok(FullImage::Full(descending_from(zero_position(x)?)))
            }
            Rule::Windowed(r) => (
                Some(r.memory as i64),
                Some(r.anticipation as i64),
                matches!(r.local, LocalRule::Linear(_)),
            ),
            Rule::Barrier(b) => (Some(b.reach()), Some(b.reach()), false),
            Rule::Data(_) => (word_max(x.right()), word_max(x.left()), false),
        };
        let (Some(back), Some(forward)) = (back, forward) else {
            return Ok(FullImage::WindowOnly);
        };
        let s_r = x.center_hi() + back;
        let s_l = x.center_lo() - 1 - forward;
        let Some(right) = self.image_tail(x, x.right(), s_r, 1, affine)? else {
            return Ok(FullImage::WindowOnly);
        };
        let Some(left) = self.image_tail(x, x.left(), s_l, -1, affine)? else {
            return Ok(FullImage::WindowOnly);
        };
        let center = (s_l + 1..s_r)
            .map(|i| self.coordinate(x, i))
            .collect::<Result<Word>>()?;
        Ok(FullImage::Full(BiSeq::new(left, s_l + 1, center, right)))
    }

    /// Output tail starting at `start` and read in direction `dir`.
    fn image_tail(
        &self,
        x: &BiSeq,
        input: &Tail,
        start: i64,
        dir: i64,
        affine: bool,
    ) -> Result<Option<Tail>> {
        let at = |d: i64| self.coordinate(x, start + dir * d);
        if let Some(p) = input.period() {
            let p = p as i64;
            let word = (0..p).map(at).collect::<Result<Word>>()?;
            let again = (p..2 * p).map(at).collect::<Result<Word>>()?;
            if word != again {
                return Err(MorphismError::Unsupported(
                    "image tail did not stabilize".into(),
                ));
            }
            return Ok(Some(Tail::periodic(word).expect("nonempty period")));
        }
        if !affine {
            return Ok(None);
        }
        let (v0, v1, v2) = (at(0)?, at(1)?, at(2)?);
        if v2 - v1 != v1 - v0 {
            return Err(MorphismError::Unsupported(
                "image tail is not affine".into(),
            ));
        }
        Ok(Some(Tail::arithmetic(v0, v1 - v0)))
    }

    /// `Ψ(σ^k x)|[a,b] = Ψ(x)|[a+k, b+k]`.
    pub fn check_shift_commuting(&self, x: &BiSeq, k: i64, a: i64, b: i64) -> Result<bool> {
        Ok(self.eval_window(&x.shift(k), a, b)? == self.eval_window(x, a + k, b + k)?)
    }
}

/// Minimal attached cells of a coordinate function, as used by the lemma
/// machinery: `cell(z)` is the barrier cylinder containing `z` (read at
/// coordinate 0) together with the value it assigns.
pub trait CellLocator {
    fn cell(&self, z: &BiSeq) -> Result<(FinMap, Symbol)>;
    /// Whether the barrier has finitely many cells per output value.
    fn finite_degree(&self) -> bool;
    /// A position shared by every cell domain, when one exists.
    fn common_point(&self) -> Option<i64>;
    fn describe(&self) -> String;
    /// Cells are `{0(z) ↦ 0}`: every distinguished domain is a single point.
    fn singleton_zero_cells(&self) -> bool {
        false
    }
}

impl CellLocator for Morphism {
    fn cell(&self, z: &BiSeq) -> Result<(FinMap, Symbol)> {
        let cell = match &self.rule {
            Rule::Windowed(r) => match &r.local {
                LocalRule::Linear(c) => FinMap::observe(
                    z,
                    r.core_offsets()
                        .zip(c)
                        .filter(|(_, &c)| c != 0)
                        .map(|(p, _)| p),
                ),
                LocalRule::Table(_) => FinMap::observe(z, r.core_offsets()),
            },
            Rule::Barrier(b) => return b.locate(z),
            Rule::Data(DataDependent::SumWindow) => {
                let c = window_size(0, z.symbol_at(0))?;
                FinMap::window(z, -c, c)
            }
            Rule::Data(DataDependent::TwoPoint) => {
                let c = window_size(0, z.symbol_at(0))?;
                FinMap::observe(z, [-c, 0, c].into_iter().unique())
            }
            Rule::Data(DataDependent::ZeroLocator) => {
                let p = zero_position(z)?;
                return Ok((FinMap::observe(z, [p]), p));
            }
        };
        Ok((cell, self.eval_window(z, 0, 0)?[0]))
    }

    fn finite_degree(&self) -> bool {
        match &self.rule {
            Rule::Windowed(r) => match &r.local {
                LocalRule::Linear(c) => c.iter().all(|&c| c >= 0) && c.iter().any(|&c| c > 0),
                LocalRule::Table(_) => true,
            },
            Rule::Barrier(_) => true,
            Rule::Data(DataDependent::TwoPoint) => false,
            Rule::Data(_) => true,
        }
    }

    fn common_point(&self) -> Option<i64> {
        match &self.rule {
            Rule::Windowed(r) => match &r.local {
                LocalRule::Linear(c) => r
                    .core_offsets()
                    .zip(c)
                    .find(|(_, &c)| c != 0)
                    .map(|(p, _)| p),
                LocalRule::Table(_) => Some(-(r.core_memory as i64)),
            },
            Rule::Barrier(b) => {
                let mut domains = b
                    .cells
                    .iter()
                    .map(|(h, _)| h.domain().collect::<BTreeSet<_>>());
                let first = domains.next()?;
                domains
                    .fold(first, |acc, d| acc.intersection(&d).copied().collect())
                    .into_iter()
                    .next()
            }
            Rule::Data(DataDependent::ZeroLocator) => None,
            Rule::Data(_) => Some(0),
        }
    }

    fn describe(&self) -> String {
        self.name()
    }

    fn singleton_zero_cells(&self) -> bool {
        self.rule == Rule::Data(DataDependent::ZeroLocator)
    }
}

impl CellLocator for BarrierRule {
    fn cell(&self, z: &BiSeq) -> Result<(FinMap, Symbol)> {
        self.locate(z)
    }

    fn finite_degree(&self) -> bool {
        true
    }

    fn common_point(&self) -> Option<i64> {
        Morphism::barrier(self.clone(), ShiftSpaceSpec::full_naturals()).common_point()
    }

    fn describe(&self) -> String {
        format!("barrier({} cells)", self.cells.len())
    }
}

/// Cells enumerated from a coordinate function within bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrierEnumeration {
    pub barrier: BarrierRule,
    /// Every input with symbols `<= symbol_bound` whose cell fits the domain
    /// bound is covered.
    pub complete: bool,
    /// What falls outside the bounds, when something does.
    pub gap: Option<String>,
}

impl BarrierEnumeration {
    pub fn into_complete(self) -> Result<BarrierRule> {
        match (self.complete, self.gap) {
            (true, _) => Ok(self.barrier),
            (false, gap) => Err(MorphismError::Unsupported(format!(
                "coverage failure: {}",
                gap.unwrap_or_default()
            ))),
        }
    }
}

fn all_words(len: usize, bound: Symbol) -> impl Iterator<Item = Word> {
    (0..len).map(move |_| 0..=bound).multi_cartesian_product()
}

fn guard(cells: u128) -> Result<()> {
    if cells > MAX_CELLS {
        Err(MorphismError::TooLarge(cells))
    } else {
        Ok(())
    }
}

/// The attached cells of `Ψ_0` with symbols `<= symbol_bound` and domains
/// inside `[-domain_bound, domain_bound]`.
pub fn barrier_from_coordinate(
    psi: &Morphism,
    symbol_bound: Symbol,
    domain_bound: i64,
) -> Result<BarrierEnumeration> {
    let s = symbol_bound.max(0);
    let d = domain_bound.max(0);
    let base = (s + 1) as u128;
    let fm = |pairs: Vec<(i64, Symbol)>| FinMap::from_pairs(pairs).expect("distinct positions");
    let mut cells = Vec::new();
    let (complete, gap) = match &psi.rule {
        Rule::Windowed(r) => {
            let offsets: Vec<i64> = match &r.local {
                LocalRule::Linear(c) => r
                    .core_offsets()
                    .zip(c)
                    .filter(|(_, &c)| c != 0)
                    .map(|(p, _)| p)
                    .collect(),
                LocalRule::Table(_) => r.core_offsets().collect(),
            };
            if offsets.iter().any(|p| p.abs() > d) {
                (false, Some(format!("window reaches beyond {d}")))
            } else {
                match &r.local {
                    LocalRule::Linear(c) => {
                        guard(base.saturating_pow(offsets.len() as u32))?;
                        let coefs: Vec<Symbol> = c.iter().copied().filter(|&c| c != 0).collect();
                        for w in all_words(offsets.len(), s) {
                            let v = w.iter().zip(&coefs).map(|(a, b)| a * b).sum();
                            cells.push((fm(offsets.iter().copied().zip(w).collect()), v));
                        }
                        (true, None)
                    }
                    LocalRule::Table(t) => {
                        for (w, &v) in t {
                            if w.iter().all(|&x| x <= s) {
                                cells.push((
                                    fm(offsets.iter().copied().zip(w.iter().copied()).collect()),
                                    v,
                                ));
                            }
                        }
                        let all_in = t.keys().flatten().all(|&x| x <= s);
                        (true, (!all_in).then(|| format!("table symbols above {s}")))
                    }
                }
            }
        }
        Rule::Barrier(b) => {
            let mut dropped = 0;
            for (h, v) in &b.cells {
                if h.iter().all(|(p, x)| p.abs() <= d && x <= s) {
                    cells.push((h.clone(), *v));
                } else {
                    dropped += 1;
                }
            }
            (
                dropped == 0,
                (dropped > 0).then(|| format!("{dropped} listed cells outside the bounds")),
            )
        }
        Rule::Data(DataDependent::SumWindow) => {
            let top = d.min(s);
            guard((0..=top).map(|c| base.saturating_pow(2 * c as u32)).sum())?;
            for c in 0..=top {
                for w in all_words(2 * c as usize, s) {
                    let mut pairs: Vec<(i64, Symbol)> = (-c..0).chain(1..=c).zip(w).collect();
                    pairs.push((0, c));
                    let v = pairs.iter().map(|&(_, x)| x).sum();
                    cells.push((fm(pairs), v));
                }
            }
            (false, Some(format!("cells with center symbol above {top}")))
        }
        Rule::Data(DataDependent::TwoPoint) => {
            cells.push((fm(vec![(0, 0)]), 0));
            for m in 1..=d.min(s) {
                for (a, b) in (0..=s).cartesian_product(0..=s) {
                    cells.push((fm(vec![(-m, a), (0, m), (m, b)]), a + b));
                }
            }
            (false, Some(format!("cells with h(0) above {}", d.min(s))))
        }
        Rule::Data(DataDependent::ZeroLocator) => {
            for n in -d..=d {
                cells.push((fm(vec![(n, 0)]), n));
            }
            (false, Some(format!("zeros beyond distance {d}")))
        }
    };
    Ok(BarrierEnumeration {
        barrier: BarrierRule::new(cells),
        complete,
        gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Free center positions are `[-radius, radius]`.
    pub radius: i64,
    pub symbol_bound: Symbol,
    /// Tails are constants `<= tail_bound`.
    pub tail_bound: Symbol,
    pub node_limit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<BiSeq>,
    pub nodes: u64,
    /// The whole bounded space was explored.
    pub complete: bool,
}

/// Backtracking search for an eventually constant `x` with `Ψ(x) = target`.
/// A negative result is bounded evidence only.
pub fn search_preimage(
    psi: &Morphism,
    target: &BiSeq,
    bounds: SearchBounds,
) -> Result<SearchOutcome> {
    if matches!(psi.rule, Rule::Data(DataDependent::ZeroLocator)) {
        return Err(MorphismError::Unsupported(
            "preimage search for zero-locator".into(),
        ));
    }
    let r = bounds.radius.max(0);
    let reach = match &psi.rule {
        Rule::Windowed(w) => w.memory.max(w.anticipation) as i64,
        Rule::Barrier(b) => b.reach(),
        Rule::Data(_) => bounds.symbol_bound.max(bounds.tail_bound),
    };
    let span = r + reach + 1;
    let symbols = psi.input.alphabet.candidates(bounds.symbol_bound);
    let tails = psi.input.alphabet.candidates(bounds.tail_bound);
    let mut state = Search {
        psi,
        target,
        r,
        span,
        symbols,
        center: vec![None; (2 * r + 1) as usize],
        nodes: 0,
        node_limit: bounds.node_limit,
        found: None,
    };
    let mut complete = true;
    'outer: for &a in &tails {
        for &b in &tails {
            match state.descend(a, b, 0)? {
                Step::Continue => {}
                Step::Found => break 'outer,
                Step::Limit => {
                    complete = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(SearchOutcome {
        complete: complete && state.found.is_none(),
        found: state.found,
        nodes: state.nodes,
    })
}

enum Step {
    Continue,
    Found,
    Limit,
}

struct Search<'a> {
    psi: &'a Morphism,
    target: &'a BiSeq,
    r: i64,
    span: i64,
    symbols: Vec<Symbol>,
    center: Vec<Option<Symbol>>,
    nodes: u64,
    node_limit: u64,
    found: Option<BiSeq>,
}

impl Search<'_> {
    fn consistent(&self, a: Symbol, b: Symbol) -> Result<bool> {
        let (r, center) = (self.r, &self.center);
        let lookup = |p: i64| {
            if p < -r {
                Some(a)
            } else if p > r {
                Some(b)
            } else {
                center[(p + r) as usize]
            }
        };
        for j in -self.span..=self.span {
            if let Some(v) = self.psi.coordinate_partial(j, &lookup)? {
                if v != self.target.symbol_at(j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn descend(&mut self, a: Symbol, b: Symbol, idx: usize) -> Result<Step> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Ok(Step::Limit);
        }
        if !self.consistent(a, b)? {
            return Ok(Step::Continue);
        }
        if idx == self.center.len() {
            let word: Word = self.center.iter().map(|s| s.expect("assigned")).collect();
            let x = BiSeq::new(Tail::Constant(a), -self.r, word, Tail::Constant(b));
            if let FullImage::Full(y) = self.psi.eval_full(&x)? {
                if seq_equal(&y, self.target) {
                    self.found = Some(x);
                    return Ok(Step::Found);
                }
            }
            return Ok(Step::Continue);
        }
        for k in 0..self.symbols.len() {
            self.center[idx] = Some(self.symbols[k]);
            match self.descend(a, b, idx + 1)? {
                Step::Continue => {}
                other => {
                    self.center[idx] = None;
                    return Ok(other);
                }
            }
        }
        self.center[idx] = None;
        Ok(Step::Continue)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
