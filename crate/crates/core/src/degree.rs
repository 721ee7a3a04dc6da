//! Finite-degree analysis: how many attached cells carry a given output
//! value, counted within symbol and domain bounds.

use std::collections::BTreeMap;
use std::fmt;

use crate::biseq::{BiSeq, Symbol};
use crate::cylinder::FinMap;
use crate::morphism::{BarrierRule, DataDependent, LocalRule, Morphism, MorphismError, Rule};

type Result<T> = std::result::Result<T, MorphismError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeVerdict {
    FiniteWithWitness,
    Growing,
    Inconclusive,
}

impl fmt::Display for DegreeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeVerdict::FiniteWithWitness => "finite-with-witness",
            DegreeVerdict::Growing => "growing",
            DegreeVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoint {
    pub symbol_bound: Symbol,
    pub domain_bound: i64,
    pub count: u128,
    /// The count at this point is already the total over all bounds.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub value: Symbol,
    pub points: Vec<GridPoint>,
    pub verdict: DegreeVerdict,
    pub note: Option<String>,
}

impl fmt::Display for DegreeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "ℓ={} bound=({},{}) count={} verdict={}",
                self.value, p.symbol_bound, p.domain_bound, p.count, self.verdict
            )?;
        }
        if let Some(note) = &self.note {
            write!(f, "\nnote: {note}")?;
        }
        Ok(())
    }
}

/// Number of `k`-tuples over `[0, s]` summing to `t`.
fn bounded_compositions(k: usize, t: Symbol, s: Symbol) -> u128 {
    if t < 0 {
        return 0;
    }
    let t = t as usize;
    let mut ways = vec![0u128; t + 1];
    ways[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; t + 1];
        for (sum, &w) in ways.iter().enumerate().filter(|(_, &w)| w > 0) {
            for v in 0..=(s as usize).min(t - sum) {
                next[sum + v] += w;
            }
        }
        ways = next;
    }
    ways[t]
}

/// Tuples over `[0, s]` with `Σ c_i w_i = value`.
fn linear_solutions(coefs: &[Symbol], value: Symbol, s: Symbol) -> u128 {
    let prune = coefs.iter().all(|&c| c > 0);
    let mut ways: BTreeMap<Symbol, u128> = BTreeMap::from([(0, 1)]);
    for &c in coefs {
        let mut next = BTreeMap::new();
        for (&sum, &w) in &ways {
            for v in 0..=s {
                let t = sum + c * v;
                if prune && t > value {
                    break;
                }
                *next.entry(t).or_insert(0) += w;
            }
        }
        ways = next;
    }
    ways.get(&value).copied().unwrap_or(0)
}

fn fits(h: &FinMap, s: Symbol, d: i64) -> bool {
    h.iter().all(|(p, x)| p.abs() <= d && x <= s)
}

/// Attached cells of `Ψ_0` with value `value`, counted in closed form over
/// the same cell family that [`crate::morphism::barrier_from_coordinate`] lists.
pub fn count_attached(psi: &Morphism, value: Symbol, s: Symbol, d: i64) -> Result<u128> {
    let s = s.max(0);
    let d = d.max(0);
    Ok(match &psi.rule {
        Rule::Windowed(r) => {
            let offsets: Vec<(i64, Symbol)> = match r.local() {
                LocalRule::Linear(c) => r
                    .core_offsets()
                    .zip(c.iter().copied())
                    .filter(|&(_, c)| c != 0)
                    .collect(),
                LocalRule::Table(_) => r.core_offsets().map(|p| (p, 1)).collect(),
            };
            if offsets.iter().any(|(p, _)| p.abs() > d) {
                0
            } else {
                match r.local() {
                    LocalRule::Linear(_) => {
                        let coefs: Vec<Symbol> = offsets.iter().map(|&(_, c)| c).collect();
                        linear_solutions(&coefs, value, s)
                    }
                    LocalRule::Table(t) => t
                        .iter()
                        .filter(|(w, &v)| v == value && w.iter().all(|&x| x <= s))
                        .count() as u128,
                }
            }
        }
        Rule::Barrier(b) => b
            .cells()
            .iter()
            .filter(|(h, v)| *v == value && fits(h, s, d))
            .count() as u128,
        Rule::Data(DataDependent::SumWindow) => (0..=d.min(s).min(value))
            .map(|c| bounded_compositions(2 * c as usize, value - c, s))
            .sum(),
        Rule::Data(DataDependent::TwoPoint) => {
            if value < 0 {
                0
            } else {
                let pairs = (value.min(s) - (value - s).max(0) + 1).max(0) as u128;
                u128::from(value == 0) + d.min(s) as u128 * pairs
            }
        }
        Rule::Data(DataDependent::ZeroLocator) => u128::from(value.abs() <= d),
    })
}

/// Whether the bounded count already equals the unbounded one.
pub fn is_complete(psi: &Morphism, value: Symbol, s: Symbol, d: i64) -> bool {
    match &psi.rule {
        Rule::Windowed(r) => {
            let reach = r.core_offsets().map(i64::abs).max().unwrap_or(0);
            match r.local() {
                LocalRule::Linear(c) => c.iter().all(|&c| c >= 0) && d >= reach && s >= value,
                LocalRule::Table(t) => d >= reach && t.keys().flatten().all(|&x| x <= s),
            }
        }
        Rule::Barrier(b) => b.cells().iter().all(|(h, _)| fits(h, s, d)),
        Rule::Data(DataDependent::SumWindow) => s >= value && d >= value,
        Rule::Data(DataDependent::TwoPoint) => false,
        Rule::Data(DataDependent::ZeroLocator) => d >= value.abs(),
    }
}

fn grows(psi: &Morphism, value: Symbol) -> bool {
    matches!(psi.rule, Rule::Data(DataDependent::TwoPoint)) && value >= 0
}

fn verdict_for(points: &[GridPoint], growth_witness: bool) -> (DegreeVerdict, Option<String>) {
    let complete: Vec<_> = points.iter().filter(|p| p.complete).collect();
    if let Some(first) = complete.first() {
        if complete.iter().all(|p| p.count == first.count) {
            return (DegreeVerdict::FiniteWithWitness, None);
        }
        return (
            DegreeVerdict::Inconclusive,
            Some("complete grid points disagree".into()),
        );
    }
    let increasing = points.len() >= 2 && points.windows(2).all(|w| w[1].count > w[0].count);
    if growth_witness && increasing {
        (DegreeVerdict::Growing, None)
    } else {
        (DegreeVerdict::Inconclusive, None)
    }
}

/// Counts per grid point `(symbol_bound, domain_bound)` and a verdict.
pub fn degree_probe(psi: &Morphism, value: Symbol, grid: &[(Symbol, i64)]) -> Result<DegreeReport> {
    let points = grid
        .iter()
        .map(|&(s, d)| {
            Ok(GridPoint {
                symbol_bound: s,
                domain_bound: d,
                count: count_attached(psi, value, s, d)?,
                complete: is_complete(psi, value, s, d),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (verdict, note) = verdict_for(&points, grows(psi, value));
    Ok(DegreeReport {
        value,
        points,
        verdict,
        note,
    })
}

/// The two barriers of the sum-window example: `B^0 = {C_w}` and `B^1`,
/// which splits `C_0` into the cells `{0 ↦ 0, 1 ↦ v}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumWindowBarrier {
    B0,
    B1,
}

impl SumWindowBarrier {
    /// Cells within the bounds.
    pub fn cells(self, s: Symbol, d: i64) -> Result<BarrierRule> {
        let b0 = crate::morphism::barrier_from_coordinate(&Morphism::sum_window(), s, d)?.barrier;
        Ok(match self {
            SumWindowBarrier::B0 => b0,
            SumWindowBarrier::B1 => {
                let mut cells: Vec<_> = b0
                    .cells()
                    .iter()
                    .filter(|(h, _)| h.get(0) != Some(0))
                    .cloned()
                    .collect();
                if d >= 1 {
                    for v in 0..=s.max(0) {
                        cells.push((FinMap::from_pairs([(0, 0), (1, v)]).expect("distinct"), 0));
                    }
                }
                BarrierRule::new(cells)
            }
        })
    }

    pub fn count(self, value: Symbol, s: Symbol, d: i64) -> Result<u128> {
        let s = s.max(0);
        Ok(match (self, value) {
            (SumWindowBarrier::B1, 0) => u128::from(d >= 1) * (s as u128 + 1),
            _ => count_attached(&Morphism::sum_window(), value, s, d)?,
        })
    }

    /// Counts over the grid; `B1` at value 0 grows with the symbol bound.
    pub fn probe(self, value: Symbol, grid: &[(Symbol, i64)]) -> Result<DegreeReport> {
        let points = grid
            .iter()
            .map(|&(s, d)| {
                Ok(GridPoint {
                    symbol_bound: s,
                    domain_bound: d,
                    count: self.count(value, s, d)?,
                    complete: !(self == SumWindowBarrier::B1 && value == 0)
                        && is_complete(&Morphism::sum_window(), value, s, d),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let growth = self == SumWindowBarrier::B1 && value == 0;
        let (verdict, note) = verdict_for(&points, growth);
        Ok(DegreeReport {
            value,
            points,
            verdict,
            note,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AttachedReport {
    pub checked: usize,
    /// `(sample, cell value, Ψ_0(sample))`.
    pub mismatches: Vec<(BiSeq, Symbol, Symbol)>,
    pub uncovered: Vec<BiSeq>,
}

impl AttachedReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Whether `Ψ_0` agrees with the value of the cell containing each sample.
pub fn attached_check(
    b: &BarrierRule,
    psi: &Morphism,
    samples: &[BiSeq],
) -> Result<AttachedReport> {
    let mut report = AttachedReport::default();
    for x in samples {
        let Some((_, v)) = b.cells().iter().find(|(h, _)| h.contains(x)) else {
            report.uncovered.push(x.clone());
            continue;
        };
        let actual = psi.eval_window(x, 0, 0)?[0];
        report.checked += 1;
        if actual != *v {
            report.mismatches.push((x.clone(), *v, actual));
        }
    }
    Ok(report)
}

/// `C(h') ⊆ C(h)` in the full shift.
pub fn cylinder_contained(inner: &FinMap, outer: &FinMap) -> bool {
    inner.extends(outer)
}

/// Every cell of `finer` lies inside some cell of `coarser`.
pub fn refinement_check(finer: &BarrierRule, coarser: &BarrierRule) -> bool {
    finer.cells().iter().all(|(h, _)| {
        coarser
            .cells()
            .iter()
            .any(|(g, _)| cylinder_contained(h, g))
    })
}

/// Sampled containment for cylinders of a proper shift space: each cell of
/// `finer` must send all of its samples into a single cell of `coarser`.
pub fn refinement_check_sampled(
    finer: &BarrierRule,
    coarser: &BarrierRule,
    samples: &[BiSeq],
) -> bool {
    finer.cells().iter().all(|(h, _)| {
        let inside: Vec<_> = samples.iter().filter(|x| h.contains(x)).collect();
        coarser
            .cells()
            .iter()
            .any(|(g, _)| inside.iter().all(|x| g.contains(x)))
    })
}
