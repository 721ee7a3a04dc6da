//! The crucial-lemma construction: cylinders `h_ℓ` and index sets `S_ℓ`
//! built from a distinguished family, the truncated `h_∞`, its domain class
//! and niceness of the family.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::biseq::{format_word, seq_equal, BiSeq, Symbol, Tail, Word};
use crate::cylinder::FinMap;
use crate::morphism::{CellLocator, DataDependent, FullImage, Morphism, MorphismError, Rule};
use crate::shiftspace::ShiftSpaceSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("images did not stabilize on the window for k <= {k_max}")]
    NotStabilized { k_max: u64 },
    #[error("trace failed at level {ell}, coordinate {j}: {reason}")]
    TraceFailed { ell: usize, j: i64, reason: String },
    #[error("family sample is empty")]
    EmptySample,
}

type Result<T> = std::result::Result<T, LemmaError>;

/// A sequence `(x^k)_{k >= 1}`.
#[derive(Clone)]
pub enum Family {
    /// `x^k_j = 3k+1-j` on `[-k, k]`, 1 to the left, 0 to the right.
    NoImage,
    Constant(BiSeq),
    /// Injective points whose only zero sits at `zero_at`. With `spread`,
    /// the other symbols of `x^k` are all at least `2k`.
    ZeroDrift {
        zero_at: i64,
        spread: bool,
    },
    Custom {
        name: String,
        generator: Arc<dyn Fn(u64) -> BiSeq + Send + Sync>,
    },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Family {
    pub fn custom(name: &str, generator: impl Fn(u64) -> BiSeq + Send + Sync + 'static) -> Family {
        Family::Custom {
            name: name.to_string(),
            generator: Arc::new(generator),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::NoImage => "no-image".into(),
            Family::Constant(x) => format!("constant({x})"),
            Family::ZeroDrift { zero_at, spread } => {
                format!(
                    "zero-drift(n={zero_at}{})",
                    if *spread { ",spread" } else { "" }
                )
            }
            Family::Custom { name, .. } => name.clone(),
        }
    }

    pub fn member(&self, k: u64) -> BiSeq {
        let k = k.max(1) as i64;
        match self {
            Family::NoImage => BiSeq::new(
                Tail::Constant(1),
                -k,
                (-k..=k).map(|j| 3 * k + 1 - j).collect(),
                Tail::Constant(0),
            ),
            Family::Constant(x) => x.clone(),
            Family::ZeroDrift { zero_at, spread } => {
                let k = if *spread { k } else { 1 };
                BiSeq::new(
                    Tail::arithmetic(2 * k + 1, 2),
                    *zero_at,
                    vec![0],
                    Tail::arithmetic(2 * k, 2),
                )
            }
            Family::Custom { generator, .. } => generator(k as u64),
        }
    }

    /// The limit of `Ψ(x^k)` when known analytically.
    pub fn closed_form_limit(&self, psi: &Morphism) -> Option<BiSeq> {
        match (self, &psi.rule) {
            (Family::NoImage, Rule::Data(DataDependent::TwoPoint)) => Some(BiSeq::constant(1)),
            (Family::ZeroDrift { zero_at, .. }, Rule::Data(DataDependent::ZeroLocator)) => {
                match psi.eval_full(&self.member(1)) {
                    Ok(FullImage::Full(y)) => {
                        debug_assert_eq!(y.symbol_at(*zero_at), 0);
                        Some(y)
                    }
                    _ => None,
                }
            }
            (Family::Constant(x), _) => match psi.eval_full(x) {
                Ok(FullImage::Full(y)) => Some(y),
                _ => None,
            },
            _ => None,
        }
    }

    /// Whether every member lies in the same attached cell at every
    /// coordinate, so `S_ℓ` is all of `k >= 1`.
    fn all_k_closed_form(&self, cells: &dyn CellLocator) -> bool {
        match self {
            Family::Constant(_) => true,
            Family::ZeroDrift { .. } => cells.singleton_zero_cells(),
            _ => false,
        }
    }
}

/// `Ψ(x^k)|[-W, W]` once three consecutive `k` agree (and, when a closed
/// form exists, the window matches it).
pub fn limit_image(fam: &Family, psi: &Morphism, w: i64, k_max: u64) -> Result<Word> {
    let closed = fam
        .closed_form_limit(psi)
        .map(|y| y.restrict(-w, w).expect("nonempty window"));
    let mut recent: Vec<Word> = Vec::new();
    for k in 1..=k_max {
        let win = psi.eval_window(&fam.member(k), -w, w)?;
        recent.push(win);
        if recent.len() > 3 {
            recent.remove(0);
        }
        if recent.len() == 3 && recent.iter().all(|r| *r == recent[0]) {
            match &closed {
                Some(c) if *c != recent[0] => continue,
                _ => return Ok(recent[0].clone()),
            }
        }
    }
    Err(LemmaError::NotStabilized { k_max })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    /// Sampled indices still in the set, ascending.
    pub sample: Vec<u64>,
    /// Sample size the set was cut from.
    pub sample_size: u64,
    /// Analytic description, when the whole of `k >= 1` is known to qualify.
    pub closed_form: Option<String>,
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.closed_form {
            return f.write_str(c);
        }
        let body: Vec<String> = self.sample.iter().map(|k| k.to_string()).collect();
        write!(
            f,
            "sample(at-sample-size={}){{{}}}",
            self.sample_size,
            body.join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub ell: usize,
    pub h: FinMap,
    pub s: IndexSet,
    /// `y|[-ℓ, ℓ]`.
    pub target: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaTrace {
    pub family: String,
    pub morphism: String,
    pub levels: Vec<Level>,
    /// `y|[-L, L]`.
    pub limit: Word,
    /// The pair has an analytic `h_∞` consisting of one zero cell.
    pub singleton_closed_form: bool,
}

impl LemmaTrace {
    pub fn l_max(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn last(&self) -> &Level {
        self.levels.last().expect("trace has at least one level")
    }
}

impl fmt::Display for LemmaTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "ell={} h={} S={} y={}",
                l.ell,
                l.h,
                l.s,
                format_word(&l.target)
            )?;
        }
        Ok(())
    }
}

/// Builds `h_0 ⊆ h_1 ⊆ … ⊆ h_L` by joining, coordinate by coordinate, the
/// translate of a cell hit by many sampled `x^k`, and narrows `S_ℓ` to the
/// indices the chosen cells contain.
pub fn build_trace(
    fam: &Family,
    psi: &Morphism,
    cells: &dyn CellLocator,
    l_max: usize,
    k_max: u64,
) -> Result<LemmaTrace> {
    if k_max == 0 {
        return Err(LemmaError::EmptySample);
    }
    let big_l = l_max as i64;
    let limit = limit_image(fam, psi, big_l, k_max)?;
    let members: BTreeMap<u64, BiSeq> = (1..=k_max).map(|k| (k, fam.member(k))).collect();
    let mut s: Vec<u64> = members.keys().copied().collect();
    let mut h = FinMap::empty();
    let mut levels = Vec::new();
    let all_k = fam.all_k_closed_form(cells);
    for ell in 0..=l_max {
        let e = ell as i64;
        let coords: Vec<i64> = if ell == 0 { vec![0] } else { vec![-e, e] };
        for j in coords {
            let target = limit[(j + big_l) as usize];
            let mut groups: BTreeMap<FinMap, Vec<u64>> = BTreeMap::new();
            for &k in &s {
                if let Ok((c, v)) = cells.cell(&members[&k].shift(j)) {
                    if v == target {
                        groups.entry(c.translate(j)).or_default().push(k);
                    }
                }
            }
            let tail_from = s[s.len() / 2];
            let mut candidates: Vec<(FinMap, Vec<u64>)> = groups.into_iter().collect();
            candidates.sort_by(|(ha, ka), (hb, kb)| {
                let tail = |ks: &[u64]| ks.iter().filter(|&&k| k >= tail_from).count();
                tail(kb)
                    .cmp(&tail(ka))
                    .then(kb.len().cmp(&ka.len()))
                    .then(ha.len().cmp(&hb.len()))
                    .then(ha.cmp(hb))
            });
            let mut chosen = None;
            for (c, ks) in candidates {
                if let Ok(joined) = h.join_with(&c) {
                    chosen = Some((joined, ks));
                    break;
                }
            }
            let Some((joined, ks)) = chosen else {
                return Err(LemmaError::TraceFailed {
                    ell,
                    j,
                    reason: "no candidate cell joins the current map".into(),
                });
            };
            h = joined;
            s = ks;
        }
        let closed_form = (all_k && s.len() as u64 == k_max).then(|| "all-k>=1".to_string());
        levels.push(Level {
            ell,
            h: h.clone(),
            s: IndexSet {
                sample: s.clone(),
                sample_size: k_max,
                closed_form,
            },
            target: limit[(big_l - e) as usize..=(big_l + e) as usize].to_vec(),
        });
    }
    Ok(LemmaTrace {
        family: fam.name(),
        morphism: psi.name(),
        levels,
        limit,
        singleton_closed_form: cells.singleton_zero_cells()
            && matches!(fam, Family::ZeroDrift { .. }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DomainClass {
    /// Bounded.
    C1,
    /// All of Z.
    C2,
    /// Unbounded on both sides, not all of Z.
    C3,
    /// Unbounded to the left only.
    C4,
    /// Unbounded to the right only.
    C5,
}

impl fmt::Display for DomainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    ClosedForm,
    ObservedAtTruncation,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::ClosedForm => "closed-form",
            ClassTag::ObservedAtTruncation => "observed-at-truncation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HInfinityObservation {
    pub truncated: FinMap,
    pub window: (i64, i64),
    pub class: DomainClass,
    pub tag: ClassTag,
}

impl fmt::Display for HInfinityObservation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "class={} tag={} window=[{},{}] h={}",
            self.class, self.tag, self.window.0, self.window.1, self.truncated
        )
    }
}

/// Domain class of the truncated `h_∞ = h_L`. Growth on a side is read by
/// comparing the hull of `h_L` with that of `h_{L/2}`.
pub fn classify(trace: &LemmaTrace) -> HInfinityObservation {
    let l = trace.l_max() as i64;
    let last = &trace.last().h;
    let window = (-l, l);
    if trace.singleton_closed_form {
        return HInfinityObservation {
            truncated: last.clone(),
            window,
            class: DomainClass::C1,
            tag: ClassTag::ClosedForm,
        };
    }
    let half = &trace.levels[trace.l_max() / 2].h;
    let (lo, hi) = last.hull().unwrap_or((0, 0));
    let (half_lo, half_hi) = half.hull().unwrap_or((0, 0));
    let left = !last.is_empty() && (lo < half_lo || half.is_empty());
    let right = !last.is_empty() && (hi > half_hi || half.is_empty());
    let left = left && l > 0;
    let right = right && l > 0;
    let covers_window = (-l..=l).all(|p| last.get(p).is_some());
    let class = match (left, right) {
        (false, false) => DomainClass::C1,
        (true, true) if covers_window && (lo..=hi).all(|p| last.get(p).is_some()) => {
            DomainClass::C2
        }
        (true, true) => DomainClass::C3,
        (true, false) => DomainClass::C4,
        (false, true) => DomainClass::C5,
    };
    HInfinityObservation {
        truncated: last.clone(),
        window,
        class,
        tag: ClassTag::ObservedAtTruncation,
    }
}

/// A member of the final cylinder whose image equals the limit, for traces
/// classified C1 or C2.
pub fn exhibit_preimage(trace: &LemmaTrace, fam: &Family, psi: &Morphism) -> Result<Option<BiSeq>> {
    let obs = classify(trace);
    if !matches!(obs.class, DomainClass::C1 | DomainClass::C2) {
        return Ok(None);
    }
    let Some(&k) = trace.last().s.sample.last() else {
        return Ok(None);
    };
    let x = fam.member(k);
    if !trace.last().h.contains(&x) {
        return Ok(None);
    }
    let l = trace.l_max() as i64;
    let ok = match (fam.closed_form_limit(psi), psi.eval_full(&x)?) {
        (Some(y), FullImage::Full(image)) => seq_equal(&y, &image),
        _ => psi.eval_window(&x, -l, l)? == trace.limit,
    };
    Ok(ok.then_some(x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Niceness {
    NiceWitness { limit: BiSeq, tag: ClassTag },
    NotNiceWitness(String),
    Inconclusive,
}

impl fmt::Display for Niceness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Niceness::NiceWitness { limit, tag } => write!(f, "nice-witness {limit} ({tag})"),
            Niceness::NotNiceWitness(why) => write!(f, "not-nice-witness: {why}"),
            Niceness::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

/// Whether the family has a convergent subsequence.
pub fn nice_check(fam: &Family, w: i64, k_max: u64) -> Niceness {
    match fam {
        Family::NoImage => {
            Niceness::NotNiceWitness("x^k_j = 3k+1-j grows without bound at each fixed j".into())
        }
        Family::Constant(x) => Niceness::NiceWitness {
            limit: x.clone(),
            tag: ClassTag::ClosedForm,
        },
        Family::ZeroDrift { spread: false, .. } => Niceness::NiceWitness {
            limit: fam.member(1),
            tag: ClassTag::ClosedForm,
        },
        Family::ZeroDrift {
            zero_at,
            spread: true,
        } => Niceness::NotNiceWitness(format!("x^k_j >= 2k for every j != {zero_at}")),
        Family::Custom { .. } => {
            let w = w.max(0);
            let mut groups: BTreeMap<Word, Vec<u64>> = BTreeMap::new();
            for k in 1..=k_max {
                let win = fam.member(k).restrict(-w, w).expect("nonempty window");
                groups.entry(win).or_default().push(k);
            }
            let best = groups
                .into_values()
                .filter(|ks| ks.len() >= 3)
                .max_by_key(|ks| ks.len());
            match best {
                Some(ks) => {
                    let wide: Vec<Word> = ks
                        .iter()
                        .map(|&k| {
                            fam.member(k)
                                .restrict(-2 * w - 1, 2 * w + 1)
                                .expect("nonempty")
                        })
                        .collect();
                    let consistent = wide.windows(2).filter(|p| p[0] == p[1]).count() + 1 >= 3;
                    if consistent {
                        Niceness::NiceWitness {
                            limit: fam.member(*ks.last().expect("nonempty group")),
                            tag: ClassTag::ObservedAtTruncation,
                        }
                    } else {
                        Niceness::Inconclusive
                    }
                }
                None => Niceness::Inconclusive,
            }
        }
    }
}

/// `h_ℓ` extends `h_{ℓ-1}` and `S_ℓ ⊆ S_{ℓ-1}`.
pub fn check_nesting(trace: &LemmaTrace) -> bool {
    trace
        .levels
        .windows(2)
        .all(|p| p[1].h.extends(&p[0].h) && p[1].s.sample.iter().all(|k| p[0].s.sample.contains(k)))
}

/// Every sampled `k ∈ S_ℓ` has `x^k ∈ C(h_ℓ)`.
pub fn check_membership(trace: &LemmaTrace, fam: &Family) -> bool {
    trace
        .levels
        .iter()
        .all(|l| l.s.sample.iter().all(|&k| l.h.contains(&fam.member(k))))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PinDownReport {
    pub tested: usize,
    pub skipped: usize,
    /// `(ℓ, z)` with `Ψ(z)|[-ℓ,ℓ] ≠ y|[-ℓ,ℓ]`.
    pub failures: Vec<(usize, BiSeq)>,
}

/// Samples `z ∈ C_X(h_ℓ)` and checks `Ψ(z)|[-ℓ, ℓ] = y|[-ℓ, ℓ]`.
pub fn check_pin_down<R: Rng + ?Sized>(
    trace: &LemmaTrace,
    psi: &Morphism,
    space: &ShiftSpaceSpec,
    rng: &mut R,
    per_level: usize,
    symbol_bound: Symbol,
) -> Result<PinDownReport> {
    let mut report = PinDownReport::default();
    for level in &trace.levels {
        let e = level.ell as i64;
        for _ in 0..per_level {
            let Some(z) = space.sample_in_cylinder(&level.h, rng, symbol_bound) else {
                report.skipped += 1;
                continue;
            };
            report.tested += 1;
            if psi.eval_window(&z, -e, e)? != level.target {
                report.failures.push((level.ell, z));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn no_image_limit_is_ones() {
        let y = limit_image(&Family::NoImage, &Morphism::two_point(), 5, 40).unwrap();
        assert_eq!(y, vec![1; 11]);
    }

    #[test]
    fn zero_drift_limit() {
        let fam = Family::ZeroDrift {
            zero_at: 0,
            spread: true,
        };
        let y = limit_image(&fam, &Morphism::zero_locator(), 2, 10).unwrap();
        assert_eq!(y, vec![2, 1, 0, -1, -2]);
    }

    #[test]
    fn zero_drift_trace_is_c1() {
        let fam = Family::ZeroDrift {
            zero_at: 3,
            spread: true,
        };
        let psi = Morphism::zero_locator();
        let trace = build_trace(&fam, &psi, &psi, 6, 12).unwrap();
        for l in &trace.levels {
            assert_eq!(l.h.to_string(), "{3:0}");
            assert_eq!(l.s.to_string(), "all-k>=1");
        }
        let obs = classify(&trace);
        assert_eq!(
            (obs.class, obs.tag),
            (DomainClass::C1, ClassTag::ClosedForm)
        );
        assert!(exhibit_preimage(&trace, &fam, &psi).unwrap().is_some());
    }

    #[test]
    fn constant_family_windowed_trace() {
        let x = BiSeq::finite_support(-2, vec![3, 1, 4, 1, 5]);
        let fam = Family::Constant(x.clone());
        let psi = Morphism::arre();
        let trace = build_trace(&fam, &psi, &psi, 4, 5).unwrap();
        for l in &trace.levels {
            let e = l.ell as i64;
            assert_eq!(l.h, FinMap::window(&x, -e, e + 1));
        }
        let obs = classify(&trace);
        assert_eq!(
            (obs.class, obs.tag),
            (DomainClass::C2, ClassTag::ObservedAtTruncation)
        );
        assert!(check_nesting(&trace) && check_membership(&trace, &fam));
    }

    #[test]
    fn no_image_trace_records_domains() {
        let fam = Family::NoImage;
        let psi = Morphism::two_point();
        let trace = build_trace(&fam, &psi, &psi, 3, 20).unwrap();
        assert!(check_nesting(&trace));
        assert!(check_membership(&trace, &fam));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rep = check_pin_down(
            &trace,
            &psi,
            &ShiftSpaceSpec::full_naturals(),
            &mut rng,
            5,
            10,
        )
        .unwrap();
        assert!(rep.failures.is_empty());
        assert!(rep.tested > 0);
    }

    #[test]
    fn synthetic_c3_trace() {
        let levels = (0..=5usize)
            .map(|ell| {
                let e = (ell * ell) as i64;
                let h = FinMap::from_pairs((-e..=-2).chain(2..=e).map(|p| (p, 0))).unwrap();
                Level {
                    ell,
                    h,
                    s: IndexSet {
                        sample: vec![1],
                        sample_size: 1,
                        closed_form: None,
                    },
                    target: vec![0; 2 * ell + 1],
                }
            })
            .collect();
        let trace = LemmaTrace {
            family: "synthetic".into(),
            morphism: "none".into(),
            levels,
            limit: vec![0; 11],
            singleton_closed_form: false,
        };
        let obs = classify(&trace);
        assert_eq!(
            (obs.class, obs.tag),
            (DomainClass::C3, ClassTag::ObservedAtTruncation)
        );
    }

    #[test]
    fn niceness() {
        assert!(matches!(
            nice_check(&Family::NoImage, 3, 20),
            Niceness::NotNiceWitness(_)
        ));
        let x = BiSeq::constant(2);
        assert_eq!(
            nice_check(&Family::Constant(x.clone()), 3, 20),
            Niceness::NiceWitness {
                limit: x,
                tag: ClassTag::ClosedForm
            }
        );
        assert!(matches!(
            nice_check(
                &Family::ZeroDrift {
                    zero_at: 0,
                    spread: false
                },
                3,
                20
            ),
            Niceness::NiceWitness { .. }
        ));
        let periodic = Family::custom("alternating", |k| BiSeq::constant((k % 2) as i64));
        assert!(matches!(
            nice_check(&periodic, 2, 20),
            Niceness::NiceWitness { .. }
        ));
    }
}
