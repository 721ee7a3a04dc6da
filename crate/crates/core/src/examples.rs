//! Named, reproducible checks for each worked example.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::arre_invert::{self, Inversion};
use crate::biseq::{seq_equal, BiSeq, Tail};
use crate::cylinder::FinMap;
use crate::degree::{self, DegreeVerdict, SumWindowBarrier};
use crate::lemma::{self, ClassTag, DomainClass, Family, Niceness};
use crate::morphism::{self, Morphism, SearchBounds};
use crate::shiftspace::{Membership, ShiftSpaceSpec};

const SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExamplesError {
    #[error("unknown example `{0}`")]
    UnknownId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    Exact,
    /// Exhaustive within stated bounds; the underlying claim is analytic.
    BoundedEvidence,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evidence::Exact => "exact",
            Evidence::BoundedEvidence => "bounded-evidence",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub description: String,
    pub passed: bool,
    pub evidence: Evidence,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleReport {
    pub id: &'static str,
    pub expectations: Vec<Expectation>,
    pub notes: Vec<String>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.expectations.iter().all(|e| e.passed)
    }
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.expectations {
            write!(
                f,
                "[{}] {} ({})",
                if e.passed { "PASS" } else { "FAIL" },
                e.description,
                e.evidence
            )?;
            if let Some(d) = &e.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(
            f,
            "example={} result={}",
            self.id,
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

struct Recorder {
    id: &'static str,
    expectations: Vec<Expectation>,
    notes: Vec<String>,
}

impl Recorder {
    fn new(id: &'static str) -> Recorder {
        Recorder {
            id,
            expectations: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, description: &str, evidence: Evidence, outcome: Result<bool, String>) {
        let (passed, detail) = match outcome {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e)),
        };
        self.expectations.push(Expectation {
            description: description.to_string(),
            passed,
            evidence,
            detail,
        });
    }

    fn exact(&mut self, description: &str, outcome: Result<bool, String>) {
        self.check(description, Evidence::Exact, outcome);
    }

    fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    fn finish(self) -> ExampleReport {
        ExampleReport {
            id: self.id,
            expectations: self.expectations,
            notes: self.notes,
        }
    }
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

pub struct ExampleCase {
    pub id: &'static str,
    pub title: &'static str,
    run: fn() -> ExampleReport,
}

impl ExampleCase {
    pub fn run(&self) -> ExampleReport {
        (self.run)()
    }
}

pub fn registry() -> Vec<ExampleCase> {
    vec![
        ExampleCase {
            id: "noimage",
            title: "two-point rule: images of x^k converge to 1^Z, which has no preimage",
            run: noimage,
        },
        ExampleCase {
            id: "sum-window-barrier",
            title: "sum-window rule: barriers B^0 and its refinement B^1",
            run: sum_window_barrier,
        },
        ExampleCase {
            id: "not-finite-degree",
            title: "two-point rule has no finite-degree barrier",
            run: not_finite_degree,
        },
        ExampleCase {
            id: "exam2",
            title: "zero-locator on injective sequences: discrete image, C1 domains",
            run: exam2,
        },
        ExampleCase {
            id: "arre-ambiguity",
            title: "x_n + 2x_{n+1}: equal central blocks with different preimage centers",
            run: arre_ambiguity,
        },
        ExampleCase {
            id: "arre-inverse",
            title: "x_n + 2x_{n+1}: chain solutions, stabilization index and inverse",
            run: arre_inverse,
        },
    ]
}

pub fn run_example(id: &str) -> Result<ExampleReport, ExamplesError> {
    registry()
        .into_iter()
        .find(|c| c.id == id)
        .map(|c| c.run())
        .ok_or_else(|| ExamplesError::UnknownId(id.to_string()))
}

fn noimage() -> ExampleReport {
    let mut r = Recorder::new("noimage");
    let psi = Morphism::two_point();
    let fam = Family::NoImage;
    r.exact(
        "Ψ(x^k)|[-k,k] = 1^(2k+1) for k = 1..50",
        (1..=50i64)
            .map(|k| {
                psi.eval_window(&fam.member(k as u64), -k, k)
                    .map(|w| w == vec![1; (2 * k + 1) as usize])
            })
            .try_fold(true, |acc, v| v.map(|v| acc && v))
            .map_err(err),
    );
    r.exact(
        "limit image on [-10,10] is 1^21",
        lemma::limit_image(&fam, &psi, 10, 60)
            .map(|y| y == vec![1; 21])
            .map_err(err),
    );
    r.exact(
        "1^Z has no preimage under the constant-tail analysis: a tail constant c maps to 2c",
        (0..=20)
            .map(|c| psi.eval_window(&BiSeq::constant(c), 0, 0))
            .try_fold(true, |acc, v| v.map(|w| acc && w[0] != 1))
            .map_err(err),
    );
    let bounds = SearchBounds {
        radius: 10,
        symbol_bound: 20,
        tail_bound: 20,
        node_limit: 50_000_000,
    };
    r.check(
        "no eventually constant x with symbols <= 20 and center radius 10 maps to 1^Z",
        Evidence::BoundedEvidence,
        morphism::search_preimage(&psi, &BiSeq::constant(1), bounds)
            .map(|o| o.found.is_none() && o.complete)
            .map_err(err),
    );
    r.exact(
        "(x^k) has no convergent subsequence",
        Ok(matches!(
            lemma::nice_check(&fam, 3, 20),
            Niceness::NotNiceWitness(_)
        )),
    );
    r.finish()
}

fn sum_window_barrier() -> ExampleReport {
    let mut r = Recorder::new("sum-window-barrier");
    let psi = Morphism::sum_window();
    let (s, d) = (3, 3);
    let b0 = SumWindowBarrier::B0.cells(s, d);
    let b1 = SumWindowBarrier::B1.cells(s, d);
    let (Ok(b0), Ok(b1)) = (b0, b1) else {
        r.exact("barrier enumeration", Err("enumeration failed".into()));
        return r.finish();
    };
    let zero_cells: Vec<_> = b0
        .cells()
        .iter()
        .filter(|(_, v)| *v == 0)
        .map(|(h, _)| h.to_string())
        .collect();
    r.exact(
        "Ψ_0^{-1}(0) in B^0 is the single cell {0:0}",
        Ok(zero_cells == ["{0:0}"]),
    );
    let mut rng = StdRng::seed_from_u64(SEED);
    let samples: Vec<BiSeq> = (0..400)
        .map(|_| BiSeq::finite_support(-4, (0..9).map(|_| rng.gen_range(0..=s)).collect()))
        .collect();
    r.exact(
        "B^0 is attached to the sum-window rule on samples",
        degree::attached_check(&b0, &psi, &samples)
            .map(|a| a.ok() && a.checked > 0)
            .map_err(err),
    );
    r.exact(
        "B^1 is attached and Ψ_0 vanishes on every split cell",
        degree::attached_check(&b1, &psi, &samples)
            .map(|a| {
                a.ok()
                    && b1
                        .cells()
                        .iter()
                        .filter(|(h, _)| h.get(0) == Some(0))
                        .all(|(_, v)| *v == 0)
            })
            .map_err(err),
    );
    r.exact("B^1 refines B^0", Ok(degree::refinement_check(&b1, &b0)));
    r.exact(
        "B^0 does not refine B^1",
        Ok(!degree::refinement_check(&b0, &b1)),
    );
    let grid = [(2, 2), (4, 4), (8, 8)];
    let p0 = SumWindowBarrier::B0.probe(2, &grid);
    let p1 = SumWindowBarrier::B1.probe(0, &grid);
    r.exact(
        "B^0 has finitely many cells per value (value 2)",
        p0.as_ref()
            .map(|p| p.verdict == DegreeVerdict::FiniteWithWitness)
            .map_err(err),
    );
    r.exact(
        "B^1 has infinitely many cells with value 0",
        p1.as_ref()
            .map(|p| p.verdict == DegreeVerdict::Growing)
            .map_err(err),
    );
    r.note(
        "counting gives B^0 finitely many cells per value (each C_w needs w_0 <= value), \
         while the text groups B^0 with B^1 as barriers that are not of finite degree",
    );
    r.finish()
}

fn not_finite_degree() -> ExampleReport {
    let mut r = Recorder::new("not-finite-degree");
    let psi = Morphism::two_point();
    let grid: Vec<_> = (1..=20).map(|d| (20, d)).collect();
    let rep = degree::degree_probe(&psi, 1, &grid);
    r.exact(
        "value 1 has 2·d three-point cells within domain bound d, growing",
        rep.map(|p| {
            p.verdict == DegreeVerdict::Growing
                && p.points
                    .iter()
                    .all(|g| g.count == 2 * g.domain_bound as u128)
        })
        .map_err(err),
    );
    let shape = morphism::barrier_from_coordinate(&psi, 3, 3).map(|e| {
        e.barrier.cells().iter().all(|(h, v)| match h.get(0) {
            Some(0) => h.len() == 1 && *v == 0,
            Some(m) => h.len() == 3 && h.get(-m).zip(h.get(m)).map(|(a, b)| a + b) == Some(*v),
            None => false,
        })
    });
    r.exact(
        "cells are {-m:a, 0:m, m:b} with value a+b",
        shape.map_err(err),
    );
    let mut rng = StdRng::seed_from_u64(SEED);
    let attached = morphism::barrier_from_coordinate(&psi, 4, 4).and_then(|e| {
        let samples: Vec<BiSeq> = (0..300)
            .map(|_| BiSeq::finite_support(-4, (0..9).map(|_| rng.gen_range(0..=4)).collect()))
            .collect();
        degree::attached_check(&e.barrier, &psi, &samples)
    });
    r.exact(
        "three-point cells are attached on samples",
        attached.map(|a| a.ok()).map_err(err),
    );
    r.finish()
}

fn zigzag(n: i64) -> BiSeq {
    BiSeq::new(Tail::arithmetic(1, 2), n, vec![0], Tail::arithmetic(2, 2))
}

fn exam2() -> ExampleReport {
    let mut r = Recorder::new("exam2");
    let psi = Morphism::zero_locator();
    let space = ShiftSpaceSpec::injective_with_zero();
    r.exact(
        "Ψ(x)_m = n - m for x with zero at n",
        (-5..=5)
            .map(|n| {
                psi.eval_window(&zigzag(n), -8, 8)
                    .map(|w| w == (-8..=8).map(|m| n - m).collect::<Vec<_>>())
            })
            .try_fold(true, |acc, v| v.map(|v| acc && v))
            .map_err(err),
    );
    let other = BiSeq::new(
        Tail::arithmetic(7, 2),
        2,
        vec![5, 0, 3],
        Tail::arithmetic(10, 2),
    );
    r.exact(
        "distinct points with the same zero position share their image",
        match (
            space.member(&other),
            psi.eval_full(&other),
            psi.eval_full(&zigzag(3)),
        ) {
            (
                Ok(Membership::Member),
                Ok(morphism::FullImage::Full(a)),
                Ok(morphism::FullImage::Full(b)),
            ) => Ok(seq_equal(&a, &b) && !seq_equal(&other, &zigzag(3))),
            other => Err(format!("{other:?}")),
        },
    );
    let cells = morphism::barrier_from_coordinate(&psi, 0, 6).map(|e| e.barrier);
    r.exact(
        "cells {n:0} are pairwise disjoint inside X",
        cells
            .as_ref()
            .map(|b| b.overlapping_pair(&space).is_none())
            .map_err(err),
    );
    let fam = Family::ZeroDrift {
        zero_at: 2,
        spread: true,
    };
    let trace = lemma::build_trace(&fam, &psi, &psi, 6, 16);
    r.exact(
        "h_∞ has domain {n} with h_∞(n) = 0 and is C1 (closed form)",
        trace
            .as_ref()
            .map(|t| {
                let obs = lemma::classify(t);
                obs.truncated.to_string() == "{2:0}"
                    && obs.class == DomainClass::C1
                    && obs.tag == ClassTag::ClosedForm
            })
            .map_err(err),
    );
    r.exact(
        "a preimage of the limit is exhibited",
        trace.as_ref().map_err(err).and_then(|t| {
            lemma::exhibit_preimage(t, &fam, &psi)
                .map(|x| x.is_some())
                .map_err(err)
        }),
    );
    r.exact(
        "the spread family is distinguished but not nice",
        Ok(matches!(
            lemma::nice_check(&fam, 3, 20),
            Niceness::NotNiceWitness(_)
        )),
    );
    r.exact(
        "ab and ba are allowed for a != b",
        space
            .allowed_blocks(2, 4)
            .map(|b| (0..=4).all(|a| (0..=4).all(|c| b.contains(&vec![a, c]) == (a != c))))
            .map_err(err),
    );
    r.finish()
}

fn arre_ambiguity() -> ExampleReport {
    let mut r = Recorder::new("arre-ambiguity");
    let (x, xp) = arre_invert::ambiguity_pair(1);
    let (y, yp) = (arre_invert::image(&x), arre_invert::image(&xp));
    r.exact(
        "L=1: both images read [16,8,4] on [-1,1]",
        Ok(y.restrict(-1, 1).ok() == Some(vec![16, 8, 4])
            && yp.restrict(-1, 1).ok() == Some(vec![16, 8, 4])),
    );
    r.exact(
        "L=1: x_0 = 4 and x'_0 = 8",
        Ok(x.symbol_at(0) == 4 && xp.symbol_at(0) == 8),
    );
    r.exact(
        "S_1 on [16,8,4] contains both central solutions",
        arre_invert::solve_chain(&[16, 8, 4])
            .map(|s| {
                let c: Vec<_> = s.words.iter().map(|w| w[1]).collect();
                c.contains(&4) && c.contains(&8)
            })
            .map_err(err),
    );
    r.exact(
        "the two images separate at larger N and invert to their own preimages",
        match (arre_invert::invert(&y, 32), arre_invert::invert(&yp, 32)) {
            (Ok(Inversion::Preimage(a)), Ok(Inversion::Preimage(b))) => {
                Ok(seq_equal(&a, &x) && seq_equal(&b, &xp))
            }
            other => Err(format!("{other:?}")),
        },
    );
    r.exact(
        "the collision persists for L = 2..6",
        Ok((2..=6u32).all(|l| {
            let (a, b) = arre_invert::ambiguity_pair(l);
            let l = l as i64;
            arre_invert::image(&a).restrict(-l, l) == arre_invert::image(&b).restrict(-l, l)
                && a.symbol_at(0) != b.symbol_at(0)
        })),
    );
    r.finish()
}

fn arre_inverse() -> ExampleReport {
    let mut r = Recorder::new("arre-inverse");
    let mut rng = StdRng::seed_from_u64(SEED);
    let xs: Vec<BiSeq> = (0..200)
        .map(|_| {
            let radius = rng.gen_range(0..=6);
            BiSeq::finite_support(
                -radius,
                (0..=2 * radius).map(|_| rng.gen_range(0..=40)).collect(),
            )
        })
        .collect();
    r.exact(
        "invert(Ψ(x)) = x on 200 seeded finite-support points",
        xs.iter()
            .map(|x| {
                arre_invert::invert(&arre_invert::image(x), 64)
                    .map(|i| matches!(i, Inversion::Preimage(ref z) if seq_equal(z, x)))
            })
            .try_fold(true, |acc, v| v.map(|v| acc && v))
            .map_err(err),
    );
    r.exact(
        "1 <= #S_N(y) <= floor(y_0 / 2^N) + 1 for N = 1..8",
        xs.iter()
            .map(|x| {
                let y = arre_invert::image(x);
                (1..=8usize).try_fold(true, |acc, n| {
                    arre_invert::solution_set(&y, n).map(|s| {
                        let cap = (y.symbol_at(0) >> n) as usize + 1;
                        acc && !s.is_empty() && s.len() <= cap
                    })
                })
            })
            .try_fold(true, |acc, v| v.map(|v| acc && v))
            .map_err(err),
    );
    r.exact(
        "1^Z is not in the image",
        arre_invert::invert(&BiSeq::constant(1), 32)
            .map(|i| matches!(i, Inversion::NotInImage(_)))
            .map_err(err),
    );
    let constancy = xs.iter().take(40).try_fold(true, |acc, x| {
        let y = arre_invert::image(x);
        let h: FinMap = arre_invert::barrier_h_y(&y, 64).map_err(err)?;
        let r_y = arre_invert::compute_r(&y, 64).map_err(err)?;
        let phi = arre_invert::phi0(&y, 64).map_err(err)?;
        let (lo, hi) = h.hull().unwrap_or((0, 0));
        let mut ok = acc;
        for t in 0..5 {
            // vary x far outside the window that determines h^y
            let mut z = x.clone();
            z = BiSeq::new(
                Tail::Constant(0),
                z.center_lo().min(lo - 1) - 3,
                (z.center_lo().min(lo - 1) - 3..=z.center_hi().max(hi + 2) + 3)
                    .map(|p| z.symbol_at(p))
                    .collect(),
                Tail::Constant(t),
            );
            let zy = arre_invert::image(&z);
            if h.contains(&zy) {
                ok &= arre_invert::phi0(&zy, 64).map_err(err)? == phi;
                ok &= arre_invert::compute_r(&zy, 64).map_err(err)? == r_y;
            }
        }
        Ok::<bool, String>(ok)
    });
    r.exact("points of C_Y(h^y) share Φ_0 and r", constancy);
    r.exact(
        "Φ is not of finite degree: witness counts 1, 3, 5, ... with Φ_0 = 0",
        arre_invert::phi_not_finite_degree_witness(6, 32)
            .map(|w| w.ok)
            .map_err(err),
    );
    r.finish()
}
