mod common;

use shiftlab::degree::{self, DegreeVerdict, SumWindowBarrier};
use shiftlab::lemma::{self, ClassTag, DomainClass, Family, Niceness};
use shiftlab::morphism;
use shiftlab::{BiSeq, Morphism, ShiftSpaceSpec, Tail};

fn cells_with_value(b: &morphism::BarrierRule, v: i64) -> u128 {
    b.cells().iter().filter(|(_, w)| *w == v).count() as u128
}

#[test]
fn closed_form_counts_match_enumeration() {
    for psi in [
        Morphism::arre(),
        Morphism::sum_window(),
        Morphism::two_point(),
    ] {
        for s in 0..=3 {
            for d in 0..=3 {
                let listed = morphism::barrier_from_coordinate(&psi, s, d)
                    .unwrap()
                    .barrier;
                for v in 0..=8 {
                    assert_eq!(
                        degree::count_attached(&psi, v, s, d).unwrap(),
                        cells_with_value(&listed, v),
                        "{} value={v} s={s} d={d}",
                        psi.name()
                    );
                }
            }
        }
    }
}

#[test]
fn zero_locator_has_one_cell_per_value() {
    let psi = Morphism::zero_locator();
    for v in -5..=5 {
        assert_eq!(degree::count_attached(&psi, v, 0, 5).unwrap(), 1);
        assert_eq!(
            degree::count_attached(&psi, v, 0, 4).unwrap(),
            u128::from(v.abs() <= 4)
        );
    }
    let rep = degree::degree_probe(&psi, 3, &[(0, 3), (0, 6)]).unwrap();
    assert_eq!(rep.verdict, DegreeVerdict::FiniteWithWitness);
}

#[test]
fn sum_window_barriers() {
    for (s, d) in [(1, 1), (2, 2), (3, 2)] {
        let b1 = SumWindowBarrier::B1.cells(s, d).unwrap();
        for v in 0..=5 {
            assert_eq!(
                SumWindowBarrier::B1.count(v, s, d).unwrap(),
                cells_with_value(&b1, v),
                "v={v} s={s} d={d}"
            );
        }
        let b0 = SumWindowBarrier::B0.cells(s, d).unwrap();
        assert!(degree::refinement_check(&b1, &b0));
    }
    let grid = [(2, 2), (4, 4), (8, 8)];
    assert_eq!(
        SumWindowBarrier::B1.probe(0, &grid).unwrap().verdict,
        DegreeVerdict::Growing
    );
    assert_eq!(
        SumWindowBarrier::B0.probe(0, &grid).unwrap().verdict,
        DegreeVerdict::FiniteWithWitness
    );
}

#[test]
fn growing_counts_for_two_point() {
    let psi = Morphism::two_point();
    for v in 1..=4 {
        let grid: Vec<_> = (1..=6).map(|d| (10, d)).collect();
        let rep = degree::degree_probe(&psi, v, &grid).unwrap();
        assert_eq!(rep.verdict, DegreeVerdict::Growing, "{rep}");
        assert!(rep
            .to_string()
            .lines()
            .all(|l| l.starts_with(&format!("ℓ={v} bound="))));
    }
}

#[test]
fn zero_drift_trace_invariants() {
    let psi = Morphism::zero_locator();
    let space = ShiftSpaceSpec::injective_with_zero();
    for zero_at in [-2, 0, 4] {
        let fam = Family::ZeroDrift {
            zero_at,
            spread: true,
        };
        let trace = lemma::build_trace(&fam, &psi, &psi, 5, 12).unwrap();
        assert!(lemma::check_nesting(&trace));
        assert!(lemma::check_membership(&trace, &fam));
        let mut rng = common::rng(31);
        let pin = lemma::check_pin_down(&trace, &psi, &space, &mut rng, 10, 20).unwrap();
        assert!(pin.failures.is_empty(), "{:?}", pin.failures);
        let obs = lemma::classify(&trace);
        assert_eq!(
            (obs.class, obs.tag),
            (DomainClass::C1, ClassTag::ClosedForm)
        );
        assert_eq!(obs.truncated.iter().collect::<Vec<_>>(), vec![(zero_at, 0)]);
        assert!(trace
            .to_string()
            .lines()
            .next()
            .unwrap()
            .starts_with("ell=0 h="));
    }
}

#[test]
fn constant_family_covers_the_window() {
    let x = BiSeq::new(Tail::Constant(1), 0, vec![2, 0, 3], Tail::Constant(2));
    let fam = Family::Constant(x.clone());
    let psi = Morphism::arre();
    let trace = lemma::build_trace(&fam, &psi, &psi, 4, 6).unwrap();
    assert!(lemma::check_nesting(&trace));
    assert!(lemma::check_membership(&trace, &fam));
    let obs = lemma::classify(&trace);
    assert_eq!(obs.tag, ClassTag::ObservedAtTruncation);
    assert_eq!(obs.class, DomainClass::C2);
    assert!(lemma::exhibit_preimage(&trace, &fam, &psi)
        .unwrap()
        .is_some());
    assert!(matches!(
        lemma::nice_check(&fam, 3, 10),
        Niceness::NiceWitness { .. }
    ));
}

#[test]
fn no_image_family_has_constant_limit() {
    let psi = Morphism::two_point();
    assert_eq!(
        lemma::limit_image(&Family::NoImage, &psi, 6, 40).unwrap(),
        vec![1; 13]
    );
    assert!(matches!(
        lemma::nice_check(&Family::NoImage, 3, 20),
        Niceness::NotNiceWitness(_)
    ));
}

#[test]
fn custom_family_of_shifts() {
    let base = BiSeq::new(Tail::Constant(0), 0, vec![1, 2], Tail::Constant(0));
    let fam = Family::custom("shifted", move |k| base.shift(k as i64 % 2));
    assert_eq!(fam.name(), "shifted");
    assert!(matches!(
        lemma::nice_check(&fam, 2, 12),
        Niceness::NiceWitness {
            tag: ClassTag::ObservedAtTruncation,
            ..
        }
    ));
    let psi = Morphism::arre();
    let trace = lemma::build_trace(&fam, &psi, &psi, 3, 12);
    // the images oscillate, so the window limit does not exist
    assert!(trace.is_err());
}
