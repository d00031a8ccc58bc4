use impartial::axioms::*;
use impartial::blocking::BlockingMechanism;
use impartial::perms::{Permutation, RankingProfile};
use impartial::toys::{AntiMonotone, Constant, Dictatorship};
use impartial::tricolor::WeakUnanimityMechanism;
use impartial::{Error, RankingMechanism};

fn verdicts<M: RankingMechanism + Sync>(m: &M, mode: Mode) -> Vec<Verdict> {
    Axiom::ALL
        .iter()
        .map(|&a| {
            let mode = if a == Axiom::WeakUnanimity && matches!(mode, Mode::Reduced) { Mode::Full } else { mode };
            check(a, m, mode).unwrap().verdict
        })
        .collect()
}

fn assert_witnesses_replay<M: RankingMechanism + Sync>(m: &M, mode: Mode) {
    for a in Axiom::ALL {
        let r = check(a, m, mode).unwrap();
        if let Some(w) = &r.witness {
            assert_eq!(w.axiom(), a);
            assert!(w.replay(m).unwrap(), "{a}: {w}");
        }
    }
}

#[test]
fn n4_full_and_reduced_agree() {
    let m = BlockingMechanism::n4();
    let full = verdicts(&m, Mode::Full);
    let reduced = verdicts(&m, Mode::Reduced);
    assert_eq!(full, reduced);
    assert_eq!(&full[..3], &[Verdict::Holds; 3]);
    assert_eq!(full[4], Verdict::Violated);
    assert_witnesses_replay(&m, Mode::Full);
    assert_witnesses_replay(&m, Mode::Reduced);
}

#[test]
fn reduced_checks_report_their_coverage() {
    let m = BlockingMechanism::n4();
    let r = check_impartiality(&m, Mode::Reduced).unwrap();
    assert_eq!(r.coverage, Coverage::ReducedExhaustive);
    let r = check_impartiality(&m, Mode::Full).unwrap();
    assert_eq!(r.coverage, Coverage::Exhaustive);
    // Each agent: 24^3 reduced profiles, 23 deviations from index 0.
    assert_eq!(r.checked, 4 * 13_824 * 23);
}

#[test]
fn blocking_fixtures_hold_under_reduced_checks() {
    for n in 5..=8 {
        let m = BlockingMechanism::fixture(n).unwrap();
        for a in [Axiom::Impartiality, Axiom::Monotonicity, Axiom::IndividualFullRank] {
            let r = check(a, &m, Mode::Reduced).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "n = {n}, {a}");
        }
    }
}

#[test]
fn constant_mechanism_profile() {
    let c = Constant(Permutation::new(vec![2, 0, 1]).unwrap());
    let v = verdicts(&c, Mode::Full);
    assert_eq!(v, [Verdict::Holds, Verdict::Holds, Verdict::Violated, Verdict::Violated, Verdict::Violated]);
    assert_witnesses_replay(&c, Mode::Full);
}

#[test]
fn dictatorship_profile() {
    let d = Dictatorship { n: 3 };
    let v = verdicts(&d, Mode::Full);
    assert_eq!(v, [Verdict::Violated, Verdict::Holds, Verdict::Holds, Verdict::Holds, Verdict::Holds]);
    assert_witnesses_replay(&d, Mode::Full);
    assert!(implication_meta_check(&Axiom::ALL.map(|a| check(a, &d, Mode::Full).unwrap())).is_ok());
}

#[test]
fn anti_monotone_profile() {
    let m = AntiMonotone::new();
    let imp = check_impartiality(&m, Mode::Full).unwrap();
    assert_eq!(imp.verdict, Verdict::Holds);
    let mono = check_monotonicity(&m, Mode::Full).unwrap();
    assert_eq!(mono.verdict, Verdict::Violated);
    let w = mono.witness.unwrap();
    assert!(matches!(w, Witness::Monotonicity { .. }));
    assert!(w.replay(&m).unwrap());
    // The same witness is no violation for the monotone table.
    assert!(!w.replay(&BlockingMechanism::n4()).unwrap());
}

#[test]
fn sampled_mode_never_claims_holds() {
    let mode = Mode::Sampled { trials: 500, seed: 17 };
    let mechs: Vec<Box<dyn Fn(Axiom) -> AxiomReport>> = vec![
        Box::new(move |a| check(a, &BlockingMechanism::fixture(6).unwrap(), mode).unwrap()),
        Box::new(move |a| check(a, &Dictatorship { n: 5 }, mode).unwrap()),
        Box::new(move |a| check(a, &Constant(Permutation::identity(5)), mode).unwrap()),
    ];
    for run in &mechs {
        for a in Axiom::ALL {
            let r = run(a);
            assert_ne!(r.verdict, Verdict::Holds, "{a}");
            assert!(matches!(r.coverage, Coverage::Sampled { trials: 500, seed: 17 }));
            if let Some(w) = r.witness {
                assert_eq!(r.verdict, Verdict::Violated);
                assert_eq!(w.axiom(), a);
            }
        }
    }
    let d = check_impartiality(&Dictatorship { n: 5 }, mode).unwrap();
    assert_eq!(d.verdict, Verdict::Violated);
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let m = Dictatorship { n: 6 };
    let mode = Mode::Sampled { trials: 50, seed: 4 };
    assert_eq!(check_impartiality(&m, mode).unwrap(), check_impartiality(&m, mode).unwrap());
}

#[test]
fn tricolor_n5_decisive_checks() {
    let w = WeakUnanimityMechanism::new(5).unwrap();
    let imp = check_impartiality(&w, Mode::Reduced).unwrap();
    assert_eq!(imp.verdict, Verdict::Holds);
    assert_eq!(imp.coverage, Coverage::ReducedExhaustive);
    let ifr = check_individual_full_rank(&w).unwrap();
    assert_eq!(ifr.verdict, Verdict::Holds);
    let wu = check_weak_unanimity(&w, Mode::Reduced).unwrap();
    assert_eq!(wu.verdict, Verdict::Holds);
    assert!(matches!(check_impartiality(&w, Mode::Full), Err(Error::ModeInfeasible(_))));
    assert!(matches!(check_monotonicity(&w, Mode::Reduced), Err(Error::ModeInfeasible(_))));
}

#[test]
fn decisive_triple_sweep_counts() {
    let w = WeakUnanimityMechanism::new(5).unwrap();
    let sweep = sweep_decisive_triples(&w, 0..3);
    assert!(sweep.witness.is_none());
    assert_eq!(sweep.triples, 3 * 120 * 120);
}

#[test]
fn meta_check_flags_crafted_inconsistency() {
    let report = |axiom, verdict| AxiomReport {
        axiom,
        coverage: Coverage::Exhaustive,
        verdict,
        witness: None,
        checked: 0,
        note: None,
    };
    let bad = [report(Axiom::WeakUnanimity, Verdict::Holds), report(Axiom::IndividualFullRank, Verdict::Violated)];
    assert_eq!(
        implication_meta_check(&bad),
        Err(LatticeInconsistency { stronger: Axiom::WeakUnanimity, weaker: Axiom::IndividualFullRank })
    );
    let fine = [report(Axiom::Unanimity, Verdict::Violated), report(Axiom::WeakUnanimity, Verdict::Holds)];
    assert!(implication_meta_check(&fine).is_ok());
    let sampled =
        [report(Axiom::Unanimity, Verdict::InconclusiveSampled), report(Axiom::WeakUnanimity, Verdict::Violated)];
    assert!(implication_meta_check(&sampled).is_ok());
}

#[test]
fn forged_witnesses_do_not_replay() {
    let m = BlockingMechanism::n4();
    let id = Permutation::identity(4);
    assert!(!Witness::WeakUnanimity { ranking: id.clone() }.replay(&Dictatorship { n: 4 }).unwrap());
    let profile = RankingProfile::unanimous(&id);
    let w = Witness::Unanimity { profile: profile.clone(), above: 1, below: 0 };
    assert!(!w.replay(&m).unwrap());
    let not_a_raise = Witness::Monotonicity { profile, agent: 0, raised: 1, deviation: Permutation::reversed(4) };
    assert!(!not_a_raise.replay(&m).unwrap());
}

#[test]
fn raise_relation() {
    let p = |v: &[usize]| Permutation::new(v.to_vec()).unwrap();
    assert!(is_raise_of(&p(&[0, 1, 2, 3]), &p(&[2, 0, 1, 3]), 2));
    assert!(is_raise_of(&p(&[0, 1, 2, 3]), &p(&[0, 1, 2, 3]), 2));
    assert!(!is_raise_of(&p(&[0, 1, 2, 3]), &p(&[2, 1, 0, 3]), 2));
    assert!(!is_raise_of(&p(&[2, 0, 1, 3]), &p(&[0, 1, 2, 3]), 2));
}

#[test]
fn axiom_names_parse() {
    for a in Axiom::ALL {
        assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
    }
    assert_eq!("ifr".parse::<Axiom>().unwrap(), Axiom::IndividualFullRank);
    assert!("fairness".parse::<Axiom>().is_err());
}

#[test]
fn full_profile_limit() {
    assert_eq!(full_profile_count(3), Some(216));
    assert_eq!(full_profile_count(4), Some(331_776));
    assert_eq!(full_profile_count(5), None);
}
