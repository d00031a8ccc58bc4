use impartial::axioms::{check_unanimity, Mode, Verdict, Witness};
use impartial::blocking::BlockingMechanism;
use impartial::impossibility::encode::{profile_indices, REDUCED, VARIABLES};
use impartial::impossibility::*;
use impartial::perms::Permutation;
use impartial::toys::{Constant, Dictatorship};
use impartial::tricolor::WeakUnanimityMechanism;
use impartial::RankingMechanism;

/// Counts impartial 3-ranking mechanisms by assigning an output ranking to
/// each of the 216 full profiles directly. Profiles that differ only in
/// agent `i`'s ranking must give `i` the same position.
fn count_impartial_n3_by_profiles() -> u64 {
    let perms: Vec<Permutation> = (0..6).map(|p| Permutation::lex_unrank(3, p).unwrap()).collect();
    let pos: Vec<[usize; 3]> = perms.iter().map(|p| [p.position_of(0), p.position_of(1), p.position_of(2)]).collect();
    let idx = |d: [usize; 3]| d[0] * 36 + d[1] * 6 + d[2];
    let neighbors: Vec<Vec<(usize, usize)>> = (0..216)
        .map(|x| {
            let d = [x / 36, x / 6 % 6, x % 6];
            let mut out = Vec::new();
            for i in 0..3 {
                for v in 0..6 {
                    if v != d[i] {
                        let mut e = d;
                        e[i] = v;
                        out.push((idx(e), i));
                    }
                }
            }
            out
        })
        .collect();

    fn go(x: usize, out: &mut [Option<usize>; 216], nb: &[Vec<(usize, usize)>], pos: &[[usize; 3]]) -> u64 {
        if x == 216 {
            return 1;
        }
        let mut total = 0;
        for o in 0..6 {
            let ok = nb[x].iter().all(|&(y, i)| out[y].map_or(true, |oy| pos[oy][i] == pos[o][i]));
            if ok {
                out[x] = Some(o);
                total += go(x + 1, out, nb, pos);
                out[x] = None;
            }
        }
        total
    }
    go(0, &mut [None; 216], &neighbors, &pos)
}

#[test]
fn n3_impartial_count_matches_independent_oracle() {
    let oracle = count_impartial_n3_by_profiles();
    assert_eq!(oracle, 564);
    let opts = SearchOptions { full_rank: false, rotation_pruning: false, count_all: true, node_budget: None };
    let out = search_n3(opts);
    assert!(out.exhausted);
    assert_eq!(out.solutions, oracle);
    let pruned = search_n3(SearchOptions { rotation_pruning: true, ..opts });
    assert_eq!(pruned.solutions, oracle);
}

#[test]
fn n2_enumeration_is_unsat() {
    let r = enumerate_n2();
    assert_eq!(r.candidates, 16);
    // Only the two constant mechanisms are feasible.
    assert_eq!(r.feasible, 2);
    assert_eq!(r.feasible_full_rank, 0);
    assert!(refute_impartial_ifr(2).unwrap().is_unsat());
}

#[test]
fn n3_refutation_with_and_without_pruning() {
    let plain = search_n3(SearchOptions::REFUTE);
    assert!(plain.is_unsat());
    let pruned = search_n3(SearchOptions { rotation_pruning: true, ..SearchOptions::REFUTE });
    assert!(pruned.is_unsat());
    assert!(pruned.nodes <= plain.nodes);
    let r = refute_impartial_ifr(3).unwrap();
    assert!(r.is_unsat());
}

#[test]
fn n3_without_full_rank_is_sat_and_solution_checks_out() {
    let opts = SearchOptions { full_rank: false, rotation_pruning: false, count_all: false, node_budget: None };
    let out = search_n3(opts);
    let cand = out.first_solution.expect("a constant mechanism exists");
    assert_eq!(cand.first_collision(), None);
    assert!(check_rotation_claim(&cand).unwrap());
    assert!(cand.outputs().unwrap().len() <= 2);
}

#[test]
fn every_impartial_n3_candidate_is_feasible_with_at_most_two_outputs() {
    let opts = SearchOptions { full_rank: false, rotation_pruning: false, count_all: true, node_budget: None };
    let mut seen = 0u64;
    let out = search_n3_visit(opts, &mut |cand| {
        seen += 1;
        assert_eq!(cand.first_collision(), None);
        assert!(!cand.has_full_rank());
        assert!(check_rotation_claim(cand).unwrap());
        assert!(cand.outputs().unwrap().len() <= 2);
    });
    assert_eq!(seen, out.solutions);
}

#[test]
fn rotation_claim_validation_covers_all_cases() {
    let v = validate_rotation_claim();
    assert_eq!(v.cases, 7 * 6 * 2);
    assert!(v.holds(), "{:?}", v.counterexample);
}

#[test]
fn rotation_claim_on_constant_and_forced_candidates() {
    let constant = PositionFunctions::constant(&Permutation::identity(3)).unwrap();
    assert!(check_rotation_claim(&constant).unwrap());
    // Forcing (0 1 2) and (2 0 1) leaves no impartial completion.
    let opts = SearchOptions { full_rank: false, rotation_pruning: false, count_all: false, node_budget: None };
    let out = search_n3_with_outputs(
        opts,
        &[([0, 0, 0], Permutation::identity(3)), ([5, 5, 5], Permutation::new(vec![2, 0, 1]).unwrap())],
    )
    .unwrap();
    assert!(out.is_unsat());
}

#[test]
fn search_budget_is_reported() {
    let out = search_n3(SearchOptions { node_budget: Some(3), ..SearchOptions::REFUTE });
    assert!(!out.exhausted);
    assert!(!out.is_unsat());
    assert_eq!(out.nodes, 3);
}

fn assert_unanimity_witness<M: RankingMechanism + Sync>(m: &M) {
    let finding = unanimity_chain_audit(m).unwrap();
    assert!(finding.is_unanimity(), "{finding:?}");
    assert!(finding.witness.replay(m).unwrap());
    let report = check_unanimity(m, Mode::Reduced).unwrap();
    assert_eq!(report.verdict, Verdict::Violated);
    assert!(report.witness.unwrap().replay(m).unwrap());
}

#[test]
fn chain_audit_finds_unanimity_violations() {
    assert_unanimity_witness(&BlockingMechanism::n4());
    assert_unanimity_witness(&WeakUnanimityMechanism::new(5).unwrap());
    for n in 5..=8 {
        assert_unanimity_witness(&BlockingMechanism::fixture(n).unwrap());
    }
}

#[test]
fn chain_audit_reports_impartiality_for_dictatorship() {
    let d = Dictatorship { n: 4 };
    let finding = unanimity_chain_audit(&d).unwrap();
    assert!(matches!(finding.witness, Witness::Impartiality { .. }), "{finding:?}");
    assert!(finding.witness.replay(&d).unwrap());
}

#[test]
fn chain_audit_on_constant_mechanism() {
    let c = Constant(Permutation::identity(4));
    let finding = unanimity_chain_audit(&c).unwrap();
    // The constant identity fails unanimity at the first, fully rotated profile.
    assert_eq!(finding.step, 0);
    assert!(finding.is_unanimity());
}

#[test]
fn chain_profiles_have_the_documented_shape() {
    let n = 5;
    let rot = rotated_identity(n);
    assert_eq!(rot.image(), &[1, 2, 3, 4, 0]);
    for l in 0..n {
        let p = chain_profile(n, l).unwrap();
        for i in 0..n {
            let expected = if i < n - l { rot.clone() } else { Permutation::identity(n) };
            assert_eq!(p.ranking(i), &expected);
        }
    }
    assert!(chain_profile(n, n).is_err());
}

#[test]
fn variable_numbering_round_trips() {
    assert_eq!(VARIABLES, 221_184);
    assert_eq!(var_id(0, 0, 0).unwrap(), 1);
    assert_eq!(var_id(3, REDUCED - 1, 3).unwrap(), VARIABLES);
    for id in [1, 2, 5, 1000, 55_296, 110_593, VARIABLES] {
        let (i, r, k) = decode_var(id).unwrap();
        assert_eq!(var_id(i, r, k).unwrap(), id);
    }
    assert!(decode_var(0).is_err());
    assert!(decode_var(VARIABLES + 1).is_err());
    assert!(var_id(4, 0, 0).is_err());
}

#[test]
fn full_scope_counts() {
    let enc = encode_wu_n4(Scope::Full);
    assert_eq!(enc.num_vars(), 221_184);
    assert_eq!(enc.num_clauses(), 4 * 13_824 * 7 + 331_776 * 4 * 6 + 96);
}

#[test]
fn empty_and_unanimous_subsets_are_sat_and_decode() {
    for scope in [Scope::Subset(vec![]), Scope::unanimous()] {
        let enc = encode_wu_n4(scope.clone());
        let cnf = enc.to_cnf();
        assert_eq!(cnf.clauses.len() as u64, enc.num_clauses());
        let out = dpll_solve(&cnf, 1_000_000).unwrap();
        let SatResult::Sat(model) = out.result else { panic!("expected SAT, got {:?}", out.result) };
        assert!(cnf.satisfied_by(&model));
        let mech = DecodedMechanism::from_model(&model).unwrap();
        mech.check(&scope).unwrap();
    }
}

#[test]
fn subset_with_blocking_profiles_decodes() {
    let b = BlockingMechanism::n4();
    let profiles: Vec<_> = (0..16u64)
        .map(|m| profile_indices(&b.realize(impartial::blocking::MessageVector::from_mask(4, m))).unwrap())
        .collect();
    let scope = Scope::subset(profiles).unwrap();
    let cnf = encode_wu_n4(scope.clone()).to_cnf();
    let SatResult::Sat(model) = dpll_solve(&cnf, 1_000_000).unwrap().result else { panic!() };
    DecodedMechanism::from_model(&model).unwrap().check(&scope).unwrap();
    assert!(Scope::subset(vec![[24, 0, 0, 0]]).is_err());
}

#[test]
fn dimacs_stream_matches_materialized_clauses() {
    let enc = encode_wu_n4(Scope::unanimous());
    let mut text = String::new();
    enc.write_dimacs(&mut text).unwrap();
    assert!(text.starts_with(&format!("p cnf 221184 {}\n", enc.num_clauses())));
    assert!(text.lines().skip(1).all(|l| l.ends_with(" 0")));
    let parsed = Cnf::parse_dimacs(&text).unwrap();
    assert_eq!(parsed, enc.to_cnf());
}

#[test]
fn unanimity_units_fix_agreed_ranking() {
    let enc = encode_wu_n4(Scope::Subset(vec![]));
    let units: Vec<Vec<i32>> = enc.clauses().filter(|c| c.len() == 1).collect();
    assert_eq!(units.len(), 96);
    // Unanimous (1 0 3 2): agent 0 sits at position 1.
    let p = Permutation::new(vec![1, 0, 3, 2]).unwrap();
    let idx = p.lex_rank().unwrap();
    let r = idx * 24 * 24 + idx * 24 + idx;
    let id = var_id(0, r, 1).unwrap() as i32;
    assert!(units.contains(&vec![id]));
}
