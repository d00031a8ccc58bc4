//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! runtime and budget; the process exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use impartial::axioms::*;
use impartial::blocking::*;
use impartial::impossibility::*;
use impartial::perms::{Permutation, RankingProfile};
use impartial::set::PositionSet;
use impartial::toys::{Constant, Dictatorship};
use impartial::tricolor::fixtures::{shifted_diagonal, shifted_diagonal_triple};
use impartial::tricolor::*;
use impartial::RankingMechanism;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn bits(v: &[u8]) -> MessageVector {
    MessageVector::from_bits(v).unwrap()
}

fn perm(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
}

fn c1_blocking_n4() -> Outcome {
    let m = BlockingMechanism::n4();
    let sweep = m.certify_messages().map_err(|e| e.to_string())?.map_err(|v| v.to_string())?;
    ensure!(sweep.vectors == 16, "swept {} vectors", sweep.vectors);
    let t = g4_table();
    let at = |b: &[u8]| &t[bits(b).mask() as usize];
    ensure!(*at(&[0, 1, 0, 0]) == perm(&[0, 3, 1, 2]), "g(0,1,0,0) = {}", at(&[0, 1, 0, 0]));
    ensure!(*at(&[1, 0, 0, 1]) == perm(&[3, 1, 0, 2]), "g(1,0,0,1) = {}", at(&[1, 0, 0, 1]));
    for (b, k) in [([0, 1, 0, 0], 0), ([0, 0, 1, 1], 1), ([0, 0, 0, 1], 2), ([0, 0, 0, 0], 3)] {
        ensure!(at(&b).agent_at(k) == 0, "g{b:?} does not put agent 0 at {k}");
    }
    Ok(format!("16 vectors, {} flips, 6 anchors", sweep.flips))
}

fn c2_blocking_fixtures() -> Outcome {
    let mut vectors = 0;
    for n in 5..=10 {
        let (rho, g) = fixture_multigraph(n).map_err(|e| e.to_string())?;
        verify_multigraph(&rho, &g).map_err(|v| format!("n = {n}: {v}"))?;
        let m = BlockingMechanism::from_multigraph(rho, &g).map_err(|e| e.to_string())?;
        let sweep = m.certify_messages().map_err(|e| e.to_string())?.map_err(|v| format!("n = {n}: {v}"))?;
        ensure!(sweep.vectors == 1 << n, "n = {n}: swept {}", sweep.vectors);
        vectors += sweep.vectors;
    }
    Ok(format!("n = 5..10, {vectors} message vectors"))
}

fn c3_random_multigraphs() -> Outcome {
    let mut summary = Vec::new();
    for n in 11..=16 {
        let mut attempts = Vec::new();
        for seed in 0..10 {
            let (m, g, report) = BlockingMechanism::random(n, seed, DEFAULT_MAX_RETRIES)
                .map_err(|e| format!("n = {n}, seed {seed}: {e}"))?;
            verify_multigraph(m.rho(), &g).map_err(|v| format!("n = {n}, seed {seed}: {v}"))?;
            m.certify_messages().map_err(|e| e.to_string())?.map_err(|v| format!("n = {n}, seed {seed}: {v}"))?;
            attempts.push(report.attempts);
        }
        attempts.sort_unstable();
        let median = (attempts[4] + attempts[5]) as f64 / 2.0;
        summary.push(format!("n={n}:{median}"));
    }
    for n in 11..=64 {
        ensure!(lll_margin(n) < 1.0, "lll_margin({n}) = {}", lll_margin(n));
    }
    Ok(format!("median retries {}", summary.join(" ")))
}

fn c4_worked_example() -> Outcome {
    let (rho, sets) = blocking_sets_n6();
    let m = BlockingMechanism::from_sets(rho, sets).map_err(|e| e.to_string())?;
    let b = bits(&[0, 0, 1, 1, 1, 0]);
    let out = m.evaluate(b).map_err(|e| e.to_string())?;
    ensure!(out == perm(&[3, 1, 4, 0, 2, 5]), "g(b) = {out}");
    let flipped = m.evaluate(b.with(1, true)).map_err(|e| e.to_string())?;
    ensure!(flipped == Permutation::identity(6), "flipped g = {flipped}");
    Ok("(3 1 4 0 2 5), identity after flip".into())
}

fn c5_tricolor_n5() -> Outcome {
    let w = WeakUnanimityMechanism::new(5).map_err(|e| e.to_string())?;
    // Bijection and decisive impartiality over all triples, single worker.
    let sweep = sweep_decisive_triples(&w, 0..120);
    if let Some((p, q, r, f)) = sweep.witness {
        return Err(format!("triple ({p}, {q}, {r}): {f:?}"));
    }
    ensure!(sweep.triples == 120 * 120 * 120, "swept {} triples", sweep.triples);
    let wu = check_weak_unanimity(&w, Mode::Reduced).map_err(|e| e.to_string())?;
    ensure!(wu.verdict == Verdict::Holds && wu.checked == 120, "weak unanimity: {:?}", wu.witness);
    // Non-decisive agents: the output reads only rankings 0, 1, 2.
    let base = RankingProfile::unanimous(&Permutation::identity(5));
    let reference = w.rank(&base).map_err(|e| e.to_string())?;
    for i in 3..5 {
        for x in 0..120 {
            let p = base.replace(i, Permutation::lex_unrank(5, x).unwrap()).unwrap();
            ensure!(w.rank(&p).unwrap() == reference, "agent {i} with ranking {x} changes the output");
        }
    }
    Ok(format!("{} triples, 120 unanimous profiles", 120u64.pow(3)))
}

fn c6_cutting_families() -> Outcome {
    for n in 5..=12 {
        let f = cutting_family(n).map_err(|e| e.to_string())?;
        verify_cutting_family(&f).map_err(|v| format!("n = {n}: {v}"))?;
    }
    let f = cutting_family(5).unwrap();
    let listed: [[&[usize]; 4]; 3] = [
        [&[0, 1, 2], &[0, 3, 4], &[1, 3], &[2, 4]],
        [&[0, 1, 3], &[0, 2, 4], &[1, 4], &[2, 3]],
        [&[0, 1, 4], &[0, 2, 3], &[1, 2], &[3, 4]],
    ];
    for (color, sets) in listed.iter().enumerate() {
        for (l, s) in sets.iter().enumerate() {
            let expected: PositionSet = s.iter().copied().collect();
            ensure!(f.get(color, l) == expected, "S^{color}_{l} = {:?}", f.get(color, l).to_vec());
        }
    }
    let k = [[0, 0, 0, 1, 1], [0, 0, 1, 0, 1], [0, 0, 1, 1, 0]];
    let k2 = [[1, 2, 3, 2, 3], [1, 2, 3, 3, 2], [1, 2, 2, 3, 3]];
    for i in 0..3 {
        for u in 0..5 {
            let meet = f.get(i, k[i][u]).intersection(f.get(i, k2[i][u]));
            ensure!(meet == PositionSet::singleton(u), "color {i}, u = {u}: {:?}", meet.to_vec());
        }
    }
    Ok("n = 5..12, 12 sets, 15 intersections".into())
}

fn c7_shifted_diagonal_fixture() -> Outcome {
    let checked = verify_triple(&shifted_diagonal_triple(), shifted_diagonal, 0..5).map_err(|v| v.to_string())?;
    ensure!(checked == 375, "checked {checked} quadruples");
    Ok("15 diagonal entries, 375 quadruples".into())
}

fn c8_small_n_refutation() -> Outcome {
    let two = refute_impartial_ifr(2).map_err(|e| e.to_string())?;
    ensure!(two.is_unsat(), "n = 2: {two:?}");
    let Refutation::Searched { plain, pruned, rotation } = refute_impartial_ifr(3).map_err(|e| e.to_string())? else {
        return Err("n = 3 did not search".into());
    };
    ensure!(plain.is_unsat() && pruned.is_unsat(), "n = 3: plain {plain:?}, pruned {pruned:?}");
    ensure!(rotation.holds(), "rotation claim: {:?}", rotation.counterexample);
    let relaxed = search_n3(SearchOptions { full_rank: false, ..SearchOptions::REFUTE });
    let cand = relaxed.first_solution.ok_or("no impartial mechanism without full rank")?;
    ensure!(cand.first_collision().is_none(), "relaxed solution is not a mechanism");
    Ok(format!(
        "nodes plain {} pruned {}, rotation cases {}, relaxed SAT after {} nodes",
        plain.nodes, pruned.nodes, rotation.cases, relaxed.nodes
    ))
}

fn c9_unanimity_chain() -> Outcome {
    fn audit<M: RankingMechanism + Sync>(name: &str, m: &M) -> Outcome {
        let f = unanimity_chain_audit(m).map_err(|e| format!("{name}: {e}"))?;
        ensure!(f.is_unanimity(), "{name}: chain stopped at {}", f.description);
        ensure!(f.witness.replay(m).map_err(|e| e.to_string())?, "{name}: witness does not replay");
        let r = check_unanimity(m, Mode::Reduced).map_err(|e| e.to_string())?;
        ensure!(r.verdict == Verdict::Violated, "{name}: check_unanimity says {}", r.verdict.name());
        Ok(format!("{name} step {}", f.step))
    }
    let a = audit("blocking n=4", &BlockingMechanism::n4())?;
    let b = audit("tricolor n=5", &WeakUnanimityMechanism::new(5).map_err(|e| e.to_string())?)?;
    Ok(format!("{a}, {b}"))
}

fn reports<M: RankingMechanism + Sync>(m: &M, mode: Mode) -> Result<Vec<AxiomReport>, String> {
    let mut out = Vec::new();
    for a in Axiom::ALL {
        match check(a, m, mode) {
            Ok(r) => out.push(r),
            Err(impartial::Error::ModeInfeasible(_)) => {}
            Err(e) => return Err(format!("{a}: {e}")),
        }
    }
    Ok(out)
}

fn c10_meta_check() -> Outcome {
    let mut all: Vec<(String, Vec<AxiomReport>)> = vec![
        ("blocking n=4".into(), reports(&BlockingMechanism::n4(), Mode::Full)?),
        ("tricolor n=5".into(), reports(&WeakUnanimityMechanism::new(5).unwrap(), Mode::Reduced)?),
        ("constant n=4".into(), reports(&Constant(Permutation::identity(4)), Mode::Full)?),
        ("dictatorship n=4".into(), reports(&Dictatorship { n: 4 }, Mode::Full)?),
    ];
    for n in 5..=10 {
        all.push((format!("blocking n={n}"), reports(&BlockingMechanism::fixture(n).unwrap(), Mode::Reduced)?));
    }
    let mut count = 0;
    for (name, rs) in &all {
        implication_meta_check(rs).map_err(|i| format!("{name}: {i}"))?;
        count += rs.len();
    }
    Ok(format!("{} mechanisms, {count} reports", all.len()))
}

fn c11_reduced_matches_full() -> Outcome {
    let m = BlockingMechanism::n4();
    for a in [Axiom::Impartiality, Axiom::IndividualFullRank] {
        let reduced = check(a, &m, Mode::Reduced).map_err(|e| e.to_string())?;
        let full = check(a, &m, Mode::Full).map_err(|e| e.to_string())?;
        ensure!(reduced.coverage == Coverage::ReducedExhaustive, "{a}: reduced coverage {:?}", reduced.coverage);
        ensure!(full.coverage == Coverage::Exhaustive, "{a}: full coverage {:?}", full.coverage);
        ensure!(reduced.verdict == full.verdict, "{a}: reduced {:?} vs full {:?}", reduced.verdict, full.verdict);
        ensure!(full.verdict == Verdict::Holds, "{a}: {:?}", full.witness);
    }
    Ok(format!("{} profiles", 24u64.pow(4)))
}

fn c12_wu_encoding() -> Outcome {
    let full = encode_wu_n4(Scope::Full);
    ensure!(full.num_vars() == 221_184, "{} variables", full.num_vars());
    let scope = Scope::unanimous();
    let cnf = encode_wu_n4(scope.clone()).to_cnf();
    let out = dpll_solve(&cnf, 10_000_000).map_err(|e| e.to_string())?;
    let SatResult::Sat(model) = out.result else {
        return Err(format!("unanimous subset: {:?}", out.result));
    };
    ensure!(cnf.satisfied_by(&model), "model does not satisfy the formula");
    let decoded = DecodedMechanism::from_model(&model).map_err(|e| e.to_string())?;
    decoded.check(&scope).map_err(|v| v.to_string())?;
    Ok(format!("{} clauses in full scope, subset SAT after {} decisions", full.num_clauses(), out.nodes))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("blocking n=4 certification", 1, c1_blocking_n4),
        ("blocking fixtures n=5..10", 10, c2_blocking_fixtures),
        ("random multigraphs n=11..16", 300, c3_random_multigraphs),
        ("worked example n=6", 1, c4_worked_example),
        ("tricolor n=5 certification", 120, c5_tricolor_n5),
        ("cutting families", 1, c6_cutting_families),
        ("shifted-diagonal triple", 1, c7_shifted_diagonal_fixture),
        ("impartial + full rank refuted for n=2,3", 300, c8_small_n_refutation),
        ("unanimity chain audit", 1, c9_unanimity_chain),
        ("implication meta-check", 60, c10_meta_check),
        ("reduced vs full verification n=4", 120, c11_reduced_matches_full),
        ("weak-unanimity encoding n=4", 60, c12_wu_encoding),
    ];
    let mut failed = 0;
    for (idx, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match result {
            Ok(d) if !over => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {budget} s budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name} [{:.3} s / {budget} s] {detail}", idx + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
