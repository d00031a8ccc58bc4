use std::fs::File;
use std::io::{self, BufWriter, Write};

use impartial::axioms::{check_with, implication_meta_check, Axiom, Mode, Verdict, DEFAULT_TRIALS};
use impartial::blocking::{blocking_sets_n6, fixture_multigraph, g4_table, random_multigraph, RhoVector};
use impartial::impossibility::encode::{decode_var, profile_indices, VARIABLES};
use impartial::impossibility::{
    dpll_solve, encode_wu_n4, refute_impartial_ifr, unanimity_chain_audit, DecodedMechanism, Refutation, SatResult,
    Scope, SearchOutcome,
};
use impartial::perms::MAX_RANK_N;
use impartial::tricolor::fixtures::shifted_diagonal_triple;
use impartial::tricolor::{cutting_family, MatrixTriple};
use impartial::{Error, RankingMechanism};
use serde_json::{json, Value};

use crate::args::{AuditArgs, ExportArgs, GraphSearchArgs, ImpossibilityArgs, ModeArg, RankArgs, VerifyArgs};
use crate::descriptor::Kind;
use crate::error::{CliError, CliResult, CAPACITY, FAILED, OK};
use crate::exec::Threaded;
use crate::json::*;

/// Writes to `out` if given, otherwise to standard output.
fn emit(out: Option<&str>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::io("stdout", e))
        }
    }
}

pub fn rank(args: &RankArgs) -> CliResult<u8> {
    let (d, mech) = args.mechanism.build()?;
    let profile = read_json::<ProfileJson>(&args.profile)?.to_profile(&args.profile)?;
    if profile.n() != d.n {
        return Err(CliError::mismatch(format!(
            "{}: profile has n = {}, mechanism has n = {}",
            args.profile,
            profile.n(),
            d.n
        )));
    }
    let ranking = mech.rank(&profile)?;
    let line = json!({ "mechanism": d, "ranking": ranking.image() });
    emit(None, &format!("{line}\n"))?;
    eprintln!("position  agent");
    for (k, a) in ranking.image().iter().enumerate() {
        eprintln!("{k:>8}  {a:>5}");
    }
    Ok(OK)
}

pub fn verify(args: &VerifyArgs) -> CliResult<u8> {
    let (d, mech) = args.mechanism.build()?;
    let mode = match args.mode {
        ModeArg::Exhaustive => Mode::Reduced,
        ModeArg::Full => Mode::Full,
        ModeArg::ExhaustiveTriples if d.kind == Kind::WeakUnanimity => Mode::Reduced,
        ModeArg::ExhaustiveTriples => {
            return Err(CliError::mismatch("--mode exhaustive-triples applies to weak-unanimity only"))
        }
        ModeArg::Sampled => Mode::Sampled { trials: args.trials.unwrap_or(DEFAULT_TRIALS), seed: args.sample_seed },
    };
    if !matches!(mode, Mode::Sampled { .. }) && args.trials.is_some() {
        return Err(CliError::mismatch("--trials needs --mode sampled"));
    }
    let axioms = selected_axioms(&args.axiom)?;
    let exec = Threaded::new(args.jobs);
    let mut reports = Vec::new();
    let mut entries = Vec::new();
    let mut infeasible = false;
    for &a in &axioms {
        match check_with(a, &mech, mode, &exec) {
            Ok(r) => {
                let replayed = match &r.witness {
                    Some(w) => Some(w.replay(&mech)?),
                    None => None,
                };
                entries.push(report_json(&r, replayed));
                reports.push(r);
            }
            Err(Error::ModeInfeasible(why)) => {
                infeasible = true;
                entries.push(json!({ "axiom": a.name(), "verdict": "infeasible", "error": why }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let lattice = match implication_meta_check(&reports) {
        Ok(()) => json!({ "consistent": true }),
        Err(i) => json!({ "consistent": false, "stronger": i.stronger.name(), "weaker": i.weaker.name() }),
    };
    let out = json!({
        "mechanism": d,
        "mode": args.mode.name(),
        "reports": entries,
        "lattice": lattice,
    });
    emit(None, &to_text(&out))?;
    let violated = reports.iter().any(|r| r.verdict == Verdict::Violated);
    Ok(if violated || lattice["consistent"] == false {
        FAILED
    } else if infeasible {
        CAPACITY
    } else {
        OK
    })
}

fn selected_axioms(names: &[String]) -> CliResult<Vec<Axiom>> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(Axiom::ALL);
        } else {
            out.push(name.parse::<Axiom>().map_err(|e| CliError::input(e.to_string()))?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn graph_search(args: &GraphSearchArgs) -> CliResult<u8> {
    if args.n > MAX_RANK_N {
        return Err(CliError::new(CAPACITY, format!("n = {} exceeds the supported maximum of {MAX_RANK_N}", args.n)));
    }
    let rho = RhoVector::successor(args.n);
    let (g, report) = match random_multigraph(args.n, &rho, args.seed, args.max_retries) {
        Err(Error::InvalidParameter(why)) => return Err(CliError::mismatch(why)),
        other => other?,
    };
    eprintln!("multigraph found after {} attempts (stream {})", report.attempts, report.stream());
    let v = serde_json::to_value(MultigraphJson::new(&rho, &g, Some(report))).expect("serializable");
    emit(args.out.as_deref(), &to_text(&v))?;
    Ok(OK)
}

pub fn export(args: &ExportArgs) -> CliResult<u8> {
    let name = args.fixture.as_str();
    let numbered = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    let v = if name == "blocking-n6" {
        let (rho, sets) = blocking_sets_n6();
        blocking_sets_json(&rho, &sets)
    } else if name == "g4" {
        let table: Vec<Value> = g4_table()
            .iter()
            .enumerate()
            .map(|(mask, p)| json!({ "messages": (0..4).map(|i| mask >> i & 1).collect::<Vec<_>>(), "ranking": p.image() }))
            .collect();
        json!({ "n": 4, "rho": impartial::blocking::BlockingMechanism::n4().rho().as_slice(), "table": table })
    } else if name == "shifted-diagonal" {
        let t = shifted_diagonal_triple();
        let m = t.m();
        let matrices: Vec<Vec<Vec<usize>>> =
            (0..3).map(|c| (0..m).map(|p| (0..m).map(|q| t.entry(c, p, q)).collect()).collect()).collect();
        json!({ "n": t.n(), "m": m, "diagonal": "d^i_p = p + i mod 5", "matrices": matrices })
    } else if let Some(n) = numbered("multigraph-") {
        let (rho, g) = fixture_multigraph(n).map_err(|e| CliError::input(format!("fixture `{name}`: {e}")))?;
        serde_json::to_value(MultigraphJson::new(&rho, &g, None)).expect("serializable")
    } else if let Some(n) = numbered("cutting-") {
        if n > MAX_RANK_N {
            return Err(CliError::new(CAPACITY, format!("n = {n} exceeds the supported maximum of {MAX_RANK_N}")));
        }
        let f = cutting_family(n).map_err(|e| CliError::input(format!("fixture `{name}`: {e}")))?;
        serde_json::to_value(CuttingFamilyJson::new(&f)).expect("serializable")
    } else {
        return Err(CliError::input(format!(
            "unknown fixture `{name}`; expected blocking-n6, g4, shifted-diagonal, multigraph-N (5..10) or cutting-N (5..20)"
        )));
    };
    emit(args.out.as_deref(), &to_text(&v))?;
    Ok(OK)
}

fn outcome_json(o: &SearchOutcome) -> Value {
    json!({ "nodes": o.nodes, "failures": o.failures, "exhausted": o.exhausted, "unsat": o.is_unsat() })
}

pub fn impossibility(args: &ImpossibilityArgs) -> CliResult<u8> {
    if args.encode_n4 {
        return encode_n4(args);
    }
    let n = args.n.ok_or_else(|| CliError::mismatch("impossibility needs --n 2, --n 3 or --encode-n4"))?;
    let r = refute_impartial_ifr(n).map_err(|e| CliError::mismatch(e.to_string()))?;
    let detail = match &r {
        Refutation::Enumerated(e) => json!({
            "method": "enumeration",
            "candidates": e.candidates,
            "feasible": e.feasible,
            "feasible_full_rank": e.feasible_full_rank,
        }),
        Refutation::Searched { plain, pruned, rotation } => json!({
            "method": "backtracking",
            "plain": outcome_json(plain),
            "rotation_pruned": outcome_json(pruned),
            "rotation_claim": { "cases": rotation.cases, "nodes": rotation.nodes, "holds": rotation.holds() },
        }),
    };
    let v = json!({
        "n": n,
        "axioms": ["impartiality", "individual-full-rank"],
        "result": if r.is_unsat() { "unsat" } else { "not-refuted" },
        "detail": detail,
    });
    emit(None, &to_text(&v))?;
    Ok(if r.is_unsat() { OK } else { FAILED })
}

/// Adapts an `io::Write` to the `fmt::Write` the encoder streams into.
struct FmtWriter<W: Write> {
    inner: W,
    error: Option<io::Error>,
}

impl<W: Write> std::fmt::Write for FmtWriter<W> {
    fn write_str(&mut self, s: &str) -> std::fmt::Result {
        self.inner.write_all(s.as_bytes()).map_err(|e| {
            self.error = Some(e);
            std::fmt::Error
        })
    }
}

fn encode_n4(args: &ImpossibilityArgs) -> CliResult<u8> {
    if args.n.is_some_and(|n| n != 4) {
        return Err(CliError::mismatch("--encode-n4 fixes n = 4"));
    }
    let out = args.out.as_deref().ok_or_else(|| CliError::mismatch("--encode-n4 needs --out"))?;
    let scope = match &args.profiles {
        None => Scope::Full,
        Some(path) => {
            let list = read_json::<Vec<ProfileJson>>(path)?;
            let mut profiles = Vec::with_capacity(list.len());
            for (t, p) in list.iter().enumerate() {
                let profile = p.to_profile(&format!("{path}: entry {t}"))?;
                let idx = profile_indices(&profile).map_err(|e| CliError::input(format!("{path}: entry {t}: {e}")))?;
                profiles.push(idx);
            }
            Scope::subset(profiles)?
        }
    };
    let enc = encode_wu_n4(scope.clone());

    let file = File::create(out).map_err(|e| CliError::io(out, e))?;
    let mut w = FmtWriter { inner: BufWriter::new(file), error: None };
    if enc.write_dimacs(&mut w).is_err() {
        return Err(CliError::io(out, w.error.unwrap_or_else(|| io::Error::other("formatting failed"))));
    }
    w.inner.flush().map_err(|e| CliError::io(out, e))?;

    let map_path = args.map.clone().unwrap_or_else(|| format!("{out}.vars.json"));
    let variables: Vec<[u64; 3]> = (1..=VARIABLES)
        .map(|id| {
            let (i, r, k) = decode_var(id).expect("in range");
            [i as u64, r, k as u64]
        })
        .collect();
    let scope_json = match &scope {
        Scope::Full => json!({ "kind": "full" }),
        Scope::Subset(p) => json!({ "kind": "subset", "profiles": p }),
    };
    let sidecar = json!({
        "n": 4,
        "num_vars": enc.num_vars(),
        "num_clauses": enc.num_clauses(),
        "scope": scope_json,
        "variable_meaning": "variables[v - 1] = [i, r, k]: agent i takes position k when the other agents, in increasing order, submit rankings with lexicographic indices r = a * 576 + b * 24 + c",
        "variables": variables,
    });
    std::fs::write(&map_path, serde_json::to_string(&sidecar).expect("serializable"))
        .map_err(|e| CliError::io(&map_path, e))?;

    let mut summary = json!({
        "dimacs": out,
        "map": map_path,
        "num_vars": enc.num_vars(),
        "num_clauses": enc.num_clauses(),
        "scope_profiles": scope.len(),
    });
    let mut code = OK;
    if args.solve {
        if matches!(scope, Scope::Full) {
            return Err(CliError::new(CAPACITY, "--solve is limited to subset scopes; use an external solver"));
        }
        let cnf = enc.to_cnf();
        let outcome = dpll_solve(&cnf, args.budget)?;
        let (result, decoded) = match &outcome.result {
            SatResult::Sat(model) => {
                let check = DecodedMechanism::from_model(model)?.check(&scope);
                if check.is_err() {
                    code = FAILED;
                }
                ("sat", Some(check.map_or_else(|v| v.to_string(), |_| "ok".into())))
            }
            SatResult::Unsat => ("unsat", None),
            SatResult::BudgetExceeded => {
                code = FAILED;
                ("budget-exceeded", None)
            }
        };
        summary["solve"] = json!({ "result": result, "decisions": outcome.nodes, "decoded_check": decoded });
    }
    emit(None, &to_text(&summary))?;
    Ok(code)
}

pub fn audit_unanimity(args: &AuditArgs) -> CliResult<u8> {
    let (d, mech) = args.mechanism.build()?;
    let finding = unanimity_chain_audit(&mech)?;
    let replayed = finding.witness.replay(&mech)?;
    let is_unanimity = finding.is_unanimity();
    let v = json!({
        "mechanism": d,
        "violated": finding.witness.axiom().name(),
        "finding": finding_json(&finding, replayed),
    });
    emit(None, &to_text(&v))?;
    Ok(if is_unanimity && replayed { OK } else { FAILED })
}
