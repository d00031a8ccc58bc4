use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impartial")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_lists_exit_codes() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    for line in ["0  success", "2  input could not be parsed", "4  random multigraph search", "5  capacity limit"] {
        assert!(text.contains(line), "{line}");
    }
    for sub in ["rank", "verify", "graph-search", "export", "impossibility", "audit-unanimity"] {
        assert!(text.contains(sub), "{sub}");
    }
}

#[test]
fn rank_unanimous_profile_with_weak_unanimity() {
    let dir = TempDir::new().unwrap();
    let p =
        write(&dir, "p.json", r#"{"n":5,"rankings":[[4,3,2,1,0],[4,3,2,1,0],[4,3,2,1,0],[4,3,2,1,0],[4,3,2,1,0]]}"#);
    let o = run(&["rank", "--mechanism", "weak-unanimity", "--n", "5", "--profile", s(&p)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["ranking"], serde_json::json!([4, 3, 2, 1, 0]));
    assert_eq!(v["mechanism"]["kind"], "weak-unanimity");
    assert!(stderr(&o).contains("position"));
}

#[test]
fn rank_worked_example_profile() {
    let dir = TempDir::new().unwrap();
    // Agents 2, 3, 4 rank their successor above themselves; agent 5 ranks 0
    // below itself.
    let p = write(
        &dir,
        "p.json",
        r#"{"n":6,"rankings":[[0,1,2,3,4,5],[0,1,2,3,4,5],[0,1,3,2,4,5],[0,1,2,4,3,5],[0,1,2,3,5,4],[5,1,2,3,4,0]]}"#,
    );
    for kind in ["blocking", "blocking-fixture"] {
        let o = run(&["rank", "--mechanism", kind, "--n", "6", "--profile", s(&p)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let v = stdout_json(&o);
        assert_eq!(v["ranking"], serde_json::json!([3, 1, 4, 0, 2, 5]));
        assert_eq!(v["mechanism"]["kind"], "blocking-fixture");
    }
}

#[test]
fn malformed_profiles_exit_2() {
    let dir = TempDir::new().unwrap();
    let repeated = write(&dir, "r.json", r#"{"n":4,"rankings":[[0,0,1,2],[0,1,2,3],[0,1,2,3],[0,1,2,3]]}"#);
    let o = run(&["rank", "--mechanism", "blocking-n4", "--profile", s(&repeated)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("rankings[0]"), "{}", stderr(&o));

    let syntax = write(&dir, "s.json", "{\"n\":4,\n\"rankings\":[[0,1,2,3],]}");
    let o = run(&["rank", "--mechanism", "blocking-n4", "--profile", s(&syntax)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let short = write(&dir, "n.json", r#"{"n":4,"rankings":[[0,1,2,3]]}"#);
    assert_eq!(code(&run(&["rank", "--mechanism", "blocking-n4", "--profile", s(&short)])), 2);
}

#[test]
fn descriptor_mismatches_exit_3() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", r#"{"n":4,"rankings":[[0,1,2,3],[0,1,2,3],[0,1,2,3],[0,1,2,3]]}"#);
    let cases: [&[&str]; 6] = [
        &["--mechanism", "weak-unanimity", "--n", "5"],
        &["--mechanism", "blocking-n4", "--n", "5"],
        &["--mechanism", "blocking-random", "--n", "11"],
        &["--mechanism", "blocking-random", "--n", "9", "--seed", "1"],
        &["--mechanism", "blocking-fixture", "--n", "4"],
        &["--mechanism", "weak-unanimity", "--n", "4"],
    ];
    for args in cases {
        let mut full = vec!["rank"];
        full.extend_from_slice(args);
        full.extend(["--profile", s(&p)]);
        assert_eq!(code(&run(&full)), 3, "{args:?}");
    }
}

#[test]
fn capacity_and_retries_exit_codes() {
    let o = run(&["verify", "--mechanism", "weak-unanimity", "--n", "21"]);
    assert_eq!(code(&o), 5);
    assert_eq!(code(&run(&["graph-search", "--n", "21", "--seed", "0"])), 5);
    // Seed 3 needs more than one draw at n = 11.
    let o = run(&["graph-search", "--n", "11", "--seed", "3", "--max-retries", "1"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert_eq!(code(&run(&["graph-search", "--n", "10", "--seed", "0"])), 3);
}

#[test]
fn verify_blocking_n4_claimed_axioms() {
    let o = run(&["verify", "--mechanism", "blocking-n4", "--axiom", "impartiality,monotonicity,ifr"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["verdict"] == "holds" && r["coverage"] == "reduced-exhaustive"));
    assert_eq!(v["lattice"]["consistent"], true);

    let full = run(&["verify", "--mechanism", "blocking-n4", "--axiom", "impartiality,ifr", "--mode", "full"]);
    assert_eq!(code(&full), 0);
    assert!(stdout_json(&full)["reports"].as_array().unwrap().iter().all(|r| r["coverage"] == "exhaustive"));

    // Unanimity fails for every impartial mechanism.
    assert_eq!(code(&run(&["verify", "--mechanism", "blocking-n4"])), 1);
}

#[test]
fn verify_weak_unanimity_unanimity_fails_with_witness() {
    let o = run(&["verify", "--mechanism", "weak-unanimity", "--n", "5", "--axiom", "unanimity"]);
    assert_eq!(code(&o), 1);
    let r = &stdout_json(&o)["reports"][0];
    assert_eq!(r["verdict"], "violated");
    assert_eq!(r["witness"]["axiom"], "unanimity");
    assert_eq!(r["witness_replays"], true);
}

#[test]
fn verify_weak_unanimity_exhaustive_triples() {
    let o = run(&[
        "verify",
        "--mechanism",
        "weak-unanimity",
        "--n",
        "5",
        "--axiom",
        "impartiality,weak-unanimity,ifr",
        "--mode",
        "exhaustive-triples",
        "--jobs",
        "4",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["reports"][0]["checked"], 120 * 120 * 120);
    let o = run(&["verify", "--mechanism", "blocking-n4", "--mode", "exhaustive-triples"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_output_does_not_depend_on_jobs() {
    let args = |jobs: &'static str| {
        run(&["verify", "--mechanism", "blocking-n4", "--mode", "full", "--axiom", "all", "--jobs", jobs])
    };
    let (a, b) = (args("1"), args("3"));
    assert_eq!(code(&a), 1);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sampled_verify_is_inconclusive_and_deterministic() {
    let args = ["verify", "--mechanism", "blocking", "--n", "7", "--axiom", "impartiality", "--mode", "sampled"];
    let mut with_trials = args.to_vec();
    with_trials.extend(["--trials", "300", "--sample-seed", "5"]);
    let o = run(&with_trials);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = &stdout_json(&o)["reports"][0];
    assert_eq!(r["verdict"], "inconclusive-sampled");
    assert_eq!(r["trials"], 300);
    assert_eq!(r["seed"], 5);
    assert_eq!(o.stdout, run(&with_trials).stdout);
    assert_eq!(code(&run(&["verify", "--mechanism", "blocking-n4", "--trials", "5"])), 3);
}

#[test]
fn verify_random_blocking_mechanism() {
    let o = run(&[
        "verify",
        "--mechanism",
        "blocking-random",
        "--n",
        "11",
        "--seed",
        "7",
        "--axiom",
        "impartiality,monotonicity,ifr",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["mechanism"]["seed"], 7);
}

#[test]
fn graph_search_is_byte_identical_and_reloads() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = run(&["graph-search", "--n", "12", "--seed", "1", "--out", s(p)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["n"], 12);
    assert_eq!(v["search"]["seed"], 1);
    assert_eq!(v["rho"][11], 0);

    let o = run(&[
        "verify",
        "--mechanism",
        "blocking-fixture",
        "--n",
        "12",
        "--graph",
        s(&a),
        "--axiom",
        "impartiality,monotonicity,ifr",
        "--jobs",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["mechanism"]["fixture"], s(&a));

    // Color 3 must join rho_3 = 4 to agents 0, 1 and 2.
    let mut broken = v.clone();
    broken["edges"]["3"] = serde_json::json!([]);
    let c = write(&dir, "c.json", &broken.to_string());
    let o = run(&["verify", "--mechanism", "blocking-fixture", "--n", "12", "--graph", s(&c)]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn export_blocking_sets_n6() {
    let o = run(&["export", "--fixture", "blocking-n6"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["rho"], serde_json::json!([1, 2, 3, 4, 5, 0]));
    // Agent 1 with message 0 blocks {2, 4} for agent 0.
    assert_eq!(v["sets"]["1"]["0"][0], serde_json::json!([2, 4]));
    assert_eq!(v["sets"]["2"]["1"][0], serde_json::json!([1, 4, 5]));
    assert_eq!(v["sets"]["5"]["0"][0], serde_json::json!([]));
}

#[test]
fn export_cutting_family_golden() {
    let o = run(&["export", "--fixture", "cutting-5"]);
    assert_eq!(code(&o), 0);
    let expected = "{\n  \"n\": 5,\n  \"sets\": {\n    \"0\": [[0,1,2],[0,3,4],[1,3],[2,4]],\n    \"1\": [[0,1,3],[0,2,4],[1,4],[2,3]],\n    \"2\": [[0,1,4],[0,2,3],[1,2],[3,4]]\n  }\n}\n";
    assert_eq!(String::from_utf8_lossy(&o.stdout), expected);
}

#[test]
fn exported_family_and_graph_reload() {
    let dir = TempDir::new().unwrap();
    let fam = dir.path().join("f.json");
    assert_eq!(code(&run(&["export", "--fixture", "cutting-6", "--out", s(&fam)])), 0);
    let o = run(&["audit-unanimity", "--mechanism", "weak-unanimity", "--n", "6", "--family", s(&fam)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let graph = dir.path().join("g.json");
    assert_eq!(code(&run(&["export", "--fixture", "multigraph-7", "--out", s(&graph)])), 0);
    let o = run(&["verify", "--mechanism", "blocking-fixture", "--n", "7", "--graph", s(&graph), "--axiom", "ifr"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    // Color 0 containing color 1's first set violates the family conditions.
    let bad = write(
        &dir,
        "bad.json",
        r#"{"n":5,"sets":{"0":[[0,1,2,3],[0,3,4],[1,3],[2,4]],"1":[[0,1,3],[0,2,4],[1,4],[2,3]],"2":[[0,1,4],[0,2,3],[1,2],[3,4]]}}"#,
    );
    let o = run(&["audit-unanimity", "--mechanism", "weak-unanimity", "--n", "5", "--family", s(&bad)]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert_eq!(code(&run(&["export", "--fixture", "nonsense"])), 2);
}

#[test]
fn shifted_diagonal_export_has_the_fixture_diagonal() {
    let v = stdout_json(&run(&["export", "--fixture", "shifted-diagonal"]));
    for i in 0..3 {
        for p in 0..5 {
            assert_eq!(v["matrices"][i][p][p], (p + i) % 5);
        }
    }
}

#[test]
fn impossibility_small_n() {
    let o = run(&["impossibility", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["result"], "unsat");
    let o = run(&["impossibility", "--n", "3"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["detail"]["plain"]["unsat"], true);
    assert_eq!(v["detail"]["rotation_pruned"]["unsat"], true);
    assert_eq!(code(&run(&["impossibility", "--n", "5"])), 3);
    assert_eq!(code(&run(&["impossibility"])), 3);
}

#[test]
fn encode_n4_subset_with_sidecar() {
    let dir = TempDir::new().unwrap();
    let profiles = write(
        &dir,
        "p.json",
        r#"[{"n":4,"rankings":[[0,1,2,3],[0,1,2,3],[0,1,2,3],[0,1,2,3]]},{"n":4,"rankings":[[1,0,2,3],[0,1,2,3],[3,2,1,0],[0,1,2,3]]}]"#,
    );
    let out = dir.path().join("inst.cnf");
    let args = ["impossibility", "--encode-n4", "--profiles", s(&profiles), "--out", s(&out), "--solve"];
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["num_vars"], 221_184);
    assert_eq!(v["num_clauses"], 4 * 13_824 * 7 + 2 * 24 + 96);
    assert_eq!(v["solve"]["result"], "sat");
    assert_eq!(v["solve"]["decoded_check"], "ok");

    let text = std::fs::read_to_string(&out).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(first, format!("p cnf 221184 {}", v["num_clauses"]));
    assert_eq!(text.lines().nth(1).unwrap(), "1 2 3 4 0");
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("inst.cnf.vars.json")).unwrap()).unwrap();
    let vars = sidecar["variables"].as_array().unwrap();
    assert_eq!(vars.len(), 221_184);
    assert_eq!(vars[0], serde_json::json!([0, 0, 0]));
    assert_eq!(vars[221_183], serde_json::json!([3, 13_823, 3]));
    assert_eq!(sidecar["scope"]["profiles"][1], serde_json::json!([6, 0, 23, 0]));

    let again = dir.path().join("again.cnf");
    let o = run(&["impossibility", "--encode-n4", "--profiles", s(&profiles), "--out", s(&again)]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());

    let bad = write(&dir, "bad.json", r#"[{"n":3,"rankings":[[0,1,2],[0,1,2],[0,1,2]]}]"#);
    let o = run(&["impossibility", "--encode-n4", "--profiles", s(&bad), "--out", s(&out)]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn audit_unanimity_reports_verified_witness() {
    let o = run(&["audit-unanimity", "--mechanism", "blocking-n4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["violated"], "unanimity");
    assert_eq!(v["finding"]["witness_replays"], true);
    let o = run(&["audit-unanimity", "--mechanism", "weak-unanimity", "--n", "5"]);
    assert_eq!(code(&o), 0);
}
