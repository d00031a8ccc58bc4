//! JSON file formats and report encodings.

use std::collections::BTreeMap;

use impartial::axioms::{AxiomReport, Coverage, Witness};
use impartial::blocking::{BlockingSets, ColoredMultigraph, RhoVector, SearchReport};
use impartial::impossibility::ChainFinding;
use impartial::perms::{Permutation, RankingProfile};
use impartial::set::PositionSet;
use impartial::tricolor::CuttingFamily;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Indented JSON with arrays of scalars kept on one line, plus a trailing
/// newline.
pub fn to_text(v: &Value) -> String {
    fn scalar(v: &Value) -> bool {
        !matches!(v, Value::Array(_) | Value::Object(_))
    }
    fn go(v: &Value, depth: usize, out: &mut String) {
        let pad = |d: usize| "  ".repeat(d);
        match v {
            Value::Array(items)
                if items.iter().all(scalar)
                    || items.iter().all(|x| matches!(x, Value::Array(a) if a.iter().all(scalar))) =>
            {
                out.push_str(&serde_json::to_string(v).expect("serializable"));
            }
            Value::Array(items) => {
                out.push_str("[\n");
                for (t, x) in items.iter().enumerate() {
                    out.push_str(&pad(depth + 1));
                    go(x, depth + 1, out);
                    out.push_str(if t + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(depth));
                out.push(']');
            }
            Value::Object(map) if map.is_empty() => out.push_str("{}"),
            Value::Object(map) => {
                out.push_str("{\n");
                for (t, (k, x)) in map.iter().enumerate() {
                    out.push_str(&pad(depth + 1));
                    out.push_str(&serde_json::to_string(k).expect("serializable"));
                    out.push_str(": ");
                    go(x, depth + 1, out);
                    out.push_str(if t + 1 < map.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(depth));
                out.push('}');
            }
            _ => out.push_str(&serde_json::to_string(v).expect("serializable")),
        }
    }
    let mut out = String::new();
    go(v, 0, &mut out);
    out.push('\n');
    out
}

pub fn read_json<T: DeserializeOwned>(path: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{path}: {e}")))
}

/// `{"n": 4, "rankings": [[1,2,3,0], ...]}`; each ranking lists agents from
/// the top position down.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub n: usize,
    pub rankings: Vec<Vec<usize>>,
}

impl ProfileJson {
    pub fn from_profile(p: &RankingProfile) -> Self {
        ProfileJson { n: p.n(), rankings: p.rankings().iter().map(|r| r.image().to_vec()).collect() }
    }

    /// `origin` prefixes field diagnostics, e.g. a file name.
    pub fn to_profile(&self, origin: &str) -> CliResult<RankingProfile> {
        if self.rankings.len() != self.n {
            return Err(CliError::input(format!(
                "{origin}: field `rankings`: expected {} rankings, found {}",
                self.n,
                self.rankings.len()
            )));
        }
        let mut out = Vec::with_capacity(self.n);
        for (i, r) in self.rankings.iter().enumerate() {
            if r.len() != self.n {
                return Err(CliError::input(format!(
                    "{origin}: field `rankings[{i}]`: expected {} agents, found {}",
                    self.n,
                    r.len()
                )));
            }
            let p = Permutation::new(r.clone())
                .map_err(|e| CliError::input(format!("{origin}: field `rankings[{i}]`: {e}")))?;
            out.push(p);
        }
        RankingProfile::new(out).map_err(|e| CliError::input(format!("{origin}: {e}")))
    }
}

/// `{"n":6,"rho":[...],"edges":{"0":[[2,3],...],...}}`. Unknown fields
/// (such as the search record written by `graph-search`) are ignored.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultigraphJson {
    pub n: usize,
    pub rho: Vec<usize>,
    pub edges: BTreeMap<usize, Vec<[usize; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search: Option<SearchJson>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchJson {
    pub seed: u64,
    pub attempts: u32,
    pub stream: u64,
}

impl MultigraphJson {
    pub fn new(rho: &RhoVector, g: &ColoredMultigraph, search: Option<SearchReport>) -> Self {
        let edges = (0..g.n())
            .map(|c| {
                let mut list: Vec<[usize; 2]> = g.edges(c).into_iter().map(|(a, b)| [a.min(b), a.max(b)]).collect();
                list.sort_unstable();
                (c, list)
            })
            .collect();
        MultigraphJson {
            n: g.n(),
            rho: rho.as_slice().to_vec(),
            edges,
            search: search.map(|s| SearchJson { seed: s.seed, attempts: s.attempts, stream: s.stream() }),
        }
    }

    pub fn to_graph(&self, origin: &str) -> CliResult<(RhoVector, ColoredMultigraph)> {
        let bad = |msg: String| CliError::input(format!("{origin}: {msg}"));
        let rho = RhoVector::new(self.rho.clone()).map_err(|e| bad(format!("field `rho`: {e}")))?;
        if rho.n() != self.n {
            return Err(bad(format!("field `rho`: expected {} entries, found {}", self.n, rho.n())));
        }
        if let Some(&c) = self.edges.keys().find(|&&c| c >= self.n) {
            return Err(bad(format!("field `edges`: color {c} is not an agent")));
        }
        let lists: Vec<Vec<(usize, usize)>> = (0..self.n)
            .map(|c| self.edges.get(&c).map_or_else(Vec::new, |l| l.iter().map(|e| (e[0], e[1])).collect()))
            .collect();
        let g = ColoredMultigraph::from_edges(self.n, &lists).map_err(|e| bad(format!("field `edges`: {e}")))?;
        Ok((rho, g))
    }
}

/// `{"n":5,"sets":{"0":[[0,1,2],...],"1":[...],"2":[...]}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuttingFamilyJson {
    pub n: usize,
    pub sets: BTreeMap<usize, Vec<Vec<usize>>>,
}

impl CuttingFamilyJson {
    pub fn new(f: &CuttingFamily) -> Self {
        let sets = (0..3).map(|c| (c, f.sets(c).iter().map(|s| s.to_vec()).collect())).collect();
        CuttingFamilyJson { n: f.n(), sets }
    }

    pub fn to_family(&self, origin: &str) -> CliResult<CuttingFamily> {
        let bad = |msg: String| CliError::input(format!("{origin}: {msg}"));
        if self.sets.len() != 3 || self.sets.keys().any(|&c| c > 2) {
            return Err(bad("field `sets`: expected colors 0, 1 and 2".into()));
        }
        let mut colors: [Vec<PositionSet>; 3] = Default::default();
        for (c, lists) in &self.sets {
            for (l, s) in lists.iter().enumerate() {
                if let Some(&x) = s.iter().find(|&&x| x >= self.n) {
                    return Err(bad(format!("field `sets.{c}[{l}]`: element {x} is not below n = {}", self.n)));
                }
                colors[*c].push(s.iter().copied().collect());
            }
        }
        CuttingFamily::new(self.n, colors).map_err(|e| bad(e.to_string()))
    }
}

/// Blocking sets laid out per agent `i` and message `b`: entry `j` of
/// `sets[i][b]` lists the positions agent `i` blocks for agent `j`.
pub fn blocking_sets_json(rho: &RhoVector, s: &BlockingSets) -> Value {
    let n = s.n();
    let sets: BTreeMap<usize, BTreeMap<u8, Vec<Vec<usize>>>> = (0..n)
        .map(|i| {
            let by_message = [false, true]
                .into_iter()
                .map(|b| (u8::from(b), (0..n).map(|j| s.get(b, i, j).to_vec()).collect()))
                .collect();
            (i, by_message)
        })
        .collect();
    json!({ "n": n, "rho": rho.as_slice(), "sets": sets })
}

pub fn witness_json(w: &Witness) -> Value {
    let profile = |p: &RankingProfile| serde_json::to_value(ProfileJson::from_profile(p)).expect("serializable");
    let mut v = match w {
        Witness::Impartiality { profile: p, agent, deviation } => json!({
            "profile": profile(p),
            "agent": agent,
            "deviation": deviation.image(),
        }),
        Witness::Monotonicity { profile: p, agent, raised, deviation } => json!({
            "profile": profile(p),
            "agent": agent,
            "raised": raised,
            "deviation": deviation.image(),
        }),
        Witness::WeakUnanimity { ranking } => json!({ "ranking": ranking.image() }),
        Witness::Unanimity { profile: p, above, below } => json!({
            "profile": profile(p),
            "above": above,
            "below": below,
        }),
        Witness::Unreachable { agent, position } => json!({ "agent": agent, "position": position }),
    };
    v["axiom"] = json!(w.axiom().name());
    v["description"] = json!(w.to_string());
    v
}

pub fn report_json(r: &AxiomReport, replayed: Option<bool>) -> Value {
    let mut v = json!({
        "axiom": r.axiom.name(),
        "verdict": r.verdict.name(),
        "coverage": r.coverage.name(),
        "checked": r.checked,
        "witness": r.witness.as_ref().map(witness_json),
        "note": r.note,
    });
    if let Coverage::Sampled { trials, seed } = r.coverage {
        v["trials"] = json!(trials);
        v["seed"] = json!(seed);
    }
    if let Some(ok) = replayed {
        v["witness_replays"] = json!(ok);
    }
    v
}

pub fn finding_json(f: &ChainFinding, replayed: bool) -> Value {
    json!({
        "step": f.step,
        "description": f.description,
        "evaluations": f.evaluations,
        "witness": witness_json(&f.witness),
        "witness_replays": replayed,
    })
}
