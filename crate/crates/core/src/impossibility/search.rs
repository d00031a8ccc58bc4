//! Exhaustive refutation of impartiality plus individual full rank for
//! `n = 2` and `n = 3`.
//!
//! A mechanism is impartial exactly when each agent's position is a function
//! `h_i` of the other agents' rankings. The search therefore assigns the
//! position functions directly and only has to enforce that every full
//! profile yields a permutation.

use alloc::vec;
use alloc::vec::Vec;

use crate::mechanism::RankingMechanism;
use crate::perms::{factorial, Permutation, RankingProfile};
use crate::tricolor::positions_to_ranking;
use crate::{Error, Result};

/// Position functions for every agent. `h[i][r]` is agent `i`'s position
/// under reduced profile `r`, the base-`n!` number whose digits are the lex
/// indices of the other agents' rankings in increasing agent order, most
/// significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionFunctions {
    n: usize,
    m: u64,
    h: Vec<Vec<u8>>,
}

impl PositionFunctions {
    pub fn new(n: usize, h: Vec<Vec<u8>>) -> Result<Self> {
        let m = factorial(n)?;
        let len = m.checked_pow(n as u32 - 1).ok_or(Error::Capacity { n, max: 4 })?;
        if h.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: h.len() });
        }
        for hi in &h {
            if hi.len() as u64 != len {
                return Err(Error::DimensionMismatch { expected: len as usize, found: hi.len() });
            }
            if let Some(&k) = hi.iter().find(|&&k| k as usize >= n) {
                return Err(Error::IndexOutOfRange { index: k as u64, bound: n as u64 });
            }
        }
        Ok(PositionFunctions { n, m, h })
    }

    /// Every agent keeps the position it has in `ranking`.
    pub fn constant(ranking: &Permutation) -> Result<Self> {
        let n = ranking.n();
        let len = factorial(n)?.pow(n as u32 - 1) as usize;
        Self::new(n, (0..n).map(|i| vec![ranking.position_of(i) as u8; len]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn functions(&self) -> &[Vec<u8>] {
        &self.h
    }

    /// Reduced-profile index of agent `i` given all agents' lex indices.
    pub fn reduced_index(&self, indices: &[u64], i: usize) -> u64 {
        reduced_index(self.m, indices, i)
    }

    /// Positions for a profile given by lex indices; not necessarily a
    /// permutation.
    pub fn positions(&self, indices: &[u64]) -> Vec<usize> {
        (0..self.n).map(|i| self.h[i][self.reduced_index(indices, i) as usize] as usize).collect()
    }

    /// Checks every full profile and returns the first one whose positions
    /// collide, as lex indices.
    pub fn first_collision(&self) -> Option<Vec<u64>> {
        let total = self.m.pow(self.n as u32);
        (0..total).map(|x| digits(self.m, self.n, x)).find(|idx| {
            let mut seen = 0u64;
            !self.positions(idx).iter().all(|&k| {
                let fresh = seen & (1 << k) == 0;
                seen |= 1 << k;
                fresh
            })
        })
    }

    /// Whether every position function is onto `[n]`.
    pub fn has_full_rank(&self) -> bool {
        self.h.iter().all(|hi| {
            let mut seen = 0u64;
            for &k in hi {
                seen |= 1 << k;
            }
            seen.count_ones() as usize == self.n
        })
    }

    /// Distinct output rankings over all full profiles, in lex order.
    pub fn outputs(&self) -> Result<Vec<Permutation>> {
        let total = self.m.pow(self.n as u32);
        let mut seen = vec![false; self.m as usize];
        for x in 0..total {
            let r = positions_to_ranking(&self.positions(&digits(self.m, self.n, x)))?;
            seen[r.lex_rank()? as usize] = true;
        }
        (0..self.m).filter(|&p| seen[p as usize]).map(|p| Permutation::lex_unrank(self.n, p)).collect()
    }
}

/// Lex-index digits of full profile `x`, agent 0 most significant.
fn digits(m: u64, n: usize, mut x: u64) -> Vec<u64> {
    let mut out = vec![0; n];
    for d in out.iter_mut().rev() {
        *d = x % m;
        x /= m;
    }
    out
}

pub(crate) fn reduced_index(m: u64, indices: &[u64], i: usize) -> u64 {
    indices.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |acc, (_, &d)| acc * m + d)
}

impl RankingMechanism for PositionFunctions {
    fn n(&self) -> usize {
        self.n
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        if profile.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: profile.n() });
        }
        let indices: Vec<u64> = profile.rankings().iter().map(|p| p.lex_rank()).collect::<Result<_>>()?;
        positions_to_ranking(&self.positions(&indices))
    }
}

/// Whether the candidate's outputs avoid containing both a ranking and one of
/// its cyclic shifts.
pub fn check_rotation_claim(candidate: &PositionFunctions) -> Result<bool> {
    let outputs = candidate.outputs()?;
    Ok(!outputs.iter().any(|a| outputs.iter().any(|b| a != b && is_cyclic_shift(a, b))))
}

/// `b` equals `a` with its entries rotated by a nonzero amount.
pub fn is_cyclic_shift(a: &Permutation, b: &Permutation) -> bool {
    let n = a.n();
    n == b.n() && (1..n).any(|s| (0..n).all(|k| b.image()[(k + s) % n] == a.image()[k]))
}

// ---------------------------------------------------------------------------
// n = 2

/// Result of enumerating every candidate for `n = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    /// Joint assignments of `h_0`, `h_1`.
    pub candidates: u64,
    /// Candidates that are permutation-valued on all four profiles.
    pub feasible: u64,
    /// Feasible candidates with individual full rank.
    pub feasible_full_rank: u64,
}

/// Enumerates all 16 pairs of position functions for two agents.
pub fn enumerate_n2() -> EnumerationReport {
    let mut report = EnumerationReport { candidates: 0, feasible: 0, feasible_full_rank: 0 };
    for code in 0u32..16 {
        // h_i has two inputs (the other agent's ranking) and two outputs.
        let h = vec![vec![(code & 1) as u8, (code >> 1 & 1) as u8], vec![(code >> 2 & 1) as u8, (code >> 3 & 1) as u8]];
        let cand = PositionFunctions::new(2, h).expect("valid n = 2 functions");
        report.candidates += 1;
        if cand.first_collision().is_none() {
            report.feasible += 1;
            if cand.has_full_rank() {
                report.feasible_full_rank += 1;
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// n = 3

const M3: usize = 6;
const R3: usize = M3 * M3;
const VARS3: usize = 3 * R3;
const FULL_DOMAIN: u8 = 0b111;

/// Options for the `n = 3` backtracking search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Require every position function to be onto.
    pub full_rank: bool,
    /// Reject partial assignments whose determined outputs contain a ranking
    /// and one of its cyclic shifts.
    pub rotation_pruning: bool,
    /// Keep searching after the first solution and count all of them.
    pub count_all: bool,
    pub node_budget: Option<u64>,
}

impl SearchOptions {
    pub const REFUTE: SearchOptions =
        SearchOptions { full_rank: true, rotation_pruning: false, count_all: false, node_budget: None };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Branching decisions made.
    pub nodes: u64,
    /// Conflicts found by propagation.
    pub failures: u64,
    pub solutions: u64,
    pub first_solution: Option<PositionFunctions>,
    /// False if the node budget stopped the search early. A search that
    /// stops at its first solution still counts as exhausted.
    pub exhausted: bool,
}

impl SearchOutcome {
    pub fn is_unsat(&self) -> bool {
        self.exhausted && self.solutions == 0
    }
}

/// Variable for agent `i` and reduced profile `(a, b)`.
#[inline]
fn var3(i: usize, a: usize, b: usize) -> usize {
    i * R3 + a * M3 + b
}

/// The three variables of full profile `(p, q, r)`.
#[inline]
fn profile_vars(p: usize, q: usize, r: usize) -> [usize; 3] {
    [var3(0, q, r), var3(1, p, r), var3(2, p, q)]
}

/// Full profiles containing variable `v`.
fn profiles_of(v: usize) -> [[usize; 3]; M3] {
    let (i, a, b) = (v / R3, v % R3 / M3, v % M3);
    core::array::from_fn(|x| match i {
        0 => [x, a, b],
        1 => [a, x, b],
        _ => [a, b, x],
    })
}

/// Lex index of the 3-permutation placing agent `i` at `pos[i]`.
fn output_index(pos: [u8; 3]) -> usize {
    let mut image = [0usize; 3];
    for (agent, &k) in pos.iter().enumerate() {
        image[k as usize] = agent;
    }
    let first = image[0];
    let second = if image[1] < first { image[1] } else { image[1] - 1 };
    first * 2 + second
}

enum Trail {
    Domain(usize, u8),
    Output(usize),
}

struct Solver<'v> {
    visit: Option<&'v mut dyn FnMut(&PositionFunctions)>,
    opts: SearchOptions,
    dom: [u8; VARS3],
    neighbors: Vec<[usize; 12]>,
    support: [[u32; 3]; 3],
    outputs: [u32; 6],
    rotation_conflict: [[bool; 6]; 6],
    trail: Vec<Trail>,
    queue: Vec<usize>,
    nodes: u64,
    failures: u64,
    solutions: u64,
    first: Option<PositionFunctions>,
    budget_hit: bool,
}

impl<'v> Solver<'v> {
    fn new(opts: SearchOptions, visit: Option<&'v mut dyn FnMut(&PositionFunctions)>) -> Self {
        let neighbors = (0..VARS3)
            .map(|v| {
                let mut out = [0usize; 12];
                let mut k = 0;
                for prof in profiles_of(v) {
                    for w in profile_vars(prof[0], prof[1], prof[2]) {
                        if w != v && !out[..k].contains(&w) {
                            out[k] = w;
                            k += 1;
                        }
                    }
                }
                debug_assert_eq!(k, 12);
                out
            })
            .collect();
        let perms: Vec<Permutation> = (0..6).map(|p| Permutation::lex_unrank(3, p).expect("n = 3")).collect();
        let rotation_conflict =
            core::array::from_fn(|a| core::array::from_fn(|b| a != b && is_cyclic_shift(&perms[a], &perms[b])));
        Solver {
            visit,
            opts,
            dom: [FULL_DOMAIN; VARS3],
            neighbors,
            support: [[R3 as u32; 3]; 3],
            outputs: [0; 6],
            rotation_conflict,
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            failures: 0,
            solutions: 0,
            first: None,
            budget_hit: false,
        }
    }

    /// Narrows `v` to `d`; false on a wipeout or a full-rank failure.
    fn narrow(&mut self, v: usize, d: u8) -> bool {
        let old = self.dom[v];
        if old == d {
            return true;
        }
        self.trail.push(Trail::Domain(v, old));
        self.dom[v] = d;
        let agent = v / R3;
        let mut ok = d != 0;
        for k in 0..3 {
            if old & !d & (1 << k) != 0 {
                self.support[agent][k] -= 1;
                if self.opts.full_rank && self.support[agent][k] == 0 {
                    ok = false;
                }
            }
        }
        if d.count_ones() == 1 {
            self.queue.push(v);
        }
        ok
    }

    fn record_outputs(&mut self, v: usize) -> bool {
        for prof in profiles_of(v) {
            let vars = profile_vars(prof[0], prof[1], prof[2]);
            if vars.iter().any(|&w| self.dom[w].count_ones() != 1) {
                continue;
            }
            let pos = vars.map(|w| self.dom[w].trailing_zeros() as u8);
            if pos[0] == pos[1] || pos[1] == pos[2] || pos[0] == pos[2] {
                return false;
            }
            let o = output_index(pos);
            self.outputs[o] += 1;
            self.trail.push(Trail::Output(o));
            if self.opts.rotation_pruning
                && (0..6).any(|other| self.outputs[other] > 0 && self.rotation_conflict[o][other])
            {
                return false;
            }
        }
        true
    }

    /// Removes the value of every queued singleton from its neighbors.
    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            let d = self.dom[v];
            if d.count_ones() != 1 {
                self.queue.clear();
                return false;
            }
            for idx in 0..12 {
                let w = self.neighbors[v][idx];
                if self.dom[w] & d != 0 && !self.narrow(w, self.dom[w] & !d) {
                    self.queue.clear();
                    return false;
                }
            }
            if self.opts.rotation_pruning && !self.record_outputs(v) {
                self.queue.clear();
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail entry") {
                Trail::Domain(v, old) => {
                    let agent = v / R3;
                    for k in 0..3 {
                        if old & !self.dom[v] & (1 << k) != 0 {
                            self.support[agent][k] += 1;
                        }
                    }
                    self.dom[v] = old;
                }
                Trail::Output(o) => self.outputs[o] -= 1,
            }
        }
    }

    fn budget_left(&self) -> bool {
        self.opts.node_budget.map_or(true, |b| self.nodes < b)
    }

    fn solution(&self) -> PositionFunctions {
        let h = (0..3).map(|i| (0..R3).map(|r| self.dom[i * R3 + r].trailing_zeros() as u8).collect()).collect();
        PositionFunctions::new(3, h).expect("complete assignment")
    }

    /// Depth-first search from variable `from` onward in static order.
    /// Returns false when the search must stop.
    fn search(&mut self, from: usize) -> bool {
        let Some(v) = (from..VARS3).find(|&v| self.dom[v].count_ones() > 1) else {
            self.solutions += 1;
            if self.first.is_none() || self.visit.is_some() {
                let sol = self.solution();
                if let Some(f) = self.visit.as_mut() {
                    f(&sol);
                }
                if self.first.is_none() {
                    self.first = Some(sol);
                }
            }
            return self.opts.count_all;
        };
        let d = self.dom[v];
        for k in 0..3u8 {
            if d & (1 << k) == 0 {
                continue;
            }
            if !self.budget_left() {
                self.budget_hit = true;
                return false;
            }
            self.nodes += 1;
            let mark = self.trail.len();
            if self.narrow(v, 1 << k) && self.propagate() {
                if !self.search(v + 1) {
                    self.undo_to(mark);
                    return false;
                }
            } else {
                self.failures += 1;
            }
            self.undo_to(mark);
        }
        true
    }

    fn run(mut self, forced: &[(usize, u8)]) -> SearchOutcome {
        let mut ok = true;
        for &(v, k) in forced {
            ok = ok && self.narrow(v, 1 << k) && self.propagate();
        }
        if ok {
            self.search(0);
        }
        SearchOutcome {
            nodes: self.nodes,
            failures: self.failures + u64::from(!ok),
            solutions: self.solutions,
            first_solution: self.first,
            exhausted: !self.budget_hit,
        }
    }
}

/// Backtracking over the position functions of three agents. Variables are
/// taken agent by agent, reduced profiles in lex order, values ascending;
/// each assignment is propagated to the other two variables of every
/// profile it appears in.
pub fn search_n3(opts: SearchOptions) -> SearchOutcome {
    Solver::new(opts, None).run(&[])
}

/// Like [`search_n3`], calling `visit` on every solution found.
pub fn search_n3_visit(opts: SearchOptions, visit: &mut dyn FnMut(&PositionFunctions)) -> SearchOutcome {
    Solver::new(opts, Some(visit)).run(&[])
}

/// Like [`search_n3`] with the outputs at two full profiles fixed up front.
/// Profiles are given as lex indices of the three rankings.
pub fn search_n3_with_outputs(opts: SearchOptions, fixed: &[([usize; 3], Permutation)]) -> Result<SearchOutcome> {
    let mut forced = Vec::new();
    for (prof, out) in fixed {
        if out.n() != 3 || prof.iter().any(|&x| x >= M3) {
            return Err(Error::InvalidParameter(alloc::format!("bad fixed output {prof:?} -> {out}")));
        }
        for (agent, v) in profile_vars(prof[0], prof[1], prof[2]).into_iter().enumerate() {
            forced.push((v, out.position_of(agent) as u8));
        }
    }
    Ok(Solver::new(opts, None).run(&forced))
}

/// Outcome of checking that no impartial 3-ranking mechanism outputs a
/// ranking together with one of its cyclic shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationValidation {
    pub cases: u64,
    pub nodes: u64,
    /// First case that admits an impartial completion, if any.
    pub counterexample: Option<([usize; 3], Permutation, Permutation)>,
}

impl RotationValidation {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks the cyclic-shift constraint without assuming full rank. Relabeling
/// each agent's input rankings independently preserves impartiality, so it
/// suffices to take the first profile as all-identity and let each agent of
/// the second profile either keep the identity or switch to one fixed other
/// ranking: 7 patterns, 6 rankings, 2 shifts.
pub fn validate_rotation_claim() -> RotationValidation {
    let opts = SearchOptions { full_rank: false, rotation_pruning: false, count_all: false, node_budget: None };
    let mut report = RotationValidation { cases: 0, nodes: 0, counterexample: None };
    for pattern in 1..8usize {
        let second: [usize; 3] = core::array::from_fn(|i| (pattern >> i) & 1);
        for s in 0..6 {
            let sigma = Permutation::lex_unrank(3, s).expect("n = 3");
            for shift in 1..3 {
                let img = sigma.image();
                let rotated = Permutation::new((0..3).map(|k| img[(k + 3 - shift) % 3]).collect()).expect("rotation");
                let outcome = search_n3_with_outputs(opts, &[([0, 0, 0], sigma.clone()), (second, rotated.clone())])
                    .expect("valid fixed outputs");
                report.cases += 1;
                report.nodes += outcome.nodes;
                if !outcome.is_unsat() && report.counterexample.is_none() {
                    report.counterexample = Some((second, sigma.clone(), rotated));
                }
            }
        }
    }
    report
}

/// Certificate that no impartial mechanism with individual full rank exists.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Refutation {
    Enumerated(EnumerationReport),
    Searched { plain: SearchOutcome, pruned: SearchOutcome, rotation: RotationValidation },
}

impl Refutation {
    pub fn is_unsat(&self) -> bool {
        match self {
            Refutation::Enumerated(r) => r.feasible_full_rank == 0,
            Refutation::Searched { plain, pruned, rotation } => {
                plain.is_unsat() && pruned.is_unsat() && rotation.holds()
            }
        }
    }
}

/// Refutes impartiality plus individual full rank for `n` in `{2, 3}`.
///
/// For `n = 3` the search runs twice, with and without cyclic-shift pruning;
/// pruning is only applied after [`validate_rotation_claim`] succeeds.
pub fn refute_impartial_ifr(n: usize) -> Result<Refutation> {
    match n {
        2 => Ok(Refutation::Enumerated(enumerate_n2())),
        3 => {
            let plain = search_n3(SearchOptions::REFUTE);
            let rotation = validate_rotation_claim();
            let pruned = if rotation.holds() {
                search_n3(SearchOptions { rotation_pruning: true, ..SearchOptions::REFUTE })
            } else {
                plain.clone()
            };
            Ok(Refutation::Searched { plain, pruned, rotation })
        }
        _ => Err(Error::InvalidParameter(alloc::format!("refutation is implemented for n in {{2, 3}}, got {n}"))),
    }
}
