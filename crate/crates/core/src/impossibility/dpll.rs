//! A small DPLL solver with two watched literals and chronological
//! backtracking. Meant for modest instances such as subset encodings.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::{Error, Result};

/// A CNF formula over variables `1..=num_vars`, DIMACS literal convention.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: u32) -> Self {
        Cnf { num_vars, clauses: Vec::new() }
    }

    pub fn add_clause(&mut self, clause: impl Into<Vec<i32>>) -> Result<()> {
        let clause = clause.into();
        check_clause(self.num_vars, &clause)?;
        self.clauses.push(clause);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.clauses.iter().try_for_each(|c| check_clause(self.num_vars, c))
    }

    /// Parses DIMACS text. Comment lines (`c ...`) are skipped.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let bad = |what: &str| Error::InvalidParameter(format!("DIMACS line {}: {what}", lineno + 1));
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                    return Err(bad("malformed header"));
                }
                let v = parts[2].parse().map_err(|_| bad("bad variable count"))?;
                let c = parts[3].parse().map_err(|_| bad("bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            if header.is_none() {
                return Err(bad("clause before header"));
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| bad("bad literal"))?;
                if lit == 0 {
                    clauses.push(core::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        let (num_vars, count) = header.ok_or_else(|| Error::InvalidParameter(String::from("missing DIMACS header")))?;
        if !current.is_empty() {
            return Err(Error::InvalidParameter(String::from("unterminated final clause")));
        }
        if clauses.len() != count {
            return Err(Error::InvalidParameter(format!("header declares {count} clauses, found {}", clauses.len())));
        }
        let cnf = Cnf { num_vars, clauses };
        cnf.validate()?;
        Ok(cnf)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        write_dimacs(&mut out, self.num_vars, self.clauses.len(), self.clauses.iter().map(|c| c.as_slice()))
            .expect("writing to a String");
        out
    }

    /// Whether `assignment[v - 1]` satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment.get(l.unsigned_abs() as usize - 1).is_some_and(|&b| b == (l > 0))))
    }
}

fn check_clause(num_vars: u32, clause: &[i32]) -> Result<()> {
    match clause.iter().find(|&&l| l == 0 || l.unsigned_abs() > num_vars) {
        Some(&l) => Err(Error::InvalidParameter(format!("literal {l} is outside 1..={num_vars}"))),
        None => Ok(()),
    }
}

/// Writes `p cnf V C` followed by one zero-terminated clause per line.
pub fn write_dimacs<'a, W: Write>(
    out: &mut W,
    num_vars: u32,
    num_clauses: usize,
    clauses: impl IntoIterator<Item = &'a [i32]>,
) -> core::fmt::Result {
    writeln!(out, "p cnf {num_vars} {num_clauses}")?;
    for clause in clauses {
        for lit in clause {
            write!(out, "{lit} ")?;
        }
        out.write_str("0\n")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// `model[v - 1]` is the value of variable `v`.
    Sat(Vec<bool>),
    Unsat,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatOutcome {
    pub result: SatResult,
    /// Decisions made.
    pub nodes: u64,
}

const UNASSIGNED: u8 = 2;

#[inline]
fn lit_index(lit: i32) -> usize {
    // Variable v maps to 2(v-1) for the positive and 2(v-1)+1 for the
    // negative literal.
    2 * (lit.unsigned_abs() as usize - 1) + usize::from(lit < 0)
}

struct Solver<'a> {
    clauses: &'a [Vec<i32>],
    /// Clause indices watching each literal.
    watches: Vec<Vec<u32>>,
    /// Watched positions in each clause (indices into the clause).
    watched: Vec<[u32; 2]>,
    value: Vec<u8>,
    trail: Vec<i32>,
    /// Trail length at each decision, and whether the flip was tried.
    decisions: Vec<(usize, bool)>,
    head: usize,
}

impl<'a> Solver<'a> {
    fn lit_value(&self, lit: i32) -> u8 {
        let v = self.value[lit.unsigned_abs() as usize - 1];
        if v == UNASSIGNED {
            UNASSIGNED
        } else {
            u8::from((v == 1) == (lit > 0))
        }
    }

    fn assign(&mut self, lit: i32) {
        self.value[lit.unsigned_abs() as usize - 1] = u8::from(lit > 0);
        self.trail.push(lit);
    }

    /// Unit propagation from `head`; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let lit = self.trail[self.head];
            self.head += 1;
            let falsified = -lit;
            let mut list = core::mem::take(&mut self.watches[lit_index(falsified)]);
            let mut i = 0;
            let mut conflict = false;
            while i < list.len() {
                let ci = list[i] as usize;
                let clause = &self.clauses[ci];
                let [w0, w1] = self.watched[ci];
                let (me, other) = if clause[w0 as usize] == falsified { (0, w1) } else { (1, w0) };
                let other_lit = clause[other as usize];
                if self.lit_value(other_lit) == 1 {
                    i += 1;
                    continue;
                }
                let replacement =
                    (0..clause.len() as u32).find(|&k| k != w0 && k != w1 && self.lit_value(clause[k as usize]) != 0);
                if let Some(k) = replacement {
                    self.watched[ci][me] = k;
                    self.watches[lit_index(clause[k as usize])].push(ci as u32);
                    list.swap_remove(i);
                    continue;
                }
                match self.lit_value(other_lit) {
                    0 => {
                        conflict = true;
                        break;
                    }
                    UNASSIGNED => self.assign(other_lit),
                    _ => {}
                }
                i += 1;
            }
            let slot = &mut self.watches[lit_index(falsified)];
            list.append(slot);
            *slot = list;
            if conflict {
                return false;
            }
        }
        true
    }

    /// Undoes the most recent decision that still has an untried branch and
    /// applies its flip. False when none remain.
    fn backtrack(&mut self) -> bool {
        while let Some((mark, flipped)) = self.decisions.pop() {
            let decision = self.trail[mark];
            for lit in self.trail.drain(mark..) {
                self.value[lit.unsigned_abs() as usize - 1] = UNASSIGNED;
            }
            self.head = mark;
            if !flipped {
                self.decisions.push((mark, true));
                self.assign(-decision);
                return true;
            }
        }
        false
    }
}

/// Decides satisfiability, making at most `node_budget` decisions.
///
/// Decisions pick the lowest unassigned variable and try `true` first.
pub fn dpll_solve(cnf: &Cnf, node_budget: u64) -> Result<SatOutcome> {
    cnf.validate()?;
    let n = cnf.num_vars as usize;
    let mut s = Solver {
        clauses: &cnf.clauses,
        watches: vec![Vec::new(); 2 * n],
        watched: vec![[0, 0]; cnf.clauses.len()],
        value: vec![UNASSIGNED; n],
        trail: Vec::with_capacity(n),
        decisions: Vec::new(),
        head: 0,
    };
    let unsat = SatOutcome { result: SatResult::Unsat, nodes: 0 };
    let mut units = Vec::new();
    for (ci, clause) in cnf.clauses.iter().enumerate() {
        match clause.len() {
            0 => return Ok(unsat),
            1 => units.push(clause[0]),
            _ => {
                s.watched[ci] = [0, 1];
                s.watches[lit_index(clause[0])].push(ci as u32);
                s.watches[lit_index(clause[1])].push(ci as u32);
            }
        }
    }
    for lit in units {
        match s.lit_value(lit) {
            0 => return Ok(unsat),
            UNASSIGNED => s.assign(lit),
            _ => {}
        }
    }
    let mut nodes = 0u64;
    let mut next_var = 0usize;
    loop {
        if !s.propagate() {
            if !s.backtrack() {
                return Ok(SatOutcome { result: SatResult::Unsat, nodes });
            }
            next_var = 0;
            continue;
        }
        while next_var < n && s.value[next_var] != UNASSIGNED {
            next_var += 1;
        }
        if next_var == n {
            let model = s.value.iter().map(|&v| v == 1).collect();
            return Ok(SatOutcome { result: SatResult::Sat(model), nodes });
        }
        if nodes >= node_budget {
            return Ok(SatOutcome { result: SatResult::BudgetExceeded, nodes });
        }
        nodes += 1;
        s.decisions.push((s.trail.len(), false));
        s.assign(next_var as i32 + 1);
    }
}
