//! Propositional encoding of impartiality plus weak unanimity for `n = 4`.
//!
//! Variable `x(i, r, k)` says agent `i` takes position `k` when the other
//! three agents submit reduced profile `r`. Impartiality holds by
//! construction. The clauses are, in generation order:
//!
//! 1. for each `(i, r)`: one at-least-one clause, then the pairwise
//!    at-most-one clauses;
//! 2. for each in-scope profile and each position: pairwise at-most-one over
//!    the four agents;
//! 3. one unit clause per agent for each of the 24 unanimous profiles.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt::Write;

use super::dpll::Cnf;
use super::search::reduced_index;
use crate::perms::{unranked_position, Permutation, RankingProfile};
use crate::{Error, Result};

pub const N: usize = 4;
/// Rankings of four agents.
pub const M: u64 = 24;
/// Reduced profiles per agent, `24^3`.
pub const REDUCED: u64 = M * M * M;
/// `4 * 24^3 * 4`.
pub const VARIABLES: u32 = (N as u64 * REDUCED * N as u64) as u32;
pub const FULL_PROFILES: u64 = M * M * M * M;

/// DIMACS id of `x(i, r, k)`.
pub fn var_id(i: usize, r: u64, k: usize) -> Result<u32> {
    if i >= N || k >= N || r >= REDUCED {
        return Err(Error::InvalidParameter(format!("x({i}, {r}, {k}) is outside the n = 4 index space")));
    }
    Ok(1 + ((i as u64 * REDUCED + r) * N as u64 + k as u64) as u32)
}

/// Inverse of [`var_id`].
pub fn decode_var(id: u32) -> Result<(usize, u64, usize)> {
    if id == 0 || id > VARIABLES {
        return Err(Error::IndexOutOfRange { index: id as u64, bound: VARIABLES as u64 + 1 });
    }
    let x = (id - 1) as u64;
    let k = (x % N as u64) as usize;
    let r = x / N as u64 % REDUCED;
    let i = (x / N as u64 / REDUCED) as usize;
    Ok((i, r, k))
}

/// Lex indices of the four rankings of a full profile.
pub type ProfileIndices = [u64; N];

pub fn profile_indices(profile: &RankingProfile) -> Result<ProfileIndices> {
    if profile.n() != N {
        return Err(Error::DimensionMismatch { expected: N, found: profile.n() });
    }
    let mut out = [0; N];
    for (slot, p) in out.iter_mut().zip(profile.rankings()) {
        *slot = p.lex_rank()?;
    }
    Ok(out)
}

fn full_profile(x: u64) -> ProfileIndices {
    [x / (M * M * M), x / (M * M) % M, x / M % M, x % M]
}

/// Which full profiles get the permutation clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    Full,
    Subset(Vec<ProfileIndices>),
}

impl Scope {
    /// Validates and deduplicates nothing; order is preserved.
    pub fn subset(profiles: Vec<ProfileIndices>) -> Result<Self> {
        if let Some(p) = profiles.iter().find(|p| p.iter().any(|&x| x >= M)) {
            return Err(Error::InvalidParameter(format!("profile indices {p:?} exceed 23")));
        }
        Ok(Scope::Subset(profiles))
    }

    pub fn unanimous() -> Self {
        Scope::Subset((0..M).map(|p| [p; N]).collect())
    }

    pub fn len(&self) -> u64 {
        match self {
            Scope::Full => FULL_PROFILES,
            Scope::Subset(v) => v.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn profiles(&self) -> Box<dyn Iterator<Item = ProfileIndices> + '_> {
        match self {
            Scope::Full => Box::new((0..FULL_PROFILES).map(full_profile)),
            Scope::Subset(v) => Box::new(v.iter().copied()),
        }
    }
}

/// The encoding for a scope. Clauses are produced lazily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WuEncoding {
    scope: Scope,
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Per-`(i, r)` clauses: one at-least-one plus six at-most-one.
const EXACTLY_ONE_CLAUSES: u64 = 7;
const UNIT_CLAUSES: u64 = M * N as u64;

pub fn encode_wu_n4(scope: Scope) -> WuEncoding {
    WuEncoding { scope }
}

impl WuEncoding {
    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn num_vars(&self) -> u32 {
        VARIABLES
    }

    pub fn num_clauses(&self) -> u64 {
        N as u64 * REDUCED * EXACTLY_ONE_CLAUSES + self.scope.len() * N as u64 * PAIRS.len() as u64 + UNIT_CLAUSES
    }

    /// All clauses in generation order.
    pub fn clauses(&self) -> impl Iterator<Item = Vec<i32>> + '_ {
        let id = |i: usize, r: u64, k: usize| var_id(i, r, k).expect("in range") as i32;
        let exactly_one = (0..N).flat_map(move |i| {
            (0..REDUCED).flat_map(move |r| {
                let alo = core::iter::once((0..N).map(|k| id(i, r, k)).collect::<Vec<_>>());
                let amo = PAIRS.iter().map(move |&(a, b)| not_both(id(i, r, a), id(i, r, b)));
                alo.chain(amo)
            })
        });
        let permutation = self.scope.profiles().flat_map(move |prof| {
            let r: [u64; N] = core::array::from_fn(|i| reduced_index(M, &prof, i));
            (0..N).flat_map(move |k| PAIRS.iter().map(move |&(a, b)| not_both(id(a, r[a], k), id(b, r[b], k))))
        });
        let units = (0..M).flat_map(move |p| {
            let prof = [p; N];
            (0..N).map(move |i| alloc::vec![id(i, reduced_index(M, &prof, i), unranked_position(N, p, i))])
        });
        exactly_one.chain(permutation).chain(units)
    }

    /// Materializes the clauses. The full scope has over eight million.
    pub fn to_cnf(&self) -> Cnf {
        Cnf { num_vars: VARIABLES, clauses: self.clauses().collect() }
    }

    /// Streams the DIMACS text: header `p cnf V C`, then one clause per
    /// line in generation order, no comments.
    pub fn write_dimacs<W: Write>(&self, out: &mut W) -> core::fmt::Result {
        writeln!(out, "p cnf {} {}", VARIABLES, self.num_clauses())?;
        for clause in self.clauses() {
            for lit in &clause {
                write!(out, "{lit} ")?;
            }
            out.write_str("0\n")?;
        }
        Ok(())
    }
}

fn not_both(a: i32, b: i32) -> Vec<i32> {
    alloc::vec![-a, -b]
}

/// Position functions read off a model. `h[i][r]` is `None` when no
/// variable of `(i, r)` is true and the smallest such position otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedMechanism {
    h: Vec<Vec<Option<u8>>>,
}

impl DecodedMechanism {
    pub fn from_model(model: &[bool]) -> Result<Self> {
        if model.len() != VARIABLES as usize {
            return Err(Error::DimensionMismatch { expected: VARIABLES as usize, found: model.len() });
        }
        let mut h = alloc::vec![alloc::vec![None; REDUCED as usize]; N];
        for (idx, _) in model.iter().enumerate().filter(|(_, &b)| b) {
            let (i, r, k) = decode_var(idx as u32 + 1)?;
            let slot = &mut h[i][r as usize];
            if slot.is_none() {
                *slot = Some(k as u8);
            }
        }
        Ok(DecodedMechanism { h })
    }

    pub fn position(&self, i: usize, r: u64) -> Option<usize> {
        self.h[i][r as usize].map(usize::from)
    }

    /// Positions at a full profile, when every agent's function is defined.
    pub fn positions(&self, prof: &ProfileIndices) -> Option<[usize; N]> {
        let mut out = [0; N];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.position(i, reduced_index(M, prof, i))?;
        }
        Some(out)
    }

    /// The output ranking at a full profile, if defined and a permutation.
    pub fn rank(&self, prof: &ProfileIndices) -> Option<Permutation> {
        crate::tricolor::positions_to_ranking(&self.positions(prof)?).ok()
    }

    /// Re-checks the scope's constraints by direct evaluation: every agent
    /// function is defined everywhere, each in-scope profile gets a
    /// permutation and every unanimous profile returns its ranking.
    pub fn check(&self, scope: &Scope) -> core::result::Result<(), DecodeViolation> {
        for (i, hi) in self.h.iter().enumerate() {
            if let Some(r) = hi.iter().position(Option::is_none) {
                return Err(DecodeViolation::Undefined { agent: i, reduced: r as u64 });
            }
        }
        for prof in scope.profiles() {
            if self.rank(&prof).is_none() {
                return Err(DecodeViolation::NotPermutation { profile: prof });
            }
        }
        for p in 0..M {
            let prof = [p; N];
            let expected = Permutation::lex_unrank(N, p).expect("n = 4");
            if self.rank(&prof).as_ref() != Some(&expected) {
                return Err(DecodeViolation::NotUnanimous { ranking: p });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeViolation {
    Undefined { agent: usize, reduced: u64 },
    NotPermutation { profile: ProfileIndices },
    NotUnanimous { ranking: u64 },
}

impl core::fmt::Display for DecodeViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DecodeViolation::Undefined { agent, reduced } => {
                write!(f, "agent {agent} has no position at reduced profile {reduced}")
            }
            DecodeViolation::NotPermutation { profile } => write!(f, "profile {profile:?} is not a permutation"),
            DecodeViolation::NotUnanimous { ranking } => {
                write!(f, "unanimous profile of ranking {ranking} is not reproduced")
            }
        }
    }
}
