use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::multigraph::{verify_multigraph, ColoredMultigraph, MultigraphViolation};
use super::{MessageVector, RhoVector};
use crate::perms::Permutation;
use crate::set::{PositionSet, MAX_ELEMENTS};
use crate::{Error, Result};

/// Largest `n` for which [`verify_blocking_sets`] enumerates all `2^n`
/// message vectors.
pub const EXHAUSTIVE_LIMIT: usize = 22;

/// Position-blocking sets `S^b_ij`: the positions agent `i` forbids to agent
/// `j` when it sends bit `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BlockingSets {
    n: usize,
    // sets[(b * n + i) * n + j]
    sets: Vec<PositionSet>,
}

impl BlockingSets {
    /// All sets empty.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::Capacity { n, max: MAX_ELEMENTS });
        }
        Ok(BlockingSets { n, sets: alloc::vec![PositionSet::EMPTY; 2 * n * n] })
    }

    /// `S^0_ij = N_i(j)` and `S^1_ij` its complement in `[n] \ {i, j}`.
    pub fn from_multigraph(rho: &RhoVector, g: &ColoredMultigraph) -> core::result::Result<Self, MultigraphViolation> {
        verify_multigraph(rho, g)?;
        Ok(Self::from_multigraph_unchecked(g))
    }

    pub(crate) fn from_multigraph_unchecked(g: &ColoredMultigraph) -> Self {
        let n = g.n();
        let mut s = BlockingSets { n, sets: alloc::vec![PositionSet::EMPTY; 2 * n * n] };
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let zero = g.neighbors(i, j);
                let rest = PositionSet::full(n).without(i).without(j);
                s.sets[i * n + j] = zero;
                s.sets[(n + i) * n + j] = rest.difference(zero);
            }
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `S^b_ij`.
    #[inline]
    pub fn get(&self, b: bool, i: usize, j: usize) -> PositionSet {
        self.sets[(b as usize * self.n + i) * self.n + j]
    }

    /// Replaces `S^b_ij`. The set may not contain `i` or `j`.
    pub fn set(&mut self, b: bool, i: usize, j: usize, s: PositionSet) -> Result<()> {
        let n = self.n;
        if i >= n || j >= n || i == j {
            return Err(Error::InvalidParameter(alloc::format!("no blocking set for the pair ({i}, {j})")));
        }
        if !s.is_subset(PositionSet::full(n).without(i).without(j)) {
            return Err(Error::InvalidParameter(alloc::format!(
                "S^{}_{{{i},{j}}} = {s:?} must avoid {i}, {j} and stay within [{n}]",
                b as u8
            )));
        }
        self.sets[(b as usize * n + i) * n + j] = s;
        Ok(())
    }

    /// `k in S^b_ij <=> j in S^b_ik` for all `i, j, k, b`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        (0..2).all(|b| {
            (0..n).all(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .all(|j| self.get(b == 1, i, j).iter().all(|k| self.get(b == 1, i, k).contains(j)))
            })
        })
    }

    /// Positions blocked for agent `j` by the other agents' messages.
    #[inline]
    pub fn blocked(&self, j: usize, b: MessageVector) -> PositionSet {
        let n = self.n;
        let mut u = PositionSet::EMPTY;
        for i in 0..n {
            if i != j {
                u = u.union(self.get(b.bit(i), i, j));
            }
        }
        u
    }

    /// `A_j`: non-default positions left unblocked for `j`. Bit `j` of `b` is
    /// ignored.
    pub fn available_positions(&self, j: usize, b: MessageVector) -> PositionSet {
        PositionSet::full(self.n).without(j).difference(self.blocked(j, b))
    }

    /// Output position per agent: the unique available position, or the
    /// default position when none is available.
    pub fn assemble_positions(&self, b: MessageVector, out: &mut [usize]) -> Result<()> {
        let n = self.n;
        let mut taken = PositionSet::EMPTY;
        for (j, slot) in out.iter_mut().enumerate().take(n) {
            let a = self.available_positions(j, b);
            let pos = match a.len() {
                0 => j,
                1 => a.min().unwrap(),
                _ => {
                    return Err(Error::Inconsistent(alloc::format!(
                        "agent {j} has available positions {a:?} under {b}"
                    )))
                }
            };
            if taken.contains(pos) {
                return Err(Error::Inconsistent(alloc::format!("position {pos} assigned twice under {b}")));
            }
            taken.insert(pos);
            *slot = pos;
        }
        Ok(())
    }

    /// The ranking `g(b)`.
    pub fn assemble_g(&self, b: MessageVector) -> Result<Permutation> {
        let mut pos = alloc::vec![0; self.n];
        self.assemble_positions(b, &mut pos)?;
        let mut image = alloc::vec![0; self.n];
        for (agent, &k) in pos.iter().enumerate() {
            image[k] = agent;
        }
        Permutation::new(image)
    }
}

/// A failed blocking-set condition, with the data needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetsViolation {
    /// `S^0_ij` and `S^1_ij` do not partition `[n] \ {i, j}`.
    Partition {
        i: usize,
        j: usize,
    },
    /// More than one non-default position is unblocked for `j`.
    TooManyAvailable {
        j: usize,
        messages: MessageVector,
    },
    /// `j` is fully blocked but its default position is free for `other`.
    DefaultPositionShared {
        j: usize,
        other: usize,
        messages: MessageVector,
    },
    /// Only position `k` is free for `j`, and also for `other`.
    PositionShared {
        j: usize,
        k: usize,
        other: usize,
        messages: MessageVector,
    },
    /// `S^b_{i rho_i}` is not the required prefix or suffix set.
    RhoSets {
        i: usize,
        b: bool,
    },
    Dimension {
        rho: usize,
        sets: usize,
    },
}

impl SetsViolation {
    /// Short condition label: `i` to `v`.
    pub fn condition(&self) -> &'static str {
        match self {
            SetsViolation::Partition { .. } => "i",
            SetsViolation::TooManyAvailable { .. } => "ii",
            SetsViolation::DefaultPositionShared { .. } => "iii",
            SetsViolation::PositionShared { .. } => "iv",
            SetsViolation::RhoSets { .. } => "v",
            SetsViolation::Dimension { .. } => "dimension",
        }
    }
}

impl fmt::Display for SetsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetsViolation::Partition { i, j } => {
                write!(f, "S^0 and S^1 for ({i}, {j}) do not partition the other positions")
            }
            SetsViolation::TooManyAvailable { j, messages } => {
                write!(f, "agent {j} has several available positions under {messages}")
            }
            SetsViolation::DefaultPositionShared { j, other, messages } => {
                write!(f, "position {j} is free for agent {other} while agent {j} is fully blocked under {messages}")
            }
            SetsViolation::PositionShared { j, k, other, messages } => {
                write!(f, "position {k} is free for agents {j} and {other} under {messages}")
            }
            SetsViolation::RhoSets { i, b } => {
                write!(f, "S^{}_{{{i},rho_{i}}} has the wrong shape", *b as u8)
            }
            SetsViolation::Dimension { rho, sets } => {
                write!(f, "rho has length {rho} but the sets have n = {sets}")
            }
        }
    }
}

/// How [`verify_blocking_sets`] covers the message space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetsCheckMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

/// Outcome of a blocking-set check that found no violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetsVerdict {
    Proven,
    /// No violation among the sampled message vectors. Not a proof.
    SampledNotProven {
        trials: u64,
    },
}

/// Checks the partition and `rho` conditions directly and the three
/// message-dependent conditions over all (or sampled) message vectors.
pub fn verify_blocking_sets(
    rho: &RhoVector,
    s: &BlockingSets,
    mode: SetsCheckMode,
) -> Result<core::result::Result<SetsVerdict, SetsViolation>> {
    let n = s.n();
    if rho.n() != n {
        return Ok(Err(SetsViolation::Dimension { rho: rho.n(), sets: n }));
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let (z, o) = (s.get(false, i, j), s.get(true, i, j));
            let rest = PositionSet::full(n).without(i).without(j);
            if !z.intersection(o).is_empty() || z.union(o) != rest {
                return Ok(Err(SetsViolation::Partition { i, j }));
            }
        }
    }
    for i in 0..n {
        let r = rho.get(i);
        let below = PositionSet::full(r).without(i);
        let above = PositionSet::full(n).difference(PositionSet::full(r + 1)).without(i);
        if s.get(false, i, r) != below {
            return Ok(Err(SetsViolation::RhoSets { i, b: false }));
        }
        if s.get(true, i, r) != above {
            return Ok(Err(SetsViolation::RhoSets { i, b: true }));
        }
    }
    match mode {
        SetsCheckMode::Exhaustive => {
            if n > EXHAUSTIVE_LIMIT {
                return Err(Error::ModeInfeasible(alloc::format!(
                    "exhaustive blocking-set check needs n <= {EXHAUSTIVE_LIMIT}, got {n}"
                )));
            }
            for mask in 0..1u64 << n {
                if let Err(v) = check_vector(s, MessageVector::from_mask(n, mask)) {
                    return Ok(Err(v));
                }
            }
            Ok(Ok(SetsVerdict::Proven))
        }
        SetsCheckMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            for _ in 0..trials {
                let mask = rng.random::<u64>() & full;
                if let Err(v) = check_vector(s, MessageVector::from_mask(n, mask)) {
                    return Ok(Err(v));
                }
            }
            Ok(Ok(SetsVerdict::SampledNotProven { trials }))
        }
    }
}

fn check_vector(s: &BlockingSets, b: MessageVector) -> core::result::Result<(), SetsViolation> {
    let n = s.n();
    let blocked: Vec<PositionSet> = (0..n).map(|j| s.blocked(j, b)).collect();
    for j in 0..n {
        let free = PositionSet::full(n).without(j).difference(blocked[j]);
        match free.len() {
            0 => {
                if let Some(other) = (0..n).find(|&o| o != j && !blocked[o].contains(j)) {
                    return Err(SetsViolation::DefaultPositionShared { j, other, messages: b });
                }
            }
            1 => {
                let k = free.min().unwrap();
                if let Some(other) = (0..n).find(|&o| o != j && o != k && !blocked[o].contains(k)) {
                    return Err(SetsViolation::PositionShared { j, k, other, messages: b });
                }
            }
            _ => return Err(SetsViolation::TooManyAvailable { j, messages: b }),
        }
    }
    Ok(())
}
