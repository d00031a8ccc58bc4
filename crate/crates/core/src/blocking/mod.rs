//! The monotone impartial mechanism built from one bit per agent.
//!
//! Agent `i` reports whether it ranks a fixed other agent `rho_i` above itself.
//! For `n = 4` the bits index a fixed table; for larger `n` every agent `j`
//! starts with its default position `j` and each other agent blocks a set of
//! positions for `j` depending on its bit. Blocking sets come from colored
//! multigraphs: transcribed for `5 <= n <= 10`, random for `n >= 11`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::mechanism::{RankingMechanism, Structure};
use crate::perms::{Permutation, RankingProfile};
use crate::set::{PositionSet, MAX_ELEMENTS};
use crate::{Error, Result};

pub mod fixtures;
pub mod multigraph;
pub mod search;
pub mod sets;

pub use fixtures::{blocking_sets_n6, fixture_multigraph, g4_table};
pub use multigraph::{verify_multigraph, ColoredMultigraph, MultigraphViolation};
pub use search::{lll_margin, random_multigraph, SearchReport, DEFAULT_MAX_RETRIES, MIN_RANDOM_N};
pub use sets::{verify_blocking_sets, BlockingSets, SetsCheckMode, SetsVerdict, SetsViolation};

/// The agent `rho_i` whose relative order agent `i` reports. `rho_i != i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RhoVector(Vec<usize>);

impl RhoVector {
    pub fn new(rho: Vec<usize>) -> Result<Self> {
        let n = rho.len();
        for (i, &r) in rho.iter().enumerate() {
            if r >= n {
                return Err(Error::IndexOutOfRange { index: r as u64, bound: n as u64 });
            }
            if r == i {
                return Err(Error::InvalidParameter(alloc::format!("rho_{i} must differ from {i}")));
            }
        }
        Ok(RhoVector(rho))
    }

    /// `rho_i = i + 1 mod n`.
    pub fn successor(n: usize) -> Self {
        RhoVector((0..n).map(|i| (i + 1) % n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// One bit per agent, packed into a mask (bit `i` is agent `i`'s message).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MessageVector {
    n: usize,
    mask: u64,
}

impl MessageVector {
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        MessageVector { n, mask }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() > MAX_ELEMENTS {
            return Err(Error::Capacity { n: bits.len(), max: MAX_ELEMENTS });
        }
        let mut mask = 0;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << i,
                _ => return Err(Error::InvalidParameter(alloc::format!("message {i} is {b}, expected 0 or 1"))),
            }
        }
        Ok(MessageVector { n: bits.len(), mask })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn bit(self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    pub fn with(self, i: usize, b: bool) -> Self {
        let mask = if b { self.mask | 1 << i } else { self.mask & !(1 << i) };
        MessageVector { n: self.n, mask }
    }

    pub fn bits(self) -> Vec<u8> {
        (0..self.n).map(|i| self.bit(i) as u8).collect()
    }
}

impl fmt::Display for MessageVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.bit(i) as u8)?;
        }
        f.write_str(")")
    }
}

/// 1 iff `rho_i` is ranked strictly above `i` in `p`.
pub fn chi(i: usize, p: &Permutation, rho_i: usize) -> Result<bool> {
    if rho_i == i {
        return Err(Error::InvalidParameter(alloc::format!("rho_{i} must differ from {i}")));
    }
    let n = p.n();
    if i >= n || rho_i >= n {
        return Err(Error::IndexOutOfRange { index: i.max(rho_i) as u64, bound: n as u64 });
    }
    Ok(p.prefers(rho_i, i))
}

#[derive(Clone, Debug)]
enum Rule {
    Table(Vec<Permutation>),
    Sets(BlockingSets),
}

/// A message-based ranking mechanism: impartial, monotone and with individual
/// full rank.
#[derive(Clone, Debug)]
pub struct BlockingMechanism {
    rho: RhoVector,
    rule: Rule,
}

impl BlockingMechanism {
    /// The four-agent table mechanism.
    pub fn n4() -> Self {
        BlockingMechanism { rho: RhoVector(fixtures::G4_RHO.to_vec()), rule: Rule::Table(g4_table()) }
    }

    /// Builds the mechanism from a multigraph after checking it.
    pub fn from_multigraph(rho: RhoVector, g: &ColoredMultigraph) -> Result<Self> {
        let sets = BlockingSets::from_multigraph(&rho, g).map_err(|v| Error::Inconsistent(alloc::format!("{v}")))?;
        Ok(BlockingMechanism { rho, rule: Rule::Sets(sets) })
    }

    /// Uses `sets` as given after the exhaustive blocking-set check.
    pub fn from_sets(rho: RhoVector, sets: BlockingSets) -> Result<Self> {
        match verify_blocking_sets(&rho, &sets, SetsCheckMode::Exhaustive)? {
            Ok(_) => Ok(BlockingMechanism { rho, rule: Rule::Sets(sets) }),
            Err(v) => Err(Error::Inconsistent(alloc::format!("{v}"))),
        }
    }

    /// Skips verification. Evaluation reports an error if the sets turn out to
    /// be inconsistent for some message vector.
    pub fn from_sets_unchecked(rho: RhoVector, sets: BlockingSets) -> Self {
        BlockingMechanism { rho, rule: Rule::Sets(sets) }
    }

    /// The table for `n = 4` or a transcribed multigraph for `5 <= n <= 10`.
    pub fn fixture(n: usize) -> Result<Self> {
        if n == 4 {
            return Ok(Self::n4());
        }
        let (rho, g) = fixture_multigraph(n)?;
        Self::from_multigraph(rho, &g)
    }

    /// Random multigraph with `rho_i = i + 1` for `n >= 11`.
    pub fn random(n: usize, seed: u64, max_retries: u32) -> Result<(Self, ColoredMultigraph, SearchReport)> {
        let rho = RhoVector::successor(n);
        let (g, report) = random_multigraph(n, &rho, seed, max_retries)?;
        let sets = sets::BlockingSets::from_multigraph_unchecked(&g);
        Ok((BlockingMechanism { rho, rule: Rule::Sets(sets) }, g, report))
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }

    pub fn rho(&self) -> &RhoVector {
        &self.rho
    }

    pub fn blocking_sets(&self) -> Option<&BlockingSets> {
        match &self.rule {
            Rule::Sets(s) => Some(s),
            Rule::Table(_) => None,
        }
    }

    /// The message vector `chi(profile, rho)`.
    pub fn messages(&self, profile: &RankingProfile) -> Result<MessageVector> {
        let n = self.n();
        if profile.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: profile.n() });
        }
        let mut mask = 0u64;
        for i in 0..n {
            if chi(i, profile.ranking(i), self.rho.get(i))? {
                mask |= 1 << i;
            }
        }
        Ok(MessageVector::from_mask(n, mask))
    }

    /// Output position of every agent under `b`.
    pub fn positions_into(&self, b: MessageVector, out: &mut [usize]) -> Result<()> {
        match &self.rule {
            Rule::Table(t) => {
                let p = &t[b.mask() as usize];
                for (k, &a) in p.image().iter().enumerate() {
                    out[a] = k;
                }
                Ok(())
            }
            Rule::Sets(s) => s.assemble_positions(b, out),
        }
    }

    /// The ranking `g(b)`.
    pub fn evaluate(&self, b: MessageVector) -> Result<Permutation> {
        if b.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: b.n() });
        }
        match &self.rule {
            Rule::Table(t) => Ok(t[b.mask() as usize].clone()),
            Rule::Sets(s) => s.assemble_g(b),
        }
    }

    /// A profile whose messages are `b`: agent `i` submits the identity, or the
    /// identity with `i` and `rho_i` exchanged when the identity sends the
    /// wrong bit.
    pub fn realize(&self, b: MessageVector) -> RankingProfile {
        let n = self.n();
        let rankings = (0..n)
            .map(|i| {
                let r = self.rho.get(i);
                let mut p = Permutation::identity(n);
                if (r < i) != b.bit(i) {
                    p.swap_positions(i, r);
                }
                p
            })
            .collect();
        RankingProfile::new(rankings).expect("square profile")
    }

    /// Messages that put agent `j` in position `k`.
    pub fn message_witness(&self, j: usize, k: usize) -> Result<MessageVector> {
        let n = self.n();
        if j >= n || k >= n {
            return Err(Error::IndexOutOfRange { index: j.max(k) as u64, bound: n as u64 });
        }
        match &self.rule {
            Rule::Table(t) => (0..t.len() as u64)
                .find(|&m| t[m as usize].agent_at(k) == j)
                .map(|m| MessageVector::from_mask(n, m))
                .ok_or_else(|| Error::Inconsistent(alloc::format!("agent {j} never reaches position {k}"))),
            Rule::Sets(s) => Ok(sets_witness(s, j, k)),
        }
    }

    /// A profile under which agent `j` ends up in position `k`.
    pub fn ifr_witness(&self, j: usize, k: usize) -> Result<RankingProfile> {
        Ok(self.realize(self.message_witness(j, k)?))
    }

    /// Checks impartiality, monotonicity towards `rho_i` and reachability on
    /// the message vectors in `masks`. Each vector is compared with the vectors
    /// obtained by raising one zero bit.
    pub fn sweep_messages(&self, masks: Range<u64>) -> core::result::Result<MessageSweep, MessageViolation> {
        let n = self.n();
        let mut sweep = MessageSweep { vectors: 0, flips: 0, reached: alloc::vec![PositionSet::EMPTY; n] };
        let mut pos = alloc::vec![0usize; n];
        let mut flipped = alloc::vec![0usize; n];
        for mask in masks {
            let b = MessageVector::from_mask(n, mask);
            self.positions_into(b, &mut pos)
                .map_err(|e| MessageViolation::Inconsistent { messages: b, detail: alloc::format!("{e}") })?;
            for (j, &k) in pos.iter().enumerate() {
                sweep.reached[j].insert(k);
            }
            sweep.vectors += 1;
            for i in (0..n).filter(|&i| !b.bit(i)) {
                let up = b.with(i, true);
                self.positions_into(up, &mut flipped)
                    .map_err(|e| MessageViolation::Inconsistent { messages: up, detail: alloc::format!("{e}") })?;
                sweep.flips += 1;
                if flipped[i] != pos[i] {
                    return Err(MessageViolation::Impartiality { agent: i, messages: b });
                }
                let r = self.rho.get(i);
                if flipped[r] > pos[r] {
                    return Err(MessageViolation::Monotonicity { agent: i, messages: b });
                }
            }
        }
        Ok(sweep)
    }

    /// [`BlockingMechanism::sweep_messages`] over all `2^n` vectors, then the
    /// reachability check.
    pub fn certify_messages(&self) -> Result<core::result::Result<MessageSweep, MessageViolation>> {
        let n = self.n();
        if n > sets::EXHAUSTIVE_LIMIT {
            return Err(Error::ModeInfeasible(alloc::format!(
                "message sweep needs n <= {}, got {n}",
                sets::EXHAUSTIVE_LIMIT
            )));
        }
        Ok(self.sweep_messages(0..1u64 << n).and_then(|s| s.check_reach()))
    }
}

fn sets_witness(s: &BlockingSets, j: usize, k: usize) -> MessageVector {
    let n = s.n();
    let mut b = MessageVector::from_mask(n, 0);
    if k != j {
        // Every agent other than j and k picks the message that leaves k free.
        for i in (0..n).filter(|&i| i != j && i != k) {
            b = b.with(i, s.get(false, i, j).contains(k));
        }
        return b;
    }
    // Grow the blocked set for j one agent at a time, in index order.
    let mut union = PositionSet::EMPTY;
    let mut first = true;
    for i in (0..n).filter(|&i| i != j) {
        let (z, o) = (s.get(false, i, j), s.get(true, i, j));
        let bit = if first {
            first = false;
            z.len() < 2
        } else {
            z.difference(union).is_empty() && !o.difference(union).is_empty()
        };
        b = b.with(i, bit);
        union = union.union(s.get(bit, i, j));
    }
    b
}

/// Counters and reachability from a message sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessageSweep {
    pub vectors: u64,
    pub flips: u64,
    /// `reached[j]` is the set of positions agent `j` occupied.
    pub reached: Vec<PositionSet>,
}

impl MessageSweep {
    /// Combines the results of two disjoint sweeps.
    pub fn merge(mut self, other: &MessageSweep) -> Self {
        self.vectors += other.vectors;
        self.flips += other.flips;
        for (a, b) in self.reached.iter_mut().zip(&other.reached) {
            *a = a.union(*b);
        }
        self
    }

    /// Fails with the first `(j, k)` never reached.
    pub fn check_reach(self) -> core::result::Result<Self, MessageViolation> {
        let n = self.reached.len();
        for (j, r) in self.reached.iter().enumerate() {
            if let Some(k) = PositionSet::full(n).difference(*r).min() {
                return Err(MessageViolation::Unreachable { agent: j, position: k });
            }
        }
        Ok(self)
    }
}

/// A message-level counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MessageViolation {
    /// Agent's own bit moves it (compare `messages` with the bit raised).
    Impartiality {
        agent: usize,
        messages: MessageVector,
    },
    /// Raising `agent`'s bit moves `rho_agent` down.
    Monotonicity {
        agent: usize,
        messages: MessageVector,
    },
    Unreachable {
        agent: usize,
        position: usize,
    },
    Inconsistent {
        messages: MessageVector,
        detail: alloc::string::String,
    },
}

impl fmt::Display for MessageViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MessageViolation::Impartiality { agent, messages } => {
                write!(f, "agent {agent} moves when its own bit flips at {messages}")
            }
            MessageViolation::Monotonicity { agent, messages } => {
                write!(f, "rho_{agent} moves down when agent {agent} raises its bit at {messages}")
            }
            MessageViolation::Unreachable { agent, position } => {
                write!(f, "agent {agent} never reaches position {position}")
            }
            MessageViolation::Inconsistent { messages, detail } => write!(f, "{messages}: {detail}"),
        }
    }
}

impl RankingMechanism for BlockingMechanism {
    fn n(&self) -> usize {
        self.rho.n()
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        let b = self.messages(profile)?;
        self.evaluate(b)
    }

    fn structure(&self) -> Structure<'_> {
        Structure::Messages(self)
    }
}
