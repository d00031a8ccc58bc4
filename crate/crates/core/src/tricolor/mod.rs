//! The impartial, weakly unanimous mechanism driven by three decisive agents.
//!
//! Agents 0, 1 and 2 are decisive. Decisive agent `i` is placed by the lex
//! indices of the other two decisive rankings through matrix `A^i`; every
//! other agent takes the remaining positions in increasing order. Matrix
//! entries come from a cutting family and are evaluated on demand.

use alloc::vec::Vec;

use crate::mechanism::{RankingMechanism, Structure};
use crate::perms::{unranked_position, Permutation, RankingProfile};
use crate::set::PositionSet;
use crate::{Error, Result};

pub mod cutting;
pub mod fixtures;
pub mod matrix;

pub use cutting::{cutting_family, verify_cutting_family, CuttingFamily, CuttingViolation};
pub use matrix::{
    diagonal, verify_triple, ConstructedTriple, ExplicitTriple, IndexData, MatrixTriple, TripleViolation,
};

#[derive(Clone, Debug)]
pub struct WeakUnanimityMechanism {
    triple: ConstructedTriple,
}

impl WeakUnanimityMechanism {
    /// Uses the standard cutting family. Requires `5 <= n <= 20`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_family(cutting_family(n)?)
    }

    pub fn with_family(family: CuttingFamily) -> Result<Self> {
        Ok(WeakUnanimityMechanism { triple: ConstructedTriple::new(family)? })
    }

    pub fn n(&self) -> usize {
        self.triple.n()
    }

    pub fn triple(&self) -> &ConstructedTriple {
        &self.triple
    }

    /// Position of non-decisive agent `i >= 3` given the decisive indices.
    pub fn nondecisive_position(&self, i: usize, p: u64, q: u64, r: u64) -> Result<usize> {
        let n = self.n();
        let m = self.triple.m();
        if !(3..n).contains(&i) {
            return Err(Error::InvalidParameter(alloc::format!("agent {i} is not a non-decisive agent of [{n}]")));
        }
        if let Some(&x) = [p, q, r].iter().find(|&&x| x >= m) {
            return Err(Error::IndexOutOfRange { index: x, bound: m });
        }
        if p == q && q == r {
            return Ok(unranked_position(n, p, i));
        }
        let t = &self.triple;
        let taken = PositionSet::from([t.entry(0, q, r), t.entry(1, r, p), t.entry(2, p, q)]);
        Ok(PositionSet::full(n).difference(taken).nth(i - 3).expect("n - 3 free positions"))
    }

    /// Output positions for decisive indices `(p, q, r)` from precomputed
    /// index data.
    pub fn positions_from(&self, p: (u64, &IndexData), q: (u64, &IndexData), r: (u64, &IndexData), out: &mut [usize]) {
        let n = self.n();
        let t = &self.triple;
        let a0 = t.entry_from(0, q.0 == r.0, q.1, r.1);
        let a1 = t.entry_from(1, r.0 == p.0, r.1, p.1);
        let a2 = t.entry_from(2, p.0 == q.0, p.1, q.1);
        out[0] = a0;
        out[1] = a1;
        out[2] = a2;
        if p.0 == q.0 && q.0 == r.0 {
            for (i, slot) in out.iter_mut().enumerate().take(n).skip(3) {
                *slot = unranked_position(n, p.0, i);
            }
        } else {
            let free = PositionSet::full(n).difference(PositionSet::from([a0, a1, a2]));
            for (slot, k) in out[3..n].iter_mut().zip(free.iter()) {
                *slot = k;
            }
        }
    }

    /// Output positions for decisive lex indices `(p, q, r)`.
    pub fn positions(&self, p: u64, q: u64, r: u64) -> Vec<usize> {
        let t = &self.triple;
        let (dp, dq, dr) = (t.index_data(p), t.index_data(q), t.index_data(r));
        let mut out = alloc::vec![0; self.n()];
        self.positions_from((p, &dp), (q, &dq), (r, &dr), &mut out);
        out
    }

    /// The output ranking for decisive lex indices `(p, q, r)`.
    pub fn rank_indices(&self, p: u64, q: u64, r: u64) -> Result<Permutation> {
        let m = self.triple.m();
        if let Some(&x) = [p, q, r].iter().find(|&&x| x >= m) {
            return Err(Error::IndexOutOfRange { index: x, bound: m });
        }
        positions_to_ranking(&self.positions(p, q, r))
    }
}

pub(crate) fn positions_to_ranking(pos: &[usize]) -> Result<Permutation> {
    let n = pos.len();
    let mut image = alloc::vec![usize::MAX; n];
    for (agent, &k) in pos.iter().enumerate() {
        if k >= n || image[k] != usize::MAX {
            return Err(Error::Inconsistent(alloc::format!("position {k} assigned twice in {pos:?}")));
        }
        image[k] = agent;
    }
    Permutation::new(image)
}

impl RankingMechanism for WeakUnanimityMechanism {
    fn n(&self) -> usize {
        self.triple.n()
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        let n = self.n();
        if profile.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: profile.n() });
        }
        let p = profile.ranking(0).lex_rank()?;
        let q = profile.ranking(1).lex_rank()?;
        let r = profile.ranking(2).lex_rank()?;
        self.rank_indices(p, q, r)
    }

    fn structure(&self) -> Structure<'_> {
        Structure::Decisive(self)
    }
}

/// Runs an inner mechanism with agents renamed so that three chosen agents
/// play the decisive roles of 0, 1 and 2.
#[derive(Clone, Debug)]
pub struct Relabeled<M> {
    inner: M,
    // to_inner[external agent] = internal agent
    to_inner: Vec<usize>,
    to_outer: Vec<usize>,
}

impl<M: RankingMechanism> Relabeled<M> {
    /// `decisive[k]` plays the role of internal agent `k`; the remaining
    /// agents keep their relative order.
    pub fn new(inner: M, decisive: [usize; 3]) -> Result<Self> {
        let n = inner.n();
        let chosen: PositionSet = decisive.into_iter().collect();
        if decisive.iter().any(|&a| a >= n) || chosen.len() != 3 {
            return Err(Error::InvalidParameter(alloc::format!(
                "decisive agents {decisive:?} must be three distinct agents of [{n}]"
            )));
        }
        let mut to_outer: Vec<usize> = decisive.to_vec();
        to_outer.extend((0..n).filter(|a| !chosen.contains(*a)));
        let mut to_inner = alloc::vec![0; n];
        for (inner_agent, &outer) in to_outer.iter().enumerate() {
            to_inner[outer] = inner_agent;
        }
        Ok(Relabeled { inner, to_inner, to_outer })
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

impl<M: RankingMechanism> RankingMechanism for Relabeled<M> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        let n = self.n();
        if profile.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: profile.n() });
        }
        let mut rankings = alloc::vec![Permutation::identity(n); n];
        for (outer, p) in profile.rankings().iter().enumerate() {
            let image = p.image().iter().map(|&a| self.to_inner[a]).collect();
            rankings[self.to_inner[outer]] = Permutation::new(image)?;
        }
        let out = self.inner.rank(&RankingProfile::new(rankings)?)?;
        Permutation::new(out.image().iter().map(|&a| self.to_outer[a]).collect())
    }
}
