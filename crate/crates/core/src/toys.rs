//! Small reference mechanisms with known axiom profiles, used to exercise
//! the verifiers.

use alloc::vec::Vec;

use crate::blocking::{chi, g4_table};
use crate::mechanism::RankingMechanism;
use crate::perms::{Permutation, RankingProfile};
use crate::{Error, Result};

fn check_n(expected: usize, profile: &RankingProfile) -> Result<()> {
    if profile.n() != expected {
        return Err(Error::DimensionMismatch { expected, found: profile.n() });
    }
    Ok(())
}

/// Always outputs the same ranking.
#[derive(Clone, Debug)]
pub struct Constant(pub Permutation);

impl RankingMechanism for Constant {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        check_n(self.0.n(), profile)?;
        Ok(self.0.clone())
    }
}

/// Outputs agent 0's ranking.
#[derive(Clone, Copy, Debug)]
pub struct Dictatorship {
    pub n: usize,
}

impl RankingMechanism for Dictatorship {
    fn n(&self) -> usize {
        self.n
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        check_n(self.n, profile)?;
        Ok(profile.ranking(0).clone())
    }
}

/// The four-agent table driven by inverted messages: each agent's bit is 1
/// when it ranks its `rho` agent below itself. Impartial but not monotone.
#[derive(Clone, Debug)]
pub struct AntiMonotone {
    table: Vec<Permutation>,
}

impl AntiMonotone {
    pub const RHO: [usize; 4] = [1, 0, 1, 0];

    pub fn new() -> Self {
        AntiMonotone { table: g4_table() }
    }
}

impl Default for AntiMonotone {
    fn default() -> Self {
        Self::new()
    }
}

impl RankingMechanism for AntiMonotone {
    fn n(&self) -> usize {
        4
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        check_n(4, profile)?;
        let mut mask = 0usize;
        for i in 0..4 {
            if !chi(i, profile.ranking(i), Self::RHO[i])? {
                mask |= 1 << i;
            }
        }
        Ok(self.table[mask].clone())
    }
}
