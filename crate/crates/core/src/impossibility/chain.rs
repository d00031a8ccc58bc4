//! The unanimity chain: a fixed walk of `n + 1` profiles along which no
//! impartial mechanism can respect unanimity at every step.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::axioms::Witness;
use crate::mechanism::RankingMechanism;
use crate::perms::{Permutation, RankingProfile};
use crate::{Error, Result};

/// `(1 2 ... n-1 0)`: agent 0 moved from the top to the bottom.
pub fn rotated_identity(n: usize) -> Permutation {
    Permutation::new((1..n).chain(core::iter::once(0)).collect()).expect("rotation is a permutation")
}

/// Profile `ell` of the chain: agents `0..n-ell` submit the rotated identity,
/// the rest submit the identity.
pub fn chain_profile(n: usize, ell: usize) -> Result<RankingProfile> {
    if n < 2 || ell >= n {
        return Err(Error::InvalidParameter(format!("chain profile {ell} is undefined for n = {n}")));
    }
    let rot = rotated_identity(n);
    let id = Permutation::identity(n);
    RankingProfile::new((0..n).map(|i| if i < n - ell { rot.clone() } else { id.clone() }).collect())
}

/// The first check along the chain that the mechanism fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainFinding {
    /// Index of the failing check in walk order, starting at 0.
    pub step: usize,
    pub description: String,
    pub witness: Witness,
    /// Mechanism evaluations performed.
    pub evaluations: u64,
}

impl ChainFinding {
    pub fn is_unanimity(&self) -> bool {
        matches!(self.witness, Witness::Unanimity { .. })
    }
}

fn unanimity_failure(profile: &RankingProfile, out: &Permutation) -> Option<Witness> {
    let n = profile.n();
    for a in 0..n {
        for b in 0..n {
            if a != b && !out.prefers(a, b) && profile.rankings().iter().all(|p| p.prefers(a, b)) {
                return Some(Witness::Unanimity { profile: profile.clone(), above: a, below: b });
            }
        }
    }
    None
}

/// Walks the chain and returns the first unanimity or impartiality failure.
///
/// The walk checks unanimity at profile 0, then for each `ell` the
/// impartiality link of agent `n - 1 - ell` into profile `ell + 1` followed
/// by unanimity there, and finally agent 0 switching to the identity and
/// unanimity at the all-identity profile. Every check passing is impossible
/// for a mechanism that returns permutations, so that case is reported as
/// [`Error::Inconsistent`].
pub fn unanimity_chain_audit<M: RankingMechanism + ?Sized>(mech: &M) -> Result<ChainFinding> {
    let n = mech.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("the unanimity chain needs n >= 2, got {n}")));
    }
    let mut profiles: Vec<RankingProfile> = (0..n).map(|l| chain_profile(n, l)).collect::<Result<_>>()?;
    profiles.push(RankingProfile::unanimous(&Permutation::identity(n)));
    let mut step = 0usize;
    let mut prev: Option<Permutation> = None;
    for (idx, profile) in profiles.iter().enumerate() {
        let out = mech.rank(profile)?;
        let evaluations = idx as u64 + 1;
        if let Some(prev_out) = &prev {
            // Agent switching from the rotated identity to the identity.
            let agent = n.saturating_sub(idx);
            if out.position_of(agent) != prev_out.position_of(agent) {
                return Ok(ChainFinding {
                    step,
                    description: format!("agent {agent} moves between chain profiles {} and {idx}", idx - 1),
                    witness: Witness::Impartiality {
                        profile: profiles[idx - 1].clone(),
                        agent,
                        deviation: profile.ranking(agent).clone(),
                    },
                    evaluations,
                });
            }
            step += 1;
        }
        if let Some(witness) = unanimity_failure(profile, &out) {
            return Ok(ChainFinding {
                step,
                description: format!("unanimity fails at chain profile {idx}"),
                witness,
                evaluations,
            });
        }
        step += 1;
        prev = Some(out);
    }
    Err(Error::Inconsistent(String::from("every chain check passed, which no permutation-valued mechanism allows")))
}
