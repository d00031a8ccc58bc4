use crate::blocking::BlockingMechanism;
use crate::perms::{Permutation, RankingProfile};
use crate::tricolor::WeakUnanimityMechanism;
use crate::Result;

/// Structural information a verifier may use to shrink the profile space.
#[derive(Clone, Copy, Debug)]
pub enum Structure<'a> {
    /// Nothing known; only brute force applies.
    Opaque,
    /// The output depends on the profile only through one bit per agent.
    Messages(&'a BlockingMechanism),
    /// The output depends only on the rankings of agents 0, 1 and 2.
    Decisive(&'a WeakUnanimityMechanism),
}

/// Anything that maps a ranking profile to a ranking.
pub trait RankingMechanism {
    fn n(&self) -> usize;

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation>;

    fn structure(&self) -> Structure<'_> {
        Structure::Opaque
    }
}

impl<M: RankingMechanism + ?Sized> RankingMechanism for &M {
    fn n(&self) -> usize {
        (**self).n()
    }

    fn rank(&self, profile: &RankingProfile) -> Result<Permutation> {
        (**self).rank(profile)
    }

    fn structure(&self) -> Structure<'_> {
        (**self).structure()
    }
}
