//! Permutations in one-line notation, ranking profiles, modular indices and
//! the lexicographic rank/unrank bijection between permutations of `[n]` and
//! `[n!]`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest `n` whose `n!` fits in a `u64`.
pub const MAX_RANK_N: usize = 20;

/// `n!`, or a capacity error for `n > 20`.
pub fn factorial(n: usize) -> Result<u64> {
    if n > MAX_RANK_N {
        return Err(Error::Capacity { n, max: MAX_RANK_N });
    }
    Ok((1..=n as u64).product())
}

/// A strict ranking of `n` agents. `image[k]` is the agent in position `k`
/// (position 0 is the top).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Validates that `image` is a bijection on `[image.len()]`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty ranking".into()));
        }
        let mut seen = alloc::vec![usize::MAX; n];
        for (pos, &agent) in image.iter().enumerate() {
            if agent >= n {
                return Err(Error::InvalidPermutation(format!(
                    "agent {agent} at position {pos} is out of range 0..{n}"
                )));
            }
            if seen[agent] != usize::MAX {
                return Err(Error::InvalidPermutation(format!(
                    "agent {agent} appears at positions {} and {pos}",
                    seen[agent]
                )));
            }
            seen[agent] = pos;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// `(n-1 ... 1 0)`.
    pub fn reversed(n: usize) -> Self {
        Permutation { image: (0..n).rev().collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    /// The agent at position `k`.
    pub fn agent_at(&self, k: usize) -> usize {
        self.image[k]
    }

    /// Position of `agent`.
    pub fn position_of(&self, agent: usize) -> usize {
        self.image.iter().position(|&a| a == agent).expect("agent out of range")
    }

    /// Agent-to-position map as a vector.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = alloc::vec![0; self.n()];
        for (k, &a) in self.image.iter().enumerate() {
            pos[a] = k;
        }
        pos
    }

    pub fn inverse(&self) -> Permutation {
        Permutation { image: self.positions() }
    }

    /// True if `a` is ranked strictly above `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.position_of(a) < self.position_of(b)
    }

    /// Exchanges the agents at positions `k` and `l`.
    pub fn swap_positions(&mut self, k: usize, l: usize) {
        self.image.swap(k, l);
    }

    /// Moves `agent` one position up. Returns `false` if it is already on top.
    pub fn raise(&mut self, agent: usize) -> bool {
        let k = self.position_of(agent);
        if k == 0 {
            return false;
        }
        self.image.swap(k - 1, k);
        true
    }

    /// Lexicographic index among all `n!` permutations of `[n]`.
    pub fn lex_rank(&self) -> Result<u64> {
        let n = self.n();
        if n > MAX_RANK_N {
            return Err(Error::Capacity { n, max: MAX_RANK_N });
        }
        let mut used = 0u64;
        let mut idx = 0u64;
        for (k, &a) in self.image.iter().enumerate() {
            let smaller_unused = (a as u64) - (used & ((1u64 << a) - 1)).count_ones() as u64;
            idx = idx * (n - k) as u64 + smaller_unused;
            used |= 1 << a;
        }
        Ok(idx)
    }

    /// Inverse of [`Permutation::lex_rank`].
    pub fn lex_unrank(n: usize, idx: u64) -> Result<Permutation> {
        let total = factorial(n)?;
        if idx >= total {
            return Err(Error::IndexOutOfRange { index: idx, bound: total });
        }
        let mut image = Vec::with_capacity(n);
        let mut free = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut rest = idx;
        let mut f = total;
        for k in 0..n {
            f /= (n - k) as u64;
            let digit = rest / f;
            rest %= f;
            let a = nth_bit(free, digit as u32);
            free &= !(1 << a);
            image.push(a);
        }
        Ok(Permutation { image })
    }
}

/// Position of `agent` in the permutation with lexicographic index `idx`,
/// without allocating. Caller guarantees `n <= 20`, `agent < n`, `idx < n!`.
pub fn unranked_position(n: usize, idx: u64, agent: usize) -> usize {
    debug_assert!(n <= MAX_RANK_N && agent < n);
    let mut free = (1u64 << n) - 1;
    let mut rest = idx;
    let mut f: u64 = (1..=n as u64).product();
    for k in 0..n {
        f /= (n - k) as u64;
        let digit = rest / f;
        rest %= f;
        let a = nth_bit(free, digit as u32);
        if a == agent {
            return k;
        }
        free &= !(1 << a);
    }
    unreachable!("agent {agent} not placed")
}

fn nth_bit(mut mask: u64, k: u32) -> usize {
    for _ in 0..k {
        mask &= mask - 1;
    }
    mask.trailing_zeros() as usize
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Prints `(3 1 4 0 2 5)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, a) in self.image.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(image: Vec<usize>) -> Result<Self> {
        Permutation::new(image)
    }
}

/// One ranking per agent; `rankings[i]` is agent `i`'s report.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RankingProfile {
    rankings: Vec<Permutation>,
}

impl RankingProfile {
    /// Requires `rankings.len() == n` and every ranking over `[n]`.
    pub fn new(rankings: Vec<Permutation>) -> Result<Self> {
        let n = rankings.len();
        if n == 0 {
            return Err(Error::InvalidParameter("profile has no agents".into()));
        }
        for p in &rankings {
            if p.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.n() });
            }
        }
        Ok(RankingProfile { rankings })
    }

    /// Builds a profile from raw one-line vectors.
    pub fn from_images(images: Vec<Vec<usize>>) -> Result<Self> {
        let rankings = images.into_iter().map(Permutation::new).collect::<Result<Vec<_>>>()?;
        RankingProfile::new(rankings)
    }

    /// Every agent submits `p`.
    pub fn unanimous(p: &Permutation) -> Self {
        RankingProfile { rankings: alloc::vec![p.clone(); p.n()] }
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn rankings(&self) -> &[Permutation] {
        &self.rankings
    }

    pub fn ranking(&self, i: usize) -> &Permutation {
        &self.rankings[i]
    }

    /// The profile with agent `i`'s ranking replaced by `p`.
    pub fn replace(&self, i: usize, p: Permutation) -> Result<Self> {
        let mut out = self.clone();
        out.set(i, p)?;
        Ok(out)
    }

    /// In-place form of [`RankingProfile::replace`].
    pub fn set(&mut self, i: usize, p: Permutation) -> Result<()> {
        let n = self.n();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i as u64, bound: n as u64 });
        }
        if p.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.n() });
        }
        self.rankings[i] = p;
        Ok(())
    }

    pub fn into_rankings(self) -> Vec<Permutation> {
        self.rankings
    }
}

/// An element of `Z_r`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ModIndex {
    value: usize,
    modulus: usize,
}

impl ModIndex {
    pub fn new(value: usize, modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        if value >= modulus {
            return Err(Error::IndexOutOfRange { index: value as u64, bound: modulus as u64 });
        }
        Ok(ModIndex { value, modulus })
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn modulus(self) -> usize {
        self.modulus
    }
}

impl core::ops::Add<usize> for ModIndex {
    type Output = ModIndex;

    fn add(self, k: usize) -> Self {
        ModIndex { value: add_mod(self.value, k, self.modulus), modulus: self.modulus }
    }
}

impl core::ops::Sub<usize> for ModIndex {
    type Output = ModIndex;

    fn sub(self, k: usize) -> Self {
        ModIndex { value: sub_mod(self.value, k, self.modulus), modulus: self.modulus }
    }
}

/// `a + b mod r`.
pub fn add_mod(a: usize, b: usize, r: usize) -> usize {
    (a % r + b % r) % r
}

/// `a - b mod r`.
pub fn sub_mod(a: usize, b: usize, r: usize) -> usize {
    (a % r + r - b % r) % r
}
