use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::multigraph::{verify_multigraph, ColoredMultigraph};
use super::RhoVector;
use crate::set::{PositionSet, MAX_ELEMENTS};
use crate::{Error, Result};

/// Smallest `n` accepted by [`random_multigraph`].
pub const MIN_RANDOM_N: usize = 11;

pub const DEFAULT_MAX_RETRIES: u32 = 1000;

/// Where a successful random search stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub seed: u64,
    /// Number of graphs drawn, including the accepted one.
    pub attempts: u32,
}

impl SearchReport {
    /// ChaCha stream that produced the accepted graph.
    pub fn stream(&self) -> u64 {
        u64::from(self.attempts - 1)
    }
}

/// One draw: forced edges at `rho_i` for every color, then a fair coin for
/// each remaining pair avoiding `i` and `rho_i`, pairs in lexicographic order.
pub fn draw_multigraph(rho: &RhoVector, rng: &mut impl Rng) -> Result<ColoredMultigraph> {
    let n = rho.n();
    let mut g = ColoredMultigraph::empty(n)?;
    for i in 0..n {
        let r = rho.get(i);
        for j in PositionSet::full(r).without(i) {
            g.add_edge(i, r, j)?;
        }
        for a in 0..n {
            if a == i || a == r {
                continue;
            }
            for b in a + 1..n {
                if b == i || b == r {
                    continue;
                }
                if rng.random::<bool>() {
                    g.add_edge(i, a, b)?;
                }
            }
        }
    }
    Ok(g)
}

/// Draws graphs until one passes [`verify_multigraph`]. Attempt `t` (0-based)
/// uses the ChaCha8 generator seeded with `seed` on stream `t`, so any single
/// attempt can be replayed on its own.
pub fn random_multigraph(
    n: usize,
    rho: &RhoVector,
    seed: u64,
    max_retries: u32,
) -> Result<(ColoredMultigraph, SearchReport)> {
    if n < MIN_RANDOM_N {
        return Err(Error::InvalidParameter(alloc::format!("random multigraphs need n >= {MIN_RANDOM_N}, got {n}")));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::Capacity { n, max: MAX_ELEMENTS });
    }
    if *rho != RhoVector::successor(n) {
        return Err(Error::InvalidParameter("random multigraphs require rho_i = i + 1 mod n".into()));
    }
    if max_retries == 0 {
        return Err(Error::InvalidParameter("max_retries must be positive".into()));
    }
    for attempt in 0..max_retries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(attempt));
        let g = draw_multigraph(rho, &mut rng)?;
        if verify_multigraph(rho, &g).is_ok() {
            return Ok((g, SearchReport { seed, attempts: attempt + 1 }));
        }
    }
    Err(Error::RetriesExhausted { attempts: max_retries })
}

/// `e (4n - 9) / 2^(n - 4)`. Below 1 the random draw succeeds with positive
/// probability.
pub fn lll_margin(n: usize) -> f64 {
    let mut scale = 1.0f64;
    if n >= 4 {
        for _ in 4..n {
            scale /= 2.0;
        }
    } else {
        for _ in n..4 {
            scale *= 2.0;
        }
    }
    core::f64::consts::E * (4.0 * n as f64 - 9.0) * scale
}
