//! Impartial rank aggregation.
//!
//! An *n-ranking mechanism* maps a profile of `n` rankings, one submitted by
//! each of `n` agents, to a single social ranking of those same agents. The
//! mechanism is *impartial* when no agent can change its own output position
//! through the ranking it submits.
//!
//! This crate provides:
//!
//! * [`blocking`]: a monotone, impartial mechanism with individual full rank
//!   for every `n >= 4`, built from one bit per agent and position-blocking
//!   sets derived from colored multigraphs.
//! * [`tricolor`]: an impartial, weakly unanimous mechanism for `n >= 5`
//!   driven by three decisive agents and a lazily evaluated matrix triple.
//! * [`axioms`]: mechanism-agnostic verifiers for impartiality,
//!   monotonicity, individual full rank, weak unanimity and unanimity.
//! * [`impossibility`]: machine checks of the negative results at small `n`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod axioms;
pub mod blocking;
mod error;
pub mod exec;
pub mod impossibility;
pub mod mechanism;
pub mod perms;
pub mod set;
pub mod toys;
pub mod tricolor;

pub use error::{Error, Result};
pub use mechanism::{RankingMechanism, Structure};
pub use perms::{Permutation, RankingProfile};
