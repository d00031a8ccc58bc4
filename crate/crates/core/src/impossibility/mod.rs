//! Machine checks of the negative results at small `n`.
//!
//! * [`refute_impartial_ifr`]: no impartial mechanism has individual full
//!   rank for `n` in `{2, 3}`.
//! * [`unanimity_chain_audit`]: a walk of profiles on which any impartial
//!   mechanism breaks unanimity.
//! * [`encode_wu_n4`]: a CNF encoding of impartiality plus weak unanimity for
//!   `n = 4`, with a small DPLL solver for subset instances.

pub mod chain;
pub mod dpll;
pub mod encode;
pub mod search;

pub use chain::{chain_profile, rotated_identity, unanimity_chain_audit, ChainFinding};
pub use dpll::{dpll_solve, Cnf, SatOutcome, SatResult};
pub use encode::{decode_var, encode_wu_n4, var_id, DecodeViolation, DecodedMechanism, Scope, WuEncoding};
pub use search::{
    check_rotation_claim, enumerate_n2, refute_impartial_ifr, search_n3, search_n3_visit, search_n3_with_outputs,
    validate_rotation_claim, PositionFunctions, Refutation, RotationValidation, SearchOptions, SearchOutcome,
};
