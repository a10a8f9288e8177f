//! Certificate-producing convergence checkers, the constructions behind
//! them, an independent certificate re-verifier and a randomized theorem
//! harness.

mod checks;
mod reverify;
mod theorems;
mod witness;

pub use checks::{
    check_doc, check_dopc, check_o_convergence, check_soc, check_socp, check_stat_order_bounded,
};
pub use witness::{construct_witness, decompose_stat_bounded, Decomposition, Witness, WitnessMode};
pub use reverify::{reverify, reverify_agreement, reverify_decomposition, reverify_witness, Check, Claim};
pub use theorems::{verify_theorem, Counterexample, Size, TheoremId, TheoremReport};
