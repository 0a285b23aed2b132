//! The trace-form transfer T(W) and the criteria deciding which rational forms
//! arise as transfers, alone or as summands of a fixed ambient form.

mod condition_c;
mod criteria;
mod explicit;
mod split;
mod verdict;
mod witness;

pub use condition_c::{condition_c_profile, FormEntries, SignatureProfile};
pub use criteria::{cm_transfer_feasible, rm_transfer_feasible};
pub use explicit::{
    embedding_sign, predicted_invariants, transfer_hermitian_imagquad, transfer_quadratic, DetW,
    PredictedInvariants, QuadFieldElement,
};
pub use split::{split_transfer_feasible, split_transfer_with, verify_split_certificate, Mode, SplitOptions};
pub use verdict::{Certificate, Obstruction, TransferVerdict, VerdictStatus};
pub use witness::{construct_witness_quadratic, construct_witness_with_height, WitnessOutcome};
