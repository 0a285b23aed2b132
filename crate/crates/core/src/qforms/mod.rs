//! Rational quadratic forms: diagonal presentation, classifying invariants,
//! construction from invariants, splitting, isotropy and Witt classes.

pub(crate) mod construct;
mod form;
pub(crate) mod local;
mod witt;

pub use construct::{form_from_invariants, split_complement, SplitOutcome};
pub use form::{
    diagonalize, invariants, is_isomorphic, is_locally_isomorphic, FormInvariants, QuadraticFormQ,
    Signature,
};
pub use local::{
    hasse_of_hyperbolic, is_locally_hyperbolic, is_locally_isotropic, represents_zero,
    IsotropyVerdict,
};
pub use witt::{witt_add, witt_reduce, WittClassQ};
