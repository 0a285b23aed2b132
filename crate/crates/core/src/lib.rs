//! Exact rational quadratic forms and the trace-form transfer machinery used to
//! decide when K3 surfaces and hyperkähler manifolds admit real or complex
//! multiplication.
//!
//! Everything is computed with arbitrary-precision rationals; there is no
//! floating point anywhere in the crate.

pub mod arith;
pub mod catalog;
pub mod error;
pub mod k3hk;
pub mod numfields;
pub mod qforms;
pub mod query;
pub mod transfer;

pub use arith::factor::{with_budget, Budget};
pub use arith::hilbert::{hilbert_support, hilbert_symbol, BrauerSupport, Place};
pub use arith::poly::IntPolynomial;
pub use arith::rational::Rational;
pub use arith::square_class::{squarefree_class, SquareClass};
pub use error::{Error, Result};
pub use numfields::{FieldInvariants, NumberFieldDesc, SplitPrimeAnswer};
pub use qforms::{FormInvariants, IsotropyVerdict, QuadraticFormQ, Signature, WittClassQ};
pub use transfer::{Mode, QuadFieldElement, TransferVerdict, VerdictStatus};



