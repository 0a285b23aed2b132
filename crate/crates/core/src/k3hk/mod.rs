//! K3 surfaces and hyperkähler manifolds: ambient H² forms, realizability of
//! real and complex multiplication, Picard lattices, elliptic fibrations and
//! a registry of named examples.

mod ambient;
mod elliptic;
mod picard;
mod realize;
mod registry;

pub use ambient::{ambient, AmbientSpace, Family};
pub use elliptic::{elliptic_fibration_verdict, EllipticAnswer, EllipticContext, EllipticVerdict};
pub use picard::picard_compatible;
pub use realize::{hk_realizable, hodge_group_label, k3_realizable, FamilyDim, RealizabilityReport};
pub use registry::{famous_examples, lookup, ExampleCheck, Expectation, FamousExample};
