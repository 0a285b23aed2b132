use serde::Serialize;

use super::elliptic::{elliptic_fibration_verdict, EllipticAnswer, EllipticContext};
use crate::error::Result;
use crate::numfields::NumberFieldDesc;
use crate::qforms::QuadraticFormQ;
use crate::transfer::{rm_transfer_feasible, Mode};

/// What a named example is expected to show.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Expectation {
    Elliptic(EllipticAnswer),
    /// Whether T with det 1 and signature (2, 2m-2) is a transfer.
    RmFeasible(bool),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamousExample {
    pub key: &'static str,
    pub description: &'static str,
    pub field: NumberFieldDesc,
    pub m: u64,
    pub mode: Mode,
    pub expected: Expectation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleCheck {
    pub key: &'static str,
    pub expected: Expectation,
    pub actual: Expectation,
    pub agrees: bool,
}

impl FamousExample {
    pub(crate) fn elliptic_context(&self) -> EllipticContext {
        EllipticContext::CmField { field: self.field.clone(), m: Some(self.m), rho: None }
    }

    /// Recomputes the example's verdict from scratch.
    pub fn check(&self) -> Result<ExampleCheck> {
        let actual = match self.expected {
            Expectation::Elliptic(_) => Expectation::Elliptic(elliptic_fibration_verdict(&self.elliptic_context())?.verdict),
            Expectation::RmFeasible(_) => {
                // H^2 ⊕ ⟨-1,-1⟩: det 1, signature (2,4)
                let t = QuadraticFormQ::hyperbolic(2).direct_sum(&QuadraticFormQ::units(0, 2));
                Expectation::RmFeasible(rm_transfer_feasible(&self.field, &t, None)?.is_feasible())
            }
        };
        Ok(ExampleCheck { key: self.key, expected: self.expected, actual, agrees: actual == self.expected })
    }
}

fn double_sextic(key: &'static str, d: i64, feasible: bool) -> FamousExample {
    FamousExample {
        key,
        description: "double cover of P² branched along six lines, T of det 1 with RM by Q(√d)",
        field: NumberFieldDesc::real_quadratic(d),
        m: 3,
        mode: Mode::Rm,
        expected: Expectation::RmFeasible(feasible),
    }
}

fn elliptic(key: &'static str, description: &'static str, field: NumberFieldDesc, m: u64, answer: EllipticAnswer) -> FamousExample {
    FamousExample { key, description, field, m, mode: Mode::Cm, expected: Expectation::Elliptic(answer) }
}

/// The built-in named cases, in a fixed order.
pub fn famous_examples() -> Vec<FamousExample> {
    use EllipticAnswer::*;
    vec![
        elliptic("kondo-44", "Kondō's K3 with CM by Q(ζ44), Δ a square", NumberFieldDesc::cyclotomic(44), 1, Yes),
        elliptic("kondo-66", "Kondō's K3 with CM by Q(ζ66), Δ a square", NumberFieldDesc::cyclotomic(66), 1, Yes),
        elliptic("vorontsov-25", "Vorontsov's K3 with CM by Q(ζ25), Δ not a square", NumberFieldDesc::cyclotomic(25), 1, No),
        double_sextic("double-sextic-d5", 5, true),
        double_sextic("double-sextic-d2", 2, true),
        double_sextic("double-sextic-d3", 3, false),
        elliptic(
            "non-sympl-order3",
            "very general K3 with a non-symplectic automorphism of order 3",
            NumberFieldDesc::imag_quadratic(3),
            10,
            Yes,
        ),
        elliptic(
            "non-sympl-order5",
            "very general K3 with a non-symplectic automorphism of order 5, Pic of det -5",
            NumberFieldDesc::cyclotomic(5),
            5,
            No,
        ),
    ]
}

pub fn lookup(key: &str) -> Option<FamousExample> {
    famous_examples().into_iter().find(|e| e.key == key)
}
