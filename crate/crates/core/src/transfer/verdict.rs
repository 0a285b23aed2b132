use serde::Serialize;

use super::explicit::QuadFieldElement;
use crate::arith::hilbert::Place;
use crate::arith::poly::IntPolynomial;
use crate::qforms::{FormInvariants, QuadraticFormQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Feasible,
    Infeasible,
    NeedsWitness,
}

/// A violated condition, with the place where it fails when there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<Place>,
    pub detail: String,
}

impl Obstruction {
    pub fn new(condition: &str, place: Option<Place>, detail: impl Into<String>) -> Self {
        Obstruction { condition: condition.to_string(), place, detail: detail.into() }
    }
}

/// Data sufficient to re-check a feasible verdict independently.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer_part: Option<FormInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer_form: Option<QuadraticFormQ>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement: Option<FormInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_form: Option<QuadraticFormQ>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<QuadFieldElement>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_witness: Option<IntPolynomial>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checked_places: Vec<Place>,
    /// Set when infinitely many non-isomorphic transfer parts exist.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinitely_many: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferVerdict {
    pub status: VerdictStatus,
    /// The criterion that decided the verdict.
    pub criterion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// The deciding violation of an infeasible verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    /// Every violated condition, deciding one first.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Obstruction>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TransferVerdict {
    pub fn feasible(criterion: &str, certificate: Certificate) -> Self {
        TransferVerdict {
            status: VerdictStatus::Feasible,
            criterion: criterion.to_string(),
            certificate: Some(certificate),
            obstruction: None,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn infeasible(criterion: &str, violations: Vec<Obstruction>) -> Self {
        TransferVerdict {
            status: VerdictStatus::Infeasible,
            criterion: criterion.to_string(),
            certificate: None,
            obstruction: violations.first().cloned(),
            violations,
            notes: Vec::new(),
        }
    }

    pub fn needs_witness(criterion: &str, note: impl Into<String>) -> Self {
        TransferVerdict {
            status: VerdictStatus::NeedsWitness,
            criterion: criterion.to_string(),
            certificate: None,
            obstruction: None,
            violations: Vec::new(),
            notes: vec![note.into()],
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == VerdictStatus::Feasible
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
