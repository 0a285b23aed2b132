use serde::{Deserialize, Serialize};

use super::registry::lookup;
use crate::error::{Error, Result};
use crate::numfields::{field_invariants, NumberFieldDesc};
use crate::qforms::{represents_zero, QuadraticFormQ};

/// What is known about a K3 surface when asking for an elliptic fibration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "context", rename_all = "snake_case")]
pub enum EllipticContext {
    /// CM by `field`, with dim_E T = m or Picard rank ρ (either determines
    /// the other through ρ + md = 22).
    CmField {
        field: NumberFieldDesc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rho: Option<u64>,
    },
    /// An explicit Picard form.
    PicardForm { form: QuadraticFormQ },
    /// A registry key such as "kondo-44".
    Case { key: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticAnswer {
    Yes,
    No,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticVerdict {
    pub verdict: EllipticAnswer,
    pub reason: String,
}

fn verdict(answer: EllipticAnswer, reason: impl Into<String>) -> Result<EllipticVerdict> {
    Ok(EllipticVerdict { verdict: answer, reason: reason.into() })
}

/// Whether the K3 surface admits an elliptic fibration, i.e. whether its
/// Picard form represents zero.
pub fn elliptic_fibration_verdict(ctx: &EllipticContext) -> Result<EllipticVerdict> {
    use EllipticAnswer::*;
    match ctx {
        EllipticContext::Case { key } => {
            let ex = lookup(key).ok_or_else(|| Error::precondition(format!("unknown case {key:?}")))?;
            elliptic_fibration_verdict(&ex.elliptic_context())
        }
        EllipticContext::PicardForm { form } => {
            let z = represents_zero(form);
            if z.represents_zero {
                verdict(Yes, "the Picard form represents zero")
            } else {
                let place = z.obstruction.map(|p| p.to_string()).unwrap_or_default();
                verdict(No, format!("the Picard form is anisotropic at {place}"))
            }
        }
        EllipticContext::CmField { field, m, rho } => {
            let inv = field_invariants(field)?;
            if !inv.is_cm {
                return verdict(Undetermined, "only CM fields are covered");
            }
            let d = inv.degree as u64;
            let rho = match (m, rho) {
                (Some(m), Some(r)) if m * d + r != 22 => {
                    return Err(Error::precondition(format!("ρ = {r} and md = {} do not sum to 22", m * d)))
                }
                (Some(m), _) if m * d > 20 => return Err(Error::precondition(format!("md = {} exceeds 20", m * d))),
                (Some(m), _) => 22 - m * d,
                (None, Some(r)) if *r > 22 || (22 - r) % d != 0 || *r < 2 => {
                    return Err(Error::precondition(format!("ρ = {r} is incompatible with degree {d}")))
                }
                (None, Some(r)) => *r,
                (None, None) => return Err(Error::precondition("give m or rho")),
            };
            let square = inv.disc_class.is_one();
            match d {
                2 | 10 if rho == 2 => verdict(Yes, "Δ_E^m is a square, so Pic ⊗ Q ≅ H"),
                20 => {
                    if square {
                        verdict(Yes, "Δ_E is a square, so Pic ⊗ Q ≅ H")
                    } else {
                        verdict(No, "Δ_E is not a square, so neither is -det Pic")
                    }
                }
                4 if rho >= 6 => verdict(Yes, "ρ ≥ 5, so the indefinite Picard form represents zero"),
                4 if square => verdict(Yes, "Δ_E is a square, so Pic ⊗ Q ≅ H"),
                4 => verdict(No, "ρ = 2 and Δ_E is not a square, so Pic does not represent zero"),
                _ => verdict(Undetermined, format!("no criterion for degree {d} at ρ = {rho}")),
            }
        }
    }
}
