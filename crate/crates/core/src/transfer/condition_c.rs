use serde::{Deserialize, Serialize};

use super::explicit::{embedding_sign, QuadFieldElement};
use crate::arith::poly::{signs_at_real_roots, IntPolynomial};
use crate::arith::rational::{sign, Rational};
use crate::error::{Error, Result};
use crate::numfields::NumberFieldDesc;
use crate::qforms::Signature;

/// Diagonal entries of a form over E, in whichever coordinates E supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "entries", rename_all = "snake_case")]
pub enum FormEntries {
    /// a + b√d over a real quadratic field.
    Quadratic(Vec<QuadFieldElement>),
    /// Hermitian entries in E₀ = Q over an imaginary quadratic field.
    #[serde(with = "crate::arith::rational::serde_rational_vec")]
    Hermitian(Vec<Rational>),
    /// Polynomials in the generator of a general totally real field.
    Polynomial(Vec<IntPolynomial>),
}

impl FormEntries {
    pub fn len(&self) -> usize {
        match self {
            FormEntries::Quadratic(v) => v.len(),
            FormEntries::Hermitian(v) => v.len(),
            FormEntries::Polynomial(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Signature of W at each real embedding (totally real E), or of T(W) at
/// each conjugate pair of complex embeddings (CM E).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureProfile {
    pub per_embedding: Vec<Signature>,
}

impl SignatureProfile {
    pub fn total(&self) -> Signature {
        self.per_embedding.iter().fold(Signature::new(0, 0), |a, s| a.add(s))
    }
}

fn tally(signs: impl Iterator<Item = i8>) -> Result<Signature> {
    let mut sig = Signature::new(0, 0);
    for s in signs {
        match s {
            1 => sig.pos += 1,
            -1 => sig.neg += 1,
            _ => return Err(Error::ZeroInput("zero diagonal entry".into())),
        }
    }
    Ok(sig)
}

/// Per-embedding signatures of W and whether they satisfy condition (C):
/// exactly one embedding carries signature (2, ·), every other one is
/// negative definite, and for real multiplication m ≥ 3.
pub fn condition_c_profile(e: &NumberFieldDesc, w: &FormEntries) -> Result<(SignatureProfile, bool)> {
    if w.is_empty() {
        return Err(Error::precondition("W must have at least one entry"));
    }
    let per_embedding = match (e, w) {
        (NumberFieldDesc::RealQuadratic { d }, FormEntries::Quadratic(v)) => {
            if v.iter().any(QuadFieldElement::is_zero) {
                return Err(Error::ZeroInput("zero diagonal entry".into()));
            }
            let mut out = Vec::new();
            for s in [1i8, -1] {
                out.push(tally(v.iter().map(|x| embedding_sign(x, *d, s)))?);
            }
            out
        }
        (NumberFieldDesc::ImagQuadratic { .. }, FormEntries::Hermitian(v)) => {
            let sig = tally(v.iter().map(sign))?;
            vec![Signature::new(2 * sig.pos, 2 * sig.neg)]
        }
        (NumberFieldDesc::GeneralTotallyReal { minpoly, .. }, FormEntries::Polynomial(v)) => {
            let mut signs = Vec::new();
            for alpha in v {
                if alpha.is_zero() {
                    return Err(Error::ZeroInput("zero diagonal entry".into()));
                }
                signs.push(signs_at_real_roots(minpoly, alpha)?);
            }
            (0..minpoly.degree())
                .map(|k| tally(signs.iter().map(|s| s[k])))
                .collect::<Result<Vec<_>>>()?
        }
        _ => {
            return Err(Error::precondition(format!(
                "entries of this kind cannot be evaluated over {}",
                e.label()
            )))
        }
    };
    let big = per_embedding.iter().filter(|s| s.pos == 2).count();
    let rest_negative = per_embedding.iter().filter(|s| s.pos != 2).all(|s| s.pos == 0);
    let m_ok = e.is_cm() || w.len() >= 3;
    let ok = big == 1 && rest_negative && m_ok;
    Ok((SignatureProfile { per_embedding }, ok))
}
