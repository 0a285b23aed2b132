use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::verdict::{Certificate, Obstruction, TransferVerdict};
use crate::arith::hilbert::{report_order, support, Place};
use crate::arith::poly::IntPolynomial;
use crate::arith::square_class::SquareClass;
use crate::error::{Error, Result};
use crate::numfields::{field_invariants, in_se, lambda_plus_quadratic, verify_lambda_plus_witness, FieldInvariants, NumberFieldDesc, SplitPrimeAnswer};
use crate::qforms::local::locally_hyperbolic_inv;
use crate::qforms::{invariants, QuadraticFormQ, Signature};

pub(crate) const CM_CRITERION: &str = "cm-characterization";
pub(crate) const ODD_CRITERION: &str = "odd-degree-transfer";
pub(crate) const EVEN_CRITERION: &str = "even-degree-lambda-plus";

/// det T(W) = [(-1)^{d₀}Δ]^m for any hermitian W of rank m over a CM field.
pub(crate) fn cm_det_class(inv: &FieldInvariants, m: u64) -> SquareClass {
    let d0 = inv.degree / 2;
    let base = if d0 % 2 == 1 { inv.disc_class.neg() } else { inv.disc_class.clone() };
    base.pow(m)
}

/// First place where t fails to be a totally positive norm from Q(√d).
pub(crate) fn lambda_obstruction(d: i64, t: &SquareClass) -> Option<Place> {
    if t.is_negative() {
        return Some(Place::Infinity);
    }
    report_order(support(t, &SquareClass::from_i64(d).ok()?).iter().cloned()).into_iter().next()
}

pub(crate) fn degree_and_m(inv: &FieldInvariants, dim: usize) -> Result<u64> {
    if dim == 0 || dim % inv.degree != 0 {
        return Err(Error::precondition(format!("dim {dim} is not a positive multiple of the degree {}", inv.degree)));
    }
    Ok((dim / inv.degree) as u64)
}

/// Whether U ≅ T(W) for a hermitian form W over the CM field E.
///
/// Conditions: det U = [(-1)^{d₀}Δ]^m; U locally hyperbolic at every split
/// prime in the finite set {2} ∪ primes(U) ∪ primes(Δ) (elsewhere this follows
/// from the determinant); both signature components even.
pub fn cm_transfer_feasible(e: &NumberFieldDesc, u: &QuadraticFormQ) -> Result<TransferVerdict> {
    let inv = field_invariants(e)?;
    if !inv.is_cm {
        return Err(Error::InvalidField(format!("{} is not a CM field", e.label())));
    }
    let m = degree_and_m(&inv, u.dim())?;
    let ui = invariants(u);
    let mut violations = Vec::new();
    let want = cm_det_class(&inv, m);
    if ui.det != want {
        violations.push(Obstruction::new(
            "determinant",
            None,
            format!("det U = {} but every transfer has det {want}", ui.det),
        ));
    }
    let mut bad: BTreeSet<BigUint> = BTreeSet::from([BigUint::from(2u32)]);
    bad.extend(u.primes());
    bad.extend(inv.disc_class.primes().iter().cloned());
    let mut checked = Vec::new();
    let mut unknown = Vec::new();
    for p in bad {
        let place = Place::Prime(p.clone());
        match in_se(e, &p)? {
            SplitPrimeAnswer::In => {
                if !locally_hyperbolic_inv(&ui, &place) {
                    violations.push(Obstruction::new(
                        "local-hyperbolicity",
                        Some(place.clone()),
                        format!("U is not hyperbolic over Q_{p} although {p} splits"),
                    ));
                }
                checked.push(place);
            }
            SplitPrimeAnswer::Out => {}
            SplitPrimeAnswer::Unknown => unknown.push(p),
        }
    }
    if ui.signature.pos % 2 == 1 || ui.signature.neg % 2 == 1 {
        violations.push(Obstruction::new(
            "even-signature",
            Some(Place::Infinity),
            format!("signature {} has an odd component", ui.signature),
        ));
    }
    if !violations.is_empty() {
        return Ok(TransferVerdict::infeasible(CM_CRITERION, violations));
    }
    if !unknown.is_empty() {
        let ps: Vec<String> = unknown.iter().map(|p| p.to_string()).collect();
        return Ok(TransferVerdict::needs_witness(
            CM_CRITERION,
            format!("split-prime membership unknown at {}", ps.join(", ")),
        ));
    }
    let cert = Certificate { transfer_part: Some(ui), checked_places: checked, ..Default::default() };
    Ok(TransferVerdict::feasible(CM_CRITERION, cert))
}

/// Decides det·Δ^m ∈ Λ⁺ for a totally real field of even degree, returning
/// the verdict when it can be decided and the witness used.
pub(crate) fn lambda_plus_decision(
    e: &NumberFieldDesc,
    det_u: &SquareClass,
    m: u64,
    witness: Option<&IntPolynomial>,
) -> Result<LambdaDecision> {
    let inv = field_invariants(e)?;
    let t = det_u.mul(&inv.disc_class.pow(m));
    if let Some(d) = e.quadratic_d() {
        return Ok(if lambda_plus_quadratic(d, &t.to_rational())? {
            LambdaDecision::Member(None)
        } else {
            LambdaDecision::NotMember(lambda_obstruction(d, &t))
        });
    }
    let one = IntPolynomial::from_i64(&[1]);
    let candidates = [witness, e.stored_witness(det_u), Some(&one)];
    for alpha in candidates.into_iter().flatten() {
        if verify_lambda_plus_witness(e, det_u, m, alpha)? {
            return Ok(LambdaDecision::Member(Some(alpha.clone())));
        }
    }
    Ok(LambdaDecision::Unknown)
}

pub(crate) enum LambdaDecision {
    Member(Option<IntPolynomial>),
    NotMember(Option<Place>),
    Unknown,
}

/// Whether U ≅ T(W) for a quadratic form W over the totally real E with one
/// embedding of signature (2, m-2) and the others negative definite.
///
/// Odd degree: always. Even degree: iff det U ∈ Λ⁺·Δ^m, decided for Q(√d)
/// and certified by a totally positive witness otherwise.
pub fn rm_transfer_feasible(
    e: &NumberFieldDesc,
    u: &QuadraticFormQ,
    witness: Option<&IntPolynomial>,
) -> Result<TransferVerdict> {
    let inv = field_invariants(e)?;
    if inv.is_cm {
        return Err(Error::InvalidField(format!("{} is not totally real", e.label())));
    }
    let m = degree_and_m(&inv, u.dim())?;
    if m < 3 {
        return Err(Error::precondition(format!("m = {m}, but real multiplication needs m ≥ 3")));
    }
    let ui = invariants(u);
    let want = Signature::new(2, u.dim() - 2);
    if ui.signature != want {
        return Err(Error::precondition(format!("signature {} should be {want}", ui.signature)));
    }
    let cert = |lambda_witness| Certificate {
        transfer_part: Some(ui.clone()),
        lambda_witness,
        ..Default::default()
    };
    if inv.degree % 2 == 1 {
        return Ok(TransferVerdict::feasible(ODD_CRITERION, cert(None))
            .with_note(format!("one embedding with signature (2,{}), the rest negative definite", m - 2)));
    }
    Ok(match lambda_plus_decision(e, &ui.det, m, witness)? {
        LambdaDecision::Member(w) => TransferVerdict::feasible(EVEN_CRITERION, cert(w))
            .with_note(format!("one embedding with signature (2,{}), the rest negative definite", m - 2)),
        LambdaDecision::NotMember(place) => TransferVerdict::infeasible(
            EVEN_CRITERION,
            vec![Obstruction::new(
                "lambda-plus",
                place,
                format!("det U · Δ^{m} is not the norm of a totally positive element"),
            )],
        ),
        LambdaDecision::Unknown => TransferVerdict::needs_witness(
            EVEN_CRITERION,
            format!("supply a totally positive α with N(α)·Δ^{m} ≡ {}", ui.det),
        ),
    })
}
