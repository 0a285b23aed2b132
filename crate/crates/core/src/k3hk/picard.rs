use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::ambient::{ambient, Family};
use crate::arith::poly::IntPolynomial;
use crate::arith::rational::Rational;
use crate::error::{Error, Result};
use crate::numfields::{field_invariants, in_se, lambda_plus_quadratic, NumberFieldDesc, SplitPrimeAnswer};
use crate::qforms::{invariants, is_locally_hyperbolic, split_complement, QuadraticFormQ, Signature, SplitOutcome};
use crate::arith::hilbert::Place;
use crate::arith::square_class::SquareClass;
use crate::transfer::{cm_transfer_feasible, rm_transfer_feasible, Certificate, Mode, Obstruction, TransferVerdict};

const PICARD_RM: &str = "picard-rm";
const PICARD_CM: &str = "picard-cm";

/// (-1)^{n(n-1)/2} det.
fn signed_disc(f: &QuadraticFormQ) -> SquareClass {
    let n = f.dim();
    let d = f.det();
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        d.neg()
    } else {
        d
    }
}

/// Whether a K3 surface with Pic ≅ L can have RM or CM by E with
/// dim_E T = m. The caller vouches that L embeds primitively in the K3
/// lattice.
pub fn picard_compatible(
    gram: &[Vec<Rational>],
    e: &NumberFieldDesc,
    m: u64,
    mode: Mode,
    witness: Option<&IntPolynomial>,
) -> Result<TransferVerdict> {
    let l = QuadraticFormQ::from_gram(gram)?;
    let inv = field_invariants(e)?;
    let rho = l.dim();
    if rho + m as usize * inv.degree != 22 {
        return Err(Error::precondition(format!(
            "rank {rho} + md = {} must equal 22",
            rho + m as usize * inv.degree
        )));
    }
    if l.signature() != Signature::new(1, rho - 1) {
        return Err(Error::precondition(format!("L has signature {}, expected (1,{})", l.signature(), rho - 1)));
    }
    let v = ambient(Family::K3, None)?.rational_form;
    let u = match split_complement(&v, &l)? {
        SplitOutcome::Complement { form, .. } => form,
        SplitOutcome::Infeasible { condition, place, detail } => {
            return Ok(TransferVerdict::infeasible(
                mode_criterion(mode),
                vec![Obstruction::new(&format!("complement-{condition}"), place, detail)],
            ))
        }
    };
    match mode {
        Mode::Rm => picard_rm(e, &l, &u, m, witness),
        Mode::Cm => picard_cm(e, &l, &u, m),
    }
}

fn mode_criterion(mode: Mode) -> &'static str {
    match mode {
        Mode::Rm => PICARD_RM,
        Mode::Cm => PICARD_CM,
    }
}

fn attach(mut verdict: TransferVerdict, l: &QuadraticFormQ, u: &QuadraticFormQ, criterion: &str) -> TransferVerdict {
    verdict.criterion = criterion.to_string();
    if let Some(cert) = verdict.certificate.as_mut() {
        cert.transfer_form = Some(u.clone());
        cert.complement = Some(invariants(l));
        cert.complement_form = Some(l.clone());
    }
    verdict
}

fn picard_rm(
    e: &NumberFieldDesc,
    l: &QuadraticFormQ,
    u: &QuadraticFormQ,
    m: u64,
    witness: Option<&IntPolynomial>,
) -> Result<TransferVerdict> {
    let verdict = attach(rm_transfer_feasible(e, u, witness)?, l, u, PICARD_RM);
    let Some(d) = e.quadratic_d() else {
        return Ok(verdict);
    };
    // the shortcut det(L)·Δ ∈ Λ⁺ against the complement route det(U)·Δ^m ∈ Λ⁺
    let shortcut = lambda_plus_quadratic(d, &l.det().mul(&SquareClass::from_i64(d)?).to_rational())?;
    if shortcut != verdict.is_feasible() {
        let note = format!(
            "warning: the shortcut test det(L)·Δ ∈ Λ⁺ gives {shortcut}, the complement test det(U)·Δ^{m} ∈ Λ⁺ gives {}; the complement test is used",
            verdict.is_feasible()
        );
        return Ok(verdict.with_note(note));
    }
    Ok(verdict)
}

fn picard_cm(e: &NumberFieldDesc, l: &QuadraticFormQ, u: &QuadraticFormQ, m: u64) -> Result<TransferVerdict> {
    let inv = field_invariants(e)?;
    let mut violations = Vec::new();
    let want = inv.disc_class.pow(m);
    let disc = signed_disc(l);
    if disc != want {
        violations.push(Obstruction::new(
            "discriminant",
            None,
            format!("disc(L ⊗ Q) = {disc} but Δ_E^{m} = {want}"),
        ));
    }
    let mut bad: BTreeSet<BigUint> = BTreeSet::from([BigUint::from(2u32)]);
    bad.extend(l.primes());
    bad.extend(inv.disc_class.primes().iter().cloned());
    let mut checked = Vec::new();
    let mut unknown = Vec::new();
    for p in bad {
        let place = Place::Prime(p.clone());
        match in_se(e, &p)? {
            SplitPrimeAnswer::In => {
                if !is_locally_hyperbolic(l, &place) {
                    violations.push(Obstruction::new(
                        "local-hyperbolicity",
                        Some(place.clone()),
                        format!("L ⊗ Q_{p} is not hyperbolic although {p} splits"),
                    ));
                }
                checked.push(place);
            }
            SplitPrimeAnswer::Out => {}
            SplitPrimeAnswer::Unknown => unknown.push(p.to_string()),
        }
    }
    if !violations.is_empty() {
        return Ok(TransferVerdict::infeasible(PICARD_CM, violations));
    }
    if !unknown.is_empty() {
        return Ok(TransferVerdict::needs_witness(
            PICARD_CM,
            format!("split-prime membership unknown at {}", unknown.join(", ")),
        ));
    }
    // the complement must then be a transfer; re-check it directly
    let via_complement = cm_transfer_feasible(e, u)?;
    if !via_complement.is_feasible() {
        return Err(Error::Internal("Picard criterion and complement criterion disagree".into()));
    }
    let cert = Certificate {
        transfer_part: Some(invariants(u)),
        transfer_form: Some(u.clone()),
        complement: Some(invariants(l)),
        complement_form: Some(l.clone()),
        checked_places: checked,
        infinitely_many: (m == 1).then_some(true),
        ..Default::default()
    };
    let mut out = TransferVerdict::feasible(PICARD_CM, cert);
    if m == 1 {
        out = out.with_note("m = 1: isolated surfaces rather than a positive-dimensional family");
    }
    Ok(out)
}
