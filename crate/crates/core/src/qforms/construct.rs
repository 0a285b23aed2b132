use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::form::{invariants, sign_class, FormInvariants, QuadraticFormQ, Signature};
use crate::arith::factor::{current_budget, primes};
use crate::arith::hilbert::{support, symbol, BrauerSupport, Place};
use crate::arith::square_class::SquareClass;
use crate::error::{Error, Result};

/// A violated admissibility condition on a target invariant tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Violation {
    pub condition: &'static str,
    pub place: Option<Place>,
    pub detail: String,
}

impl Violation {
    fn new(condition: &'static str, place: Option<Place>, detail: String) -> Self {
        Violation { condition, place, detail }
    }

    fn into_error(self) -> Error {
        Error::inadmissible(self.condition, self.detail)
    }
}

/// Checks that a tuple is the invariant tuple of some rational form.
pub(crate) fn admissibility(t: &FormInvariants) -> Option<Violation> {
    let sig = &t.signature;
    if sig.dim() != t.dim {
        return Some(Violation::new("dimension", None, format!("signature {sig} does not sum to {}", t.dim)));
    }
    if t.det.is_negative() != (sig.neg % 2 == 1) {
        return Some(Violation::new(
            "condition-1",
            Some(Place::Infinity),
            format!("det {} has the wrong sign for signature {sig}", t.det),
        ));
    }
    if t.dim == 0 && !t.det.is_one() {
        return Some(Violation::new("condition-1", None, "the empty form has det 1".into()));
    }
    if t.hasse.bit(&Place::Infinity) != sig.infinity_bit() {
        return Some(Violation::new(
            "condition-2",
            Some(Place::Infinity),
            format!("real Hasse bit must be {} for signature {sig}", sig.infinity_bit()),
        ));
    }
    for p in t.hasse.iter().filter(|p| p.is_finite()) {
        let bad = match t.dim {
            0 | 1 => true,
            2 => t.det.neg().is_local_square(p),
            _ => false,
        };
        if bad {
            return Some(Violation::new(
                "condition-3",
                Some(p.clone()),
                format!("Hasse invariant must vanish at {p} in dimension {}", t.dim),
            ));
        }
    }
    if t.hasse.len() % 2 == 1 {
        return Some(Violation::new("reciprocity", None, format!("Hasse support {} has odd size", t.hasse)));
    }
    None
}

/// A diagonal form with exactly the given invariants.
///
/// The result is `⟨±1,…,±1⟩ ⊕ ⟨a, x, y⟩` where `a` is the smallest admissible
/// squarefree integer of the required sign, so output is deterministic.
pub fn form_from_invariants(target: &FormInvariants) -> Result<QuadraticFormQ> {
    if let Some(v) = admissibility(target) {
        return Err(v.into_error());
    }
    let form = match target.dim {
        0 => QuadraticFormQ::empty(),
        1 => QuadraticFormQ::from_classes(vec![target.det.clone()]),
        2 => {
            let [x, y] = binary(&target.det, target.signature.neg, &target.hasse)?;
            QuadraticFormQ::from_classes(vec![x, y])
        }
        _ => general(target)?,
    };
    if invariants(&form) != *target {
        return Err(Error::Internal(format!("constructed {form} does not realize {target}")));
    }
    Ok(form)
}

fn general(t: &FormInvariants) -> Result<QuadraticFormQ> {
    let (r, s) = (t.signature.pos, t.signature.neg);
    let a_negative = r == 0;
    let (r1, s1) = if a_negative { (r, s - 1) } else { (r - 1, s) };
    let (r2, s2) = if r1 >= 1 && s1 >= 1 {
        (1, 1)
    } else if r1 >= 2 {
        (2, 0)
    } else {
        (0, 2)
    };
    let pad = QuadraticFormQ::units(r1 - r2, s1 - s2);
    let pad_inv = invariants(&pad);
    // w = w(P) + w(B) + (det P, det B)
    let det_b = t.det.mul(&pad_inv.det);
    let mut w_b = t.hasse.add(&pad_inv.hasse);
    w_b.add_assign(&support(&pad_inv.det, &det_b));

    let budget = current_budget().search_steps.max(1000);
    for a in squarefree_candidates(a_negative).take(budget as usize) {
        // w(B) = (a, det Y) + w(Y) for B = ⟨a⟩ ⊕ Y
        let det_y = det_b.mul(&a);
        let w_y = w_b.add(&support(&a, &det_y));
        let cand = FormInvariants::new(2, det_y.clone(), Signature::new(r2, s2), w_y.clone());
        if admissibility(&cand).is_some() {
            continue;
        }
        let [x, y] = binary(&det_y, s2, &w_y)?;
        let mut diag = pad.diagonal().to_vec();
        diag.extend([a, x, y]);
        return Ok(QuadraticFormQ::from_classes(diag));
    }
    Err(Error::BudgetExceeded("search for a represented value".into()))
}

/// Squarefree integers of one sign ordered by absolute value.
fn squarefree_candidates(negative: bool) -> impl Iterator<Item = SquareClass> {
    (1i64..).filter_map(move |n| {
        let c = SquareClass::from_i64(if negative { -n } else { n }).ok()?;
        (c.value().magnitude() == &BigUint::from(n as u64)).then_some(c)
    })
}

/// ⟨x, x·det⟩ with Hasse invariant (x, -det) equal to `hasse`.
fn binary(det: &SquareClass, neg: usize, hasse: &BrauerSupport) -> Result<[SquareClass; 2]> {
    let c = det.neg();
    let x = prescribed_symbols(&c, hasse, neg == 2)?;
    let y = x.mul(det);
    Ok([x, y])
}

/// Finds x of the given sign with (x, c)_v = 1 exactly for v in `target`.
///
/// Writes x = ±∏_{p∈T} p^{e_p} · q with T = {2} ∪ primes(c) ∪ finite(target)
/// and q ∉ T a prime at which c is a square (or q = 1), and solves the
/// resulting linear system over F_2 for the exponents.
pub(crate) fn prescribed_symbols(c: &SquareClass, target: &BrauerSupport, negative: bool) -> Result<SquareClass> {
    let mut tset: Vec<BigUint> = vec![BigUint::from(2u32)];
    tset.extend(c.primes().iter().cloned());
    tset.extend(target.finite().cloned());
    tset.sort();
    tset.dedup();
    let mut places: Vec<Place> = tset.iter().cloned().map(Place::Prime).collect();
    places.push(Place::Infinity);
    let gens: Vec<SquareClass> = tset.iter().map(|p| SquareClass::from_int(&BigInt::from(p.clone()))).collect::<Result<_>>()?;
    let sgn = sign_class(negative);

    let limit = current_budget().search_steps.max(1000);
    let qs = std::iter::once(None).chain(
        primes()
            .map(BigUint::from)
            .filter(|q| !tset.contains(q))
            .filter(|q| c.is_local_square(&Place::Prime(q.clone())))
            .map(Some),
    );
    for q in qs.take(limit as usize) {
        let qc = match &q {
            Some(q) => SquareClass::from_int(&BigInt::from(q.clone()))?,
            None => SquareClass::one(),
        };
        let rows: Vec<(Vec<u8>, u8)> = places
            .iter()
            .map(|v| {
                let coeffs = gens.iter().map(|g| symbol(g, c, v)).collect();
                let rhs = target.bit(v) ^ symbol(&sgn, c, v) ^ symbol(&qc, c, v);
                (coeffs, rhs)
            })
            .collect();
        if let Some(e) = solve_f2(rows, gens.len()) {
            let mut x = sgn.mul(&qc);
            for (g, bit) in gens.iter().zip(e) {
                if bit == 1 {
                    x = x.mul(g);
                }
            }
            if support(&x, c) == *target {
                return Ok(x);
            }
        }
    }
    Err(Error::BudgetExceeded("search for prescribed Hilbert symbols".into()))
}

/// Gaussian elimination over F_2; free variables are set to 0.
fn solve_f2(mut rows: Vec<(Vec<u8>, u8)>, n: usize) -> Option<Vec<u8>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0[col] == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].0[col] == 1 {
                let (pr, prhs) = (rows[r].0.clone(), rows[r].1);
                for (a, b) in rows[i].0.iter_mut().zip(&pr) {
                    *a ^= b;
                }
                rows[i].1 ^= prhs;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| *rhs == 1) {
        return None;
    }
    let mut x = vec![0u8; n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i].1;
    }
    Some(x)
}

/// Result of trying to split `U` off `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SplitOutcome {
    Complement { form: QuadraticFormQ, invariants: FormInvariants },
    Infeasible { condition: String, place: Option<Place>, detail: String },
}

impl SplitOutcome {
    pub fn complement(&self) -> Option<&QuadraticFormQ> {
        match self {
            SplitOutcome::Complement { form, .. } => Some(form),
            SplitOutcome::Infeasible { .. } => None,
        }
    }
}

/// Invariants any V′ with V ≅ U ⊕ V′ must have, or None if the signature of
/// U does not fit inside that of V.
pub(crate) fn complement_invariants(v: &FormInvariants, u: &FormInvariants) -> Option<FormInvariants> {
    let signature = v.signature.checked_sub(&u.signature)?;
    // w(V) = w(U) + w(V′) + (det U, det V′) and (dU, dV·dU) = (dU, -dV)
    let mut hasse = v.hasse.add(&u.hasse);
    hasse.add_assign(&support(&u.det, &v.det.neg()));
    Some(FormInvariants::new(v.dim - u.dim, v.det.mul(&u.det), signature, hasse))
}

/// Finds V′ with V ≅ U ⊕ V′, or names the invariant condition that rules it
/// out.
pub fn split_complement(v: &QuadraticFormQ, u: &QuadraticFormQ) -> Result<SplitOutcome> {
    if u.dim() > v.dim() {
        return Err(Error::precondition(format!("dim U = {} exceeds dim V = {}", u.dim(), v.dim())));
    }
    let (vi, ui) = (invariants(v), invariants(u));
    let Some(target) = complement_invariants(&vi, &ui) else {
        return Ok(SplitOutcome::Infeasible {
            condition: "signature".into(),
            place: Some(Place::Infinity),
            detail: format!("signature {} does not fit in {}", ui.signature, vi.signature),
        });
    };
    if let Some(viol) = admissibility(&target) {
        return Ok(SplitOutcome::Infeasible {
            condition: viol.condition.into(),
            place: viol.place,
            detail: viol.detail,
        });
    }
    let form = form_from_invariants(&target)?;
    if invariants(&u.direct_sum(&form)) != vi {
        return Err(Error::Internal("complement does not re-verify".into()));
    }
    Ok(SplitOutcome::Complement { form, invariants: target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::is_isomorphic;

    fn places(s: &[&str]) -> BrauerSupport {
        BrauerSupport::from_places(s.iter().map(|p| p.parse().unwrap()))
    }

    fn inv(dim: usize, det: i64, sig: (usize, usize), hasse: &[&str]) -> FormInvariants {
        FormInvariants::new(dim, SquareClass::from_i64(det).unwrap(), sig.into(), places(hasse))
    }

    #[test]
    fn small_targets() {
        let h = form_from_invariants(&inv(2, -1, (1, 1), &[])).unwrap();
        assert!(is_isomorphic(&h, &QuadraticFormQ::hyperbolic(1)));
        let f = form_from_invariants(&inv(1, 5, (1, 0), &[])).unwrap();
        assert_eq!(f.to_string(), "<5>");
        let e = form_from_invariants(&inv(2, -1, (1, 1), &["2", "3"])).unwrap_err();
        assert_eq!(e.condition(), Some("condition-3"));
    }

    #[test]
    fn three_adjusted_entries_needed() {
        // no ⟨±1,…⟩ padding plus two entries realizes this one
        let t = inv(3, -1, (2, 1), &["2", "5"]);
        let f = form_from_invariants(&t).unwrap();
        assert_eq!(invariants(&f), t);
    }

    #[test]
    fn named_violations() {
        assert_eq!(form_from_invariants(&inv(2, 1, (1, 1), &[])).unwrap_err().condition(), Some("condition-1"));
        assert_eq!(form_from_invariants(&inv(2, 1, (0, 2), &[])).unwrap_err().condition(), Some("condition-2"));
        assert_eq!(form_from_invariants(&inv(1, 3, (1, 0), &["3", "5"])).unwrap_err().condition(), Some("condition-3"));
        assert_eq!(form_from_invariants(&inv(4, 3, (4, 0), &["3"])).unwrap_err().condition(), Some("reciprocity"));
    }

    #[test]
    fn splits() {
        let vk3 = QuadraticFormQ::hyperbolic(3).direct_sum(&QuadraticFormQ::units(0, 16));
        let u = QuadraticFormQ::from_i64(&[1, 1, -1]).unwrap();
        let out = split_complement(&vk3, &u).unwrap();
        let vp = out.complement().unwrap();
        assert_eq!(vp.dim(), 19);
        assert!(vp.det().is_one());
        assert_eq!(vp.signature(), Signature::new(1, 18));
        assert!(is_isomorphic(&u.direct_sum(vp), &vk3));

        let h = QuadraticFormQ::hyperbolic(1);
        let out = split_complement(&h, &QuadraticFormQ::from_i64(&[3]).unwrap()).unwrap();
        assert_eq!(out.complement().unwrap().to_string(), "<-3>");

        let out = split_complement(&QuadraticFormQ::units(2, 0), &QuadraticFormQ::units(0, 1)).unwrap();
        assert!(matches!(out, SplitOutcome::Infeasible { ref condition, .. } if condition == "signature"));
    }
}
