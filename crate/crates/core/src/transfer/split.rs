use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::criteria::{cm_det_class, lambda_plus_decision, LambdaDecision};
use super::verdict::{Certificate, Obstruction, TransferVerdict};
use crate::arith::factor::primes;
use crate::arith::hilbert::{support, BrauerSupport, Place};
use crate::arith::poly::IntPolynomial;
use crate::arith::square_class::SquareClass;
use crate::error::{Error, Result};
use crate::numfields::{field_invariants, in_se, FieldInvariants, NumberFieldDesc, SplitPrimeAnswer};
use crate::qforms::construct::{admissibility, complement_invariants};
use crate::qforms::{form_from_invariants, hasse_of_hyperbolic, invariants, is_isomorphic, FormInvariants, QuadraticFormQ, Signature};

pub(crate) const SPLIT_CRITERION: &str = "transfer-splitting";

/// How many square classes are tried for the transfer determinant before
/// giving up, and how many primes are scanned for an auxiliary Hasse place.
const DET_CANDIDATES: usize = 64;
const AUX_PRIMES: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Rm,
    Cm,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Rm => "RM",
            Mode::Cm => "CM",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rm" => Ok(Mode::Rm),
            "cm" => Ok(Mode::Cm),
            _ => Err(Error::Parse(format!("mode must be rm or cm, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SplitOptions {
    /// Requested complement ⟨h⟩ in codimension one.
    pub complement_h: Option<SquareClass>,
    /// Totally positive element certifying Λ⁺ membership for general fields.
    pub witness: Option<IntPolynomial>,
}

enum Attempt {
    Found(FormInvariants, Vec<Place>),
    Blocked(Obstruction),
    Unknown(String),
}

struct Problem<'a> {
    e: &'a NumberFieldDesc,
    inv: FieldInvariants,
    mode: Mode,
    v: FormInvariants,
    k: usize,
    c: usize,
    sig_u: Signature,
}

impl Problem<'_> {
    fn hyperbolic_det(&self) -> SquareClass {
        if (self.k / 2) % 2 == 1 {
            SquareClass::minus_one()
        } else {
            SquareClass::one()
        }
    }

    /// Looks for Hasse data making a form U of the transfer signature with
    /// determinant `det_u` both a transfer and a summand of V.
    fn attempt(&self, det_u: &SquareClass) -> Result<Attempt> {
        let det_c = self.v.det.mul(det_u);
        // w(V′) = w(V) + w(U) + (det U, -det V)
        let cross = support(det_u, &self.v.det.neg());
        let mut relevant: BTreeSet<BigUint> = BTreeSet::from([BigUint::from(2u32)]);
        relevant.extend(det_u.primes().iter().cloned());
        relevant.extend(self.v.det.primes().iter().cloned());
        relevant.extend(self.v.hasse.finite().cloned());
        relevant.extend(self.inv.disc_class.primes().iter().cloned());

        let mut bits: BTreeMap<Place, Option<u8>> = BTreeMap::new();
        let mut checked = Vec::new();
        for p in &relevant {
            let place = Place::Prime(p.clone());
            let mut allowed = [true, true];
            let mut blocker = "";
            let mut restrict = |bit: u8, why: &'static str| {
                if allowed[bit as usize] {
                    blocker = why;
                }
                allowed[1 - bit as usize] = false;
            };
            if self.mode == Mode::Cm {
                match in_se(self.e, p)? {
                    SplitPrimeAnswer::In => {
                        if !det_u.locally_equal(&self.hyperbolic_det(), &place) {
                            return Ok(Attempt::Blocked(Obstruction::new(
                                "local-hyperbolicity",
                                Some(place),
                                format!("det {det_u} is not the hyperbolic determinant over Q_{p}"),
                            )));
                        }
                        restrict(hasse_of_hyperbolic(self.k / 2, &place), "local-hyperbolicity");
                        checked.push(place.clone());
                    }
                    SplitPrimeAnswer::Out => {}
                    SplitPrimeAnswer::Unknown => {
                        return Ok(Attempt::Unknown(format!("split-prime membership unknown at {p}")))
                    }
                }
            }
            if self.k == 2 && det_u.neg().is_local_square(&place) {
                restrict(0, "transfer-admissibility");
            }
            if self.c == 1 || (self.c == 2 && det_c.neg().is_local_square(&place)) {
                restrict(self.v.hasse.bit(&place) ^ cross.bit(&place), "complement-admissibility");
            }
            let bit = match allowed {
                [true, true] => None,
                [true, false] => Some(0),
                [false, true] => Some(1),
                [false, false] => {
                    return Ok(Attempt::Blocked(Obstruction::new(
                        blocker,
                        Some(place),
                        format!("no Hasse bit at {p} suits both the transfer part and its complement"),
                    )))
                }
            };
            bits.insert(place, bit);
        }

        let mut hasse = BrauerSupport::new();
        hasse.set(Place::Infinity, self.sig_u.infinity_bit());
        for (place, bit) in &bits {
            hasse.set(place.clone(), bit.unwrap_or(0));
        }
        if hasse.len() % 2 == 1 {
            if let Some((place, _)) = bits.iter().find(|(_, b)| b.is_none()) {
                hasse.toggle(place.clone());
            } else {
                match self.auxiliary_place(&relevant, det_u, &det_c)? {
                    Ok(q) => hasse.toggle(q),
                    Err(a) => return Ok(a),
                }
            }
        }
        let u = FormInvariants::new(self.k, det_u.clone(), self.sig_u, hasse);
        if let Some(viol) = admissibility(&u) {
            return Err(Error::Internal(format!("transfer part inadmissible: {}", viol.detail)));
        }
        Ok(Attempt::Found(u, checked))
    }

    /// A prime outside `relevant` where the Hasse bit of U may be switched on.
    fn auxiliary_place(
        &self,
        relevant: &BTreeSet<BigUint>,
        det_u: &SquareClass,
        det_c: &SquareClass,
    ) -> Result<std::result::Result<Place, Attempt>> {
        let blocked = |why: &str| {
            Err(Attempt::Blocked(Obstruction::new(
                "reciprocity",
                None,
                format!("every local Hasse bit is forced and they sum to an odd total ({why})"),
            )))
        };
        if self.c == 1 {
            return Ok(blocked("rank-one complement"));
        }
        if self.c == 2 && det_c.neg().is_one() {
            return Ok(blocked("hyperbolic complement"));
        }
        if self.k == 2 && det_u.neg().is_one() {
            return Ok(blocked("hyperbolic transfer part"));
        }
        for q in primes().take(AUX_PRIMES) {
            let qb = BigUint::from(q);
            if relevant.contains(&qb) {
                continue;
            }
            let place = Place::Prime(qb.clone());
            if self.mode == Mode::Cm && in_se(self.e, &qb)? != SplitPrimeAnswer::Out {
                continue;
            }
            if self.k == 2 && det_u.neg().is_local_square(&place) {
                continue;
            }
            if self.c == 2 && det_c.neg().is_local_square(&place) {
                continue;
            }
            return Ok(Ok(place));
        }
        Ok(Err(Attempt::Unknown("no auxiliary prime found to balance the Hasse invariant".into())))
    }

    /// Square classes to try for det U, in order.
    fn candidates(&self, m: u64, opts: &SplitOptions) -> Result<Vec<SquareClass>> {
        let delta_m = self.inv.disc_class.pow(m);
        if self.mode == Mode::Cm {
            return Ok(vec![cm_det_class(&self.inv, m)]);
        }
        let sign = if self.k % 2 == 1 { SquareClass::minus_one() } else { SquareClass::one() };
        if self.c == 1 {
            let positive = self.v.signature.pos - 2 == 1;
            if let Some(h) = &opts.complement_h {
                return Ok(vec![h.mul(&self.v.det)]);
            }
            return Ok(squarefree_naturals()
                .take(DET_CANDIDATES)
                .map(|t| {
                    let h = if positive { t } else { t.neg() };
                    h.mul(&self.v.det)
                })
                .collect());
        }
        Ok(squarefree_naturals().take(DET_CANDIDATES).map(|t| sign.mul(&t).mul(&delta_m)).collect())
    }
}

fn squarefree_naturals() -> impl Iterator<Item = SquareClass> {
    (1i64..).filter_map(|n| SquareClass::from_i64(n).ok().filter(|c| c.value() == &n.into()))
}

/// Whether V ≅ T(W) ⊕ V′ for a form W of rank m over E (quadratic for RM,
/// hermitian for CM) with T(W) of signature (2, md-2).
pub fn split_transfer_feasible(v: &QuadraticFormQ, e: &NumberFieldDesc, m: u64, mode: Mode) -> Result<TransferVerdict> {
    split_transfer_with(v, e, m, mode, &SplitOptions::default())
}

/// [`split_transfer_feasible`] with a requested rank-one complement or a Λ⁺
/// witness.
pub fn split_transfer_with(
    v: &QuadraticFormQ,
    e: &NumberFieldDesc,
    m: u64,
    mode: Mode,
    opts: &SplitOptions,
) -> Result<TransferVerdict> {
    let inv = field_invariants(e)?;
    match (mode, inv.is_cm) {
        (Mode::Cm, false) => return Err(Error::InvalidField(format!("CM mode needs a CM field, got {}", e.label()))),
        (Mode::Rm, true) => return Err(Error::InvalidField(format!("RM mode needs a totally real field, got {}", e.label()))),
        _ => {}
    }
    if m == 0 {
        return Err(Error::precondition("m must be at least 1"));
    }
    if mode == Mode::Rm && m < 3 {
        return Err(Error::precondition(format!("m = {m}, but real multiplication needs m ≥ 3")));
    }
    let n = v.dim();
    let k = m as usize * inv.degree;
    if k + 1 > n {
        return Err(Error::precondition(format!("md = {k} exceeds dim V - 1 = {}", n.saturating_sub(1))));
    }
    let vi = invariants(v);
    if vi.signature.pos < 2 {
        return Err(Error::precondition(format!("V has signature {}, but r ≥ 2 is needed", vi.signature)));
    }
    let sig_u = Signature::new(2, k - 2);
    let Some(sig_c) = vi.signature.checked_sub(&sig_u) else {
        return Ok(TransferVerdict::infeasible(
            SPLIT_CRITERION,
            vec![Obstruction::new(
                "signature",
                Some(Place::Infinity),
                format!("T(W) has signature {sig_u}, which does not fit in {}", vi.signature),
            )],
        ));
    };
    let c = n - k;
    let problem = Problem { e, inv, mode, v: vi, k, c, sig_u };
    let even_rm = mode == Mode::Rm && problem.inv.degree % 2 == 0;

    let mut obstructions = Vec::new();
    let mut unknown = Vec::new();
    for det_u in problem.candidates(m, opts)? {
        if det_u.is_negative() != (k % 2 == 1) {
            continue;
        }
        let mut lambda_witness = None;
        if even_rm {
            match lambda_plus_decision(e, &det_u, m, opts.witness.as_ref())? {
                LambdaDecision::Member(w) => lambda_witness = w,
                LambdaDecision::NotMember(place) => {
                    obstructions.push(Obstruction::new(
                        "lambda-plus",
                        place,
                        format!("det U = {det_u} is not in Λ⁺·Δ^{m}"),
                    ));
                    continue;
                }
                LambdaDecision::Unknown => {
                    unknown.push(format!("Λ⁺ membership of {det_u}·Δ^{m} needs a witness"));
                    continue;
                }
            }
        }
        match problem.attempt(&det_u)? {
            Attempt::Found(u, checked) => {
                let complement = complement_invariants(&problem.v, &u)
                    .filter(|t| admissibility(t).is_none())
                    .ok_or_else(|| Error::Internal("complement invariants inadmissible".into()))?;
                let transfer_form = form_from_invariants(&u)?;
                let complement_form = form_from_invariants(&complement)?;
                if !is_isomorphic(&transfer_form.direct_sum(&complement_form), v) {
                    return Err(Error::Internal("split certificate does not re-verify".into()));
                }
                let cert = Certificate {
                    transfer_part: Some(u),
                    transfer_form: Some(transfer_form),
                    complement: Some(complement),
                    complement_form: Some(complement_form),
                    lambda_witness,
                    checked_places: checked,
                    infinitely_many: (mode == Mode::Cm && m == 1).then_some(true),
                    ..Default::default()
                };
                let route = match c {
                    1 => "codimension 1: the complement is a rank-one form".to_string(),
                    2 => "codimension 2: the complement is a binary form".to_string(),
                    _ => format!("codimension {c}: complement of signature {sig_c} is unconstrained"),
                };
                return Ok(TransferVerdict::feasible(SPLIT_CRITERION, cert).with_note(route));
            }
            Attempt::Blocked(o) => obstructions.push(o),
            Attempt::Unknown(s) => unknown.push(s),
        }
        if opts.complement_h.is_some() {
            break;
        }
    }
    if !unknown.is_empty() {
        let mut out = TransferVerdict::needs_witness(SPLIT_CRITERION, unknown[0].clone());
        out.violations = obstructions;
        return Ok(out);
    }
    if obstructions.is_empty() {
        obstructions.push(Obstruction::new(
            "signature",
            Some(Place::Infinity),
            "no determinant class of the required sign is available",
        ));
    }
    obstructions.dedup();
    Ok(TransferVerdict::infeasible(SPLIT_CRITERION, obstructions))
}

/// Re-checks a split certificate against V at the level of invariants, and
/// as forms when both parts are present.
pub fn verify_split_certificate(v: &QuadraticFormQ, cert: &Certificate) -> bool {
    let (Some(u), Some(c)) = (&cert.transfer_part, &cert.complement) else {
        return false;
    };
    if admissibility(u).is_some() || admissibility(c).is_some() || u.direct_sum(c) != invariants(v) {
        return false;
    }
    match (&cert.transfer_form, &cert.complement_form) {
        (Some(f), Some(g)) => invariants(f) == *u && invariants(g) == *c && is_isomorphic(&f.direct_sum(g), v),
        _ => true,
    }
}
