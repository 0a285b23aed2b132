//! Totally real and CM field descriptors: degree, discriminant square class,
//! split primes S_E, and norm / totally-positive-norm tests.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::factor::factorize;
use crate::arith::hilbert::{support, Place};
use crate::arith::poly::{discriminant, isolate_real_roots, norm_via_resultant, signs_at_real_roots, IntPolynomial};
use crate::arith::rational::Rational;
use crate::arith::square_class::SquareClass;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NumberFieldDesc {
    /// Q(√d), d > 1 squarefree.
    RealQuadratic { d: i64 },
    /// Q(√-D), D > 0 squarefree.
    ImagQuadratic {
        #[serde(rename = "D")]
        big_d: i64,
    },
    /// Q(ζ_n), n ≥ 3. For n ≡ 2 mod 4 this is Q(ζ_{n/2}).
    Cyclotomic { n: u64 },
    /// Q[x]/(minpoly) with all roots real. `witnesses` maps a target
    /// determinant class to a totally positive element certifying membership
    /// of target·Δ^m in Λ⁺.
    #[serde(rename = "general_tr")]
    GeneralTotallyReal {
        minpoly: IntPolynomial,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        disc: Option<SquareClass>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        witnesses: BTreeMap<SquareClass, IntPolynomial>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    /// E = E₀(√θ) with E₀ = Q[x]/(minpoly) totally real and θ ∈ E₀ totally
    /// negative. `se` asserts S_E membership prime by prime.
    #[serde(rename = "general_cm")]
    GeneralCm {
        minpoly: IntPolynomial,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<IntPolynomial>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        disc: Option<SquareClass>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        se: Vec<(u64, bool)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldInvariants {
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_degree: Option<usize>,
    pub disc_class: SquareClass,
    pub is_cm: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitPrimeAnswer {
    In,
    Out,
    Unknown,
}

impl NumberFieldDesc {
    pub fn real_quadratic(d: i64) -> Self {
        NumberFieldDesc::RealQuadratic { d }
    }

    pub fn imag_quadratic(big_d: i64) -> Self {
        NumberFieldDesc::ImagQuadratic { big_d }
    }

    pub fn cyclotomic(n: u64) -> Self {
        NumberFieldDesc::Cyclotomic { n }
    }

    pub fn totally_real(minpoly: IntPolynomial) -> Self {
        NumberFieldDesc::GeneralTotallyReal { minpoly, disc: None, witnesses: BTreeMap::new(), name: None }
    }

    pub fn is_cm(&self) -> bool {
        matches!(
            self,
            NumberFieldDesc::ImagQuadratic { .. } | NumberFieldDesc::Cyclotomic { .. } | NumberFieldDesc::GeneralCm { .. }
        )
    }

    /// Minimal polynomial of a generator, for totally real kinds.
    pub fn minpoly(&self) -> Option<IntPolynomial> {
        match self {
            NumberFieldDesc::RealQuadratic { d } => Some(IntPolynomial::from_i64(&[-d, 0, 1])),
            NumberFieldDesc::GeneralTotallyReal { minpoly, .. } => Some(minpoly.clone()),
            _ => None,
        }
    }

    /// The real quadratic d when E = Q(√d).
    pub fn quadratic_d(&self) -> Option<i64> {
        match self {
            NumberFieldDesc::RealQuadratic { d } => Some(*d),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            NumberFieldDesc::RealQuadratic { d } => format!("Q(sqrt{d})"),
            NumberFieldDesc::ImagQuadratic { big_d: 1 } => "Q(i)".to_string(),
            NumberFieldDesc::ImagQuadratic { big_d } => format!("Q(sqrt-{big_d})"),
            NumberFieldDesc::Cyclotomic { n } => format!("Q(zeta{n})"),
            NumberFieldDesc::GeneralTotallyReal { name: Some(n), .. } | NumberFieldDesc::GeneralCm { name: Some(n), .. } => n.clone(),
            NumberFieldDesc::GeneralTotallyReal { minpoly, .. } => format!("Q[x]/({minpoly})"),
            NumberFieldDesc::GeneralCm { minpoly, .. } => format!("CM over Q[x]/({minpoly})"),
        }
    }

    /// Witness supplied with the descriptor for a target determinant class.
    pub fn stored_witness(&self, target: &SquareClass) -> Option<&IntPolynomial> {
        match self {
            NumberFieldDesc::GeneralTotallyReal { witnesses, .. } => witnesses.get(target),
            _ => None,
        }
    }
}

impl fmt::Display for NumberFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn is_squarefree(n: i64) -> bool {
    n != 0 && SquareClass::from_i64(n).map(|c| c.value() == &BigInt::from(n)).unwrap_or(false)
}

pub fn euler_phi(n: u64) -> u64 {
    small_factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn small_factor(n: u64) -> Vec<(u64, u32)> {
    factorize(&BigUint::from(n))
        .expect("u64 factorization fits the default budget")
        .into_iter()
        .map(|(p, e)| (p.to_u64().unwrap(), e))
        .collect()
}

/// Discriminant class of Q(ζ_n): the sign is (-1)^{φ/2} and p | n occurs
/// with exponent φ·v_p(n) - φ/(p-1).
fn cyclotomic_disc_class(n: u64) -> SquareClass {
    let phi = euler_phi(n);
    let mut c = if (phi / 2) % 2 == 1 { SquareClass::minus_one() } else { SquareClass::one() };
    for (p, v) in small_factor(n) {
        let e = phi * v as u64 - phi / (p - 1);
        if e % 2 == 1 {
            c = c.mul(&SquareClass::from_i64(p as i64).unwrap());
        }
    }
    c
}

/// Q(ζ_{2k}) = Q(ζ_k) for odd k, so every n ≥ 3 other than 2 mod 4 with
/// n/2 < 3 names a proper cyclotomic field.
fn conductor(n: u64) -> Result<u64> {
    let c = if n % 4 == 2 { n / 2 } else { n };
    if c < 3 {
        return Err(Error::InvalidField(format!("Q(zeta{n}) is not a CM field")));
    }
    Ok(c)
}

/// Checks a minimal polynomial has only simple real roots and returns its
/// degree.
fn check_totally_real(f: &IntPolynomial) -> Result<usize> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::InvalidField("minimal polynomial must have degree ≥ 1".into()));
    }
    if !f.is_monic() {
        return Err(Error::InvalidField("minimal polynomial must be monic".into()));
    }
    if f.gcd(&f.derivative()).degree() > 0 {
        return Err(Error::InvalidField(format!("{f} has a repeated root")));
    }
    let real = isolate_real_roots(f)?.len();
    if real != f.degree() {
        return Err(Error::InvalidField(format!("{f} has only {real} real roots of {}", f.degree())));
    }
    Ok(f.degree())
}

fn cross_check(computed: SquareClass, supplied: &Option<SquareClass>) -> Result<SquareClass> {
    match supplied {
        Some(s) if *s != computed => Err(Error::InvalidField(format!(
            "supplied discriminant class {s} disagrees with computed {computed}"
        ))),
        _ => Ok(computed),
    }
}

pub fn field_invariants(e: &NumberFieldDesc) -> Result<FieldInvariants> {
    let (degree, disc_class) = match e {
        NumberFieldDesc::RealQuadratic { d } => {
            if *d <= 1 || !is_squarefree(*d) {
                return Err(Error::InvalidField(format!("d = {d} must be a squarefree integer > 1")));
            }
            (2, SquareClass::from_i64(*d)?)
        }
        NumberFieldDesc::ImagQuadratic { big_d } => {
            if *big_d <= 0 || !is_squarefree(*big_d) {
                return Err(Error::InvalidField(format!("D = {big_d} must be a squarefree integer > 0")));
            }
            (2, SquareClass::from_i64(-big_d)?)
        }
        NumberFieldDesc::Cyclotomic { n } => {
            let c = conductor(*n)?;
            (euler_phi(c) as usize, cyclotomic_disc_class(c))
        }
        NumberFieldDesc::GeneralTotallyReal { minpoly, disc, .. } => {
            let d = check_totally_real(minpoly)?;
            // field and polynomial discriminants differ by an index square
            let computed = SquareClass::of(&discriminant(minpoly)?)?;
            (d, cross_check(computed, disc)?)
        }
        NumberFieldDesc::GeneralCm { minpoly, theta, disc, .. } => {
            let d0 = check_totally_real(minpoly)?;
            let class = match theta {
                Some(theta) => {
                    if theta.is_zero() || theta.degree() >= d0 {
                        return Err(Error::InvalidField("theta must be a nonzero polynomial of degree < deg minpoly".into()));
                    }
                    if signs_at_real_roots(minpoly, theta)?.iter().any(|&s| s > 0) {
                        return Err(Error::InvalidField("theta must be totally negative".into()));
                    }
                    // the trace form of E over E₀ is ⟨2, 2θ⟩, so Δ_E ≡ N(θ)
                    let computed = SquareClass::of(&norm_via_resultant(minpoly, theta)?)?;
                    cross_check(computed, disc)?
                }
                None => disc.clone().ok_or_else(|| {
                    Error::InvalidField("general CM field needs theta or a discriminant class".into())
                })?,
            };
            (2 * d0, class)
        }
    };
    let is_cm = e.is_cm();
    Ok(FieldInvariants { degree, half_degree: is_cm.then_some(degree / 2), disc_class, is_cm })
}


/// Whether -1 lies in the cyclic subgroup of (Z/nZ)^× generated by p.
fn minus_one_in_powers(p: u64, n: u64) -> bool {
    if n <= 2 {
        return true;
    }
    let g = p % n;
    let mut x = g;
    for _ in 0..euler_phi(n) {
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
        x = ((x as u128 * g as u128) % n as u128) as u64;
    }
    false
}

/// S_E membership: whether E ⊗ Q_p ≅ (E₀ ⊗ Q_p)².
///
/// For Q(ζ_n) with n = p^k·n′, p ∤ n′, the decomposition group of p is
/// (Z/p^k)^× × ⟨p mod n′⟩, and p splits from E₀ to E exactly when complex
/// conjugation (-1, -1) is outside it, i.e. when -1 ∉ ⟨p⟩ in (Z/n′)^×. This
/// covers ramified p as well.
pub fn in_se(e: &NumberFieldDesc, p: &BigUint) -> Result<SplitPrimeAnswer> {
    field_invariants(e)?;
    let answer = |b: bool| if b { SplitPrimeAnswer::In } else { SplitPrimeAnswer::Out };
    match e {
        NumberFieldDesc::ImagQuadratic { big_d } => {
            let c = SquareClass::from_i64(-big_d)?;
            Ok(answer(c.is_local_square(&Place::Prime(p.clone()))))
        }
        NumberFieldDesc::Cyclotomic { n } => {
            let n = &conductor(*n)?;
            let mut rest = *n;
            if let Some(pp) = p.to_u64() {
                while rest % pp == 0 {
                    rest /= pp;
                }
                Ok(answer(!minus_one_in_powers(pp, rest)))
            } else {
                let r = (p % BigUint::from(*n)).to_u64().unwrap();
                Ok(answer(!minus_one_in_powers(r, *n)))
            }
        }
        NumberFieldDesc::GeneralCm { se, .. } => Ok(se
            .iter()
            .find(|(q, _)| BigUint::from(*q) == *p)
            .map(|&(_, b)| answer(b))
            .unwrap_or(SplitPrimeAnswer::Unknown)),
        _ => Err(Error::InvalidField("S_E is only defined for CM fields".into())),
    }
}

/// Whether `a` is a norm from Q(√d): (a, d)_v = 0 at every place.
pub fn is_norm_quadratic(d: i64, a: &Rational) -> Result<bool> {
    if d == 1 || !is_squarefree(d) {
        return Err(Error::InvalidField(format!("d = {d} must be squarefree and ≠ 0, 1")));
    }
    Ok(support(&SquareClass::of(a)?, &SquareClass::from_i64(d)?).is_empty())
}

/// Λ⁺ membership for the Galois field Q(√d): positive norm classes are norms
/// of totally positive elements.
pub fn lambda_plus_quadratic(d: i64, a: &Rational) -> Result<bool> {
    let c = SquareClass::of(a)?;
    Ok(!c.is_negative() && is_norm_quadratic(d, a)?)
}

/// Checks that α is totally positive and that N(α)·Δ^m lies in `target`.
pub fn verify_lambda_plus_witness(
    e: &NumberFieldDesc,
    target: &SquareClass,
    m: u64,
    alpha: &IntPolynomial,
) -> Result<bool> {
    let f = e
        .minpoly()
        .ok_or_else(|| Error::InvalidField("Λ⁺ witnesses need a totally real field".into()))?;
    let inv = field_invariants(e)?;
    if alpha.is_zero() {
        return Err(Error::ZeroInput("witness α = 0".into()));
    }
    if alpha.degree() >= f.degree() {
        return Err(Error::precondition("deg α must be below the field degree"));
    }
    if signs_at_real_roots(&f, alpha)?.iter().any(|&s| s < 0) {
        return Ok(false);
    }
    let n = norm_via_resultant(&f, alpha)?;
    Ok(SquareClass::of(&n)?.mul(&inv.disc_class.pow(m)) == *target)
}
