use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::form::{invariants, FormInvariants, QuadraticFormQ};
use crate::arith::factor::current_budget;
use crate::arith::hilbert::{candidate_places, report_order, symbol, Place};
use crate::arith::rational::{serde_rational_vec, Rational};
use crate::arith::square_class::SquareClass;

/// Hasse bit of H^n at `v`: 1 at 2 and ∞ exactly when n ≡ 2, 3 mod 4.
pub fn hasse_of_hyperbolic(n: usize, v: &Place) -> u8 {
    let at_two_or_inf = match v {
        Place::Infinity => true,
        Place::Prime(p) => *p == 2u32.into(),
    };
    u8::from(at_two_or_inf && n % 4 >= 2)
}

/// Whether U ⊗ Q_v is an orthogonal sum of hyperbolic planes.
pub fn is_locally_hyperbolic(u: &QuadraticFormQ, v: &Place) -> bool {
    locally_hyperbolic_inv(&invariants(u), v)
}

pub(crate) fn locally_hyperbolic_inv(inv: &FormInvariants, v: &Place) -> bool {
    if inv.dim % 2 == 1 {
        return false;
    }
    let n = inv.dim / 2;
    match v {
        Place::Infinity => inv.signature.pos == inv.signature.neg,
        Place::Prime(_) => {
            let hdet = if n % 2 == 1 { SquareClass::minus_one() } else { SquareClass::one() };
            inv.det.locally_equal(&hdet, v) && inv.hasse_bit(v) == hasse_of_hyperbolic(n, v)
        }
    }
}

/// Local isotropy from (dim, det, Hasse bit) at a finite place, or from the
/// signature at ∞.
pub fn is_locally_isotropic(inv: &FormInvariants, v: &Place) -> bool {
    if let Place::Infinity = v {
        return inv.signature.pos > 0 && inv.signature.neg > 0;
    }
    let d = &inv.det;
    let minus_one = SquareClass::minus_one();
    match inv.dim {
        0 | 1 => false,
        2 => d.neg().is_local_square(v),
        3 => inv.hasse_bit(v) == symbol(&minus_one, &d.neg(), v),
        4 => !d.is_local_square(v) || inv.hasse_bit(v) == symbol(&minus_one, &minus_one, v),
        _ => true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyVerdict {
    pub represents_zero: bool,
    /// Coordinates in the canonical diagonal basis.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub witness: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Place>,
    /// Every place where the form is anisotropic.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub anisotropic_at: Vec<Place>,
}

mod opt_vec {
    use super::*;

    pub fn serialize<S: serde::Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_rational_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

pub const DEFAULT_WITNESS_HEIGHT: u64 = 50;

/// Hasse–Minkowski: isotropic over Q iff isotropic at every place. Only ∞, 2
/// and primes dividing an entry can fail. ∞ is reported first, then odd
/// primes, then 2.
pub fn represents_zero(u: &QuadraticFormQ) -> IsotropyVerdict {
    represents_zero_with_height(u, DEFAULT_WITNESS_HEIGHT)
}

pub fn represents_zero_with_height(u: &QuadraticFormQ, height: u64) -> IsotropyVerdict {
    let inv = invariants(u);
    let places = report_order(candidate_places(u.diagonal()));
    let anisotropic_at: Vec<Place> = places.into_iter().filter(|v| !is_locally_isotropic(&inv, v)).collect();
    if let Some(first) = anisotropic_at.first() {
        return IsotropyVerdict {
            represents_zero: false,
            witness: None,
            obstruction: Some(first.clone()),
            anisotropic_at,
        };
    }
    IsotropyVerdict {
        represents_zero: true,
        witness: search_isotropic(u, height),
        obstruction: None,
        anisotropic_at,
    }
}

/// Smallest-height integer zero of Σ a_i x_i² with the last coordinate solved
/// for, within the search budget.
pub fn search_isotropic(u: &QuadraticFormQ, height: u64) -> Option<Vec<Rational>> {
    let a: Vec<BigInt> = u.diagonal().iter().map(|c| c.value().clone()).collect();
    let n = a.len();
    if n < 2 {
        return None;
    }
    let mut steps = current_budget().search_steps;
    let last = &a[n - 1];
    let mut x = vec![0u64; n - 1];
    for h in 1..=height {
        // every vector in [0,h]^{n-1} with max coordinate exactly h
        let mut idx = vec![0u64; n - 1];
        loop {
            if idx.contains(&h) {
                if steps == 0 {
                    return None;
                }
                steps -= 1;
                x.copy_from_slice(&idx);
                let s: BigInt = -x.iter().zip(&a).map(|(&xi, ai)| ai * BigInt::from(xi * xi)).sum::<BigInt>();
                let (q, r) = s.div_rem(last);
                if r.is_zero() && !q.is_negative() {
                    let root = q.sqrt();
                    if &root * &root == q {
                        let mut w: Vec<Rational> = x.iter().map(|&xi| Rational::from_integer(xi.into())).collect();
                        w.push(Rational::from_integer(root));
                        return Some(w);
                    }
                }
            }
            let mut k = 0;
            while k < n - 1 && idx[k] == h {
                idx[k] = 0;
                k += 1;
            }
            if k == n - 1 {
                break;
            }
            idx[k] += 1;
        }
    }
    None
}
