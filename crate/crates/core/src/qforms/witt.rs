use serde::Serialize;

use super::form::{invariants, QuadraticFormQ};
use crate::arith::hilbert::{support, BrauerSupport};
use crate::arith::square_class::SquareClass;

/// A Witt class over Q, classified by dimension parity, discriminant,
/// signature and the Hasse invariant of its representative of dimension
/// ≡ 0 or 1 mod 8.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WittClassQ {
    pub dim_parity: u8,
    pub disc: SquareClass,
    pub signature: i64,
    pub hasse: BrauerSupport,
    pub torsion: bool,
}

impl WittClassQ {
    pub fn zero() -> Self {
        WittClassQ {
            dim_parity: 0,
            disc: SquareClass::one(),
            signature: 0,
            hasse: BrauerSupport::new(),
            torsion: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// Adds hyperbolic planes until dim ≡ 0 or 1 mod 8. Each H sends
/// (det, w) to (-det, w + (det, -1)); H^4 changes nothing.
fn normalize(mut dim: usize, mut det: SquareClass, mut hasse: BrauerSupport) -> (SquareClass, BrauerSupport) {
    let minus_one = SquareClass::minus_one();
    while dim % 8 > 1 {
        hasse.add_assign(&support(&det, &minus_one));
        det = det.neg();
        dim += 2;
    }
    (det, hasse)
}

pub fn witt_reduce(u: &QuadraticFormQ) -> WittClassQ {
    let inv = invariants(u);
    let (disc, hasse) = normalize(inv.dim, inv.det, inv.hasse);
    // at dim ≡ 0, 1 mod 8 the discriminant and determinant agree
    let signature = inv.signature.index();
    WittClassQ { dim_parity: (inv.dim % 2) as u8, disc, signature, hasse, torsion: signature == 0 }
}

pub fn witt_add(a: &WittClassQ, b: &WittClassQ) -> WittClassQ {
    let dim = (a.dim_parity + b.dim_parity) as usize;
    let mut hasse = a.hasse.add(&b.hasse);
    hasse.add_assign(&support(&a.disc, &b.disc));
    let (disc, hasse) = normalize(dim, a.disc.mul(&b.disc), hasse);
    let signature = a.signature + b.signature;
    WittClassQ { dim_parity: (dim % 2) as u8, disc, signature, hasse, torsion: signature == 0 }
}
