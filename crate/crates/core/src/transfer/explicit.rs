use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rational::{format_rational, int, parse_rational, Rational};
use crate::arith::square_class::SquareClass;
use crate::error::{Error, Result};
use crate::numfields::{field_invariants, NumberFieldDesc};
use crate::qforms::{diagonalize, QuadraticFormQ};

/// a + b√d in Q(√d); d is carried by context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadFieldElement {
    pub a: Rational,
    pub b: Rational,
}

impl QuadFieldElement {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadFieldElement { a, b }
    }

    pub fn from_i64(a: i64, b: i64) -> Self {
        Self::new(int(a), int(b))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// a² - d b².
    pub fn norm(&self, d: i64) -> Rational {
        &self.a * &self.a - &self.b * &self.b * int(d)
    }
}

impl fmt::Display for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}·√d", format_rational(&self.a), format_rational(&self.b))
    }
}

impl Serialize for QuadFieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational(&self.a), format_rational(&self.b)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadFieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[serde_json::Value; 2]>::deserialize(d)?;
        let parse = |v: &serde_json::Value| match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        };
        Ok(QuadFieldElement::new(
            parse(&a).map_err(serde::de::Error::custom)?,
            parse(&b).map_err(serde::de::Error::custom)?,
        ))
    }
}

/// Exact sign of a + s·b√d for s = ±1 (the two real embeddings).
pub fn embedding_sign(x: &QuadFieldElement, d: i64, s: i8) -> i8 {
    let t = if s < 0 { -x.b.clone() } else { x.b.clone() };
    let sa = crate::arith::rational::sign(&x.a);
    let st = crate::arith::rational::sign(&t);
    if sa >= 0 && st >= 0 {
        return i8::from(sa > 0 || st > 0);
    }
    if sa <= 0 && st <= 0 {
        return -1;
    }
    // opposite signs: the larger of a² and t²d wins
    if &x.a * &x.a > &t * &t * int(d) {
        sa
    } else {
        st
    }
}

fn check_d(d: i64) -> Result<()> {
    field_invariants(&NumberFieldDesc::real_quadratic(d)).map(|_| ())
}

/// Tr_{E/Q} of the diagonal form W over E = Q(√d), on the basis {1, √d} of
/// each line: α = a + b√d gives the block [[2a, 2bd], [2bd, 2ad]].
pub fn transfer_quadratic(d: i64, w: &[QuadFieldElement]) -> Result<QuadraticFormQ> {
    check_d(d)?;
    let n = 2 * w.len();
    let mut gram = vec![vec![Rational::zero(); n]; n];
    let dd = int(d);
    for (i, x) in w.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::ZeroInput(format!("entry {i} of W is zero")));
        }
        let (r, c) = (2 * i, 2 * i + 1);
        gram[r][r] = int(2) * &x.a;
        gram[r][c] = int(2) * &x.b * &dd;
        gram[c][r] = gram[r][c].clone();
        gram[c][c] = int(2) * &x.a * &dd;
    }
    diagonalize(&gram)
}

/// Tr of the hermitian form λ x ȳ over Q(√-D) on {1, √-D}: ⟨2λ, 2λD⟩.
pub fn transfer_hermitian_imagquad(big_d: i64, w: &[Rational]) -> Result<QuadraticFormQ> {
    field_invariants(&NumberFieldDesc::imag_quadratic(big_d))?;
    let n = 2 * w.len();
    let mut gram = vec![vec![Rational::zero(); n]; n];
    for (i, l) in w.iter().enumerate() {
        if l.is_zero() {
            return Err(Error::ZeroInput(format!("entry {i} of W is zero")));
        }
        gram[2 * i][2 * i] = int(2) * l;
        gram[2 * i + 1][2 * i + 1] = int(2) * l * int(big_d);
    }
    diagonalize(&gram)
}

/// What is known about det(W) when predicting invariants of T(W).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetW {
    /// Square class of N_{E/Q}(det W).
    NormClass(SquareClass),
    /// det W itself, for E = Q(√d).
    Element(QuadFieldElement),
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedInvariants {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det: Option<SquareClass>,
}

/// dim T(W) = d·m; det is Δ^m·N(det W) for totally real E and
/// [(-1)^{d₀}Δ]^m for CM E.
pub fn predicted_invariants(e: &NumberFieldDesc, m: usize, det_w: &DetW) -> Result<PredictedInvariants> {
    if m == 0 {
        return Err(Error::precondition("m ≥ 1"));
    }
    let inv = field_invariants(e)?;
    let dim = inv.degree * m;
    let det = if inv.is_cm {
        let d0 = inv.half_degree.unwrap_or(inv.degree / 2);
        let base = if d0 % 2 == 1 { inv.disc_class.neg() } else { inv.disc_class.clone() };
        Some(base.pow(m as u64))
    } else {
        let norm = match det_w {
            DetW::NormClass(c) => Some(c.clone()),
            DetW::Element(x) => {
                let d = e.quadratic_d().ok_or_else(|| Error::precondition("element det(W) needs a real quadratic field"))?;
                Some(SquareClass::of(&x.norm(d))?)
            }
            DetW::Unspecified => None,
        };
        norm.map(|n| inv.disc_class.pow(m as u64).mul(&n))
    };
    Ok(PredictedInvariants { dim, det })
}
