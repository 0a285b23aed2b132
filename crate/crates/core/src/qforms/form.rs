use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::hilbert::{support, BrauerSupport, Place};
use crate::arith::rational::{serde_rational_matrix, serde_rational_vec, Rational};
use crate::arith::square_class::SquareClass;
use crate::error::{Error, Result};

/// (number of positive entries, number of negative entries).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
}

impl Signature {
    pub fn new(pos: usize, neg: usize) -> Self {
        Signature { pos, neg }
    }

    pub fn dim(&self) -> usize {
        self.pos + self.neg
    }

    /// r - s.
    pub fn index(&self) -> i64 {
        self.pos as i64 - self.neg as i64
    }

    pub fn add(&self, other: &Signature) -> Signature {
        Signature::new(self.pos + other.pos, self.neg + other.neg)
    }

    pub fn checked_sub(&self, other: &Signature) -> Option<Signature> {
        Some(Signature::new(self.pos.checked_sub(other.pos)?, self.neg.checked_sub(other.neg)?))
    }

    /// Hasse bit at the real place forced by the signature.
    pub fn infinity_bit(&self) -> u8 {
        let s = self.neg;
        u8::from((s * s.saturating_sub(1) / 2) % 2 == 1)
    }
}

impl From<(usize, usize)> for Signature {
    fn from((pos, neg): (usize, usize)) -> Self {
        Signature { pos, neg }
    }
}

impl From<Signature> for (usize, usize) {
    fn from(s: Signature) -> Self {
        (s.pos, s.neg)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pos, self.neg)
    }
}

/// The complete set of isometry invariants of a form over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormInvariants {
    pub dim: usize,
    pub det: SquareClass,
    pub signature: Signature,
    pub hasse: BrauerSupport,
}

impl FormInvariants {
    pub fn new(dim: usize, det: SquareClass, signature: Signature, hasse: BrauerSupport) -> Self {
        FormInvariants { dim, det, signature, hasse }
    }

    /// Invariants of an orthogonal sum.
    pub fn direct_sum(&self, other: &FormInvariants) -> FormInvariants {
        let mut hasse = self.hasse.add(&other.hasse);
        hasse.add_assign(&support(&self.det, &other.det));
        FormInvariants {
            dim: self.dim + other.dim,
            det: self.det.mul(&other.det),
            signature: self.signature.add(&other.signature),
            hasse,
        }
    }

    pub fn hasse_bit(&self, v: &Place) -> u8 {
        self.hasse.bit(v)
    }
}

impl fmt::Display for FormInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(dim {}, det {}, sig {}, hasse {})", self.dim, self.det, self.signature, self.hasse)
    }
}

/// A nondegenerate quadratic form over Q, kept as a diagonal of square
/// classes. A Gram matrix it came from is retained for reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFormQ {
    diagonal: Vec<SquareClass>,
    source: Option<Vec<Vec<Rational>>>,
}

impl QuadraticFormQ {
    pub fn from_classes(diagonal: Vec<SquareClass>) -> Self {
        QuadraticFormQ { diagonal, source: None }
    }

    pub fn from_diagonal(entries: &[Rational]) -> Result<Self> {
        let diagonal = entries.iter().map(SquareClass::of).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_classes(diagonal))
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        let diagonal = entries.iter().map(|&a| SquareClass::from_i64(a)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_classes(diagonal))
    }

    pub fn from_gram(gram: &[Vec<Rational>]) -> Result<Self> {
        diagonalize(gram)
    }

    /// ⟨1⟩^pos ⊕ ⟨-1⟩^neg.
    pub fn units(pos: usize, neg: usize) -> Self {
        let mut d = vec![SquareClass::one(); pos];
        d.extend(std::iter::repeat_n(SquareClass::minus_one(), neg));
        Self::from_classes(d)
    }

    /// H^n, written as ⟨1,-1⟩^n.
    pub fn hyperbolic(n: usize) -> Self {
        let d = (0..n).flat_map(|_| [SquareClass::one(), SquareClass::minus_one()]).collect();
        Self::from_classes(d)
    }

    pub fn empty() -> Self {
        Self::from_classes(Vec::new())
    }

    pub fn diagonal(&self) -> &[SquareClass] {
        &self.diagonal
    }

    pub fn source(&self) -> Option<&[Vec<Rational>]> {
        self.source.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn signature(&self) -> Signature {
        let neg = self.diagonal.iter().filter(|c| c.is_negative()).count();
        Signature::new(self.dim() - neg, neg)
    }

    pub fn det(&self) -> SquareClass {
        self.diagonal.iter().fold(SquareClass::one(), |acc, c| acc.mul(c))
    }

    pub fn direct_sum(&self, other: &QuadraticFormQ) -> QuadraticFormQ {
        let mut d = self.diagonal.clone();
        d.extend(other.diagonal.iter().cloned());
        Self::from_classes(d)
    }

    pub fn invariants(&self) -> FormInvariants {
        invariants(self)
    }

    /// Every prime dividing some diagonal entry.
    pub fn primes(&self) -> Vec<num_bigint::BigUint> {
        let mut ps: Vec<_> = self.diagonal.iter().flat_map(|c| c.primes().iter().cloned()).collect();
        ps.sort();
        ps.dedup();
        ps
    }
}

impl fmt::Display for QuadraticFormQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.diagonal.iter().map(|c| c.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

#[derive(Serialize)]
struct FormOut<'a> {
    diagonal: &'a [SquareClass],
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_matrix")]
    gram: &'a Option<Vec<Vec<Rational>>>,
}

mod opt_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &&Option<Vec<Vec<Rational>>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match m {
            Some(m) => serde_rational_matrix::serialize(m, s),
            None => s.serialize_none(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FormIn {
    Gram {
        #[serde(with = "serde_rational_matrix")]
        gram: Vec<Vec<Rational>>,
    },
    Diagonal {
        #[serde(with = "serde_rational_vec")]
        diagonal: Vec<Rational>,
    },
}

impl Serialize for QuadraticFormQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormOut { diagonal: &self.diagonal, gram: &self.source }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticFormQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = match FormIn::deserialize(d)? {
            FormIn::Gram { gram } => diagonalize(&gram),
            FormIn::Diagonal { diagonal } => QuadraticFormQ::from_diagonal(&diagonal),
        };
        r.map_err(serde::de::Error::custom)
    }
}

/// Symmetric Gaussian elimination to a diagonal form.
pub fn diagonalize(gram: &[Vec<Rational>]) -> Result<QuadraticFormQ> {
    let n = gram.len();
    if gram.iter().any(|row| row.len() != n) {
        return Err(Error::NotSymmetric);
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let mut a: Vec<Vec<Rational>> = gram.to_vec();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // e_i <- e_i + e_j gives q(e_i) = 2 b(e_i, e_j) != 0
                for k in 0..n {
                    let t = a[j][k].clone();
                    a[i][k] += t;
                }
                for k in 0..n {
                    let t = a[k][j].clone();
                    a[k][i] += t;
                }
            } else {
                return Err(Error::DegenerateForm);
            }
        }
        let p = a[i][i].clone();
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &p;
            for k in i..n {
                let t = &f * &a[i][k];
                a[j][k] -= t;
            }
            for k in i..n {
                let t = &f * &a[k][i];
                a[k][j] -= t;
            }
        }
        diag.push(p);
    }
    let mut form = QuadraticFormQ::from_diagonal(&diag)?;
    form.source = Some(gram.to_vec());
    Ok(form)
}

/// w = Σ_{i<j} (a_i, a_j), accumulated as Σ_j (a_1⋯a_{j-1}, a_j).
pub fn invariants(f: &QuadraticFormQ) -> FormInvariants {
    let mut det = SquareClass::one();
    let mut hasse = BrauerSupport::new();
    for a in f.diagonal() {
        if !det.is_one() {
            hasse.add_assign(&support(&det, a));
        }
        det = det.mul(a);
    }
    FormInvariants { dim: f.dim(), det, signature: f.signature(), hasse }
}

pub fn is_isomorphic(f: &QuadraticFormQ, g: &QuadraticFormQ) -> bool {
    invariants(f) == invariants(g)
}

pub fn is_locally_isomorphic(f: &QuadraticFormQ, g: &QuadraticFormQ, v: &Place) -> bool {
    if f.dim() != g.dim() {
        return false;
    }
    match v {
        Place::Infinity => f.signature() == g.signature(),
        Place::Prime(_) => {
            let (a, b) = (invariants(f), invariants(g));
            a.det.locally_equal(&b.det, v) && a.hasse_bit(v) == b.hasse_bit(v)
        }
    }
}

pub(crate) fn sign_class(negative: bool) -> SquareClass {
    if negative {
        SquareClass::minus_one()
    } else {
        SquareClass::one()
    }
}
