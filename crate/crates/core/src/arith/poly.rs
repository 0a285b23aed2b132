//! Univariate polynomials over Q: resultants, discriminants and Sturm-sequence
//! real root isolation.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, int, serde_rational_vec, Rational};
use crate::error::{Error, Result};

/// Coefficients stored constant term first; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0 as well, check `is_zero` first.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        super::rational::sign(&self.eval(x))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree();
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&(Rational::one() / self.leading()))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// f / gcd(f, f'), made monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Upper bound on the absolute value of every complex root.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let coef = if c.is_one() && i > 0 {
                String::new()
            } else if (-c).is_one() && i > 0 {
                "-".to_string()
            } else {
                format_rational(c)
            };
            terms.push(format!("{coef}{mono}"));
        }
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

/// Res(a, b) = lc(a)^{deg b} ∏_{a(θ)=0} b(θ).
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    let (m, n) = (a.degree(), b.degree());
    if m == 0 {
        return pow(&a.leading(), n);
    }
    if n == 0 {
        return pow(&b.leading(), m);
    }
    if m > n {
        let r = resultant(b, a);
        return if (m * n) % 2 == 1 { -r } else { r };
    }
    let r = b.rem(a);
    if r.is_zero() {
        return Rational::zero();
    }
    let k = r.degree();
    let inner = resultant(&r, a);
    let inner = if (m * k) % 2 == 1 { -inner } else { inner };
    pow(&a.leading(), n - k) * inner
}

fn pow(x: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
pub fn discriminant(f: &IntPolynomial) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.degree();
    let r = resultant(f, &f.derivative()) / f.leading();
    Ok(if (n * (n.saturating_sub(1)) / 2) % 2 == 1 { -r } else { r })
}

/// Norm of g(θ) over all roots θ of the monic f.
pub fn norm_via_resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    Ok(resultant(f, g))
}

/// An isolating interval for a real root: either the root itself or an open
/// interval containing exactly that root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootInterval {
    Exact(Rational),
    Open(Rational, Rational),
}

impl RootInterval {
    pub fn lower(&self) -> &Rational {
        match self {
            RootInterval::Exact(r) => r,
            RootInterval::Open(lo, _) => lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            RootInterval::Exact(r) => r,
            RootInterval::Open(_, hi) => hi,
        }
    }
}

impl fmt::Display for RootInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootInterval::Exact(r) => write!(f, "{{{}}}", format_rational(r)),
            RootInterval::Open(lo, hi) => {
                write!(f, "({}, {})", format_rational(lo), format_rational(hi))
            }
        }
    }
}

struct Sturm(Vec<IntPolynomial>);

impl Sturm {
    fn new(f: &IntPolynomial) -> Self {
        let mut seq = vec![f.clone(), f.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        Sturm(seq)
    }

    fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<i8> = self.0.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct roots in (a, b]; valid for squarefree f.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Disjoint isolating intervals for the distinct real roots of f, ascending.
pub fn isolate_real_roots(f: &IntPolynomial) -> Result<Vec<RootInterval>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    let g = f.squarefree_part();
    let sturm = Sturm::new(&g);
    let b = g.cauchy_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    // depth-first with the right half pushed first keeps output ascending
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => {
                if g.eval(&hi).is_zero() {
                    out.push(RootInterval::Exact(hi));
                } else {
                    out.push(RootInterval::Open(lo, hi));
                }
            }
            _ => {
                let mid = (&lo + &hi) / int(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    Ok(out)
}

/// Shrinks an isolating interval of a root of f until its width is at most
/// `width`.
pub fn refine_root(f: &IntPolynomial, iv: &RootInterval, width: &Rational) -> RootInterval {
    let g = f.squarefree_part();
    let sturm = Sturm::new(&g);
    let (mut lo, mut hi) = match iv {
        RootInterval::Exact(_) => return iv.clone(),
        RootInterval::Open(lo, hi) => (lo.clone(), hi.clone()),
    };
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / int(2);
        if g.eval(&mid).is_zero() {
            return RootInterval::Exact(mid);
        }
        if sturm.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RootInterval::Open(lo, hi)
}

/// Sign of g at each real root of f, in ascending root order.
pub fn signs_at_real_roots(f: &IntPolynomial, g: &IntPolynomial) -> Result<Vec<i8>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fs = f.squarefree_part();
    if fs.gcd(g).degree() > 0 {
        return Err(Error::SharedRoot);
    }
    let sf = Sturm::new(&fs);
    let gs = g.squarefree_part();
    let sg = (gs.degree() > 0).then(|| Sturm::new(&gs));
    let mut out = Vec::new();
    for iv in isolate_real_roots(&fs)? {
        let (mut lo, mut hi) = match iv {
            RootInterval::Exact(r) => {
                out.push(g.sign_at(&r));
                continue;
            }
            RootInterval::Open(lo, hi) => (lo, hi),
        };
        let sign = loop {
            let clear = match &sg {
                None => true,
                Some(s) => s.count(&lo, &hi) == 0 && !g.eval(&lo).is_zero(),
            };
            if clear {
                break g.sign_at(&hi);
            }
            let mid = (&lo + &hi) / int(2);
            if fs.eval(&mid).is_zero() {
                break g.sign_at(&mid);
            }
            if sf.count(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        };
        out.push(sign);
    }
    Ok(out)
}
