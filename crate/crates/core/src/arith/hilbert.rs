//! Places of Q, Hilbert symbols, and 2-torsion Brauer classes stored as their
//! finite support.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::is_prime;
use super::rational::Rational;
use super::square_class::{legendre, SquareClass};
use crate::error::{Error, Result};

/// A place of Q. Primes order numerically and the real place sorts last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(BigUint),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Place {
        Place::Prime(BigUint::from(p))
    }

    pub fn two() -> Place {
        Place::prime(2)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Prime(_))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinity),
            t => {
                let p: BigUint = t.parse().map_err(|_| Error::Parse(format!("bad place {s:?}")))?;
                if !is_prime(&p) {
                    return Err(Error::Parse(format!("{p} is not prime")));
                }
                Ok(Place::Prime(p))
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected place, got {other}"))),
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of Br_2(Q), identified with the set of places where it is
/// nontrivial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerSupport(BTreeSet<Place>);

impl BrauerSupport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_places(places: impl IntoIterator<Item = Place>) -> Self {
        let mut b = Self::new();
        for p in places {
            b.toggle(p);
        }
        b
    }

    pub fn contains(&self, p: &Place) -> bool {
        self.0.contains(p)
    }

    pub fn bit(&self, p: &Place) -> u8 {
        u8::from(self.contains(p))
    }

    pub fn toggle(&mut self, p: Place) {
        if !self.0.remove(&p) {
            self.0.insert(p);
        }
    }

    pub fn set(&mut self, p: Place, bit: u8) {
        if bit & 1 == 1 {
            self.0.insert(p);
        } else {
            self.0.remove(&p);
        }
    }

    /// Sum in Br_2(Q): symmetric difference of supports.
    pub fn add(&self, other: &BrauerSupport) -> BrauerSupport {
        BrauerSupport(self.0.symmetric_difference(&other.0).cloned().collect())
    }

    pub fn add_assign(&mut self, other: &BrauerSupport) {
        for p in &other.0 {
            self.toggle(p.clone());
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.0.iter()
    }

    pub fn finite(&self) -> impl Iterator<Item = &BigUint> {
        self.0.iter().filter_map(|p| match p {
            Place::Prime(q) => Some(q),
            Place::Infinity => None,
        })
    }
}

impl fmt::Display for BrauerSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for BrauerSupport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl<'de> Deserialize<'de> for BrauerSupport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let places = Vec::<Place>::deserialize(d)?;
        let set: BTreeSet<Place> = places.into_iter().collect();
        Ok(BrauerSupport(set))
    }
}

/// Hilbert symbol of two square classes at `v`, in additive notation.
pub fn symbol(a: &SquareClass, b: &SquareClass, v: &Place) -> u8 {
    let p = match v {
        Place::Infinity => return u8::from(a.is_negative() && b.is_negative()),
        Place::Prime(p) => p,
    };
    let alpha = u8::from(a.divisible_by(p));
    let beta = u8::from(b.divisible_by(p));
    let pi = BigInt::from(p.clone());
    let u = if alpha == 1 { a.value() / &pi } else { a.value().clone() };
    let w = if beta == 1 { b.value() / &pi } else { b.value().clone() };
    if p == &BigUint::from(2u32) {
        let eps = |x: &BigInt| u8::from(x.mod_floor(&BigInt::from(4)) == BigInt::from(3));
        let omega = |x: &BigInt| {
            let r = x.mod_floor(&BigInt::from(8));
            u8::from(r == BigInt::from(3) || r == BigInt::from(5))
        };
        (eps(&u) & eps(&w)) ^ (alpha & omega(&w)) ^ (beta & omega(&u))
    } else {
        let eps_p = u8::from((p % 4u32) == BigUint::from(3u32));
        let nonres = |x: &BigInt| u8::from(legendre(x, p) == -1);
        (alpha & beta & eps_p) ^ (beta & nonres(&u)) ^ (alpha & nonres(&w))
    }
}

/// Hilbert symbol (a, b)_v: 0 iff z² = a x² + b y² has a nontrivial solution
/// over Q_v.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: &Place) -> Result<u8> {
    Ok(symbol(&SquareClass::of(a)?, &SquareClass::of(b)?, v))
}

/// Places where (a, b) is nontrivial. Only ∞, 2 and primes dividing a or b
/// can occur.
pub fn support(a: &SquareClass, b: &SquareClass) -> BrauerSupport {
    let mut out = BrauerSupport::new();
    for v in candidate_places([a, b]) {
        if symbol(a, b, &v) == 1 {
            out.0.insert(v);
        }
    }
    out
}

pub fn hilbert_support(a: &Rational, b: &Rational) -> Result<BrauerSupport> {
    Ok(support(&SquareClass::of(a)?, &SquareClass::of(b)?))
}

/// ∞, 2 and every prime dividing one of the classes, sorted.
/// Orders places the way obstructions are reported: ∞, odd primes
/// ascending, then 2.
pub(crate) fn report_order(places: impl IntoIterator<Item = Place>) -> Vec<Place> {
    let mut out: Vec<Place> = places.into_iter().collect();
    out.sort_by_key(|v| match v {
        Place::Infinity => (0, None),
        Place::Prime(p) if *p == BigUint::from(2u32) => (2, None),
        Place::Prime(p) => (1, Some(p.clone())),
    });
    out
}

pub fn candidate_places<'a>(classes: impl IntoIterator<Item = &'a SquareClass>) -> Vec<Place> {
    let mut set: BTreeSet<Place> = BTreeSet::new();
    set.insert(Place::two());
    set.insert(Place::Infinity);
    for c in classes {
        for p in c.primes() {
            set.insert(Place::Prime(p.clone()));
        }
    }
    set.into_iter().collect()
}
