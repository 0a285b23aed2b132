//! Elements of Q^×/Q^{×2}, represented by signed squarefree integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::factorize;
use super::hilbert::Place;
use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

/// A square class. The prime support is cached since every Hilbert symbol
/// computation needs it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    value: BigInt,
    primes: Vec<BigUint>,
}

pub fn squarefree_class(r: &Rational) -> Result<SquareClass> {
    SquareClass::of(r)
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass { value: BigInt::one(), primes: Vec::new() }
    }

    pub fn minus_one() -> Self {
        SquareClass { value: -BigInt::one(), primes: Vec::new() }
    }

    pub fn from_i64(n: i64) -> Result<Self> {
        Self::from_int(&BigInt::from(n))
    }

    pub fn from_int(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroInput("square class of zero".into()));
        }
        let primes: Vec<BigUint> = factorize(n.magnitude())?
            .into_iter()
            .filter(|(_, e)| e % 2 == 1)
            .map(|(p, _)| p)
            .collect();
        Ok(Self::from_parts(n.is_negative(), primes))
    }

    pub fn of(r: &Rational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroInput("square class of zero".into()));
        }
        // p/q and p*q differ by the square q^2
        Self::from_int(&(r.numer() * r.denom()))
    }

    fn from_parts(negative: bool, primes: Vec<BigUint>) -> Self {
        let mag: BigUint = primes.iter().product();
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        SquareClass { value: BigInt::from_biguint(sign, mag), primes }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.value.clone())
    }

    /// Primes dividing the squarefree representative, ascending.
    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn divisible_by(&self, p: &BigUint) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let (a, b) = (&self.primes, &other.primes);
        let mut primes = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    primes.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    primes.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        primes.extend_from_slice(&a[i..]);
        primes.extend_from_slice(&b[j..]);
        Self::from_parts(self.is_negative() != other.is_negative(), primes)
    }

    pub fn neg(&self) -> SquareClass {
        SquareClass { value: -self.value.clone(), primes: self.primes.clone() }
    }

    pub fn pow(&self, e: u64) -> SquareClass {
        if e % 2 == 0 {
            Self::one()
        } else {
            self.clone()
        }
    }

    /// Whether the class is trivial in Q_v^×/Q_v^{×2}.
    pub fn is_local_square(&self, place: &Place) -> bool {
        match place {
            Place::Infinity => !self.is_negative(),
            Place::Prime(p) => {
                if self.divisible_by(p) {
                    return false;
                }
                if *p == BigUint::from(2u32) {
                    self.value.mod_floor(&BigInt::from(8)) == BigInt::one()
                } else {
                    legendre(&self.value, p) == 1
                }
            }
        }
    }

    pub fn locally_equal(&self, other: &SquareClass, place: &Place) -> bool {
        self.mul(other).is_local_square(place)
    }
}

/// Legendre symbol (a/p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: &BigInt, p: &BigUint) -> i8 {
    let pi = BigInt::from(p.clone());
    let a = a.mod_floor(&pi).magnitude().clone();
    if a.is_zero() {
        return 0;
    }
    let e = (p - BigUint::one()) >> 1;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.value.to_string())
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let r = match &v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("expected square class, got {other}"))),
        };
        r.and_then(|r| SquareClass::of(&r)).map_err(serde::de::Error::custom)
    }
}
