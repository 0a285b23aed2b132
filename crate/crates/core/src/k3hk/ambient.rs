use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qforms::QuadraticFormQ;

/// Deformation type of a hyperkähler manifold, K3 surfaces included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    K3,
    Kummer,
    Og6,
    #[serde(alias = "k3n")]
    HilbK3,
    Og10,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::K3, Family::Kummer, Family::Og6, Family::HilbK3, Family::Og10];

    pub fn needs_n(self) -> bool {
        matches!(self, Family::Kummer | Family::HilbK3)
    }

    pub fn b2(self) -> usize {
        match self {
            Family::K3 => 22,
            Family::Kummer => 7,
            Family::Og6 => 8,
            Family::HilbK3 => 23,
            Family::Og10 => 24,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::K3 => "K3",
            Family::Kummer => "Kummer",
            Family::Og6 => "OG6",
            Family::HilbK3 => "HilbK3",
            Family::Og10 => "OG10",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k3" => Ok(Family::K3),
            "kummer" => Ok(Family::Kummer),
            "og6" => Ok(Family::Og6),
            "hilbk3" | "k3n" => Ok(Family::HilbK3),
            "og10" => Ok(Family::Og10),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// H²(X, Q) with its Beauville–Bogomolov form for one deformation type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbientSpace {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub b2: usize,
    pub rational_form: QuadraticFormQ,
    pub integral_label: String,
}

impl AmbientSpace {
    /// The k with a ⟨-2k⟩ summand, for the Kummer and Hilbert-scheme types.
    pub fn k(&self) -> Option<u64> {
        match (self.family, self.n) {
            (Family::Kummer, Some(n)) => Some(n + 1),
            (Family::HilbK3, Some(n)) => Some(n - 1),
            _ => None,
        }
    }
}

fn h3() -> QuadraticFormQ {
    QuadraticFormQ::hyperbolic(3)
}

fn h3_i16() -> QuadraticFormQ {
    h3().direct_sum(&QuadraticFormQ::units(0, 16))
}

fn neg(a: &[i64]) -> QuadraticFormQ {
    QuadraticFormQ::from_i64(a).expect("nonzero entries")
}

/// H²(X, Q) for the given family. Kummer and Hilbert-scheme types take the
/// half-dimension n ≥ 2.
pub fn ambient(family: Family, n: Option<u64>) -> Result<AmbientSpace> {
    let n = if family.needs_n() {
        match n {
            Some(n) if n >= 2 => Some(n),
            Some(n) => return Err(Error::precondition(format!("{family} needs n ≥ 2, got {n}"))),
            None => return Err(Error::precondition(format!("{family} needs n"))),
        }
    } else {
        None
    };
    let (rational_form, integral_label) = match family {
        Family::K3 => (h3_i16(), "H³⊕E₈²".to_string()),
        Family::Kummer => {
            let c = 2 * n.unwrap() as i64 + 2;
            (h3().direct_sum(&neg(&[-c])), format!("H³⊕⟨−{c}⟩"))
        }
        Family::Og6 => (h3().direct_sum(&neg(&[-1, -1])), "H³⊕⟨−2,−2⟩".to_string()),
        Family::HilbK3 => {
            let c = 2 * n.unwrap() as i64 - 2;
            (h3_i16().direct_sum(&neg(&[-c])), format!("H³⊕E₈²⊕⟨−{c}⟩"))
        }
        Family::Og10 => (h3_i16().direct_sum(&neg(&[-2, -6])), "H³⊕E₈²⊕A₂".to_string()),
    };
    Ok(AmbientSpace { family, n, b2: family.b2(), rational_form, integral_label })
}
