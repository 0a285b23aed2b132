use std::collections::HashMap;

use serde::Serialize;

use super::explicit::{transfer_quadratic, QuadFieldElement};
use crate::arith::factor::current_budget;
use crate::arith::hilbert::{report_order, support, Place};
use crate::arith::square_class::SquareClass;
use crate::error::{Error, Result};
use crate::qforms::construct::{admissibility, complement_invariants};
use crate::qforms::{invariants, is_isomorphic, FormInvariants, QuadraticFormQ};

/// Height bound on a and b when searching entries a + b√d.
pub const DEFAULT_ENTRY_HEIGHT: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessOutcome {
    /// W with T(W) ≅ U.
    Found { entries: Vec<QuadFieldElement>, transfer: QuadraticFormQ },
    /// `reason` is "obstruction" when no W exists, "budget" when the search
    /// gave up.
    NotFound {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        place: Option<Place>,
        detail: String,
    },
}

impl WitnessOutcome {
    pub fn entries(&self) -> Option<&[QuadFieldElement]> {
        match self {
            WitnessOutcome::Found { entries, .. } => Some(entries),
            WitnessOutcome::NotFound { .. } => None,
        }
    }
}

/// First place where t is not a norm from Q(√d), if any.
fn norm_obstruction(t: &SquareClass, d: &SquareClass) -> Option<Place> {
    report_order(support(t, d).iter().cloned()).into_iter().next()
}

struct Search<'a> {
    d: &'a SquareClass,
    pool: &'a [(QuadFieldElement, FormInvariants)],
    by_invariants: &'a HashMap<FormInvariants, usize>,
    steps: u64,
}

impl Search<'_> {
    /// Whether `rest` could still be the transfer of a diagonal form of its
    /// dimension: admissible, with det·d^{dim/2} a norm.
    fn viable(&self, rest: &FormInvariants) -> bool {
        let k = (rest.dim / 2) as u64;
        admissibility(rest).is_none() && norm_obstruction(&rest.det.mul(&self.d.pow(k)), self.d).is_none()
    }

    fn dfs(&mut self, target: &FormInvariants, start: usize, chosen: &mut Vec<usize>) -> Result<bool> {
        if target.dim == 2 {
            if let Some(&i) = self.by_invariants.get(target) {
                chosen.push(i);
                return Ok(true);
            }
            return Ok(false);
        }
        for i in start..self.pool.len() {
            self.steps += 1;
            if self.steps > current_budget().search_steps {
                return Err(Error::BudgetExceeded("witness search".into()));
            }
            let Some(rest) = complement_invariants(target, &self.pool[i].1) else {
                continue;
            };
            if !self.viable(&rest) {
                continue;
            }
            chosen.push(i);
            if self.dfs(&rest, i, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Searches for a diagonal W over Q(√d) with T(W) ≅ U.
pub fn construct_witness_quadratic(u: &QuadraticFormQ, d: i64) -> Result<WitnessOutcome> {
    construct_witness_with_height(u, d, DEFAULT_ENTRY_HEIGHT)
}

pub fn construct_witness_with_height(u: &QuadraticFormQ, d: i64, height: i64) -> Result<WitnessOutcome> {
    if u.dim() % 2 == 1 || u.dim() == 0 {
        return Err(Error::precondition(format!("dim U = {} must be even and positive", u.dim())));
    }
    // validates d
    transfer_quadratic(d, &[QuadFieldElement::from_i64(1, 0)])?;
    let dc = SquareClass::from_i64(d)?;
    let m = (u.dim() / 2) as u64;
    let ui = invariants(u);
    if let Some(place) = norm_obstruction(&ui.det.mul(&dc.pow(m)), &dc) {
        return Ok(WitnessOutcome::NotFound {
            reason: "obstruction".into(),
            place: Some(place),
            detail: format!("det U · {d}^{m} is not a norm from Q(√{d})"),
        });
    }

    let mut elems: Vec<QuadFieldElement> = Vec::new();
    for h in 0..=height {
        for a in -h..=h {
            for b in 0..=h {
                if a.abs().max(b) == h && (a, b) != (0, 0) {
                    elems.push(QuadFieldElement::from_i64(a, b));
                }
            }
        }
    }
    let mut pool = Vec::new();
    let mut by_invariants = HashMap::new();
    for alpha in elems {
        let t = invariants(&transfer_quadratic(d, std::slice::from_ref(&alpha))?);
        if !by_invariants.contains_key(&t) {
            by_invariants.insert(t.clone(), pool.len());
            pool.push((alpha, t));
        }
    }

    let mut search = Search { d: &dc, pool: &pool, by_invariants: &by_invariants, steps: 0 };
    let mut chosen = Vec::new();
    let found = match search.dfs(&ui, 0, &mut chosen) {
        Ok(f) => f,
        Err(Error::BudgetExceeded(_)) => false,
        Err(e) => return Err(e),
    };
    if !found {
        return Ok(WitnessOutcome::NotFound {
            reason: "budget".into(),
            place: None,
            detail: format!("no W with entries of height ≤ {height} found"),
        });
    }
    let entries: Vec<QuadFieldElement> = chosen.iter().map(|&i| pool[i].0.clone()).collect();
    let transfer = transfer_quadratic(d, &entries)?;
    if !is_isomorphic(&transfer, u) {
        return Err(Error::Internal("witness does not re-verify".into()));
    }
    Ok(WitnessOutcome::Found { entries, transfer })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let u = QuadraticFormQ::from_i64(&[2, 10]).unwrap();
        let out = construct_witness_quadratic(&u, 5).unwrap();
        assert_eq!(out.entries().unwrap(), &[QuadFieldElement::from_i64(1, 0)]);

        let w = [QuadFieldElement::from_i64(1, 0), QuadFieldElement::from_i64(1, 1), QuadFieldElement::from_i64(-1, 0)];
        let u = transfer_quadratic(5, &w).unwrap();
        let out = construct_witness_quadratic(&u, 5).unwrap();
        let back = transfer_quadratic(5, out.entries().unwrap()).unwrap();
        assert!(is_isomorphic(&back, &u));

        let out = construct_witness_quadratic(&QuadraticFormQ::units(2, 0), 3).unwrap();
        assert_eq!(
            out,
            WitnessOutcome::NotFound {
                reason: "obstruction".into(),
                place: Some(Place::prime(3)),
                detail: "det U · 3^1 is not a norm from Q(√3)".into()
            }
        );
        assert!(construct_witness_quadratic(&QuadraticFormQ::units(3, 0), 5).is_err());
    }
}
