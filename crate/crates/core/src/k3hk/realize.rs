use serde::{Serialize, Serializer};

use super::ambient::{ambient, Family};
use crate::error::{Error, Result};
use crate::numfields::{field_invariants, NumberFieldDesc};
use crate::qforms::QuadraticFormQ;
use crate::transfer::{split_transfer_feasible, Mode, Obstruction, TransferVerdict, VerdictStatus};

/// Dimension of the family of manifolds realizing a feasible case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyDim {
    Dim(u64),
    /// Isolated points, infinitely many up to isomorphism.
    Countable,
}

impl Serialize for FamilyDim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FamilyDim::Dim(n) => s.serialize_u64(*n),
            FamilyDim::Countable => s.serialize_str("countable"),
        }
    }
}

impl std::fmt::Display for FamilyDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyDim::Dim(n) => write!(f, "{n}"),
            FamilyDim::Countable => f.write_str("countable"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizabilityReport {
    pub feasible: bool,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_dim: Option<FamilyDim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pic_rank: Option<usize>,
    pub mode: Mode,
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub field: String,
    pub degree: usize,
    pub m: u64,
    pub hodge_group_label: String,
    /// The criterion that decided the verdict.
    pub criterion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    /// V′ = Pic ⊗ Q when the splitting pins it down (codimension one).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forced_complement: Option<QuadraticFormQ>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// "Res_{E/Q} SO(W), m=…" for totally real E, "Res_{E/Q} U(W), m=…" for CM E.
pub fn hodge_group_label(e: &NumberFieldDesc, m: u64) -> Result<String> {
    let group = if field_invariants(e)?.is_cm { "U" } else { "SO" };
    Ok(format!("Res_{{E/Q}} {group}(W), m={m}"))
}

/// K3 surfaces with RM or CM by E and dim_E T = m.
pub fn k3_realizable(e: &NumberFieldDesc, m: u64, mode: Mode) -> Result<RealizabilityReport> {
    hk_realizable(Family::K3, None, e, m, mode)
}

/// Hyperkähler manifolds of the given family with RM or CM by E and
/// dim_E T = m: the numerical bounds, then an explicit splitting of H²(X, Q).
pub fn hk_realizable(
    family: Family,
    n: Option<u64>,
    e: &NumberFieldDesc,
    m: u64,
    mode: Mode,
) -> Result<RealizabilityReport> {
    let amb = ambient(family, n)?;
    let inv = field_invariants(e)?;
    if m == 0 {
        return Err(Error::precondition("m must be at least 1"));
    }
    match (mode, inv.is_cm) {
        (Mode::Cm, false) => return Err(Error::InvalidField(format!("CM mode needs a CM field, got {}", e.label()))),
        (Mode::Rm, true) => return Err(Error::InvalidField(format!("RM mode needs a totally real field, got {}", e.label()))),
        _ => {}
    }
    let r = amb.b2;
    let md = m as usize * inv.degree;
    let mut report = RealizabilityReport {
        feasible: false,
        status: VerdictStatus::Infeasible,
        family_dim: None,
        pic_rank: None,
        mode,
        family,
        n: amb.n,
        field: e.label(),
        degree: inv.degree,
        m,
        hodge_group_label: hodge_group_label(e, m)?,
        criterion: String::new(),
        obstruction: None,
        forced_complement: None,
        notes: Vec::new(),
    };
    if r == 8 && mode == Mode::Rm {
        report.notes.push("for b2 = 8 the only possibility is d = 2, m = 3".into());
    }
    if mode == Mode::Cm && r % 2 == 0 && md < r {
        report.notes.push(format!("d is even, so in fact md ≤ {}", r - 2));
    }
    if mode == Mode::Rm && m < 3 {
        report.criterion = "rm-rank-bound".into();
        report.obstruction = Some(Obstruction::new("rank", None, format!("m = {m}, but real multiplication needs m ≥ 3")));
        return Ok(report);
    }
    if md + 1 > r {
        report.criterion = "dimension-bound".into();
        report.obstruction = Some(Obstruction::new(
            "dimension",
            None,
            format!("md = {md} exceeds b2 - 1 = {}", r - 1),
        ));
        return Ok(report);
    }
    let verdict: TransferVerdict = split_transfer_feasible(&amb.rational_form, e, m, mode)?;
    report.status = verdict.status;
    report.criterion = verdict.criterion.clone();
    report.notes.extend(verdict.notes.iter().cloned());
    match verdict.status {
        VerdictStatus::Feasible => {
            report.feasible = true;
            report.pic_rank = Some(r - md);
            report.family_dim = Some(match mode {
                Mode::Rm => FamilyDim::Dim(m - 2),
                Mode::Cm if m == 1 => FamilyDim::Countable,
                Mode::Cm => FamilyDim::Dim(m - 1),
            });
            let cert = verdict.certificate.expect("feasible verdicts carry a certificate");
            if md + 1 == r {
                report.forced_complement = cert.complement_form.clone();
                if mode == Mode::Rm {
                    report.notes.push("V′ = ⟨h⟩ for any admissible h; the smallest one is shown".into());
                }
            }
            if mode == Mode::Cm && m == 1 {
                report.notes.push("infinitely many non-isomorphic transcendental forms".into());
                if family == Family::K3 && inv.disc_class.is_one() {
                    report.notes.push("Δ_E is a square: Pic ⊗ Q is a hyperbolic plane H(N)".into());
                }
            }
        }
        VerdictStatus::Infeasible => report.obstruction = verdict.obstruction,
        VerdictStatus::NeedsWitness => {}
    }
    Ok(report)
}
