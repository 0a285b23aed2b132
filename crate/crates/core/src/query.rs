//! JSON query/report layer shared by the command-line tool and the demo:
//! one query type per command, deterministic dispatch, and table rendering.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::poly::IntPolynomial;
use crate::arith::rational::{serde_rational, serde_rational_matrix, Rational};
use crate::arith::square_class::SquareClass;
use crate::catalog::FieldCatalog;
use crate::error::Error;
use crate::k3hk::{
    elliptic_fibration_verdict, hk_realizable, picard_compatible, EllipticContext, Family, FamilyDim,
};
use crate::numfields::{field_invariants, NumberFieldDesc};
use crate::qforms::{invariants, is_isomorphic, represents_zero, split_complement, QuadraticFormQ, SplitOutcome};
use crate::qforms::local::represents_zero_with_height;
use crate::transfer::{
    cm_transfer_feasible, condition_c_profile, rm_transfer_feasible, split_transfer_with, transfer_hermitian_imagquad,
    transfer_quadratic, FormEntries, Mode, Obstruction, QuadFieldElement, SplitOptions, TransferVerdict, VerdictStatus,
};

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "command", content = "payload", rename_all = "kebab-case")]
pub enum Query {
    FormInvariants { form: QuadraticFormQ },
    FormIsomorphic { a: QuadraticFormQ, b: QuadraticFormQ },
    FormSplit { v: QuadraticFormQ, u: QuadraticFormQ },
    RepresentsZero {
        form: QuadraticFormQ,
        #[serde(default)]
        height: Option<u64>,
    },
    TransferCompute { field: NumberFieldDesc, w: Vec<Value> },
    TransferFeasible(TransferFeasible),
    K3 { field: NumberFieldDesc, m: u64, mode: Mode },
    Hk {
        family: Family,
        #[serde(default)]
        n: Option<u64>,
        field: NumberFieldDesc,
        m: u64,
        mode: Mode,
    },
    Picard {
        #[serde(with = "serde_rational_matrix")]
        gram: Vec<Vec<Rational>>,
        field: NumberFieldDesc,
        m: u64,
        mode: Mode,
        #[serde(default)]
        witness: Option<IntPolynomial>,
        /// The caller vouches that L embeds primitively in the K3 lattice.
        #[serde(default = "yes")]
        primitive_embedding: bool,
    },
    Elliptic(EllipticContext),
    Tabulate(TabulateConfig),
}

fn yes() -> bool {
    true
}

/// Either U alone (is U a transfer?) or V with m (does V split off one?).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferFeasible {
    pub field: NumberFieldDesc,
    #[serde(default)]
    pub u: Option<QuadraticFormQ>,
    #[serde(default)]
    pub v: Option<QuadraticFormQ>,
    #[serde(default)]
    pub m: Option<u64>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub witness: Option<IntPolynomial>,
    #[serde(default)]
    pub complement_h: Option<SquareClass>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulateConfig {
    pub mode: Mode,
    #[serde(default = "default_families")]
    pub families: Vec<Family>,
    /// n for the Kummer and Hilbert-scheme types (default 2).
    #[serde(default)]
    pub n: Option<u64>,
    /// Defaults to the built-in catalog for the mode.
    #[serde(default)]
    pub field_catalog: Option<Vec<NumberFieldDesc>>,
    /// Largest md tabulated (default b2 - 1).
    #[serde(default)]
    pub md_bound: Option<usize>,
    #[serde(default)]
    pub format: Option<Format>,
}

fn default_families() -> Vec<Family> {
    vec![Family::K3]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Ok,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Schema,
    Criterion,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

/// The criterion that decided a result, with its obstruction if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub criterion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub status: ReportStatus,
    pub command: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ReportError>,
}

impl Report {
    fn ok(command: &str, result: Value, provenance: Provenance) -> Report {
        Report { status: ReportStatus::Ok, command: command.into(), result, provenance: Some(provenance), error: None }
    }

    pub fn from_error(command: &str, e: &Error) -> Report {
        let kind = match e {
            Error::Parse(_) => ErrorKind::Schema,
            Error::BudgetExceeded(_) => ErrorKind::Budget,
            _ => ErrorKind::Criterion,
        };
        let error = ReportError {
            kind,
            message: e.to_string(),
            path: None,
            condition: e.condition().map(str::to_string),
        };
        Report { status: ReportStatus::Error, command: command.into(), result: Value::Null, provenance: None, error: Some(error) }
    }

    pub fn schema_error(command: &str, path: Option<String>, message: String) -> Report {
        let error = ReportError { kind: ErrorKind::Schema, message, path, condition: None };
        Report { status: ReportStatus::Error, command: command.into(), result: Value::Null, provenance: None, error: Some(error) }
    }

    /// 0 ok, 2 schema error, 3 criterion error, 4 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            None => 0,
            Some(e) => match e.kind {
                ErrorKind::Schema => 2,
                ErrorKind::Criterion => 3,
                ErrorKind::Budget => 4,
            },
        }
    }
}

/// Parses `{"command": …, "payload": …}`, reporting the failing field path.
pub fn parse_query(command: &str, payload: Value) -> Result<Query, Report> {
    let doc = json!({ "command": command, "payload": payload });
    serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        let path = path.strip_prefix("payload.").unwrap_or(&path).to_string();
        let mut report =
            Report::schema_error(command, Some(path).filter(|p| p != "." && !p.is_empty()), e.into_inner().to_string());
        // forms are normalized while parsing, which may factor large entries
        if let Some(err) = report.error.as_mut() {
            if err.message.starts_with("factorization exceeded budget") {
                err.kind = ErrorKind::Budget;
            }
        }
        report
    })
}

impl Query {
    pub fn command(&self) -> &'static str {
        match self {
            Query::FormInvariants { .. } => "form-invariants",
            Query::FormIsomorphic { .. } => "form-isomorphic",
            Query::FormSplit { .. } => "form-split",
            Query::RepresentsZero { .. } => "represents-zero",
            Query::TransferCompute { .. } => "transfer-compute",
            Query::TransferFeasible(_) => "transfer-feasible",
            Query::K3 { .. } => "k3",
            Query::Hk { .. } => "hk",
            Query::Picard { .. } => "picard",
            Query::Elliptic(_) => "elliptic",
            Query::Tabulate(_) => "tabulate",
        }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn prov(criterion: &str) -> Provenance {
    Provenance { criterion: criterion.into(), obstruction: None }
}

fn verdict_report(command: &str, v: &TransferVerdict) -> Report {
    let p = Provenance { criterion: v.criterion.clone(), obstruction: v.obstruction.clone() };
    Report::ok(command, to_value(v), p)
}

/// Runs one query. Library errors become error reports.
pub fn run_query(q: &Query) -> Report {
    let command = q.command();
    dispatch(q).unwrap_or_else(|e| Report::from_error(command, &e))
}

fn dispatch(q: &Query) -> Result<Report, Error> {
    let command = q.command();
    Ok(match q {
        Query::FormInvariants { form } => Report::ok(
            command,
            json!({ "invariants": invariants(form), "diagonal": form }),
            prov("invariant-classification"),
        ),
        Query::FormIsomorphic { a, b } => {
            let (ia, ib) = (invariants(a), invariants(b));
            let differs = if ia.dim != ib.dim {
                Some("dim")
            } else if ia.det != ib.det {
                Some("det")
            } else if ia.signature != ib.signature {
                Some("signature")
            } else if ia.hasse != ib.hasse {
                Some("hasse")
            } else {
                None
            };
            let mut out = json!({ "isomorphic": is_isomorphic(a, b) });
            if let Some(d) = differs {
                out["differs"] = json!(d);
            }
            Report::ok(command, out, prov("invariant-classification"))
        }
        Query::FormSplit { v, u } => {
            let out = split_complement(v, u)?;
            let obstruction = match &out {
                SplitOutcome::Infeasible { condition, place, detail } => {
                    Some(Obstruction::new(condition, place.clone(), detail.clone()))
                }
                SplitOutcome::Complement { .. } => None,
            };
            Report::ok(command, to_value(&out), Provenance { criterion: "witt-cancellation".into(), obstruction })
        }
        Query::RepresentsZero { form, height } => {
            let v = match height {
                Some(h) => represents_zero_with_height(form, *h),
                None => represents_zero(form),
            };
            let obstruction = v.obstruction.clone().map(|p| {
                Obstruction::new("local-isotropy", Some(p.clone()), format!("anisotropic over Q_{p}"))
            });
            Report::ok(command, to_value(&v), Provenance { criterion: "hasse-minkowski".into(), obstruction })
        }
        Query::TransferCompute { field, w } => transfer_compute(field, w)?,
        Query::TransferFeasible(t) => verdict_report(command, &transfer_feasible(t)?),
        Query::K3 { field, m, mode } => realizability(command, Family::K3, None, field, *m, *mode)?,
        Query::Hk { family, n, field, m, mode } => realizability(command, *family, *n, field, *m, *mode)?,
        Query::Picard { gram, field, m, mode, witness, primitive_embedding } => {
            if !primitive_embedding {
                return Err(Error::precondition("L must embed primitively in the K3 lattice"));
            }
            verdict_report(command, &picard_compatible(gram, field, *m, *mode, witness.as_ref())?)
        }
        Query::Elliptic(ctx) => {
            let v = elliptic_fibration_verdict(ctx)?;
            Report::ok(command, to_value(&v), prov("elliptic-fibration"))
        }
        Query::Tabulate(cfg) => {
            let rows = tabulate(cfg)?;
            Report::ok(command, json!({ "rows": to_value(&rows) }), prov("realizability-grid"))
        }
    })
}

fn realizability(command: &str, family: Family, n: Option<u64>, field: &NumberFieldDesc, m: u64, mode: Mode) -> Result<Report, Error> {
    let r = hk_realizable(family, n, field, m, mode)?;
    let p = Provenance { criterion: r.criterion.clone(), obstruction: r.obstruction.clone() };
    Ok(Report::ok(command, to_value(&r), p))
}

fn parse_entries<T: for<'de> Deserialize<'de>>(w: &[Value]) -> Result<Vec<T>, Error> {
    w.iter()
        .map(|x| serde_json::from_value(x.clone()).map_err(|e| Error::Parse(format!("entry {x}: {e}"))))
        .collect()
}

fn transfer_compute(field: &NumberFieldDesc, w: &[Value]) -> Result<Report, Error> {
    let (form, entries) = match field {
        NumberFieldDesc::RealQuadratic { d } => {
            let w: Vec<QuadFieldElement> = parse_entries(w)?;
            (Some(transfer_quadratic(*d, &w)?), FormEntries::Quadratic(w))
        }
        NumberFieldDesc::ImagQuadratic { big_d } => {
            let w = w.iter().map(serde_rational::from_value).collect::<Result<Vec<_>, _>>()?;
            (Some(transfer_hermitian_imagquad(*big_d, &w)?), FormEntries::Hermitian(w))
        }
        NumberFieldDesc::GeneralTotallyReal { .. } => (None, FormEntries::Polynomial(parse_entries(w)?)),
        _ => return Err(Error::precondition(format!("explicit entries are not supported over {}", field.label()))),
    };
    let (profile, condition_c) = condition_c_profile(field, &entries)?;
    let mut out = json!({ "profile": profile, "condition_c": condition_c });
    if let Some(f) = form {
        out["form"] = to_value(&f);
        out["invariants"] = to_value(&invariants(&f));
    }
    Ok(Report::ok("transfer-compute", out, prov("trace-form")))
}

fn transfer_feasible(t: &TransferFeasible) -> Result<TransferVerdict, Error> {
    let is_cm = field_invariants(&t.field)?.is_cm;
    let mode = t.mode.unwrap_or(if is_cm { Mode::Cm } else { Mode::Rm });
    match (&t.u, &t.v) {
        (Some(u), None) => match mode {
            Mode::Cm => cm_transfer_feasible(&t.field, u),
            Mode::Rm => rm_transfer_feasible(&t.field, u, t.witness.as_ref()),
        },
        (None, Some(v)) => {
            let m = t.m.ok_or_else(|| Error::Parse("splitting V needs m".into()))?;
            let opts = SplitOptions { complement_h: t.complement_h.clone(), witness: t.witness.clone() };
            split_transfer_with(v, &t.field, m, mode, &opts)
        }
        _ => Err(Error::Parse("give exactly one of u and v".into())),
    }
}

/// One row of a realizability table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub field: String,
    pub degree: usize,
    pub m: u64,
    pub md: usize,
    pub feasible: bool,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_dim: Option<FamilyDim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pic_rank: Option<usize>,
    pub criterion: String,
}

pub const TABLE_COLUMNS: [&str; 11] =
    ["family", "n", "field", "degree", "m", "md", "feasible", "status", "family_dim", "pic_rank", "criterion"];

/// One row per (family, field, m) with md up to the bound, sorted by
/// (family, degree, m) and otherwise in catalog order.
pub fn tabulate(cfg: &TabulateConfig) -> Result<Vec<TableRow>, Error> {
    let catalog = match &cfg.field_catalog {
        Some(c) => c.clone(),
        None => {
            let b = FieldCatalog::builtin();
            match cfg.mode {
                Mode::Rm => b.totally_real,
                Mode::Cm => b.cm,
            }
        }
    };
    if catalog.is_empty() {
        return Err(Error::precondition("field catalog is empty"));
    }
    if cfg.families.is_empty() {
        return Err(Error::precondition("no families requested"));
    }
    let mut rows = Vec::new();
    for &family in &cfg.families {
        let n = family.needs_n().then(|| cfg.n.unwrap_or(2));
        let bound = cfg.md_bound.unwrap_or(family.b2() - 1);
        for e in &catalog {
            let d = field_invariants(e)?.degree;
            for m in 1..=(bound / d) as u64 {
                let r = hk_realizable(family, n, e, m, cfg.mode)?;
                rows.push(TableRow {
                    family,
                    n,
                    field: r.field,
                    degree: d,
                    m,
                    md: m as usize * d,
                    feasible: r.feasible,
                    status: r.status,
                    family_dim: r.family_dim,
                    pic_rank: r.pic_rank,
                    criterion: r.criterion,
                });
            }
        }
    }
    rows.sort_by_key(|r| (r.family, r.degree, r.m));
    Ok(rows)
}

fn table_of(report: &Report) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let rows = report.result.get("rows")?.as_array()?;
    let header: Vec<String> = TABLE_COLUMNS.iter().map(|s| s.to_string()).collect();
    let body = rows
        .iter()
        .map(|r| {
            TABLE_COLUMNS
                .iter()
                .map(|c| match r.get(*c) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect()
        })
        .collect();
    Some((header, body))
}

fn key_value_table(report: &Report) -> (Vec<String>, Vec<Vec<String>>) {
    let header = vec!["key".to_string(), "value".to_string()];
    let mut body = vec![vec!["status".to_string(), to_value(&report.status).as_str().unwrap_or_default().to_string()]];
    let flat = |v: &Value| match v {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    };
    if let Value::Object(map) = &report.result {
        body.extend(map.iter().map(|(k, v)| vec![k.clone(), flat(v)]));
    }
    if let Some(p) = &report.provenance {
        body.push(vec!["criterion".into(), p.criterion.clone()]);
    }
    if let Some(e) = &report.error {
        body.push(vec!["error".into(), e.message.clone()]);
    }
    (header, body)
}

/// Renders a report: pretty JSON, or a table (tabulate rows, otherwise the
/// top-level result fields as key/value pairs).
pub fn render(report: &Report, format: Format) -> String {
    if format == Format::Json || report.error.is_some() {
        return serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    }
    let (header, body) = table_of(report).unwrap_or_else(|| key_value_table(report));
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory write");
            for row in &body {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
        }
        _ => {
            let esc = |s: &String| s.replace('|', "\\|");
            let mut out = format!("| {} |\n", header.join(" | "));
            out += &format!("|{}\n", "---|".repeat(header.len()));
            for row in &body {
                out += &format!("| {} |\n", row.iter().map(esc).collect::<Vec<_>>().join(" | "));
            }
            out
        }
    }
}
