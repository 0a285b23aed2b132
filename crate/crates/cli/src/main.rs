//! `tf`: command-line front end for the quadratic-form and transfer library.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qtransfer::query::{parse_query, render, run_query, Format, Report};
use qtransfer::{with_budget, Budget};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(name = "tf", version, about = "Rational quadratic forms, trace-form transfers and K3/HK realizability")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv", "markdown"])]
    format: String,
    /// Step limit for factorization and witness searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, determinant, signature and Hasse invariant of a form.
    FormInvariants {
        #[arg(long)]
        form: String,
    },
    /// Whether two forms are isomorphic over Q.
    FormIsomorphic {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// A complement V′ with V ≅ U ⊕ V′.
    FormSplit {
        #[arg(long)]
        v: String,
        #[arg(long)]
        u: String,
    },
    /// Hasse–Minkowski isotropy with a witness or an obstruction place.
    RepresentsZero {
        #[arg(long)]
        form: String,
        #[arg(long)]
        height: Option<u64>,
    },
    /// The trace form T(W) of explicit entries over a quadratic field.
    TransferCompute {
        #[arg(long)]
        field: String,
        /// JSON array of entries: ["a","b"] pairs over Q(√d), rationals over Q(√-D).
        #[arg(long)]
        w: String,
    },
    /// Whether U is a transfer, or whether V splits off one of rank m.
    TransferFeasible(TransferArgs),
    /// K3 surfaces with RM or CM.
    K3 {
        #[command(flatten)]
        target: Target,
    },
    /// Hyperkähler manifolds with RM or CM.
    Hk {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        target: Target,
    },
    /// Compatibility of a Picard lattice with RM or CM.
    Picard {
        /// Gram matrix as a JSON array of rows.
        #[arg(long)]
        gram: String,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        witness: Option<String>,
        /// Do not assert that L embeds primitively in the K3 lattice.
        #[arg(long)]
        not_primitive: bool,
    },
    /// Elliptic fibrations on K3 surfaces with CM.
    Elliptic {
        /// A named example, e.g. kondo-44.
        #[arg(long, conflicts_with_all = ["field", "picard"])]
        case: Option<String>,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        rho: Option<u64>,
        /// An explicit Picard form.
        #[arg(long, conflicts_with = "field")]
        picard: Option<String>,
    },
    /// Realizability table over a field catalog.
    Tabulate {
        #[arg(long)]
        mode: String,
        /// Comma-separated families (default k3).
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long)]
        n: Option<u64>,
        /// JSON array of field descriptors (default: built-in catalog).
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long)]
        md_bound: Option<u64>,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    field: String,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    mode: String,
}

#[derive(Args)]
struct TransferArgs {
    #[arg(long)]
    field: String,
    #[arg(long, conflicts_with = "v")]
    u: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    witness: Option<String>,
    #[arg(long)]
    complement_h: Option<String>,
}

/// Collects flag values into a JSON payload; JSON-valued flags are parsed.
struct Payload {
    command: &'static str,
    map: Map<String, Value>,
}

impl Payload {
    fn new(command: &'static str) -> Self {
        Payload { command, map: Map::new() }
    }

    fn json(mut self, key: &str, raw: Option<&str>) -> Result<Self, Report> {
        if let Some(raw) = raw {
            let v = serde_json::from_str(raw)
                .map_err(|e| Report::schema_error(self.command, Some(key.to_string()), format!("invalid JSON: {e}")))?;
            self.map.insert(key.to_string(), v);
        }
        Ok(self)
    }

    fn set(mut self, key: &str, v: Option<impl Into<Value>>) -> Self {
        if let Some(v) = v {
            self.map.insert(key.to_string(), v.into());
        }
        self
    }

    fn target(self, t: &Target) -> Result<Self, Report> {
        Ok(self.json("field", Some(&t.field))?.set("m", Some(t.m)).set("mode", Some(t.mode.to_lowercase())))
    }
}

fn build(cmd: &Command) -> Result<(&'static str, Value), Report> {
    let p = match cmd {
        Command::FormInvariants { form } => Payload::new("form-invariants").json("form", Some(form))?,
        Command::FormIsomorphic { a, b } => Payload::new("form-isomorphic").json("a", Some(a))?.json("b", Some(b))?,
        Command::FormSplit { v, u } => Payload::new("form-split").json("v", Some(v))?.json("u", Some(u))?,
        Command::RepresentsZero { form, height } => {
            Payload::new("represents-zero").json("form", Some(form))?.set("height", *height)
        }
        Command::TransferCompute { field, w } => Payload::new("transfer-compute").json("field", Some(field))?.json("w", Some(w))?,
        Command::TransferFeasible(t) => Payload::new("transfer-feasible")
            .json("field", Some(&t.field))?
            .json("u", t.u.as_deref())?
            .json("v", t.v.as_deref())?
            .set("m", t.m)
            .set("mode", t.mode.as_ref().map(|s| s.to_lowercase()))
            .json("witness", t.witness.as_deref())?
            .set("complement_h", t.complement_h.clone()),
        Command::K3 { target } => Payload::new("k3").target(target)?,
        Command::Hk { family, n, target } => {
            Payload::new("hk").set("family", Some(family.to_lowercase())).set("n", *n).target(target)?
        }
        Command::Picard { gram, target, witness, not_primitive } => Payload::new("picard")
            .json("gram", Some(gram))?
            .target(target)?
            .json("witness", witness.as_deref())?
            .set("primitive_embedding", Some(!not_primitive)),
        Command::Elliptic { case, field, m, rho, picard } => {
            let p = Payload::new("elliptic");
            if let Some(key) = case {
                p.set("context", Some("case")).set("key", Some(key.clone()))
            } else if let Some(form) = picard {
                p.set("context", Some("picard_form")).json("form", Some(form))?
            } else {
                p.set("context", Some("cm_field")).json("field", field.as_deref())?.set("m", *m).set("rho", *rho)
            }
        }
        Command::Tabulate { mode, families, n, catalog, md_bound } => {
            let fams: Vec<Value> = families.iter().map(|f| Value::from(f.to_lowercase())).collect();
            Payload::new("tabulate")
                .set("mode", Some(mode.to_lowercase()))
                .set("families", (!fams.is_empty()).then_some(fams))
                .set("n", *n)
                .json("field_catalog", catalog.as_deref())?
                .set("md_bound", *md_bound)
        }
    };
    Ok((p.command, Value::Object(p.map)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = cli.format.parse().expect("clap restricts the values");
    let report = match build(&cli.command) {
        Err(r) => r,
        Ok((command, payload)) => match parse_query(command, payload) {
            Err(r) => r,
            Ok(q) => {
                let budget = cli.budget.map(Budget::scaled).unwrap_or_default();
                with_budget(budget, || run_query(&q))
            }
        },
    };
    print!("{}", render(&report, format));
    ExitCode::from(report.exit_code() as u8)
}
