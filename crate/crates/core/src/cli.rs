//! The `operadix` command line.

use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{check_total_associativity, NAryAlgebra};
use crate::cochain::{defect_probes, theorem_check_symbolic};
use crate::components::{ComponentTower, GroebnerReport};
use crate::freeops::{pair, Element, GeneratorSpec};
use crate::quadratic::{Family, QuadraticPresentation};
use crate::scalar::Field;
use crate::trees::{catalan, enumerate_trees, PlanarTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "operadix", version, about = "Exact computations with n-ary operads and their cup products")]
struct Cli {
    /// Scalar field: `q` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Print the JSON document instead of the table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// n-ary Catalan number: trees with w internal nodes.
    Catalan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
    },
    /// Lists the planar trees of weight w in path-glex order.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
    },
    /// Koszul dual of a presentation.
    Dual {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: i64,
    },
    /// Dimensions of the quotient components up to weight wmax.
    Dims {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        wmax: usize,
        /// Also compare with the extreme-slot tree count (even n, pa).
        #[arg(long)]
        groebner: bool,
    },
    /// Reduces a tree or an element to standard monomials.
    NormalForm {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: i64,
        /// A tree in s-expression form, e.g. `(m _ _ (m _ _ _))`.
        #[arg(long, conflicts_with = "element")]
        tree: Option<String>,
        /// Element JSON, or `@path` to read it from a file.
        #[arg(long)]
        element: Option<String>,
    },
    /// Pairing of the dual monomial `mu* o_i mu*` with `mu o_j mu`.
    Pair {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Checks total associativity of an algebra given as JSON.
    CheckAlgebra {
        file: String,
    },
    /// Symbolic check of partial associativity of the cup product.
    Verify {
        #[arg(long)]
        n: usize,
        /// Comma-separated degrees of the 2n-1 cochains.
        #[arg(long)]
        degrees: String,
        #[arg(long, default_value_t = 5)]
        wcap: usize,
    },
    /// Numeric residual of the cup-product identity on random probes.
    Defect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Comma-separated cochain degrees; all zero by default.
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub command: String,
    pub field: String,
    pub payload: Value,
    pub exit_code: i32,
    /// Human-readable rendering of the payload.
    pub text: String,
    pub json: bool,
}

impl CommandResult {
    pub fn document(&self) -> Value {
        json!({ "command": self.command, "field": self.field, "payload": self.payload, "exit_code": self.exit_code })
    }

    /// What the binary prints on stdout.
    pub fn output(&self) -> String {
        if self.json {
            format!("{}\n", self.document())
        } else {
            self.text.clone()
        }
    }
}

struct Outcome {
    payload: Value,
    text: String,
    exit_code: i32,
}

fn ok(payload: Value, text: String) -> Outcome {
    Outcome { payload, text, exit_code: EXIT_OK }
}

fn check(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return CommandResult {
                command: String::new(),
                field: String::new(),
                payload: json!({ "error": e.to_string() }),
                exit_code: code,
                text: e.to_string(),
                json: false,
            };
        }
    };
    let command = command_name(&cli.command).to_string();
    let outcome = cli
        .field
        .parse::<Field>()
        .map_err(anyhow::Error::from)
        .and_then(|field| dispatch(&cli.command, field));
    match outcome {
        Ok(o) => CommandResult { command, field: cli.field, payload: o.payload, exit_code: o.exit_code, text: o.text, json: cli.json },
        Err(e) => CommandResult {
            command,
            field: cli.field,
            payload: json!({ "error": format!("{e:#}") }),
            exit_code: EXIT_USAGE,
            text: format!("error: {e:#}\n"),
            json: cli.json,
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Catalan { .. } => "catalan",
        Command::Trees { .. } => "trees",
        Command::Dual { .. } => "dual",
        Command::Dims { .. } => "dims",
        Command::NormalForm { .. } => "normal-form",
        Command::Pair { .. } => "pair",
        Command::CheckAlgebra { .. } => "check-algebra",
        Command::Verify { .. } => "verify",
        Command::Defect { .. } => "defect",
    }
}

fn parse_degrees(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("invalid degree `{x}`")))
        .collect()
}

fn read_arg(s: &str) -> anyhow::Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(s.to_string()),
    }
}

fn u128_json(x: u128) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn row_text(row: &[String]) -> String {
    format!("[{}]", row.join(", "))
}

fn dispatch(command: &Command, field: Field) -> anyhow::Result<Outcome> {
    match command {
        Command::Catalan { n, w } => {
            let c = catalan(*n, *w)?;
            Ok(ok(json!({ "n": n, "w": w, "catalan": u128_json(c) }), format!("{c}\n")))
        }
        Command::Trees { n, w } => {
            let trees: Vec<String> = enumerate_trees(*n, *w)?.iter().map(|t| t.to_string()).collect();
            let text = trees.iter().map(|t| format!("{t}\n")).collect();
            Ok(ok(json!({ "n": n, "w": w, "count": trees.len(), "trees": trees }), text))
        }
        Command::Dual { family, n, d } => {
            let p = QuadraticPresentation::of_family(family.parse::<Family>()?, *n, *d, field)?;
            let dual = p.koszul_dual();
            let mut text = String::new();
            for (label, q) in [("presentation", &p), ("dual", &dual)] {
                writeln!(text, "{label}: {} of arity {} in degree {}", q.gen().symbol, q.arity(), q.gen().degree)?;
                for r in q.relations() {
                    let r: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                    writeln!(text, "  {}", row_text(&r))?;
                }
            }
            Ok(ok(json!({ "presentation": p.to_json_value(), "dual": dual.to_json_value() }), text))
        }
        Command::Dims { family, n, d, wmax, groebner } => {
            let p = QuadraticPresentation::of_family(family.parse::<Family>()?, *n, *d, field)?;
            let tower = ComponentTower::build(&p, *wmax)?;
            let dims = tower.dims();
            let mut text = String::from("weight  dim\n");
            for (w, k) in dims.iter().enumerate() {
                writeln!(text, "{w:>6}  {k}")?;
            }
            let mut payload = json!({ "dims": dims });
            let mut exit_code = EXIT_OK;
            if *groebner {
                let report: GroebnerReport = crate::components::groebner_check_even(&p, *wmax)?;
                writeln!(text, "extreme-slot count matches: {}", report.ok())?;
                exit_code = check(report.ok());
                payload["groebner"] = serde_json::to_value(&report)?;
            }
            Ok(Outcome { payload, text, exit_code })
        }
        Command::NormalForm { family, n, d, tree, element } => {
            let p = QuadraticPresentation::of_family(family.parse::<Family>()?, *n, *d, field)?;
            let e = match (tree, element) {
                (Some(t), None) => {
                    let t = PlanarTree::parse_sexpr(t, *n)?;
                    let mut e = Element::zero(p.gen().clone(), field);
                    e.add_term(t, field.one())?;
                    e
                }
                (None, Some(s)) => Element::from_json_in(&read_arg(s)?, field)?,
                _ => bail!("give exactly one of --tree and --element"),
            };
            let Some(w) = e.weight() else {
                let zero: Vec<String> = Vec::new();
                return Ok(ok(json!({ "weight": null, "standard": zero, "row": zero }), "0\n".into()));
            };
            let tower = ComponentTower::build(&p, w)?;
            let layer = tower.layer(w).expect("built");
            let row: Vec<String> = layer.reduce(&e)?.iter().map(|x| x.to_string()).collect();
            let standard: Vec<String> = layer.standard_trees().map(|t| t.to_string()).collect();
            let mut text = String::new();
            for (t, c) in standard.iter().zip(&row) {
                writeln!(text, "{c:>8}  {t}")?;
            }
            Ok(ok(json!({ "weight": w, "standard": standard, "row": row }), text))
        }
        Command::Pair { n, i, j } => {
            let g = GeneratorSpec::new("mu", *n, 0)?;
            let unit = |k: usize, gen: GeneratorSpec| -> anyhow::Result<Element> {
                if k == 0 || k > *n {
                    bail!("slot {k} out of range 1..={n}");
                }
                let coeffs: Vec<_> = (1..=*n).map(|s| if s == k { field.one() } else { field.zero() }).collect();
                Ok(Element::quadratic(gen, &coeffs)?)
            };
            let value = pair(&unit(*i, g.dual())?, &unit(*j, g)?)?;
            Ok(ok(json!({ "n": n, "i": i, "j": j, "value": value.to_string() }), format!("{value}\n")))
        }
        Command::CheckAlgebra { file } => {
            let alg = NAryAlgebra::from_json(&read_arg(&format!("@{file}"))?)?;
            let verdict = check_total_associativity(&alg);
            let text = if verdict.is_ok() {
                "totally associative\n".to_string()
            } else {
                format!("not totally associative: {}\n", serde_json::to_string(&verdict)?)
            };
            Ok(Outcome { exit_code: check(verdict.is_ok()), payload: serde_json::to_value(&verdict)?, text })
        }
        Command::Verify { n, degrees, wcap } => {
            let cert = theorem_check_symbolic(*n, &parse_degrees(degrees)?, *wcap, field)?;
            let mut text = format!("weight {}: {} standard monomials\n", cert.weight, cert.monomials.len());
            for m in &cert.monomials {
                if m.ok {
                    writeln!(text, "ok    {}  reduces to 0", m.beta)?;
                } else {
                    writeln!(text, "FAIL  {}  {}", m.beta, row_text(&m.reduced_row))?;
                }
            }
            let exit_code = if cert.ok { EXIT_OK } else { EXIT_FALSIFIED };
            Ok(Outcome { payload: serde_json::to_value(&cert)?, text, exit_code })
        }
        Command::Defect { n, algebra, trials, degrees, seed } => {
            let alg = NAryAlgebra::from_json(&read_arg(&format!("@{algebra}"))?)?;
            let alg = if alg.field() == field { alg } else { reinterpret(&alg, field)? };
            if alg.arity() != *n {
                bail!("algebra has arity {}, expected {n}", alg.arity());
            }
            let verdict = check_total_associativity(&alg);
            if !verdict.is_ok() {
                bail!("algebra is not totally associative: {}", serde_json::to_string(&verdict)?);
            }
            let degrees = match degrees {
                Some(s) => parse_degrees(s)?,
                None => vec![0; 2 * n - 1],
            };
            let report = defect_probes(&Arc::new(alg), &degrees, *trials, *seed)?;
            let text = format!(
                "{} probes, {} zero, defect = {} x common value on every probe: {}\n",
                report.trials, report.zero, report.multiple, report.ok
            );
            Ok(Outcome { exit_code: check(report.ok), payload: serde_json::to_value(&report)?, text })
        }
    }
}

/// The same structure constants read over another field.
fn reinterpret(alg: &NAryAlgebra, field: Field) -> anyhow::Result<NAryAlgebra> {
    let mut doc = alg.to_json_value();
    doc["field"] = json!(field.tag());
    if let Some(c) = doc["c"].as_object_mut() {
        for row in c.values_mut() {
            for x in row.as_array_mut().into_iter().flatten() {
                let s = x.as_str().unwrap_or_default().to_string();
                *x = json!(field.coerce(s.parse()?)?.to_string());
            }
        }
    }
    Ok(NAryAlgebra::from_json(&doc.to_string())?)
}
