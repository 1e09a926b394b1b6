//! Command-line front end.
//!
//! Every verb prints one report on standard output, as pretty JSON or as
//! `path = value` lines. Exit status is 0 on success, 2 for invalid input and
//! 3 when a resource guard or search limit is hit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::deformation::{
    an_summands, build_deformation, central_fibre, central_fibre_has_inherited_functional, fibre_presentation,
    hypersurface_canonicity_check, DeformationDesc,
};
use crate::error::{Error, Result};
use crate::lattice::{kernel_basis, LatticeMatrix, LatticeVector};
use crate::polyhedra::{ConeDesc, PolytopeDesc};
use crate::terminalize::{
    build_flop_example, reid_circuit_flip, search_crepant_triangulation, terminalization_report, verify_triangulation,
    TriangulationDesc,
};
use crate::toric::{classify_cone, cyclic_quotient_classify, QuotientActionDesc};

#[derive(Debug, Parser)]
#[command(name = "simterm", version, about = "Exact toric deformations and simultaneous terminalizations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a cone, or the cyclic quotient given by --l and --weights.
    Classify {
        #[arg(long)]
        cone: Option<PathBuf>,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
    },
    /// Build a deformation from summands and describe its central fibre.
    Deform {
        #[arg(long)]
        summands: PathBuf,
    },
    /// Fibre presentation of a chart of a deformation.
    Fibre {
        #[arg(long)]
        summands: PathBuf,
        /// The chart, as a cone file.
        #[arg(long)]
        cone: PathBuf,
    },
    /// Terminalization report; searches for a triangulation unless one is given.
    Terminalize {
        #[arg(long)]
        summands: PathBuf,
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// The two sides of a circuit flip. The cone file may carry a "relation".
    Flip {
        #[arg(long)]
        cone: PathBuf,
    },
    /// The flop family with exceptional sets P(1,a,b).
    Flop {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Run a named corpus against its expected values.
    Corpus {
        #[arg(value_enum)]
        name: CorpusName,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
        #[arg(long)]
        p: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CorpusName {
    An,
    Flop,
    Section3,
}

/// Summand input file: `{"n": int, "summands": [{"vertices": [...]}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummandsInput {
    pub n: usize,
    pub summands: Vec<PolytopeDesc>,
}

/// Cone input file, optionally with a circuit relation for `flip`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct RaysInput {
    dim: usize,
    rays: Vec<LatticeVector>,
    #[serde(default)]
    relation: Option<LatticeVector>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status together with what goes to stdout and stderr.
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    match run(&cli) {
        Ok(value) => (0, render(&value, cli.format), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let (code, out, err) = run_args(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    code
}

pub fn run(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Classify { cone, l, weights } => classify(cone.as_deref(), *l, weights.as_deref()),
        Command::Deform { summands } => deform(&read_deformation(summands)?),
        Command::Fibre { summands, cone } => {
            let d = read_deformation(summands)?;
            let chart = read_cone(cone)?;
            to_value(&fibre_presentation(&d, &chart)?)
        }
        Command::Terminalize { summands, triangulation } => {
            let d = read_deformation(summands)?;
            let t = match triangulation {
                Some(p) => read_json::<TriangulationDesc>(p)?,
                None => search_crepant_triangulation(d.cone())?,
            };
            let report = terminalization_report(&d, &t)?;
            Ok(json!({ "triangulation": to_value(&t)?, "report": to_value(&report)? }))
        }
        Command::Flip { cone } => flip(&read_json::<RaysInput>(cone)?),
        Command::Flop { a, b } => to_value(&build_flop_example(*a, *b)?),
        Command::Corpus { name, a, b, k, l, weights, p } => match name {
            CorpusName::An => corpus_an(k.unwrap_or(2)),
            CorpusName::Flop => corpus_flop(a.unwrap_or(1), b.unwrap_or(1)),
            CorpusName::Section3 => {
                let weights = weights.clone().unwrap_or_else(|| vec![1, 1, 1, 1]);
                corpus_section3(l.unwrap_or(2), &weights, p.unwrap_or(2))
            }
        },
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_cone(path: &Path) -> Result<ConeDesc> {
    let input: RaysInput = read_json(path)?;
    ConeDesc::new(input.dim, input.rays)
}

fn read_deformation(path: &Path) -> Result<DeformationDesc> {
    let input: SummandsInput = read_json(path)?;
    build_deformation(&input.summands, input.n)
}

fn classify(cone: Option<&Path>, l: Option<u64>, weights: Option<&[i64]>) -> Result<Value> {
    match (cone, l, weights) {
        (Some(path), None, None) => to_value(&classify_cone(&read_cone(path)?)?),
        (None, Some(l), Some(w)) => to_value(&cyclic_quotient_classify(&QuotientActionDesc::cyclic(l, w)?)?),
        _ => Err(Error::InvalidInput("classify takes either --cone or both --l and --weights".into())),
    }
}

fn deform(d: &DeformationDesc) -> Result<Value> {
    let fibre = central_fibre(d)?;
    Ok(json!({
        "deformation": to_value(d)?,
        "markers": to_value(&d.markers())?,
        "l_basis": to_value(&d.l_basis())?,
        "fibre_basis": to_value(&d.fibre_basis())?,
        "central_fibre": to_value(&fibre)?,
        "central_fibre_flags": classify_cone(&fibre).ok().map(|f| to_value(&f)).transpose()?,
        "inherited_functional": to_value(&d.inherited_functional())?,
        "central_fibre_gorenstein_at_height_one": central_fibre_has_inherited_functional(d)?,
    }))
}

fn flip(input: &RaysInput) -> Result<Value> {
    let relation = match &input.relation {
        Some(r) => r.clone(),
        None => {
            let kernel = kernel_basis(&LatticeMatrix::from_columns(input.dim, &input.rays)?);
            match kernel.as_slice() {
                [r] => r.clone(),
                _ => return Err(Error::NotACircuit(format!("the rays satisfy {} independent relations", kernel.len()))),
            }
        }
    };
    let (left, right) = reid_circuit_flip(&input.rays, relation.coords())?;
    Ok(json!({
        "relation": to_value(&relation)?,
        "left": to_value(&left)?,
        "right": to_value(&right)?,
        "left_check": to_value(&verify_triangulation(&left))?,
        "right_check": to_value(&verify_triangulation(&right))?,
    }))
}

/// One comparison against a stored expectation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub corpus: String,
    pub parameters: Value,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub mismatches: Vec<String>,
    pub details: Value,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn expect(&mut self, name: &str, expected: Value, actual: Value) {
        let ok = expected == actual;
        self.0.push(Check { name: name.into(), expected, actual, ok });
    }

    fn finish(self, corpus: &str, parameters: Value, details: Value) -> Result<Value> {
        let mismatches: Vec<String> = self
            .0
            .iter()
            .filter(|c| !c.ok)
            .map(|c| format!("{}: expected {}, found {}", c.name, c.expected, c.actual))
            .collect();
        to_value(&CorpusReport {
            corpus: corpus.into(),
            parameters,
            passed: mismatches.is_empty(),
            checks: self.0,
            mismatches,
            details,
        })
    }
}

fn corpus_an(k: usize) -> Result<Value> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let d = build_deformation(&an_summands(k), 2)?;
    let fibre = central_fibre(&d)?;
    let t = search_crepant_triangulation(d.cone())?;
    let check = verify_triangulation(&t);
    let report = terminalization_report(&d, &t)?;
    let mut c = Checks::default();
    c.expect("central_fibre", json!([[0, 1], [k + 1, 1]]), to_value(&fibre.rays())?);
    c.expect("cells", json!(k + 1), json!(t.cells().len()));
    c.expect("parent_volume", json!(k + 1), crate::json::rational_value(&check.parent_volume));
    c.expect("covers_proper_crepant", json!(true), json!(check.covers && check.proper && check.crepant));
    c.expect("all_cells_unimodular", json!(true), json!(report.all_cells_unimodular));
    let staircase = report.cells.iter().all(|cell| {
        cell.fibre_presentation.as_ref().is_some_and(|fp| {
            let sizes = fp.block_sizes();
            sizes.iter().filter(|&&s| s == 2).count() == 1 && sizes.iter().all(|&s| s == 1 || s == 2)
        })
    });
    c.expect("one_block_of_size_two_per_chart", json!(true), json!(staircase));
    c.expect("simultaneous_resolution", json!(true), json!(report.simultaneous_resolution));
    let details = json!({
        "simultaneous_resolution": report.simultaneous_resolution,
        "central_fibre": to_value(&fibre)?,
        "triangulation": to_value(&t)?,
        "report": to_value(&report)?,
    });
    c.finish("an", json!({ "k": k }), details)
}

fn corpus_flop(a: u64, b: u64) -> Result<Value> {
    let pair = build_flop_example(a, b)?;
    let (ai, bi) = (a as i64, b as i64);
    let mut c = Checks::default();
    c.expect(
        "generators",
        json!([[1, 0, 1, 0, 0], [0, 0, 1, 0, 0], [0, 1, 0, 1, 0], [0, 0, 0, 1, 0], [-ai, -bi, 0, 0, 1], [0, 0, 0, 0, 1]]),
        to_value(&pair.generators)?,
    );
    let combination = pair
        .generators
        .iter()
        .zip(pair.circuit_relation.coords())
        .fold(LatticeVector::zero(5), |acc, (r, k)| &acc + &r.scaled(k));
    c.expect("relation_vanishes", json!(true), json!(combination.is_zero()));
    for (side, t) in [("left", &pair.left), ("right", &pair.right)] {
        let r = verify_triangulation(t);
        c.expect(&format!("{side}_covers_proper_crepant"), json!(true), json!(r.covers && r.proper && r.crepant));
    }
    let mut weights = vec![1, a, b];
    weights.sort();
    c.expect("exceptional_weights_left", json!(weights), crate::json::ints_value(&pair.exceptional_weights_left));
    c.expect("exceptional_weights_right", json!(weights), crate::json::ints_value(&pair.exceptional_weights_right));
    c.expect("left_chart_indices", json!([1, a, b]), crate::json::ints_value(&pair.left_chart_indices));
    c.expect("right_chart_indices", json!([1, a, b]), crate::json::ints_value(&pair.right_chart_indices));
    let fibre = central_fibre(&pair.base)?;
    let mut hexagon = vec![
        LatticeVector::from_i64s(&[1, 0, 1]),
        LatticeVector::from_i64s(&[0, 1, 1]),
        LatticeVector::from_i64s(&[-ai, -bi, 1]),
        LatticeVector::from_i64s(&[1, 1, 1]),
        LatticeVector::from_i64s(&[-ai, 1 - bi, 1]),
        LatticeVector::from_i64s(&[1 - ai, -bi, 1]),
    ];
    hexagon.sort();
    c.expect("central_fibre", to_value(&hexagon)?, to_value(&fibre.rays())?);
    let left = terminalization_report(&pair.base, &pair.left)?;
    let right = terminalization_report(&pair.base, &pair.right)?;
    let details = json!({
        "flop": to_value(&pair)?,
        "left_report": to_value(&left)?,
        "right_report": to_value(&right)?,
    });
    c.finish("flop", json!({ "a": a, "b": b }), details)
}

/// Stored expectations for the quotient and hypersurface checks:
/// `(l, weights, p) -> (gorenstein, canonical, terminal, inequality)`.
const SECTION3_EXPECTED: &[(u64, &[i64], usize, [bool; 4])] = &[
    (2, &[1, 1, 1, 1], 2, [true, true, true, true]),
    (2, &[1, 1], 1, [true, true, false, true]),
    (2, &[1, 1, 1, 1, 1, 1], 3, [true, true, true, false]),
    (1, &[0, 0, 0], 1, [true, true, true, true]),
];

fn corpus_section3(l: u64, weights: &[i64], p: usize) -> Result<Value> {
    let q = QuotientActionDesc::cyclic(l, weights)?;
    let flags = cyclic_quotient_classify(&q)?;
    let w: Vec<BigInt> = weights.iter().map(|&x| BigInt::from(x)).collect();
    let inequality = hypersurface_canonicity_check(&BigInt::from(l), &w, p)?;
    let gorenstein_terminal = flags.is_gorenstein && flags.is_terminal;
    let mut c = Checks::default();
    if let Some((.., e)) = SECTION3_EXPECTED.iter().find(|(el, ew, ep, _)| *el == l && *ew == weights && *ep == p) {
        c.expect("gorenstein", json!(e[0]), json!(flags.is_gorenstein));
        c.expect("canonical", json!(e[1]), json!(flags.is_canonical));
        c.expect("terminal", json!(e[2]), json!(flags.is_terminal));
        c.expect("inequality", json!(e[3]), json!(inequality));
    }
    let sum: i64 = weights.iter().sum();
    c.expect("gorenstein_matches_weight_sum", json!(sum.rem_euclid(l as i64) == 0), json!(flags.is_gorenstein));
    let details = json!({
        "quotient": to_value(&flags)?,
        "quotient_gorenstein_terminal": gorenstein_terminal,
        "inequality": inequality,
    });
    c.finish("section3", json!({ "l": l, "weights": weights, "p": p }), details)
}

/// Renders a report as pretty JSON or as sorted `path = value` lines.
pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            flatten(value, String::new(), &mut out);
            out
        }
    }
}

fn flatten(value: &Value, path: String, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(v, p, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{path} = [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{path}[{i}]"), out);
            }
        }
        v => {
            let _ = writeln!(out, "{path} = {}", scalar(v));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
