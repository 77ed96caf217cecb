//! The `hqds` command-line tool: algebra documents in, reports out.
//!
//! Every command is a pure function of its arguments and input files, so
//! [`run`] returns the full output instead of printing it.

pub mod document;
pub mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hqds_core::algebra::{annihilator, squared_subalgebra};
use hqds_core::catalog::{
    catalog, emit_canonical, family, published_system, published_system_differs, symbolic_system, FamilyLabel,
};
use hqds_core::classify::{classify, ClassifyError, ClassifyOptions};
use hqds_core::derivation::derivation_algebra;
use hqds_core::dynamics::{
    check_equilibrium, check_invariant_set, check_ray_solution, collinearity_statistic, integrate, planarity_statistic,
    InvariantSetSpec,
};
use hqds_core::linalg::{seeded_invertible_matrix, vec_scale, vec_to_f64};
use hqds_core::scalar::{format_rational, parse_rational, Rational};
use hqds_core::tensor::{conjugate, format_field, multiply, quadratic_field, StructureTensor};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use document::{render_matrix, AlgebraDocument, ConjugationRecord, DocumentError};
use report::{ClassificationReport, InvariantBattery};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CLASSIFIABLE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Fraction of the blow-up time covered by the ray check.
const RAY_HORIZON: f64 = 0.9;
/// Seeds per subspace in the invariant-set check.
const INVARIANT_SEEDS: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "hqds", version, about = "Classify and simulate homogeneous quadratic systems on R^3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify an algebra document, or every document in a directory.
    Classify(ClassifyArgs),
    /// Print the canonical document (or system) of a family member.
    Emit(EmitArgs),
    /// Apply a seeded random change of basis to a document.
    Conjugate(ConjugateArgs),
    /// Print annihilator, square, idempotent and derivation data.
    Invariants(PathArgs),
    /// Print a basis of the derivation algebra.
    Derivations(PathArgs),
    /// Integrate the system and run trajectory checks.
    Simulate(SimulateArgs),
    /// List the 35 canonical families.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Equality tolerance for float mode.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EmitArgs {
    #[arg(long)]
    pub family: u8,
    /// Comma-separated rationals such as `1,-1/2`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// Print the quadratic system instead of the document.
    #[arg(long)]
    pub system: bool,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConjugateArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PathArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Ray,
    Planarity,
    Collinearity,
    Equilibrium,
    InvariantSet,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    pub path: PathBuf,
    /// Initial state, e.g. `0,0,1` or `1,-1/2,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    /// End time.
    #[arg(long = "t", default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<Check>,
    /// Write the trajectory as `t,x1,x2,x3` lines.
    #[arg(long)]
    pub export: Option<PathBuf>,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), code }
    }
}

struct Failure(i32, String);

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

type CmdResult = Result<Outcome, Failure>;

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(&a),
        Command::Emit(a) => cmd_emit(&a),
        Command::Conjugate(a) => cmd_conjugate(&a),
        Command::Invariants(a) => cmd_invariants(&a),
        Command::Derivations(a) => cmd_derivations(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Catalog(a) => cmd_catalog(&a),
    };
    result.unwrap_or_else(|Failure(code, msg)| Outcome::fail(code, msg))
}

fn write_json(path: &Option<PathBuf>, value: &impl Serialize) -> Result<(), Failure> {
    if let Some(p) = path {
        let mut text = serde_json::to_string_pretty(value).expect("reports always serialize");
        text.push('\n');
        std::fs::write(p, text).map_err(|e| Failure(EXIT_USAGE, format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn parse_rationals(items: &[String], what: &str) -> Result<Vec<Rational>, Failure> {
    items
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| Failure(EXIT_USAGE, format!("{what}: cannot parse {s:?} as a rational"))))
        .collect()
}

// classify

enum FileOutcome {
    Report(Box<ClassificationReport>, i32),
    Error { source: String, message: String, code: i32 },
}

fn classify_file(path: &Path, opts: &ClassifyOptions) -> FileOutcome {
    let source = path.display().to_string();
    let doc = match AlgebraDocument::load(path) {
        Ok(d) => d,
        Err(e) => return FileOutcome::Error { source, message: e.to_string(), code: EXIT_USAGE },
    };
    let t = doc.tensor().expect("loaded documents hold valid tensors");
    match classify(&t, opts) {
        Ok(result) => {
            let mut report = ClassificationReport::build(&t, &result).with_expectation(doc.expected_family.clone());
            report.source = Some(source);
            report.name = doc.name;
            let code = if report.is_definite() { EXIT_OK } else { EXIT_NOT_CLASSIFIABLE };
            FileOutcome::Report(Box::new(report), code)
        }
        Err(ClassifyError::NotRational) => FileOutcome::Error {
            source,
            message: "adapted eigendata is irrational; rerun with --mode float".into(),
            code: EXIT_NUMERIC,
        },
        Err(e) => FileOutcome::Error { source, message: e.to_string(), code: EXIT_NUMERIC },
    }
}

fn cmd_classify(a: &ClassifyArgs) -> CmdResult {
    let opts = ClassifyOptions { allow_float: a.mode == ModeArg::Float, tol: a.tol, ..Default::default() };
    if a.path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&a.path)
            .map_err(|e| Failure(EXIT_USAGE, format!("cannot read {}: {e}", a.path.display())))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        let mut out = Outcome::ok(String::new());
        let mut json_items: Vec<Value> = Vec::new();
        for f in &files {
            match classify_file(f, &opts) {
                FileOutcome::Report(r, code) => {
                    out.stdout.push_str(&r.render_text());
                    out.stdout.push('\n');
                    json_items.push(serde_json::to_value(&*r).expect("reports always serialize"));
                    out.code = out.code.max(code);
                }
                FileOutcome::Error { source, message, code } => {
                    writeln!(out.stderr, "error: {source}: {message}").unwrap();
                    json_items.push(json!({ "source": source, "error": message, "exit_code": code }));
                    out.code = out.code.max(code);
                }
            }
        }
        writeln!(out.stdout, "{} document(s) processed", files.len()).unwrap();
        write_json(&a.json_out, &json_items)?;
        return Ok(out);
    }
    match classify_file(&a.path, &opts) {
        FileOutcome::Report(r, code) => {
            write_json(&a.json_out, &*r)?;
            Ok(Outcome { stdout: r.render_text(), stderr: String::new(), code })
        }
        FileOutcome::Error { message, code, .. } => Err(Failure(code, message)),
    }
}

// emit

fn cmd_emit(a: &EmitArgs) -> CmdResult {
    let params = parse_rationals(&a.params, "--params")?;
    if family(a.family).is_none() {
        return Err(Failure(EXIT_USAGE, format!("unknown family A{}; valid indices are 1 to 35", a.family)));
    }
    let label = FamilyLabel::new(a.family, params);
    let t = emit_canonical(&label, 0.0).map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
    let rendered: Vec<String> = label.params.iter().map(format_rational).collect();
    if a.system {
        let system = format_field(&quadratic_field(&t));
        let mut text = format!("{system}\n");
        let mut value = json!({ "family": label.name(), "params": rendered, "system": system.lines().collect::<Vec<_>>() });
        if published_system_differs(&label) {
            let printed = format_field(&published_system(label.index, &label.params));
            writeln!(text, "note: the published listing of this system differs from the table:\n{printed}").unwrap();
            value["published_system"] = json!(printed.lines().collect::<Vec<_>>());
        }
        write_json(&a.json_out, &value)?;
        return Ok(Outcome::ok(text));
    }
    let mut doc = AlgebraDocument::from_tensor(&t);
    doc.name = Some(if rendered.is_empty() {
        label.name()
    } else {
        format!("{}({})", label.name(), rendered.join(", "))
    });
    doc.expected_family = Some(label.name());
    write_json(&a.json_out, &doc)?;
    Ok(Outcome::ok(doc.to_json() + "\n"))
}

// conjugate

fn cmd_conjugate(a: &ConjugateArgs) -> CmdResult {
    let doc = AlgebraDocument::load(&a.path)?;
    let t = doc.tensor()?;
    let s = seeded_invertible_matrix(a.seed);
    let conj = conjugate(&t, &s, 0.0).expect("seeded matrices are invertible");
    let out = AlgebraDocument {
        name: doc.name,
        expected_family: doc.expected_family,
        conjugation: Some(ConjugationRecord { seed: a.seed, matrix: render_matrix(&s) }),
        ..AlgebraDocument::from_tensor(&conj)
    };
    write_json(&a.json_out, &out)?;
    Ok(Outcome::ok(out.to_json() + "\n"))
}

// invariants / derivations

fn cmd_invariants(a: &PathArgs) -> CmdResult {
    let t = AlgebraDocument::load(&a.path)?.tensor()?;
    let battery = InvariantBattery::compute(&t);
    write_json(&a.json_out, &battery)?;
    let mut text = String::new();
    battery.render_text(&mut text);
    Ok(Outcome::ok(text))
}

fn cmd_derivations(a: &PathArgs) -> CmdResult {
    let t = AlgebraDocument::load(&a.path)?.tensor()?;
    let der = derivation_algebra(&t);
    let basis: Vec<[[String; 3]; 3]> = der.basis.iter().map(render_matrix).collect();
    write_json(&a.json_out, &json!({ "dimension": der.dimension(), "basis": basis }))?;
    let mut text = format!("dim Der A = {}\n", der.dimension());
    for (i, m) in basis.iter().enumerate() {
        writeln!(text, "D{}:", i + 1).unwrap();
        for row in m {
            writeln!(text, "  [{}]", row.join(", ")).unwrap();
        }
    }
    Ok(Outcome::ok(text))
}

// simulate

/// `c` with `x·x = c·x` and `c ≠ 0`, so that `x/c` is idempotent.
fn ray_scale(t: &StructureTensor, x: &[Rational; 3]) -> Option<Rational> {
    let sq = multiply(t, x, x);
    let i = (0..3).find(|&i| !x[i].is_zero())?;
    let c = sq[i].clone() / x[i].clone();
    (!c.is_zero() && vec_scale(&c, x) == sq).then_some(c)
}

fn cmd_simulate(a: &SimulateArgs) -> CmdResult {
    let t = AlgebraDocument::load(&a.path)?.tensor()?;
    let parts: Vec<String> = a.x0.split(',').map(|s| s.trim().to_string()).collect();
    if parts.len() != 3 {
        return Err(Failure(EXIT_USAGE, format!("--x0 needs three comma-separated values, got {:?}", a.x0)));
    }
    let x0q = parse_rationals(&parts, "--x0")?;
    let x0q: [Rational; 3] = [x0q[0].clone(), x0q[1].clone(), x0q[2].clone()];
    let x0 = vec_to_f64(&x0q);
    let bad_input = |e: hqds_core::dynamics::DynamicsError| Failure(EXIT_USAGE, e.to_string());
    let rec = integrate(&t, x0, a.t_end, a.dt).map_err(bad_input)?;
    if let Some(p) = &a.export {
        let file = std::fs::File::create(p).map_err(|e| Failure(EXIT_USAGE, format!("cannot write {}: {e}", p.display())))?;
        rec.write_delimited(std::io::BufWriter::new(file))
            .map_err(|e| Failure(EXIT_USAGE, format!("cannot write {}: {e}", p.display())))?;
    }

    let mut text = String::new();
    let fin = rec.final_state();
    writeln!(text, "steps: {}", rec.states.len() - 1).unwrap();
    writeln!(text, "final time: {}", rec.final_time()).unwrap();
    writeln!(text, "final state: ({}, {}, {})", fin[0], fin[1], fin[2]).unwrap();
    if rec.blew_up() {
        writeln!(text, "halted: blow-up approached").unwrap();
    }
    let mut checks = serde_json::Map::new();
    for check in &a.checks {
        let (line, value) = match check {
            Check::Equilibrium => {
                let r = check_equilibrium(&t, &x0q);
                (format!("equilibrium residual: {r:e}"), json!({ "residual": r, "equilibrium": r == 0.0 }))
            }
            Check::Ray => match ray_scale(&t, &x0q) {
                Some(c) => {
                    let u = vec_scale(&(Rational::from_integer(1.into()) / c.clone()), &x0q);
                    let c0 = hqds_core::scalar::Scalar::to_f64(&c);
                    let err = check_ray_solution(&t, &u, c0, RAY_HORIZON, a.dt).map_err(bad_input)?;
                    (
                        format!("ray error: {err:e} (idempotent {}, c0 = {})", render_vector(&u), format_rational(&c)),
                        json!({ "max_relative_error": err, "idempotent": u.iter().map(format_rational).collect::<Vec<_>>(), "c0": format_rational(&c) }),
                    )
                }
                None => (
                    "ray: skipped, x0 is not a nonzero multiple of an idempotent".to_string(),
                    json!({ "skipped": "x0 is not a nonzero multiple of an idempotent" }),
                ),
            },
            Check::Planarity => {
                let s = planarity_statistic(&t, x0, a.t_end, a.dt).map_err(bad_input)?;
                (format!("planarity statistic: {s:e}"), json!({ "statistic": s }))
            }
            Check::Collinearity => {
                let s = collinearity_statistic(&t, x0, a.t_end, a.dt).map_err(bad_input)?;
                (format!("collinearity statistic: {s:e}"), json!({ "statistic": s }))
            }
            Check::InvariantSet => {
                let mut lines = Vec::new();
                let mut items = Vec::new();
                for (name, sub) in [("Ann A", annihilator(&t)), ("A^2", squared_subalgebra(&t))] {
                    if sub.dim() == 0 || sub.dim() == 3 {
                        continue;
                    }
                    let spec = InvariantSetSpec::Subspace { basis: sub.basis().iter().map(vec_to_f64).collect() };
                    let drift = check_invariant_set(&t, &spec, INVARIANT_SEEDS, a.t_end, a.dt).map_err(bad_input)?;
                    lines.push(format!("invariant {name}: drift {drift:e}"));
                    items.push(json!({ "set": name, "drift": drift }));
                }
                if lines.is_empty() {
                    lines.push("invariant sets: no proper nonzero Ann A or A^2".into());
                }
                (lines.join("\n"), Value::Array(items))
            }
        };
        writeln!(text, "{line}").unwrap();
        checks.insert(serde_json::to_value(check).unwrap().as_str().unwrap().to_string(), value);
    }
    let value = json!({
        "x0": x0,
        "t_end": a.t_end,
        "dt": a.dt,
        "steps": rec.states.len() - 1,
        "final_time": rec.final_time(),
        "final_state": fin,
        "blow_up": rec.blew_up(),
        "checks": checks,
    });
    write_json(&a.json_out, &value)?;
    Ok(Outcome::ok(text))
}

fn render_vector(v: &[Rational; 3]) -> String {
    format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

// catalog

#[derive(Serialize)]
struct CatalogEntry {
    family: String,
    table: String,
    params: Vec<&'static str>,
    range: &'static str,
    dim_der: usize,
    dim_ann: usize,
    dim_square: usize,
    idempotent_locus: String,
    ideals: Vec<Vec<[i64; 3]>>,
    system: Vec<String>,
}

fn cmd_catalog(a: &CatalogArgs) -> CmdResult {
    let entries: Vec<CatalogEntry> = catalog()
        .iter()
        .map(|f| CatalogEntry {
            family: f.name(),
            table: f.table.to_string(),
            params: f.param_names.to_vec(),
            range: f.range,
            dim_der: f.dim_der,
            dim_ann: f.dim_ann,
            dim_square: f.dim_square,
            idempotent_locus: format!("{:?}", f.locus),
            ideals: f.ideals.iter().map(|b| b.to_vec()).collect(),
            system: symbolic_system(f.index).expect("catalog index").lines().map(String::from).collect(),
        })
        .collect();
    write_json(&a.json_out, &entries)?;
    let mut text = String::new();
    for e in &entries {
        let params = if e.params.is_empty() { String::new() } else { format!("({})", e.params.join(", ")) };
        let range = if e.range.is_empty() { String::new() } else { format!(" [{}]", e.range) };
        writeln!(
            text,
            "{}{params}{range}  table {}  dim Der {}  dim Ann {}  dim A^2 {}  idempotents: {}",
            e.family, e.table, e.dim_der, e.dim_ann, e.dim_square, e.idempotent_locus
        )
        .unwrap();
        for line in &e.system {
            writeln!(text, "    {line}").unwrap();
        }
    }
    writeln!(text, "{} families", entries.len()).unwrap();
    Ok(Outcome::ok(text))
}
