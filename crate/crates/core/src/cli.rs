//! Command-line front end.
//!
//! Every successful run prints one document on stdout carrying
//! `schema_version`, `tool_version` and the full parsed `config`. Domain
//! errors print `{code, message}` on stderr and exit 1; usage errors exit 2.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::analysis::{self, compare, paper_amplitude, paper_claims_check, KMode, Verdict};
use crate::builders::{build_grover_diagram_capped, indicator, register};
use crate::diagram::Diagram;
use crate::eval::{eval_with, EvalOptions, DEFAULT_MAX_ENTRIES};
use crate::rewrite::{check_rule_soundness, diagram_weight, normalize, rule_by_name, rules_catalog, RewriteError};
use crate::serial::{self, SerialError};
use crate::sim::{grover_run_with, optimal_iterations, OracleFunction, OracleMode, SimLimits, MAX_QUBITS_ENV};
use crate::{tolerance, SCHEMA_VERSION, TOOL_VERSION};

/// JSON schemas for every emitted document, by name.
pub const SCHEMAS: &[(&str, &str)] = &[
    ("simulate", include_str!("../schemas/simulate.schema.json")),
    ("formula", include_str!("../schemas/formula.schema.json")),
    ("claims", include_str!("../schemas/claims.schema.json")),
    ("compare", include_str!("../schemas/compare.schema.json")),
    ("diagram-eval", include_str!("../schemas/diagram-eval.schema.json")),
    ("diagram-normalize", include_str!("../schemas/diagram-normalize.schema.json")),
    ("diagram-grover", include_str!("../schemas/diagram-grover.schema.json")),
    ("rules-check", include_str!("../schemas/rules-check.schema.json")),
    ("diagram", include_str!("../schemas/diagram.schema.json")),
    ("error", include_str!("../schemas/error.schema.json")),
];

pub fn schema(name: &str) -> Option<&'static str> {
    SCHEMAS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "grover-lab", version, about = "Grover search: simulation, string diagrams and a closed-form amplitude")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the state-vector simulator.
    Simulate(SimulateArgs),
    /// Evaluate the closed-form amplitude.
    Formula(FormulaArgs),
    /// Check the claimed bounds over a range of register sizes.
    Claims(ClaimsArgs),
    /// Compare simulator, diagram evaluation and the closed form.
    Compare(CompareArgs),
    /// Evaluate a diagram file to a dense matrix.
    DiagramEval(DiagramEvalArgs),
    /// Normalize a diagram file with the rewrite catalog.
    DiagramNormalize(DiagramNormalizeArgs),
    /// Build the Grover diagram as a diagram document.
    DiagramGrover(DiagramGroverArgs),
    /// Check rewrite rules against the dense semantics.
    RulesCheck(RulesCheckArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Formula(_) => "formula",
            Command::Claims(_) => "claims",
            Command::Compare(_) => "compare",
            Command::DiagramEval(_) => "diagram-eval",
            Command::DiagramNormalize(_) => "diagram-normalize",
            Command::DiagramGrover(_) => "diagram-grover",
            Command::RulesCheck(_) => "rules-check",
        }
    }
}

/// An iteration count or one of the named modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationsArg {
    Count(usize),
    Paper,
    Optimal,
}

impl IterationsArg {
    fn resolve(self, n: u32) -> usize {
        match self {
            IterationsArg::Count(k) => k,
            IterationsArg::Paper => optimal_iterations(n).paper_mode,
            IterationsArg::Optimal => optimal_iterations(n).optimal_mode,
        }
    }
}

impl FromStr for IterationsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(IterationsArg::Paper),
            "optimal" => Ok(IterationsArg::Optimal),
            _ => s
                .parse()
                .map(IterationsArg::Count)
                .map_err(|_| format!("'{s}' is not an iteration count, 'paper' or 'optimal'")),
        }
    }
}

impl fmt::Display for IterationsArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IterationsArg::Count(k) => write!(f, "{k}"),
            IterationsArg::Paper => f.write_str("paper"),
            IterationsArg::Optimal => f.write_str("optimal"),
        }
    }
}

impl Serialize for IterationsArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            IterationsArg::Count(k) => s.serialize_u64(*k as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// A real exponent or `sqrt` for `√N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExponentArg {
    Sqrt,
    Value(f64),
}

impl FromStr for ExponentArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "sqrt" {
            return Ok(ExponentArg::Sqrt);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(ExponentArg::Value(v)),
            _ => Err(format!("'{s}' is not a finite number or 'sqrt'")),
        }
    }
}

impl Serialize for ExponentArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExponentArg::Sqrt => s.serialize_str("sqrt"),
            ExponentArg::Value(v) => s.serialize_f64(*v),
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    /// Number of qubits.
    #[arg(long)]
    n: u32,
    /// Marked elements, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    marked: Vec<usize>,
    /// Iteration count, or `paper` / `optimal`.
    #[arg(long, default_value = "paper")]
    iterations: IterationsArg,
    /// Oracle implementation: `phase` or `ancilla`.
    #[arg(long = "oracle-mode", default_value = "phase")]
    oracle_mode: OracleMode,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("size").required(true).args(["n", "set_size"])))]
struct FormulaArgs {
    /// Number of qubits; the set size is 2^n.
    #[arg(long)]
    n: Option<u32>,
    /// Set size N, any real number above 2.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    set_size: Option<f64>,
    /// Exponent k, or `sqrt` for √N.
    #[arg(long, default_value = "sqrt")]
    k: ExponentArg,
}

#[derive(Debug, Args, Serialize)]
struct ClaimsArgs {
    #[arg(long = "n-min", default_value_t = 2)]
    n_min: u32,
    #[arg(long = "n-max", default_value_t = 20)]
    n_max: u32,
    /// Registers above this size use the closed-form marked probability.
    #[arg(long = "simulate-up-to", default_value_t = analysis::CLAIMS_SIMULATION_MAX_QUBITS)]
    simulate_up_to: u32,
}

#[derive(Debug, Args, Serialize)]
struct CompareArgs {
    #[arg(long)]
    n: u32,
    /// `paper` (round √2^n) or `optimal` (floor π/4·√2^n).
    #[arg(long = "k-mode", default_value = "paper")]
    k_mode: KMode,
    /// The single marked element.
    #[arg(long, default_value_t = 0)]
    marked: usize,
    /// Allowed diagram-vs-simulator probability deviation.
    #[arg(long, default_value_t = tolerance::DIAGRAM_VS_SIMULATOR)]
    tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
struct DiagramEvalArgs {
    /// Diagram document.
    path: PathBuf,
    /// Cap on the entries of any evaluated matrix.
    #[arg(long = "max-entries", default_value_t = DEFAULT_MAX_ENTRIES)]
    max_entries: usize,
}

#[derive(Debug, Args, Serialize)]
struct DiagramNormalizeArgs {
    path: PathBuf,
    #[arg(long = "max-steps", default_value_t = 10_000)]
    max_steps: usize,
    /// Cap used when checking that the value is preserved.
    #[arg(long = "max-entries", default_value_t = DEFAULT_MAX_ENTRIES)]
    max_entries: usize,
}

#[derive(Debug, Args, Serialize)]
struct DiagramGroverArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    marked: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    iterations: usize,
    /// Also write the bare diagram document here.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long = "max-entries", default_value_t = DEFAULT_MAX_ENTRIES)]
    max_entries: usize,
}

#[derive(Debug, Args, Serialize)]
struct RulesCheckArgs {
    /// Rules to check; all when omitted.
    #[arg(long = "rule")]
    rules: Vec<String>,
    /// Set and group sizes to instantiate.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,8")]
    sizes: Vec<usize>,
}

/// A domain error reported as `{code, message}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    fn new(code: &str, message: impl fmt::Display) -> Self {
        Self { code: code.to_string(), message: message.to_string() }
    }
}

macro_rules! coded {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(e.code(), &e)
            }
        }
    )*};
}

coded!(
    analysis::AnalysisError,
    crate::sim::SimError,
    SerialError,
    crate::DiagramError,
    crate::EvalError,
    RewriteError
);

/// Rows for CSV output, each a flat JSON object.
struct Output {
    document: Value,
    rows: Vec<Value>,
}

fn limits_from_env() -> Result<SimLimits, CliError> {
    match std::env::var(MAX_QUBITS_ENV) {
        Err(_) => Ok(SimLimits::default()),
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_qubits| SimLimits { max_qubits })
            .map_err(|_| CliError::new("invalid-env", format!("{MAX_QUBITS_ENV}={v:?} is not a qubit count"))),
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn complex_pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn simulate(a: &SimulateArgs, limits: &SimLimits) -> Result<Output, CliError> {
    let f = OracleFunction::new(a.n, a.marked.iter().copied())?;
    let k = a.iterations.resolve(a.n);
    let table = grover_run_with(a.n, &f, k, a.oracle_mode, limits)?;
    let rows = table
        .probabilities
        .iter()
        .enumerate()
        .map(|(x, p)| json!({"element": x, "probability": p, "marked": f.is_marked(x)}))
        .collect();
    let mut doc = to_value(&table);
    let obj = doc.as_object_mut().expect("object");
    obj.insert("k".into(), json!(k));
    obj.insert("mode".into(), json!(a.oracle_mode));
    obj.insert("marked".into(), json!(f.marked()));
    Ok(Output { document: doc, rows })
}

fn formula(a: &FormulaArgs) -> Result<Output, CliError> {
    let size = match (a.n, a.set_size) {
        (Some(n), _) if n > 1023 => return Err(CliError::new("domain-error", format!("2^{n} is not a finite double"))),
        (Some(n), _) => 2f64.powi(n as i32),
        (None, Some(size)) => size,
        (None, None) => unreachable!("clap requires one of --n and --N"),
    };
    let k = match a.k {
        ExponentArg::Sqrt => size.sqrt(),
        ExponentArg::Value(k) => k,
    };
    let amp = paper_amplitude(size, k)?;
    let mut record = to_value(&amp);
    record["A"] = json!(amp.simplified_value);
    record["A_squared"] = json!(amp.simplified_value * amp.simplified_value);
    let agree = amp.relative_gap <= tolerance::AMPLITUDE_FORMS_RELATIVE;
    Ok(Output {
        document: json!({"records": [record.clone()], "verdicts": {"forms_agree": Verdict::from(agree)}}),
        rows: vec![record],
    })
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn claims(a: &ClaimsArgs, limits: &SimLimits) -> Result<Output, CliError> {
    let report = paper_claims_check(a.n_min, a.n_max, a.simulate_up_to, limits)?;
    let records: Vec<Value> = report.records.iter().map(to_value).collect();
    Ok(Output { document: json!({"records": records, "verdicts": report.verdicts}), rows: records })
}

fn comparison(a: &CompareArgs, limits: &SimLimits) -> Result<Output, CliError> {
    let report = compare(a.n, a.k_mode, a.marked, limits)?;
    let matches = match &report.diagram {
        Some(d) => Verdict::from(d.max_deviation_from_simulator <= a.tolerance),
        None => Verdict::NotApplicable,
    };
    let record = to_value(&report);
    Ok(Output {
        document: json!({"records": [record.clone()], "verdicts": {"diagram_matches_simulator": matches}}),
        rows: vec![record],
    })
}

/// Reads a bare diagram document or a `diagram-grover` report carrying one.
fn load_diagram(path: &std::path::Path) -> Result<Diagram, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        let path = path.display().to_string();
        if e.kind() == std::io::ErrorKind::NotFound {
            SerialError::NotFound { path }
        } else {
            SerialError::Io { path, message: e.to_string() }
        }
    })?;
    if let Ok(Value::Object(obj)) = serde_json::from_str::<Value>(&text) {
        if let (Some(inner), true) = (obj.get("diagram"), obj.contains_key("schema_version")) {
            let doc = serde_json::from_value(inner.clone())
                .map_err(|e| CliError::new("parse-error", format!("embedded diagram: {e}")))?;
            return Ok(serial::from_document(&doc)?);
        }
    }
    Ok(serial::parse(&text)?)
}

fn names(spaces: &[crate::SpaceLabel]) -> Vec<&str> {
    spaces.iter().map(|s| s.name()).collect()
}

fn diagram_eval(a: &DiagramEvalArgs) -> Result<Output, CliError> {
    let d = load_diagram(&a.path)?;
    let m = eval_with(&d, &EvalOptions { max_entries: a.max_entries })?;
    let rows = (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .map(|(r, c)| {
            let z = m.get(r, c);
            json!({"row": r, "col": c, "re": z.re, "im": z.im})
        })
        .collect();
    let scalar = if d.is_closed() { complex_pair(m.get(0, 0)) } else { Value::Null };
    Ok(Output {
        document: json!({
            "inputs": names(d.inputs()),
            "outputs": names(d.outputs()),
            "tensor": m,
            "scalar": scalar,
        }),
        rows,
    })
}

fn diagram_normalize(a: &DiagramNormalizeArgs) -> Result<Output, CliError> {
    let d = load_diagram(&a.path)?;
    let (trace, exhausted) = match normalize(&d, a.max_steps) {
        Ok(t) => (t, false),
        Err(RewriteError::StepBudgetExhausted { partial, .. }) => (*partial, true),
        Err(e) => return Err(e.into()),
    };
    let opts = EvalOptions { max_entries: a.max_entries };
    let deviation = match (eval_with(&trace.initial, &opts), eval_with(&trace.result, &opts)) {
        (Ok(x), Ok(y)) => json!(x.max_abs_diff(&y)),
        _ => Value::Null,
    };
    let rows = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| json!({"step": i, "rule": s.rule, "slice": s.slice, "wire": s.wire}))
        .collect();
    Ok(Output {
        document: json!({
            "steps": trace.steps,
            "budget_exhausted": exhausted,
            "initial_weight": diagram_weight(&trace.initial),
            "final_weight": diagram_weight(&trace.result),
            "max_deviation": deviation,
            "result": serial::to_value(&trace.result),
        }),
        rows,
    })
}

fn diagram_grover(a: &DiagramGroverArgs) -> Result<Output, CliError> {
    let space = register(a.n)?;
    let f = indicator(&space, &a.marked)?;
    let d = build_grover_diagram_capped(a.n, &f, a.iterations, a.max_entries)?;
    let doc = serial::to_value(&d);
    if let Some(path) = &a.output {
        let text = serde_json::to_string_pretty(&doc).expect("documents serialize");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::new("io-error", format!("cannot write {}: {e}", path.display())))?;
    }
    let rows = d
        .slices()
        .iter()
        .enumerate()
        .flat_map(|(k, s)| {
            s.iter().enumerate().map(move |(i, g)| json!({"slice": k, "index": i, "variant": g.variant_name()}))
        })
        .collect();
    Ok(Output {
        document: json!({
            "slice_count": d.slices().len(),
            "generator_count": d.generator_count(),
            "diagram": doc,
        }),
        rows,
    })
}

fn rules_check(a: &RulesCheckArgs) -> Result<Output, CliError> {
    let rules = if a.rules.is_empty() {
        rules_catalog()
    } else {
        a.rules
            .iter()
            .map(|name| rule_by_name(name).ok_or_else(|| CliError::from(RewriteError::UnknownRule(name.clone()))))
            .collect::<Result<_, _>>()?
    };
    let reports: Vec<Value> = rules
        .iter()
        .map(|r| {
            let report = check_rule_soundness(r, &a.sizes);
            json!({
                "rule": report.rule,
                "instantiations": report.instantiations,
                "max_deviation": report.max_deviation,
                "pass": report.pass,
                "errors": report.errors,
            })
        })
        .collect();
    let all = reports.iter().all(|r| r["pass"] == json!(true));
    let rows = reports
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.as_object_mut().expect("object").remove("errors");
            r
        })
        .collect();
    Ok(Output { document: json!({"records": reports, "verdicts": {"all_sound": Verdict::from(all)}}), rows })
}

/// Flattens nested objects into dotted keys; arrays become JSON text.
fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(obj) => {
            for (k, inner) in obj {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_csv(rows: &[Value]) -> String {
    let flat: Vec<Map<String, Value>> = rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            flatten("", r, &mut m);
            m
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for m in &flat {
        for k in m.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for m in &flat {
        w.write_record(header.iter().map(|k| m.get(k).map(cell).unwrap_or_default())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
}

fn execute(cli: &Cli) -> Result<(Output, Value), CliError> {
    let mut config = match &cli.command {
        Command::Simulate(a) => to_value(a),
        Command::Formula(a) => to_value(a),
        Command::Claims(a) => to_value(a),
        Command::Compare(a) => to_value(a),
        Command::DiagramEval(a) => to_value(a),
        Command::DiagramNormalize(a) => to_value(a),
        Command::DiagramGrover(a) => to_value(a),
        Command::RulesCheck(a) => to_value(a),
    };
    config["subcommand"] = json!(cli.command.name());
    config["format"] = json!(cli.format);
    let needs_sim = matches!(cli.command, Command::Simulate(_) | Command::Claims(_) | Command::Compare(_));
    let limits = if needs_sim {
        let l = limits_from_env()?;
        config["max_qubits"] = json!(l.max_qubits);
        l
    } else {
        SimLimits::default()
    };
    let out = match &cli.command {
        Command::Simulate(a) => simulate(a, &limits)?,
        Command::Formula(a) => formula(a)?,
        Command::Claims(a) => claims(a, &limits)?,
        Command::Compare(a) => comparison(a, &limits)?,
        Command::DiagramEval(a) => diagram_eval(a)?,
        Command::DiagramNormalize(a) => diagram_normalize(a)?,
        Command::DiagramGrover(a) => diagram_grover(a)?,
        Command::RulesCheck(a) => rules_check(a)?,
    };
    Ok((out, config))
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((out, config)) => {
            let text = match cli.format {
                Format::Json => {
                    let mut doc = out.document;
                    let obj = doc.as_object_mut().expect("documents are objects");
                    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
                    obj.insert("tool_version".into(), json!(TOOL_VERSION));
                    obj.insert("config".into(), config);
                    serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n"
                }
                Format::Csv => {
                    // The metadata header keeps CSV runs self-describing.
                    let meta = json!({"schema_version": SCHEMA_VERSION, "tool_version": TOOL_VERSION, "config": config});
                    format!("# {meta}\n{}", to_csv(&out.rows))
                }
            };
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", serde_json::to_string(&e).expect("errors serialize"));
            1
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
