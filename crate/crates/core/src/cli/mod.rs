//! Command-line front end.
//!
//! Inputs are JSON, given either inline or as a file path. Inside a
//! connection file, `graph` and `group` may be a catalog or built-in name,
//! an inline object, or a path relative to the file.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a check failed, 3 an
//! enumeration exceeded its budget.

pub mod gen;
pub mod harness;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::graph::{Graph, RefinementTable, CATALOG_GRAPHS};
use crate::groups::{GroupContext, OrbitType, SubgroupDescriptor, DEFAULT_BUDGET, DEFAULT_CLOSURE_CAP};
use crate::lattice::{match_quotient_classes, orbit_codes, project_connection, quotient_class_count, Connection, LatticeError};
use crate::orbit::{orbit_type, orbit_type_json, same_type, stabilizer, OrbitError};
use crate::paths::{PathError, PathWord};
use harness::{Fault, HarnessConfig, SUITES};

#[derive(Parser, Debug)]
#[command(name = "gauge-orbits", version, about = "Gauge orbits and stabilizers of lattice connections on finite graphs")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Free reduction of a path word.
    Reduce {
        /// Word JSON (`[[id, ±1], ...]`) or a file holding it, or an
        /// object `{"graph": ..., "word": ...}`.
        word: String,
        /// Graph name or file.
        #[arg(long)]
        graph: Option<String>,
    },
    /// Holonomy centralizer, stabilizer and orbit type of a connection.
    Stabilizer {
        connection: String,
        #[command(flatten)]
        inputs: Overrides,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Projects a fine connection along a refinement table.
    Project { refinement: String, connection: String },
    /// Whether two connections have the same orbit type.
    SameType {
        first: String,
        second: String,
        #[command(flatten)]
        inputs: Overrides,
    },
    /// Orbit type of a connection.
    OrbitType {
        connection: String,
        #[command(flatten)]
        inputs: Overrides,
    },
    /// Counts gauge classes of connections by exhaustive orbit partition.
    EnumerateQuotient {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Runs the seeded property harness.
    Check(CheckArgs),
}

/// Replace the graph or group named in a connection file.
#[derive(Args, Debug, Default)]
pub struct Overrides {
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Group names or files (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    pub group: Vec<String>,
    /// Graph names or files (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    pub graph: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    pub closure_cap: usize,
    /// Suite names, or `all` (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    CorruptAction,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Budget(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(crate::graph::GraphError, crate::groups::GroupError, PathError, harness::HarnessError);

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<OrbitError> for CliError {
    fn from(e: OrbitError) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let fmt = cli.output;
    let value = match &cli.command {
        Command::Reduce { word, graph } => cmd_reduce(word, graph.as_deref(), fmt)?,
        Command::Stabilizer { connection, inputs, budget } => cmd_stabilizer(connection, inputs, *budget, fmt)?,
        Command::Project { refinement, connection } => cmd_project(refinement, connection, fmt)?,
        Command::SameType { first, second, inputs } => cmd_same_type(first, second, inputs, fmt)?,
        Command::OrbitType { connection, inputs } => cmd_orbit_type(connection, inputs, fmt)?,
        Command::EnumerateQuotient { graph, group, budget } => cmd_enumerate_quotient(graph, group, *budget, fmt)?,
        Command::Check(args) => {
            let (text, code) = cmd_check(args, fmt)?;
            write_out(out, &text)?;
            return Ok(code);
        }
    };
    write_out(out, &value)?;
    Ok(0)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::Input(e.to_string()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serialises")
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
pub fn read_json(arg: &str) -> Result<(Value, Option<PathBuf>), CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with(['{', '[', '"']) {
        let v = serde_json::from_str(arg).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))?;
        return Ok((v, None));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read `{arg}`: {e}")))?;
    let v = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid JSON in `{arg}`: {e}")))?;
    Ok((v, Path::new(arg).parent().map(Path::to_path_buf)))
}

fn relative(dir: Option<&Path>, name: &str) -> String {
    match dir {
        Some(d) if Path::new(name).is_relative() => d.join(name).to_string_lossy().into_owned(),
        _ => name.to_string(),
    }
}

/// A catalog name, a file path, or an inline graph object.
pub fn resolve_graph(value: &Value, dir: Option<&Path>) -> Result<Arc<Graph>, CliError> {
    match value {
        Value::String(name) if CATALOG_GRAPHS.contains(&name.as_str()) => Ok(Arc::new(Graph::catalog(name)?)),
        Value::String(name) => {
            let (v, _) = read_json(&relative(dir, name))?;
            Ok(Arc::new(Graph::from_json(&v)?))
        }
        other => Ok(Arc::new(Graph::from_json(other)?)),
    }
}

/// A built-in name, a file path, or an inline group object.
pub fn resolve_group(value: &Value, dir: Option<&Path>) -> Result<Arc<GroupContext>, CliError> {
    match value {
        Value::String(name) => match GroupContext::builtin(name) {
            Ok(g) => Ok(Arc::new(g)),
            Err(_) if Path::new(&relative(dir, name)).exists() => {
                let (v, _) = read_json(&relative(dir, name))?;
                Ok(Arc::new(GroupContext::from_json(&v)?))
            }
            Err(e) => Err(e.into()),
        },
        other => Ok(Arc::new(GroupContext::from_json(other)?)),
    }
}

fn flag_graph(arg: &str) -> Result<Arc<Graph>, CliError> {
    resolve_graph(&Value::String(arg.to_string()), None)
}

fn flag_group(arg: &str) -> Result<Arc<GroupContext>, CliError> {
    resolve_group(&Value::String(arg.to_string()), None)
}

/// Loads a connection, preferring explicit graph and group overrides.
pub fn load_connection(
    arg: &str,
    graph: Option<Arc<Graph>>,
    group: Option<Arc<GroupContext>>,
) -> Result<Connection, CliError> {
    let (value, dir) = read_json(arg)?;
    let missing = |f: &str| CliError::Input(format!("connection has no `{f}` and none was given"));
    let graph = match graph {
        Some(g) => g,
        None => resolve_graph(value.get("graph").ok_or_else(|| missing("graph"))?, dir.as_deref())?,
    };
    let group = match group {
        Some(g) => g,
        None => resolve_group(value.get("group").ok_or_else(|| missing("group"))?, dir.as_deref())?,
    };
    Ok(Connection::from_json_on(&value, graph, group)?)
}

fn load_with(arg: &str, inputs: &Overrides) -> Result<Connection, CliError> {
    let graph = inputs.graph.as_deref().map(flag_graph).transpose()?;
    let group = inputs.group.as_deref().map(flag_group).transpose()?;
    load_connection(arg, graph, group)
}

fn subgroup_text(group: &GroupContext, sub: &SubgroupDescriptor) -> String {
    let names: Vec<String> = sub.elements.iter().flatten().map(|e| group.display(e)).collect();
    format!("{{{}}}", names.join(", "))
}

fn orbit_type_text(group: &GroupContext, t: &OrbitType) -> String {
    format!(
        "class of {{{}}} (order {}, {} conjugates)",
        group.names_of(&t.representative).join(", "),
        t.order,
        t.class_size
    )
}

pub fn cmd_reduce(arg: &str, graph: Option<&str>, fmt: OutputFormat) -> Result<String, CliError> {
    let (value, dir) = read_json(arg)?;
    let (graph, word) = match (&value, graph) {
        (Value::Object(map), None) if map.contains_key("word") => {
            let g = map.get("graph").ok_or_else(|| CliError::Input("word object has no `graph`".into()))?;
            (resolve_graph(g, dir.as_deref())?, map["word"].clone())
        }
        (_, Some(g)) => (flag_graph(g)?, value.get("word").cloned().unwrap_or(value.clone())),
        (_, None) => return Err(CliError::Input("`--graph` is required for a bare word".into())),
    };
    let word = PathWord::from_json(graph, &word)?;
    let reduced = word.reduce();
    Ok(match fmt {
        OutputFormat::Text => reduced.to_json().to_string(),
        OutputFormat::Json => pretty(&json!({
            "input_length": word.len(),
            "length": reduced.len(),
            "reduced": reduced.to_json(),
        })),
    })
}

pub fn cmd_stabilizer(arg: &str, inputs: &Overrides, budget: u64, fmt: OutputFormat) -> Result<String, CliError> {
    let a = load_with(arg, inputs)?;
    let report = stabilizer(&a)?;
    let orbit_size = orbit_codes(&a, budget)?.len();
    let group = a.group();
    Ok(match fmt {
        OutputFormat::Json => {
            let mut v = report.to_json();
            v["orbit_size"] = json!(orbit_size);
            pretty(&v)
        }
        OutputFormat::Text => {
            let mut lines = vec![
                format!("centralizer: {}", subgroup_text(group, &report.centralizer)),
                format!("|B(A)|: {}", report.order()),
                format!("orbit size: {orbit_size}"),
                "pairing:".to_string(),
            ];
            for (z, g) in &report.pairing {
                let values: Vec<String> = g.named_values().into_iter().map(|(v, x)| format!("{v}={x}")).collect();
                lines.push(format!("  {} -> {}", group.display(z), values.join(" ")));
            }
            lines.push(format!("orbit type: {}", orbit_type_text(group, &report.orbit_type)));
            lines.join("\n")
        }
    })
}

pub fn cmd_project(refinement: &str, connection: &str, fmt: OutputFormat) -> Result<String, CliError> {
    let (value, _) = read_json(refinement)?;
    let table = RefinementTable::from_json(&value)?;
    let (cv, _) = read_json(connection)?;
    let graph = if cv.get("graph").is_some() { None } else { Some(table.fine().clone()) };
    let fine = load_connection(connection, graph, None)?;
    let coarse = project_connection(&table, &fine)?;
    Ok(match fmt {
        OutputFormat::Text => coarse.to_json().to_string(),
        OutputFormat::Json => pretty(&coarse.to_json()),
    })
}

pub fn cmd_same_type(first: &str, second: &str, inputs: &Overrides, fmt: OutputFormat) -> Result<String, CliError> {
    let a1 = load_with(first, inputs)?;
    let a2 = load_with(second, inputs)?;
    let verdict = same_type(&a1, &a2)?;
    let group = a1.group();
    let witness = verdict.witness.as_ref().map(|w| group.display(w));
    Ok(match fmt {
        OutputFormat::Json => pretty(&json!({"same_type": verdict.same, "witness": witness})),
        OutputFormat::Text => match witness {
            Some(w) => format!("same-type: true\nwitness: {w}"),
            None => format!("same-type: {}", verdict.same),
        },
    })
}

pub fn cmd_orbit_type(arg: &str, inputs: &Overrides, fmt: OutputFormat) -> Result<String, CliError> {
    let a = load_with(arg, inputs)?;
    let t = orbit_type(&a)?;
    Ok(match fmt {
        OutputFormat::Json => pretty(&orbit_type_json(a.group(), &t)),
        OutputFormat::Text => format!("orbit type: {}", orbit_type_text(a.group(), &t)),
    })
}

pub fn cmd_enumerate_quotient(graph: &str, group: &str, budget: u64, fmt: OutputFormat) -> Result<String, CliError> {
    let graph = flag_graph(graph)?;
    let group = flag_group(group)?;
    let count = quotient_class_count(&graph, &group, budget)?;
    let matching = match_quotient_classes(&graph, &group, budget)?;
    Ok(match fmt {
        OutputFormat::Json => pretty(&json!({
            "classes": count,
            "rank": graph.rank(),
            "ad_classes": matching.ad_classes,
            "matching_injective": matching.injective,
            "matching_surjective": matching.surjective,
        })),
        OutputFormat::Text => format!(
            "classes: {count}\nad-classes of G^{}: {}\nmatching bijective: {}",
            graph.rank(),
            matching.ad_classes,
            matching.injective && matching.surjective
        ),
    })
}

/// Builds a harness configuration from command-line arguments.
pub fn harness_config(args: &CheckArgs) -> Result<HarnessConfig, CliError> {
    let mut config = HarnessConfig::new(args.seed, args.trials);
    if !args.group.is_empty() {
        config.groups = args.group.iter().map(|g| Ok((g.clone(), flag_group(g)?))).collect::<Result<_, CliError>>()?;
    }
    if !args.graph.is_empty() {
        config.graphs = args.graph.iter().map(|g| Ok((g.clone(), flag_graph(g)?))).collect::<Result<_, CliError>>()?;
    }
    if !args.suite.is_empty() && !args.suite.iter().any(|s| s == "all") {
        config.suites = args.suite.clone();
    }
    config.budget = args.budget;
    config.closure_cap = args.closure_cap;
    config.fault = args.inject_fault.map(|FaultArg::CorruptAction| Fault::CorruptAction);
    config.validate()?;
    Ok(config)
}

pub fn cmd_check(args: &CheckArgs, fmt: OutputFormat) -> Result<(String, i32), CliError> {
    let config = harness_config(args)?;
    let report = harness::run(&config)?;
    let text = match fmt {
        OutputFormat::Json => pretty(&report.to_json()),
        OutputFormat::Text => {
            let mut lines = vec![format!("prng {} seed {} trials {}", report.prng, report.seed, report.trials)];
            for (name, s) in &report.suites {
                let mut line = format!(
                    "{name:<22} passed {:>5}  failed {:>3}  budget {:>3}  skipped {:>3}",
                    s.passed, s.failed, s.budget_exceeded, s.skipped
                );
                if let Some(c) = &s.counterexample {
                    line.push_str(&format!("\n  first counterexample: {c}"));
                }
                lines.push(line);
            }
            lines.push(format!("status: {}", report.status));
            lines.join("\n")
        }
    };
    Ok((text, report.exit_code()))
}

/// Suite names accepted by `check --suite`.
pub fn suite_names() -> &'static [&'static str] {
    &SUITES
}
