//! Command registry and JSON front end, shared by the `qcs` binary and the C
//! ABI. Every report is a JSON object carrying `schema_version` and
//! `command`; key order is sorted so identical inputs give identical bytes.

use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cohomology::{self, h2_finite_group_oracle, total_h2, verify_s_iso};
use crate::dictionary::{classify, kernel_structure, smooth_model_report, SmoothModel};
use crate::error::Error;
use crate::etale::EtaleGroupModel;
use crate::fgab::{dual_of_coinvariants, from_presentation, FgAbGroup, FrobModule};
use crate::intlat::{smith_normal_form, IntMatrix};
use crate::neron::{self, GaloisLattice, RingKind, RingSpec};
use crate::qcsheaf::{automorphisms, is_isomorphic, tensor, trace, QCSheafModel};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 0x5eed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Every command as `"<group> <name>"`.
pub const COMMANDS: &[&str] = &[
    "qc validate",
    "qc trace",
    "qc tensor",
    "qc iso",
    "qc auts",
    "qc classify",
    "coh h2",
    "coh total",
    "coh verify-s",
    "grp snf",
    "grp coinv",
    "grp ext2",
    "smooth report",
    "torus component",
    "torus kernel",
    "torus aut",
    "torus count",
    "torus levels",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub bound: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            bound: None,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }

    /// Machine-readable form of the failure.
    pub fn to_json(&self, command: &str) -> Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Domain(e) => ("domain", e.to_string()),
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "error": { "kind": kind, "message": message },
        })
    }
}

/// A finished command. `ok` is false when the report itself records a
/// failed check (an invalid sheaf, a broken bijection).
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub ok: bool,
}

fn parse<T: DeserializeOwned>(input: &str) -> Result<T, CliError> {
    serde_json::from_str(input).map_err(|e| CliError::Usage(format!("cannot parse input: {e}")))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn finish(command: &str, body: Value, ok: bool) -> Report {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    match body {
        Value::Object(m) => map.extend(m),
        other => {
            map.insert("result".into(), other);
        }
    }
    Report {
        value: Value::Object(map),
        ok,
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SheafPair {
    Named { left: QCSheafModel, right: QCSheafModel },
    Listed([QCSheafModel; 2]),
}

impl SheafPair {
    fn into_pair(self) -> (QCSheafModel, QCSheafModel) {
        match self {
            SheafPair::Named { left, right } => (left, right),
            SheafPair::Listed([l, r]) => (l, r),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Wrapped { matrix: IntMatrix },
    Bare(IntMatrix),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ModuleInput {
    Module(FrobModule),
    Group(FgAbGroup),
}

impl ModuleInput {
    fn into_module(self) -> FrobModule {
        match self {
            ModuleInput::Module(m) => m,
            ModuleInput::Group(g) => FrobModule::trivial_action(g),
        }
    }
}

#[derive(Deserialize)]
struct CountInput {
    lattice: GaloisLattice,
    ring: RingSpec,
}

#[derive(Deserialize)]
struct LevelsInput {
    #[serde(flatten)]
    kind: RingKind,
    n: u32,
    m: u32,
}

fn model(input: &str) -> Result<EtaleGroupModel, CliError> {
    Ok(EtaleGroupModel::from_module(parse::<ModuleInput>(input)?.into_module())?)
}

fn sheaf(input: &str) -> Result<QCSheafModel, CliError> {
    Ok(parse::<QCSheafModel>(input)?.validated()?)
}

fn bound_or(opts: &Options, default: u64) -> u64 {
    opts.bound.unwrap_or(default)
}

/// Runs one registered command on its JSON input.
pub fn execute(command: &str, input: &str, opts: &Options) -> Result<Report, CliError> {
    let class_bound = bound_or(opts, cohomology::DEFAULT_BOUND as u64) as usize;
    let ring_bound = bound_or(opts, neron::DEFAULT_RING_BOUND);
    let body = match command {
        "qc validate" => {
            let q: QCSheafModel = parse(input)?;
            let violations = q.validate();
            let ok = violations.is_empty();
            return Ok(finish(
                command,
                json!({ "valid": ok, "violations": to_value(&violations) }),
                ok,
            ));
        }
        "qc trace" => to_value(&trace(&sheaf(input)?)),
        "qc tensor" => {
            let (l, r) = parse::<SheafPair>(input)?.into_pair();
            let t = tensor(&l.validated()?, &r.validated()?)?;
            json!({ "sheaf": to_value(&t) })
        }
        "qc iso" => {
            let (l, r) = parse::<SheafPair>(input)?.into_pair();
            to_value(&is_isomorphic(&l.validated()?, &r.validated()?)?)
        }
        "qc auts" => {
            let auts = automorphisms(&sheaf(input)?);
            json!({ "count": auts.len(), "automorphisms": to_value(&auts) })
        }
        "qc classify" => {
            let c = classify(&model(input)?, class_bound)?;
            let ok = c.split && c.cross_checked != Some(false);
            return Ok(finish(command, to_value(&c), ok));
        }
        "coh h2" => {
            let g = parse::<ModuleInput>(input)?.into_module();
            to_value(&h2_finite_group_oracle(g.group(), class_bound)?)
        }
        "coh total" => {
            let r = total_h2(&model(input)?, class_bound)?;
            let ok = r.consistent;
            return Ok(finish(command, to_value(&r), ok));
        }
        "coh verify-s" => {
            let r = verify_s_iso(&model(input)?, class_bound, opts.seed)?;
            let ok = r.bijective;
            let mut v = to_value(&r);
            v["seed"] = json!(opts.seed);
            return Ok(finish(command, v, ok));
        }
        "grp snf" => {
            let m = match parse::<MatrixInput>(input)? {
                MatrixInput::Wrapped { matrix } | MatrixInput::Bare(matrix) => matrix,
            };
            let s = smith_normal_form(&m);
            json!({
                "diagonal": s.diag.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "rank": s.rank(),
                "cokernel": to_value(&from_presentation(&m).group),
            })
        }
        "grp coinv" => {
            let m = parse::<ModuleInput>(input)?.into_module();
            json!({
                "coinvariants": to_value(&m.coinvariants().0),
                "invariants": to_value(&m.invariants().0),
                "dual_of_coinvariants": to_value(&dual_of_coinvariants(&m)),
            })
        }
        "grp ext2" => {
            let m = parse::<ModuleInput>(input)?.into_module();
            let ext = m.exterior_square();
            json!({
                "exterior_square": to_value(&ext),
                "coinvariants": to_value(&ext.coinvariants().0),
                "kernel_structure": to_value(&kernel_structure(&m)),
            })
        }
        "smooth report" => to_value(&smooth_model_report(
            &parse::<SmoothModel>(input)?,
            class_bound,
        )?),
        "torus component" => to_value(&neron::component_group(&parse(input)?)?),
        "torus kernel" => to_value(&neron::torus_kernel(&parse(input)?)?),
        "torus aut" => to_value(&neron::torus_aut(&parse(input)?)?),
        "torus count" => {
            let c: CountInput = parse(input)?;
            to_value(&neron::quasicharacter_count(&c.lattice, &c.ring, ring_bound)?)
        }
        "torus levels" => {
            let l: LevelsInput = parse(input)?;
            let r = neron::level_system_check(l.kind, l.n, l.m, ring_bound)?;
            let ok = r.surjective && r.dual_embeds;
            return Ok(finish(command, to_value(&r), ok));
        }
        other => return Err(CliError::Usage(format!("unknown command '{other}'"))),
    };
    Ok(finish(command, body, true))
}

/// Human-readable rendering: one `key: value` line per field, nested
/// objects indented, scalar arrays inline.
pub fn render_text(v: &Value) -> String {
    fn scalar_like(v: &Value) -> bool {
        match v {
            Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array() || scalar_like(x)),
            Value::Object(_) => false,
            _ => true,
        }
    }
    fn go(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    if scalar_like(x) {
                        out.push_str(&format!("{pad}{k}: {}\n", plain(x)));
                    } else {
                        out.push_str(&format!("{pad}{k}:\n"));
                        go(x, indent + 1, out);
                    }
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    if scalar_like(x) {
                        out.push_str(&format!("{pad}- {}\n", plain(x)));
                    } else {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        go(x, indent + 1, out);
                    }
                }
            }
            x => out.push_str(&format!("{pad}{}\n", plain(x))),
        }
    }
    fn plain(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Null => "-".into(),
            x => x.to_string(),
        }
    }
    let mut out = String::new();
    go(v, 0, &mut out);
    out
}

#[derive(Parser, Debug)]
#[command(name = "qcs", version, about = "Quasicharacter sheaves on finite and local group models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Group,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Input file, `-` for stdin, or inline JSON. Defaults to stdin.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit indented text.
    #[arg(long, global = true)]
    pub text: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Overrides the oracle or enumeration limit of the command.
    #[arg(long, global = true)]
    pub bound: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Sheaf-level operations.
    #[command(subcommand)]
    Qc(QcCmd),
    /// Cohomology of the Weil group action.
    #[command(subcommand)]
    Coh(CohCmd),
    /// Abelian groups and Frobenius modules.
    #[command(subcommand)]
    Grp(GrpCmd),
    /// Smooth group models.
    #[command(subcommand)]
    Smooth(SmoothCmd),
    /// Tori over local fields.
    #[command(subcommand)]
    Torus(TorusCmd),
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum QcCmd {
    /// Check the cocycle equations of a sheaf
    Validate,
    /// Trace of Frobenius on rational points
    Trace,
    /// Tensor product of two sheaves
    Tensor,
    /// Isomorphism test with witness or obstruction
    Iso,
    /// Automorphism group of a sheaf
    Auts,
    /// All isomorphism classes on a model
    Classify,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum CohCmd {
    /// H^2(A, Q/Z) by brute force
    H2,
    /// Second cohomology of the total complex
    Total,
    /// Check that sheaf classes biject with total classes
    VerifyS,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum GrpCmd {
    /// Smith normal form of an integer matrix
    Snf,
    /// Invariants and coinvariants of a Frobenius module
    Coinv,
    /// Exterior square with induced Frobenius
    Ext2,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum SmoothCmd {
    /// Class count of a smooth model from its component group
    Report,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum TorusCmd {
    /// Component group of the Neron model
    Component,
    /// Kernel of the trace map
    Kernel,
    /// Automorphism structure
    Aut,
    /// Level-n quasicharacters of a split torus
    Count,
    /// Reduction between two unit-group levels
    Levels,
}

impl Group {
    pub fn name(&self) -> &'static str {
        match self {
            Group::Qc(c) => match c {
                QcCmd::Validate => "qc validate",
                QcCmd::Trace => "qc trace",
                QcCmd::Tensor => "qc tensor",
                QcCmd::Iso => "qc iso",
                QcCmd::Auts => "qc auts",
                QcCmd::Classify => "qc classify",
            },
            Group::Coh(c) => match c {
                CohCmd::H2 => "coh h2",
                CohCmd::Total => "coh total",
                CohCmd::VerifyS => "coh verify-s",
            },
            Group::Grp(c) => match c {
                GrpCmd::Snf => "grp snf",
                GrpCmd::Coinv => "grp coinv",
                GrpCmd::Ext2 => "grp ext2",
            },
            Group::Smooth(SmoothCmd::Report) => "smooth report",
            Group::Torus(c) => match c {
                TorusCmd::Component => "torus component",
                TorusCmd::Kernel => "torus kernel",
                TorusCmd::Aut => "torus aut",
                TorusCmd::Count => "torus count",
                TorusCmd::Levels => "torus levels",
            },
        }
    }
}

/// Result of a whole invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_input(spec: Option<&str>, stdin: &mut dyn Read) -> Result<String, CliError> {
    let from_stdin = |stdin: &mut dyn Read| {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        Ok(s)
    };
    match spec {
        None | Some("-") => from_stdin(stdin),
        Some(s) if s.trim_start().starts_with(['{', '[']) => Ok(s.to_string()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read '{path}': {e}"))),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let name = cli.command.name();
    let opts = Options {
        seed: cli.global.seed,
        bound: cli.global.bound,
    };
    let render = |v: &Value| {
        if cli.global.text {
            render_text(v)
        } else {
            format!("{}\n", serde_json::to_string_pretty(v).expect("json"))
        }
    };
    let result = read_input(cli.global.input.as_deref(), stdin)
        .and_then(|input| execute(name, &input, &opts));
    match result {
        Ok(r) => Outcome {
            code: if r.ok { EXIT_OK } else { EXIT_DOMAIN },
            stdout: render(&r.value),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: render(&e.to_json(name)),
        },
    }
}
