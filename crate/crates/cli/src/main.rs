//! `stc`: exact cubical currents and space-time chains from the command line.
//!
//! Every verb reads JSON chain files (or `-` for stdin) and writes JSON to
//! stdout or `--output`. Exit status: 0 success, 1 domain error, 2 usage or
//! input error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use spacetime_currents::bv::{cantor_stage, graph_current, pointwise_variation, StepFunction};
use spacetime_currents::chain::{Chain, ChainFile, Grid, GridFile};
use spacetime_currents::deform::{self, DeformationSummary, CSV_HEADER};
use spacetime_currents::exact_lp::{IlpOptions, Status, DEFAULT_NODE_LIMIT};
use spacetime_currents::exec::Exec;
use spacetime_currents::flatnorm::{NormResult, Solver};
use spacetime_currents::rational::{self, Rational};
use spacetime_currents::spacetime::{SpacetimeChain, TimeInterval};
use spacetime_currents::suite;
use spacetime_currents::transform::{self, SweepPlan};
use spacetime_currents::Error;

#[derive(Parser)]
#[command(name = "stc", version, about = "Exact cubical currents, space-time variation and flat-norm solvers")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Add decimal approximations (keys ending in `_decimal`) next to exact values.
    #[arg(long, global = true)]
    decimal: bool,
    /// Branch-and-bound node limit for the integer programs.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: usize,
    /// Grid file to re-home spatial input chains onto (a larger box).
    #[arg(long, global = true)]
    grid: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// Mass of a chain; space-time chains also report the temporal/spatial split.
    Mass { input: PathBuf },
    /// Boundary chain.
    Boundary { input: PathBuf },
    /// Variation of a space-time chain over an interval (default: the whole range).
    Var {
        input: PathBuf,
        #[arg(long)]
        interval: Option<TimeInterval>,
    },
    /// Slice of a space-time chain at a time.
    Slice {
        input: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        time: Rational,
        /// generic (off-grid times only), right or left.
        #[arg(long, default_value = "generic")]
        side: Side,
    },
    /// Spatial projection of a space-time chain.
    Project { input: PathBuf },
    /// Space-time chain of a sweep plan.
    Sweep { plan: PathBuf },
    /// Prism of a chain along one axis.
    Prism {
        input: PathBuf,
        #[arg(long)]
        axis: usize,
        #[arg(long)]
        negative: bool,
    },
    /// Concatenation of two space-time chains whose traces match.
    Concat { first: PathBuf, second: PathBuf },
    /// Time reversal.
    Reverse { input: PathBuf },
    /// Time-axis refinement by an integer factor.
    Rescale {
        input: PathBuf,
        #[arg(long)]
        factor: i64,
    },
    /// Flat norm with its witness.
    Flatnorm {
        input: PathBuf,
        /// Also write the witness Q as a chain file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Boundaryless flat norm (least filling) of a cycle.
    Flatnorm0 {
        input: PathBuf,
        /// Also write the filling Q as a chain file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Least variation between two cycles on a fixed number of time columns.
    Distlip {
        t0: PathBuf,
        t1: PathBuf,
        #[arg(long)]
        time_steps: i64,
        /// Per-column variation budget; unbounded when absent.
        #[arg(long, value_parser = parse_rational)]
        budget: Option<Rational>,
        /// Also write the optimal space-time chain S as a chain file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Both sides of the equality between the distance and the least filling.
    VerifyEquality { t0: PathBuf, t1: PathBuf },
    /// Rounding of fine cycles onto the grid coarsened by a factor.
    Deform {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        coarsen: i64,
        /// Print one CSV row per input instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Filling of a cycle found through the coarsest admissible deformation.
    Fill { input: PathBuf },
    /// Graph current of a step function, or of a Cantor staircase stage.
    Bv {
        #[arg(required_unless_present = "cantor", conflicts_with = "cantor")]
        input: Option<PathBuf>,
        #[arg(long)]
        cantor: Option<u32>,
        #[arg(long)]
        interval: Option<TimeInterval>,
    },
    /// The acceptance suite.
    Check {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        /// sequential or parallel.
        #[arg(long)]
        exec: Option<Exec>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Side {
    Generic,
    Right,
    Left,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

/// Failure of a verb, with its exit status.
enum Failure {
    Domain(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    /// JSON result that also signals a domain failure (e.g. infeasible).
    JsonFailure(Value, String),
    Text(String),
    TextFailure(String),
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// A chain file is either a spatial chain or a space-time chain.
enum Input {
    Spatial(Chain),
    Spacetime(SpacetimeChain),
}

struct Ctx {
    grid: Option<Grid>,
    solver: Solver,
}

impl Ctx {
    fn input(&self, path: &Path) -> Result<Input, Failure> {
        let file: ChainFile = parse_json(path)?;
        let bad = |e: Error| Failure::Input(format!("{}: {e}", path.display()));
        if file.time_axis.is_some() {
            return Ok(Input::Spacetime(SpacetimeChain::from_file(&file).map_err(bad)?));
        }
        let chain = Chain::try_from(&file).map_err(bad)?;
        Ok(Input::Spatial(match &self.grid {
            Some(g) if g.spacing() != chain.grid().spacing() || g.origin() != chain.grid().origin() => {
                return Err(Failure::Input(format!("{}: --grid must share spacing and origin with the chain", path.display())))
            }
            Some(g) => chain.rehome(g)?,
            None => chain,
        }))
    }

    fn chain(&self, path: &Path) -> Result<Chain, Failure> {
        match self.input(path)? {
            Input::Spatial(c) => Ok(c),
            Input::Spacetime(_) => Err(Failure::Input(format!("{}: expected a spatial chain, found a space-time chain", path.display()))),
        }
    }

    fn spacetime(&self, path: &Path) -> Result<SpacetimeChain, Failure> {
        let file: ChainFile = parse_json(path)?;
        if file.time_axis.is_none() {
            return Err(Failure::Input(format!("{}: expected a space-time chain (\"time_axis\": 0)", path.display())));
        }
        SpacetimeChain::from_file(&file).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn value(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn chain_json(c: &Chain) -> Value {
    serde_json::to_value(ChainFile::from(c)).expect("chain serializes")
}

fn spacetime_json(s: &SpacetimeChain) -> Value {
    serde_json::to_value(s.to_file()).expect("chain serializes")
}

fn norm_output(r: &NormResult) -> Output {
    let v: Value = serde_json::from_str(&r.to_json()).expect("result serializes");
    match r.status {
        Status::Optimal => Output::Json(v),
        s => Output::JsonFailure(v, format!("program is {s}")),
    }
}

/// Writes a witness chain file; an infeasible program has none to write.
fn write_witness(path: Option<&Path>, chain: Option<Value>) -> Result<(), Failure> {
    match (path, chain) {
        (Some(p), Some(c)) => emit(&pretty(&c), Some(p)),
        _ => Ok(()),
    }
}

fn run(verb: Verb, ctx: &Ctx) -> Outcome {
    Ok(match verb {
        Verb::Mass { input } => match ctx.input(&input)? {
            Input::Spatial(c) => Output::Json(json!({ "value": value(&c.mass()) })),
            Input::Spacetime(s) => {
                let d = s.mass_decomposition();
                Output::Json(json!({ "value": value(&s.chain().mass()), "temporal": value(&d.temporal), "spatial": value(&d.spatial) }))
            }
        },
        Verb::Boundary { input } => match ctx.input(&input)? {
            Input::Spatial(c) => Output::Json(chain_json(&c.boundary())),
            Input::Spacetime(s) => Output::Json(spacetime_json(&s.boundary())),
        },
        Verb::Var { input, interval } => {
            let s = ctx.spacetime(&input)?;
            let iv = interval.unwrap_or_else(|| s.full_range());
            Output::Json(json!({ "value": value(&s.variation(&iv)), "interval": iv.to_string() }))
        }
        Verb::Slice { input, time, side } => {
            let s = ctx.spacetime(&input)?;
            let c = match side {
                Side::Generic => s.slice(&time)?,
                Side::Right => s.slice_right(&time)?,
                Side::Left => s.slice_left(&time)?,
            };
            Output::Json(chain_json(&c))
        }
        Verb::Project { input } => Output::Json(chain_json(&ctx.spacetime(&input)?.spatial_projection())),
        Verb::Sweep { plan } => {
            let text = read_text(&plan)?;
            let plan = SweepPlan::from_json(&text)?;
            Output::Json(spacetime_json(&transform::sweep(&plan)?))
        }
        Verb::Prism { input, axis, negative } => Output::Json(chain_json(&transform::prism(&ctx.chain(&input)?, axis, !negative)?)),
        Verb::Concat { first, second } => {
            let s = transform::concatenate(&ctx.spacetime(&first)?, &ctx.spacetime(&second)?)?;
            Output::Json(spacetime_json(&s))
        }
        Verb::Reverse { input } => Output::Json(spacetime_json(&transform::reverse(&ctx.spacetime(&input)?))),
        Verb::Rescale { input, factor } => Output::Json(spacetime_json(&transform::rescale_time(&ctx.spacetime(&input)?, factor)?)),
        Verb::Flatnorm { input, witness } => {
            let r = ctx.solver.flat_norm(&ctx.chain(&input)?)?;
            write_witness(witness.as_deref(), r.witness.q.as_ref().map(chain_json))?;
            norm_output(&r)
        }
        Verb::Flatnorm0 { input, witness } => {
            let r = ctx.solver.flat_norm_boundaryless(&ctx.chain(&input)?)?;
            write_witness(witness.as_deref(), r.witness.q.as_ref().map(chain_json))?;
            norm_output(&r)
        }
        Verb::Distlip { t0, t1, time_steps, budget, witness } => {
            let r = ctx.solver.dist_lip(&ctx.chain(&t0)?, &ctx.chain(&t1)?, time_steps, budget.as_ref())?;
            write_witness(witness.as_deref(), r.witness.s.as_ref().map(spacetime_json))?;
            norm_output(&r)
        }
        Verb::VerifyEquality { t0, t1 } => {
            let rep = ctx.solver.verify_equality(&ctx.chain(&t0)?, &ctx.chain(&t1)?)?;
            Output::Json(serde_json::from_str(&rep.to_json()).expect("report serializes"))
        }
        Verb::Deform { inputs, coarsen, csv } => deform_verb(ctx, &inputs, coarsen, csv)?,
        Verb::Fill { input } => {
            let f = deform::isoperimetric_fill_with(&ctx.chain(&input)?, ctx.solver.options)?;
            Output::Json(json!({
                "variation": value(&f.s.total_variation()),
                "m": f.m,
                "remainder_filled": f.remainder_filled,
                "constant": f.constant,
                "w": chain_json(&f.w),
                "s": spacetime_json(&f.s),
            }))
        }
        Verb::Bv { input, cantor, interval } => {
            let u = match (input, cantor) {
                (_, Some(n)) => cantor_stage(n)?,
                (Some(p), None) => parse_json::<StepFunction>(&p)?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let s = graph_current(&u);
            let iv = interval.unwrap_or_else(|| s.full_range());
            Output::Json(json!({
                "variation": value(&s.variation(&iv)),
                "pointwise_variation": value(&pointwise_variation(&u, &iv)),
                "interval": iv.to_string(),
                "lipschitz": value(&s.discrete_lipschitz_constant()),
                "current": spacetime_json(&s),
            }))
        }
        Verb::Check { seed, criteria, exec } => {
            let cfg = suite::Config { seed, exec: exec.unwrap_or_default(), options: ctx.solver.options };
            let picked = if criteria.is_empty() { (1..=suite::CRITERIA.len()).collect() } else { criteria };
            if let Some(bad) = picked.iter().find(|&&i| i == 0 || i > suite::CRITERIA.len()) {
                return Err(Failure::Input(format!("no criterion {bad}; criteria are 1..={}", suite::CRITERIA.len())));
            }
            let report = suite::run_selected(&cfg, &picked);
            if report.all_passed() {
                Output::Text(report.transcript())
            } else {
                Output::TextFailure(report.transcript())
            }
        }
    })
}

fn deform_verb(ctx: &Ctx, inputs: &[PathBuf], m: i64, csv: bool) -> Outcome {
    let mut rows = vec![CSV_HEADER.to_string()];
    let mut objects = Vec::new();
    for path in inputs {
        let t = ctx.chain(path)?;
        let d = deform::deform_to_coarse_with(&t, m, ctx.solver.options)?;
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        rows.push(d.csv_row(&id));
        let mut obj = serde_json::to_value(DeformationSummary::from(&d)).expect("summary serializes");
        let extra = [
            ("instance", Value::String(id)),
            ("mass_ratio", d.mass_ratio.as_ref().map_or(Value::Null, value)),
            ("variation_ratio", d.variation_ratio.as_ref().map_or(Value::Null, value)),
            ("p", chain_json(&d.p)),
            ("w", chain_json(&d.w)),
            ("s", spacetime_json(&d.s)),
        ];
        let map = obj.as_object_mut().expect("summary is an object");
        for (k, v) in extra {
            map.insert(k.into(), v);
        }
        objects.push(obj);
    }
    Ok(if csv {
        Output::Text(rows.join("\n") + "\n")
    } else if objects.len() == 1 {
        Output::Json(objects.pop().expect("one result"))
    } else {
        Output::Json(Value::Array(objects))
    })
}

const DECIMAL_KEYS: [&str; 19] = [
    "value",
    "relaxation",
    "temporal",
    "spatial",
    "variation",
    "pointwise_variation",
    "lipschitz",
    "budget",
    "projection_mass",
    "sweep_variation",
    "rho",
    "mass_t",
    "mass_p",
    "mass_w",
    "mass_ratio",
    "variation_ratio",
    "flat_norm",
    "flat_norm_boundaryless",
    "dist_lip",
];

/// Adds `<key>_decimal` approximations next to exact rational fields.
fn add_decimals(v: &mut Value) {
    match v {
        Value::Object(map) => {
            let mut extra = Map::new();
            for (k, x) in map.iter_mut() {
                if let Value::String(s) = x {
                    if DECIMAL_KEYS.contains(&k.as_str()) {
                        if let Ok(r) = rational::parse(s) {
                            extra.insert(format!("{k}_decimal"), json!(rational::to_f64(&r)));
                        }
                    }
                } else {
                    add_decimals(x);
                }
            }
            map.extend(extra);
        }
        Value::Array(items) => items.iter_mut().for_each(add_decimals),
        _ => {}
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Input(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let common = cli.common;
    let grid = match common.grid.as_deref().map(parse_json::<GridFile>) {
        None => None,
        Some(Ok(f)) => match Grid::try_from(&f) {
            Ok(g) => Some(g),
            Err(e) => return fail(Failure::Input(format!("--grid: {e}"))),
        },
        Some(Err(e)) => return fail(e),
    };
    let ctx = Ctx { grid, solver: Solver::new(IlpOptions { node_limit: common.node_limit }) };
    let out = match run(cli.verb, &ctx) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let json_text = |mut v: Value| {
        if common.decimal {
            add_decimals(&mut v);
        }
        pretty(&v)
    };
    let (text, failure) = match out {
        Output::Json(v) => (json_text(v), None),
        Output::JsonFailure(v, why) => (json_text(v), Some(why)),
        Output::Text(t) => (t, None),
        Output::TextFailure(t) => (t, Some("acceptance suite has failing criteria".into())),
    };
    if let Err(e) = emit(&text, common.output.as_deref()) {
        return fail(e);
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(why) => fail(Failure::Domain(why)),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes") + "\n"
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::Domain(m) => {
            eprintln!("stc: {m}");
            ExitCode::from(1)
        }
        Failure::Input(m) => {
            eprintln!("stc: {m}");
            ExitCode::from(2)
        }
    }
}
