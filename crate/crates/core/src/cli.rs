//! The `flatp` command line: one subcommand per operation, a chain file as
//! input and a text or JSON report as output.
//!
//! Exit codes: 0 on success, 2 when an input or precondition is rejected,
//! 1 on an internal defect.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::chain::{validate_complex, Complex, IntChain, ModPChain, Modulus};
use crate::cone::{boundary_simplicial, cone, cone_mass_report, ConeError, SimplicialChain};
use crate::cubical::{self, BoxChain, BoxError, Grid, GridComplex};
use crate::flatnorm::{self, FlatNormError};
use crate::gen;
use crate::io::{self, ChainFile, IoError, Payload};
use crate::onedim::{self, CurveSystem, OneDimError};

/// Version of the JSON report layout, bumped together with the file format.
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Mass,
    Massp,
    Reduce,
    Boundary,
    Flatnorm,
    Flatnormp,
    Fill,
    Isoratio,
    Restrict,
    Slice,
    Islice,
    Slicemass,
    Slicestar,
    Deform,
    Refinecompare,
    Sysboundary,
    Preprocess,
    Cyclecut,
    Decompose,
    Cyclerep,
    Cone,
    Conereport,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    fn seed_carrier(self) -> &'static str {
        use Command::*;
        match self {
            Sysboundary | Preprocess | Cyclecut => "curves",
            Cone | Conereport => "simplicial",
            _ => "box",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "flatp", version, about = "Flat chains mod p: norms, slices, deformations, cycle cuts and cones")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Chain file; omit it and pass --seed to use a random instance.
    pub input: Option<PathBuf>,
    /// Modulus; overrides the `p` line of the file.
    #[arg(long)]
    pub p: Option<u64>,
    /// Coordinate axis, 1-based; repeat for iterated slices.
    #[arg(long)]
    pub axis: Vec<usize>,
    /// Slicing level; repeat to match --axis.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Vec<f64>,
    /// Coarse grid size for deform.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Rounding thresholds in [0,1), comma separated, one per axis.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub rho: Option<Vec<f64>>,
    /// Coefficient bound for the integral flat norm.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Subdivision factor for refinecompare.
    #[arg(long)]
    pub subdiv: Option<u64>,
    /// Seed for the random input generator (used only without an input file).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cone apex, comma separated coordinates.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub apex: Option<Vec<f64>>,
    /// Emit one JSON document instead of text.
    #[arg(long)]
    pub json: bool,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug)]
pub enum Failure {
    Precondition(String),
    Defect(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Precondition(_) => 2,
            Failure::Defect(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Precondition(_) => "precondition",
            Failure::Defect(_) => "defect",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Precondition(m) | Failure::Defect(m) => m,
        }
    }
}

fn pre(m: impl ToString) -> Failure {
    Failure::Precondition(m.to_string())
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        pre(e)
    }
}

impl From<BoxError> for Failure {
    fn from(e: BoxError) -> Self {
        pre(e)
    }
}

impl From<FlatNormError> for Failure {
    fn from(e: FlatNormError) -> Self {
        pre(e)
    }
}

impl From<crate::chain::ChainError> for Failure {
    fn from(e: crate::chain::ChainError) -> Self {
        pre(e)
    }
}

impl From<OneDimError> for Failure {
    fn from(e: OneDimError) -> Self {
        match e {
            OneDimError::Defect(m) => Failure::Defect(m),
            e => pre(e),
        }
    }
}

impl From<ConeError> for Failure {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::Defect(m) => Failure::Defect(m),
            e => pre(e),
        }
    }
}

/// What a run printed and how it ended.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command; `input_text` stands in for reading `args.input`.
pub fn run(args: &Args, input_text: Option<&str>) -> Outcome {
    let start = Instant::now();
    let result = std::panic::catch_unwind(|| execute(args, input_text))
        .unwrap_or_else(|payload| {
            let m = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(Failure::Defect(m))
        });
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut doc = Map::new();
    doc.insert("report_version".into(), json!(REPORT_VERSION));
    doc.insert("format_version".into(), json!(io::FORMAT_VERSION));
    doc.insert("command".into(), json!(args.command.name()));
    doc.insert("flags".into(), flags_json(args));
    let code = match result {
        Ok((input, value)) => {
            doc.insert("input".into(), input);
            doc.insert("result".into(), value);
            0
        }
        Err(f) => {
            doc.insert("error".into(), json!({"kind": f.kind(), "message": f.message()}));
            f.exit_code()
        }
    };
    if args.timing {
        doc.insert("timing".into(), json!({ "elapsed_ms": elapsed }));
    }
    let doc = Value::Object(doc);
    if args.json {
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        return Outcome {
            code,
            stdout: s,
            stderr: String::new(),
        };
    }
    match doc.get("error") {
        Some(e) => Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error ({}): {}\n", e["kind"].as_str().unwrap_or(""), e["message"].as_str().unwrap_or("")),
        },
        None => {
            let mut s = format!("{}\n", args.command.name());
            render(&mut s, "", &doc["result"]);
            if let Some(t) = doc.get("timing") {
                s.push_str(&format!("elapsed_ms: {}\n", t["elapsed_ms"]));
            }
            Outcome {
                code,
                stdout: s,
                stderr: String::new(),
            }
        }
    }
}

fn render(out: &mut String, indent: &str, v: &Value) {
    let Value::Object(map) = v else {
        out.push_str(&format!("{indent}{}\n", scalar(v)));
        return;
    };
    for (k, v) in map {
        match v {
            Value::Object(_) => {
                out.push_str(&format!("{indent}{k}:\n"));
                render(out, &format!("{indent}  "), v);
            }
            Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                out.push_str(&format!("{indent}{k}:\n"));
                for item in items {
                    out.push_str(&format!("{indent}  - {}\n", scalar(item)));
                }
            }
            _ => out.push_str(&format!("{indent}{k}: {}\n", scalar(v))),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn flags_json(a: &Args) -> Value {
    let mut m = Map::new();
    if let Some(p) = a.p {
        m.insert("p".into(), json!(p));
    }
    if !a.axis.is_empty() {
        m.insert("axis".into(), json!(a.axis));
    }
    if !a.r.is_empty() {
        m.insert("r".into(), json!(a.r));
    }
    if let Some(v) = a.eta {
        m.insert("eta".into(), json!(v));
    }
    if let Some(v) = &a.rho {
        m.insert("rho".into(), json!(v));
    }
    if let Some(v) = a.bound {
        m.insert("bound".into(), json!(v));
    }
    if let Some(v) = a.subdiv {
        m.insert("subdiv".into(), json!(v));
    }
    if let Some(v) = a.seed {
        m.insert("seed".into(), json!(v));
    }
    if let Some(v) = &a.apex {
        m.insert("apex".into(), json!(v));
    }
    Value::Object(m)
}

fn coeff(g: &BigInt) -> Value {
    g.to_i64().map_or_else(|| Value::String(g.to_string()), Value::from)
}

fn box_json(t: &BoxChain) -> Value {
    let terms: Vec<Value> = t.iter().map(|(c, g)| json!({"cell": c.to_string(), "coeff": coeff(g)})).collect();
    json!({"dim": t.dim(), "mass": t.mass(), "terms": terms})
}

fn int_json(t: &IntChain) -> Value {
    let cells = t.complex().cells(t.dim());
    let terms: Vec<Value> = t
        .iter()
        .map(|(i, g)| json!({"cell": cells[i].label(), "coeff": coeff(g)}))
        .collect();
    json!({"dim": t.dim(), "mass": t.mass(), "terms": terms})
}

fn modp_json(t: &ModPChain) -> Value {
    let cells = t.complex().cells(t.dim());
    let terms: Vec<Value> = t.iter().map(|(i, g)| json!({"cell": cells[i].label(), "coeff": g})).collect();
    json!({"dim": t.dim(), "p": t.modulus().get(), "mass_p": t.mass(), "terms": terms})
}

fn simplicial_json(t: &SimplicialChain) -> Value {
    let terms: Vec<Value> = t
        .iter()
        .map(|(s, g)| json!({"simplex": s.vertices(), "coeff": coeff(g)}))
        .collect();
    json!({"dim": t.dim(), "mass": t.mass(), "terms": terms})
}

fn curves_json(sys: &CurveSystem) -> Value {
    Value::Array(
        sys.items()
            .iter()
            .map(|c| json!({"id": c.id, "start": c.start, "end": c.end, "mass": c.mass}))
            .collect(),
    )
}

/// The chain of a file as an integer chain on a complex with cells one
/// dimension up, plus a way back to the file's carrier for reporting.
struct OnComplex {
    chain: IntChain,
    grid: Option<GridComplex>,
}

impl OnComplex {
    fn show(&self, t: &IntChain) -> Value {
        match &self.grid {
            Some(g) => box_json(&g.decode(t)),
            None => int_json(t),
        }
    }

    fn show_modp(&self, t: &ModPChain) -> Value {
        match &self.grid {
            Some(g) => {
                let mut v = box_json(&g.decode(&t.lift()));
                v["p"] = json!(t.modulus().get());
                v["mass_p"] = json!(t.mass());
                v
            }
            None => modp_json(t),
        }
    }
}

fn abstract_chain(file: &ChainFile) -> Result<Option<(Arc<Complex>, IntChain)>, Failure> {
    match &file.payload {
        Payload::Abstract(a) => Ok(Some(a.build()?)),
        _ => Ok(None),
    }
}

fn on_complex(file: &ChainFile) -> Result<OnComplex, Failure> {
    if let Some((_, chain)) = abstract_chain(file)? {
        return Ok(OnComplex { chain, grid: None });
    }
    match &file.payload {
        Payload::Box(t) => {
            let grid = Grid::from_chain(t);
            let gc = grid.complex((t.dim() + 1).min(t.ambient_dim()));
            let chain = gc.embed(t, &grid)?;
            Ok(OnComplex { chain, grid: Some(gc) })
        }
        other => Err(pre(format!("carrier `{}` is not supported here", other.carrier()))),
    }
}

fn on_graph(file: &ChainFile) -> Result<OnComplex, Failure> {
    match &file.payload {
        Payload::Box(t) => {
            let grid = Grid::from_chain(t);
            let gc = grid.complex(t.dim());
            let chain = gc.embed(t, &grid)?;
            Ok(OnComplex { chain, grid: Some(gc) })
        }
        _ => on_complex(file),
    }
}

fn need_box(file: &ChainFile) -> Result<&BoxChain, Failure> {
    match &file.payload {
        Payload::Box(t) => Ok(t),
        other => Err(pre(format!("a box chain is required, found carrier `{}`", other.carrier()))),
    }
}

fn need_curves(file: &ChainFile) -> Result<&CurveSystem, Failure> {
    match &file.payload {
        Payload::Curves(s) => Ok(s),
        other => Err(pre(format!("a curve system is required, found carrier `{}`", other.carrier()))),
    }
}

fn need_simplicial(file: &ChainFile) -> Result<&SimplicialChain, Failure> {
    match &file.payload {
        Payload::Simplicial(s) => Ok(s),
        other => Err(pre(format!("a simplicial chain is required, found carrier `{}`", other.carrier()))),
    }
}

fn modulus(args: &Args, file: &ChainFile) -> Result<Modulus, Failure> {
    match (args.p, file.p) {
        (Some(p), _) => Ok(Modulus::new(p)?),
        (None, Some(p)) => Ok(p),
        (None, None) => Err(pre("a modulus is required: pass --p or add a `p` line to the file")),
    }
}

fn axes(args: &Args, n: usize) -> Result<Vec<usize>, Failure> {
    args.axis
        .iter()
        .map(|&a| {
            if a == 0 || a > n {
                Err(pre(format!("--axis {a} is outside 1..={n}")))
            } else {
                Ok(a - 1)
            }
        })
        .collect()
}

fn one_axis_level(args: &Args, n: usize) -> Result<(usize, f64), Failure> {
    let ax = axes(args, n)?;
    match (ax.as_slice(), args.r.as_slice()) {
        ([a], [r]) => Ok((*a, *r)),
        _ => Err(pre("exactly one --axis and one --r are required")),
    }
}

fn random_input(command: Command, seed: u64) -> ChainFile {
    let mut rng = gen::rng(seed);
    let payload = match command.seed_carrier() {
        "curves" => Payload::Curves(gen::random_curve_system(&mut rng, 2)),
        "simplicial" => Payload::Simplicial(gen::random_simplicial_chain(&mut rng, 2, 1, 4, 5, 3)),
        _ => Payload::Box(gen::random_box_chain(&mut rng, 2, 1, 3, 2, 1, 3)),
    };
    ChainFile::new(payload)
}

fn input_json(file: &ChainFile, from_seed: bool) -> Value {
    let mut m = Map::new();
    m.insert("carrier".into(), json!(file.payload.carrier()));
    match &file.payload {
        Payload::Abstract(a) => {
            m.insert("ambient".into(), json!(a.complex.ambient_dim));
            m.insert("dim".into(), json!(a.dim));
        }
        Payload::Box(b) => {
            m.insert("ambient".into(), json!(b.ambient_dim()));
            m.insert("dim".into(), json!(b.dim()));
        }
        Payload::Simplicial(c) => {
            m.insert("ambient".into(), json!(c.ambient_dim()));
            m.insert("dim".into(), json!(c.dim()));
        }
        Payload::Curves(s) => {
            m.insert("curves".into(), json!(s.len()));
        }
    }
    if let Some(p) = file.p {
        m.insert("p".into(), json!(p.get()));
    }
    m.insert("source".into(), json!(if from_seed { "seed" } else { "file" }));
    if from_seed {
        m.insert("text".into(), json!(io::serialize(file).unwrap_or_default()));
    }
    Value::Object(m)
}

fn execute(args: &Args, input_text: Option<&str>) -> Result<(Value, Value), Failure> {
    let (file, from_seed) = match (input_text, &args.input, args.seed) {
        (Some(text), _, _) => (io::parse(text)?, false),
        (None, Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| pre(format!("cannot read {}: {e}", path.display())))?;
            (io::parse(&text)?, false)
        }
        (None, None, Some(seed)) => (random_input(args.command, seed), true),
        (None, None, None) => return Err(pre("an input file or --seed is required")),
    };
    let result = dispatch(args, &file)?;
    Ok((input_json(&file, from_seed), result))
}

fn dispatch(args: &Args, file: &ChainFile) -> Result<Value, Failure> {
    use Command::*;
    let cmd = args.command;
    Ok(match cmd {
        Validate => match &file.payload {
            Payload::Abstract(a) => {
                let c = validate_complex(&a.complex).map_err(IoError::from)?;
                let counts: Vec<usize> = (0..a.complex.cells.len()).map(|d| c.num_cells(d)).collect();
                let (_, chain) = a.build()?;
                json!({"valid": true, "cells_per_dim": counts, "chain_support": chain.support_len()})
            }
            Payload::Box(t) => {
                let (c, chain) = cubical::compile(t);
                let counts: Vec<usize> = (0..=t.dim()).map(|d| c.num_cells(d)).collect();
                json!({"valid": true, "cells_per_dim": counts, "chain_support": chain.support_len()})
            }
            Payload::Curves(s) => json!({"valid": true, "curves": s.len()}),
            Payload::Simplicial(t) => json!({"valid": true, "simplices": t.len()}),
        },
        Mass => json!({"mass": match &file.payload {
            Payload::Box(t) => t.mass(),
            Payload::Simplicial(t) => t.mass(),
            Payload::Curves(s) => s.total_mass(),
            Payload::Abstract(a) => a.build()?.1.mass(),
        }}),
        Massp => {
            let p = modulus(args, file)?;
            let v = match &file.payload {
                Payload::Box(t) => t.mass_p(p),
                Payload::Simplicial(t) => t.mass_p(p),
                Payload::Abstract(a) => a.build()?.1.mass_p(p),
                Payload::Curves(_) => return Err(pre("massp needs a chain carrier")),
            };
            json!({"p": p.get(), "mass_p": v})
        }
        Reduce => {
            let p = modulus(args, file)?;
            let (chain, payload) = match &file.payload {
                Payload::Box(t) => {
                    let r = t.reduce_mod_p(p);
                    (box_json(&r), Payload::Box(r))
                }
                Payload::Simplicial(t) => {
                    let r = t.reduce_mod_p(p);
                    (simplicial_json(&r), Payload::Simplicial(r))
                }
                Payload::Abstract(a) => {
                    let r = a.build()?.1.reduce_mod_p(p).lift();
                    (int_json(&r), Payload::Abstract(io::AbstractChain::from_chain(&r)))
                }
                Payload::Curves(_) => return Err(pre("reduce needs a chain carrier")),
            };
            let text = io::serialize(&ChainFile::new(payload).with_p(p))?;
            json!({"p": p.get(), "chain": chain, "file": text})
        }
        Boundary => json!({"boundary": match &file.payload {
            Payload::Box(t) => box_json(&t.boundary()?),
            Payload::Simplicial(t) => simplicial_json(&boundary_simplicial(t)?),
            Payload::Abstract(a) => int_json(&a.build()?.1.boundary()?),
            Payload::Curves(s) => system_boundary_json(s),
        }}),
        Flatnorm => {
            let oc = on_complex(file)?;
            let w = match args.bound {
                Some(b) => flatnorm::flat_norm_int(&oc.chain, b)?,
                None => flatnorm::flat_norm_int_auto(&oc.chain)?,
            };
            json!({"value": w.value, "exact": w.exact, "bound_saturated": w.bound_saturated, "r": oc.show(&w.r), "s": oc.show(&w.s)})
        }
        Flatnormp => {
            let p = modulus(args, file)?;
            let oc = on_complex(file)?;
            let w = flatnorm::flat_norm_mod_p_int(&oc.chain, p);
            json!({"p": p.get(), "value": w.value, "r": oc.show_modp(&w.r), "s": oc.show_modp(&w.s)})
        }
        Fill => {
            let p = modulus(args, file)?;
            let oc = on_complex(file)?;
            let f = flatnorm::fill_mod_p(&oc.chain.reduce_mod_p(p))?;
            json!({"p": p.get(), "mass": f.mass, "s": oc.show_modp(&f.s)})
        }
        Isoratio => {
            let p = modulus(args, file)?;
            let oc = on_complex(file)?;
            let ratio = flatnorm::isoperimetric_ratio(&oc.chain.reduce_mod_p(p))?;
            json!({"p": p.get(), "ratio": ratio})
        }
        Restrict => {
            let t = need_box(file)?;
            let (a, r) = one_axis_level(args, t.ambient_dim())?;
            json!({"below": box_json(&cubical::restrict(t, a, r)?), "above": box_json(&cubical::restrict_above(t, a, r)?)})
        }
        Slice => {
            let t = need_box(file)?;
            let (a, r) = one_axis_level(args, t.ambient_dim())?;
            json!({"slice": box_json(&cubical::slice(t, a, r)?)})
        }
        Islice => {
            let t = need_box(file)?;
            let ax = axes(args, t.ambient_dim())?;
            json!({"slice": box_json(&cubical::iterated_slice(t, &ax, &args.r)?)})
        }
        Slicemass => {
            let t = need_box(file)?;
            let p = modulus(args, file)?;
            let ax = axes(args, t.ambient_dim())?;
            if ax.is_empty() {
                return Err(pre("at least one --axis is required"));
            }
            json!({"p": p.get(), "value": cubical::slice_mass_integral(t, &ax, p)?, "mass_p": t.mass_p(p)})
        }
        Slicestar => {
            let t = need_box(file)?;
            let p = modulus(args, file)?;
            json!({"p": p.get(), "value": cubical::slice_mass_star(t, p)?, "mass_p": t.mass_p(p)})
        }
        Deform => {
            let t = need_box(file)?;
            let p = modulus(args, file)?;
            let eta = args.eta.ok_or_else(|| pre("--eta is required"))?;
            let d = cubical::deform(t, eta, args.rho.as_deref(), p)?;
            json!({
                "p": p.get(), "eta": eta, "m": d.m, "rho": d.rho,
                "P": box_json(&d.p), "U": box_json(&d.u), "Q": box_json(&d.q),
                "c_P": d.c_p, "c_U": d.c_u, "c_Q": d.c_q,
            })
        }
        Refinecompare => {
            let t = need_box(file)?;
            let p = modulus(args, file)?;
            let m = args.subdiv.ok_or_else(|| pre("--subdiv is required"))?;
            let (coarse, fine) = cubical::flat_norm_under_refinement(t, p, m)?;
            json!({"p": p.get(), "subdiv": m, "coarse": coarse, "fine": fine, "monotone": fine <= coarse})
        }
        Sysboundary => json!({"boundary": system_boundary_json(need_curves(file)?)}),
        Preprocess => {
            let pre_ = onedim::preprocess(need_curves(file)?);
            json!({"system": curves_json(&pre_.system), "trace": pre_.trace, "loops": pre_.loops})
        }
        Cyclecut => {
            let s = need_curves(file)?;
            let p = modulus(args, file)?;
            let cut = onedim::extract_cycle_indices(s, p)?;
            json!({
                "p": p.get(), "gamma1": cut.gamma1, "steps": cut.steps, "checks": cut.checks,
                "output_mass": cut.output_mass, "mass_bound": cut.mass_bound,
            })
        }
        Decompose => {
            let oc = on_graph(file)?;
            let walks = onedim::decompose_paths_loops(&oc.chain)?;
            let c = oc.chain.complex();
            let w: Vec<Value> = walks
                .iter()
                .map(|w| {
                    json!({
                        "closed": w.closed,
                        "mass": w.mass,
                        "vertices": w.vertices.iter().map(|&v| c.cells(0)[v].label()).collect::<Vec<_>>(),
                        "edges": w.edges.iter().map(|&(e, s)| json!({"cell": c.cells(1)[e].label(), "sign": s})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({"walks": w})
        }
        Cyclerep => {
            let p = modulus(args, file)?;
            let oc = on_graph(file)?;
            let r = onedim::cycle_representative(&oc.chain, p)?;
            json!({"p": p.get(), "mass_p_input": oc.chain.mass_p(p), "representative": oc.show(&r)})
        }
        Cone => {
            let t = need_simplicial(file)?;
            let x = args.apex.as_ref().ok_or_else(|| pre("--apex is required"))?;
            json!({"cone": simplicial_json(&cone(x, t)?)})
        }
        Conereport => {
            let t = need_simplicial(file)?;
            let p = modulus(args, file)?;
            let x = args.apex.as_ref().ok_or_else(|| pre("--apex is required"))?;
            let r = cone_mass_report(x, t, p)?;
            json!({"p": p.get(), "mass": r.mass, "mass_p": r.mass_p, "r": r.r, "bound": r.bound, "bound_p": r.bound_p})
        }
    })
}

fn system_boundary_json(s: &CurveSystem) -> Value {
    Value::Array(
        onedim::system_boundary(s)
            .into_iter()
            .map(|(point, g)| json!({"point": point, "coeff": g}))
            .collect(),
    )
}
