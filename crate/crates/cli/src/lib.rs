//! `wahl` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! malformed input.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wahl_core::config::{find_configuration_with, verify_configuration, ConfigError, ConfigFile, SearchOptions};
use wahl_core::cutpaste::{freedman_classify, rational_blowdown, BlowdownPlan, ClosedManifoldModel};
use wahl_core::monodromy::{census_from_positive_word, euler_count, evaluate, verify_certificate, MonodromyWord};
use wahl_core::plumbing::{
    boundary_h1, intersection_form, plumbed_invariants, signature_stats, wahl_tree, GraphFile, PlumbingGraph,
};
use wahl_core::seifert::{h1_order_from_seifert, plumbing_to_seifert, seifert_to_plumbing, SeifertData};
use wahl_core::swcalc::{class_condition_report, formal_dimension, wall_cross};

pub mod input;
pub mod manifest;

use input::{class_from, load_config, load_graph, load_json, InputError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "wahl", version, about = "Exact invariants of plumbings, rational blow-downs and elliptic monodromy")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intersection form, definiteness, e, sigma and boundary H_1 of a plumbing graph.
    Info { graph: String },
    /// Boundary H_1 of a plumbing graph.
    Boundary { graph: String },
    /// Wahl-type tree for even r >= 2, as a graph file.
    Wahl { r: i64 },
    /// Rational blow-down of a plan file.
    Blowdown { plan: String },
    /// Formal dimension (K^2 - (3 sigma + 2 e)) / 4.
    Swdim {
        #[arg(long, allow_hyphen_values = true)]
        k_sq: i64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: i64,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
    },
    /// Value across one wall: minus - (-1)^(d/2).
    Wallcross {
        #[arg(long, allow_hyphen_values = true)]
        minus: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Class conditions of `a` against a configuration file.
    Swreport {
        /// Configuration file whose lattice and spheres are used.
        config: String,
        /// Coefficients of `a` in the basis H, E1, ...
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Evaluations of K on H, E1, ... (default 3, 1, ..., 1).
        #[arg(long, allow_hyphen_values = true)]
        k_eval: Option<String>,
        /// Coefficients of the period anchor (default H).
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Sphere configurations.
    #[command(subcommand)]
    Config(ConfigCommand),
    /// SL(2,Z) monodromy words.
    #[command(subcommand)]
    Monodromy(MonodromyCommand),
    /// Seifert invariants.
    #[command(subcommand)]
    Seifert(SeifertCommand),
    /// Run the reproduction manifest.
    Repro {
        #[arg(long)]
        manifest: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConfigCommand {
    /// Check squares and pairings of a complete configuration.
    Verify { config: String },
    /// Complete the null classes of a configuration by bounded search.
    Search {
        config: String,
        #[arg(long, default_value_t = wahl_core::config::DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = wahl_core::config::DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum MonodromyCommand {
    /// Evaluate a word such as "(a^3 b)^3".
    Eval { word: String },
    /// Check that two words evaluate to the same matrix.
    Verify { lhs: String, rhs: String },
    /// Fiber census read off a positive word.
    Census { word: String },
}

#[derive(Debug, Subcommand)]
pub enum SeifertCommand {
    /// Star-shaped plumbing of Seifert data `{"e0":..,"pairs":[[a,b],..]}`.
    ToPlumbing { seifert: String },
    /// Seifert data of a star-shaped plumbing graph.
    FromPlumbing { graph: String },
    /// |H_1| of Seifert data.
    H1 { seifert: String },
}

/// What a command produced: text lines, a JSON value and a verdict.
pub struct Report {
    pub ok: bool,
    pub lines: Vec<String>,
    pub json: Value,
}

impl Report {
    fn ok(lines: Vec<String>, json: Value) -> Self {
        Self { ok: true, lines, json }
    }
}

fn input_err(source: &str) -> impl Fn(String) -> InputError + '_ {
    move |m| InputError::new(source, m)
}

fn graph_summary(g: &PlumbingGraph) -> Result<Value, InputError> {
    let q = intersection_form(g).map_err(|e| InputError::new("graph", e))?;
    let stats = signature_stats(g).map_err(|e| InputError::new("graph", e))?;
    let b = boundary_h1(g).map_err(|e| InputError::new("graph", e))?;
    let inv = plumbed_invariants(g).ok();
    Ok(json!({
        "form": q.rows(),
        "det": q.determinant().to_string(),
        "negative_definite": stats.is_negative_definite(),
        "b_plus": stats.b_plus,
        "b_minus": stats.b_minus,
        "b_zero": stats.b_zero,
        "parity": stats.parity,
        "e": inv.map(|p| p.e),
        "sigma": stats.signature(),
        "h1_order": b.h1_order.to_string(),
        "h1_divisors": b.h1_divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    }))
}

fn info(graph: &str) -> Result<Report, InputError> {
    let g = load_graph(graph, None)?;
    let v = graph_summary(&g)?;
    let lines = vec![
        format!("vertices: {}", g.len()),
        format!("weights: {:?}", g.weights()),
        format!("det: {}", v["det"].as_str().unwrap_or_default()),
        format!("negative definite: {}", v["negative_definite"]),
        format!("e: {}", v["e"]),
        format!("sigma: {}", v["sigma"]),
        format!("parity: {}", v["parity"].as_str().unwrap_or_default()),
        format!("boundary H1 order: {}", v["h1_order"].as_str().unwrap_or_default()),
        format!("boundary H1 invariant factors: {}", v["h1_divisors"]),
    ];
    Ok(Report::ok(lines, v))
}

fn boundary(graph: &str) -> Result<Report, InputError> {
    let g = load_graph(graph, None)?;
    let b = boundary_h1(&g).map_err(|e| InputError::new(graph, e))?;
    let divisors: Vec<String> = b.h1_divisors.iter().map(|d| d.to_string()).collect();
    let lines = vec![
        format!("H1 order: {}", if b.is_finite() { b.h1_order.to_string() } else { "infinite".into() }),
        format!("invariant factors: [{}]", divisors.join(", ")),
    ];
    Ok(Report::ok(lines, json!({"h1_order": b.h1_order.to_string(), "h1_divisors": divisors, "finite": b.is_finite()})))
}

fn wahl(r: i64) -> Result<Report, InputError> {
    let g = wahl_tree(r).map_err(|e| InputError::new("r", e))?;
    let file = GraphFile::from(&g);
    let text = serde_json::to_string(&file).expect("graph serializes");
    Ok(Report::ok(vec![text], serde_json::to_value(&file).expect("graph serializes")))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    ambient: AmbientSpec,
    graph: wahl_core::config::GraphRef,
    #[serde(default = "default_true")]
    lspace: bool,
}

fn default_true() -> bool {
    true
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum AmbientSpec {
    Blowup { cp2_blowup: usize },
    Model(ClosedManifoldModel),
}

fn blowdown(plan: &str) -> Result<Report, InputError> {
    let (file, path): (PlanFile, _) = load_json(plan, None)?;
    let base = path.as_ref().and_then(|p| p.parent().map(Path::to_path_buf));
    let graph = match &file.graph {
        wahl_core::config::GraphRef::Path(p) => load_graph(p, base.as_deref())?,
        wahl_core::config::GraphRef::Inline(g) => input::graph_from_file(g.clone(), plan)?,
    };
    let ambient = match file.ambient {
        AmbientSpec::Blowup { cp2_blowup } => ClosedManifoldModel::cp2_blowup(cp2_blowup),
        AmbientSpec::Model(m) => {
            m.validate().map_err(|e| InputError::new(plan, format!("ambient: {e}")))?;
            m
        }
    };
    let mut p = BlowdownPlan::for_graph(ambient, &graph).map_err(|e| InputError::new(plan, e))?;
    p.lspace_flag = file.lspace;
    let out = rational_blowdown(&p).map_err(|e| InputError::new(plan, e))?;
    let class = freedman_classify(&out).ok();
    let name = class.as_ref().map(|c| c.name.clone()).unwrap_or_else(|| "not classified (not simply connected)".into());
    let mut lines = vec![format!("e: {}", out.e), format!("sigma: {}", out.sigma), format!("classification: {name}")];
    lines.extend(out.assumptions.iter().map(|a| format!("assumption: {a}")));
    Ok(Report::ok(lines, json!({"e": out.e, "sigma": out.sigma, "name": name, "assumptions": out.assumptions})))
}

fn swreport(config: &str, a: &str, k_eval: Option<&str>, h: Option<&str>) -> Result<Report, InputError> {
    let loaded = load_config(config)?;
    let cfg = loaded.complete(config)?;
    let l = cfg.lattice;
    let a = class_from(l, a, "--a", false)?;
    let k = match k_eval {
        Some(s) => class_from(l, s, "--k-eval", true)?,
        None => {
            let values: Vec<i64> = (0..l.rank()).map(|i| if l.sign(i) > 0 { 3 } else { 1 }).collect();
            wahl_core::lattice::HomologyClass::from_evaluations(l, &values).map_err(|e| InputError::new("K", e))?
        }
    };
    let h = match h {
        Some(s) => class_from(l, s, "--h", false)?,
        None => l.h().ok_or_else(|| InputError::new("--h", "lattice has no positive class; pass --h"))?,
    };
    let rep = class_condition_report(&a, &k, &h, &cfg).map_err(|e| InputError::new(config, e))?;
    let lines = rep.lines.iter().map(ToString::to_string).collect();
    Ok(Report { ok: rep.all_pass(), lines, json: serde_json::to_value(&rep).expect("report serializes") })
}

fn config_verify(config: &str) -> Result<Report, InputError> {
    let loaded = load_config(config)?;
    let cfg = loaded.complete(config)?;
    let report = verify_configuration(&cfg).map_err(|e| InputError::new(config, e))?;
    let mut lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    if report.ok() {
        lines.push("configuration realizes the graph".into());
    }
    let json = json!({
        "ok": report.ok(),
        "violations": report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "edge_signs": report.edge_signs,
    });
    Ok(Report { ok: report.ok(), lines, json })
}

fn config_search(config: &str, bound: i64, budget: u64) -> Result<Report, InputError> {
    let loaded = load_config(config)?;
    let opts = SearchOptions { bound, budget, ..SearchOptions::default() };
    match find_configuration_with(&loaded.graph, loaded.lattice, &loaded.classes, &opts) {
        Ok(Some(c)) => {
            let file = ConfigFile {
                lattice: (&c).into(),
                graph: loaded.file.graph.clone(),
                classes: c.classes.iter().map(|x| Some(x.coeffs().to_vec())).collect(),
            };
            let lines = c.classes.iter().enumerate().map(|(i, x)| format!("v{i}: {x}")).collect();
            Ok(Report::ok(lines, serde_json::to_value(&file).expect("config serializes")))
        }
        Ok(None) => Ok(Report {
            ok: false,
            lines: vec![format!("no configuration with coefficients in [-{bound}, {bound}]")],
            json: json!({"found": false}),
        }),
        Err(ConfigError::BudgetExceeded(b)) => Ok(Report {
            ok: false,
            lines: vec![format!("search budget of {b} nodes exhausted")],
            json: json!({"found": null, "budget_exceeded": b}),
        }),
        Err(e) => Err(InputError::new(config, e)),
    }
}

fn parse_word(s: &str) -> Result<MonodromyWord, InputError> {
    s.parse().map_err(|e| InputError::new("word", e))
}

fn matrix_json(w: &MonodromyWord) -> (Value, String, bool) {
    let m = evaluate(w);
    let v = json!([
        [m.entry(0, 0).to_string(), m.entry(0, 1).to_string()],
        [m.entry(1, 0).to_string(), m.entry(1, 1).to_string()]
    ]);
    (v, m.to_string(), m.is_identity())
}

fn monodromy(cmd: &MonodromyCommand) -> Result<Report, InputError> {
    match cmd {
        MonodromyCommand::Eval { word } => {
            let w = parse_word(word)?;
            let (v, text, id) = matrix_json(&w);
            let mut lines = vec![format!("{w} = {text}")];
            if id {
                lines.push("identity".into());
            }
            Ok(Report::ok(lines, json!({"word": w.to_string(), "matrix": v, "identity": id})))
        }
        MonodromyCommand::Verify { lhs, rhs } => {
            let (l, r) = (parse_word(lhs)?, parse_word(rhs)?);
            let (lv, lt, _) = matrix_json(&l);
            let (rv, rt, _) = matrix_json(&r);
            let equal = lv == rv;
            let verdict = if equal { "equal" } else { "different" };
            Ok(Report {
                ok: equal,
                lines: vec![format!("{l} = {lt}"), format!("{r} = {rt}"), verdict.into()],
                json: json!({"lhs": lv, "rhs": rv, "equal": equal}),
            })
        }
        MonodromyCommand::Census { word } => {
            let w = parse_word(word)?;
            let c = census_from_positive_word(&w).map_err(|e| InputError::new("word", e))?;
            let certified = verify_certificate(&c).map_err(|e| InputError::new("word", e))?;
            let count = euler_count(&c);
            let fibers: Vec<String> = c
                .fibers
                .iter()
                .map(|f| match &f.conjugator {
                    Some(x) => format!("{} conjugated by {x}", f.kind),
                    None => f.kind.to_string(),
                })
                .collect();
            let mut lines = fibers.clone();
            lines.push(format!("euler count: {count}"));
            lines.push(format!("closes up over the sphere: {certified}"));
            Ok(Report { ok: certified, lines, json: json!({"fibers": fibers, "euler_count": count, "certified": certified}) })
        }
    }
}

fn load_seifert(arg: &str) -> Result<SeifertData, InputError> {
    let (d, _): (SeifertData, _) = load_json(arg, None)?;
    SeifertData::new(d.e0, d.pairs).map_err(|e| InputError::new(arg, e))
}

fn seifert(cmd: &SeifertCommand) -> Result<Report, InputError> {
    match cmd {
        SeifertCommand::ToPlumbing { seifert } => {
            let d = load_seifert(seifert)?;
            let g = seifert_to_plumbing(&d).map_err(|e| InputError::new(seifert.as_str(), e))?;
            let file = GraphFile::from(&g);
            Ok(Report::ok(
                vec![serde_json::to_string(&file).expect("graph serializes")],
                serde_json::to_value(&file).expect("graph serializes"),
            ))
        }
        SeifertCommand::FromPlumbing { graph } => {
            let g = load_graph(graph, None)?;
            let d = plumbing_to_seifert(&g).map_err(|e| InputError::new(graph.as_str(), e))?;
            let pairs: Vec<String> = d.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
            Ok(Report::ok(
                vec![format!("M({}; {})", d.e0, pairs.join(", "))],
                serde_json::to_value(&d).expect("seifert serializes"),
            ))
        }
        SeifertCommand::H1 { seifert } => {
            let d = load_seifert(seifert)?;
            let order = h1_order_from_seifert(&d).map_err(|e| InputError::new(seifert.as_str(), e))?;
            Ok(Report::ok(vec![format!("H1 order: {order}")], json!({"h1_order": order.to_string()})))
        }
    }
}

fn repro(path: Option<&str>) -> Result<Report, InputError> {
    let (m, base) = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| InputError::new(p, e))?;
            let base = Path::new(p).parent().map(Path::to_path_buf);
            (manifest::parse_manifest(p, &text)?, base)
        }
        None => (manifest::parse_manifest("<bundled manifest>", manifest::BUNDLED)?, None),
    };
    let results = manifest::run_manifest(&m, base.as_deref());
    let failed = results.iter().filter(|r| !r.pass).count();
    let mut lines: Vec<String> = results
        .iter()
        .map(|r| {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            let tag = serde_json::to_value(r.provenance).expect("tag serializes");
            let mut line = format!("{verdict} {:<9} {}: {}", tag.as_str().unwrap_or_default(), r.name, r.actual);
            if !r.pass {
                line.push_str(&format!(" (expected {})", r.expected));
            }
            line.push_str(&format!(" -- {}", r.anchor));
            line
        })
        .collect();
    lines.push(format!("{} checks, {} failed", results.len(), failed));
    Ok(Report { ok: failed == 0, lines, json: json!({"checks": results, "failed": failed}) })
}

pub fn execute(cli: &Cli) -> Result<Report, InputError> {
    match &cli.command {
        Command::Info { graph } => info(graph),
        Command::Boundary { graph } => boundary(graph),
        Command::Wahl { r } => wahl(*r),
        Command::Blowdown { plan } => blowdown(plan),
        Command::Swdim { k_sq, sigma, e } => {
            let d = formal_dimension(*k_sq, *sigma, *e).map_err(|e| input_err("swdim")(e.to_string()))?;
            Ok(Report::ok(vec![format!("d = {d}")], json!({"d": d})))
        }
        Command::Wallcross { minus, d } => {
            let plus = wall_cross(*minus, *d).map_err(|e| input_err("wallcross")(e.to_string()))?;
            Ok(Report::ok(vec![format!("plus = {plus}")], json!({"minus": minus, "plus": plus, "d": d})))
        }
        Command::Swreport { config, a, k_eval, h } => swreport(config, a, k_eval.as_deref(), h.as_deref()),
        Command::Config(ConfigCommand::Verify { config }) => config_verify(config),
        Command::Config(ConfigCommand::Search { config, bound, budget }) => config_search(config, *bound, *budget),
        Command::Monodromy(cmd) => monodromy(cmd),
        Command::Seifert(cmd) => seifert(cmd),
        Command::Repro { manifest } => repro(manifest.as_deref()),
    }
}

/// Parses arguments, runs the command, prints the report and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => {
                    for l in &report.lines {
                        println!("{l}");
                    }
                }
                Format::Json => {
                    let mut v = report.json;
                    if let Value::Object(m) = &mut v {
                        m.insert("ok".into(), json!(report.ok));
                    } else {
                        v = json!({"ok": report.ok, "result": v});
                    }
                    println!("{}", serde_json::to_string_pretty(&v).expect("json output"));
                }
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
