//! Reproduction manifest: named checks binding an operation, its inputs and
//! the expected value.
//!
//! Inputs name built-in objects (`"P1"`, `"a1"`, `"construction2"`, ...) or
//! give data inline. Checks run in order and report in order.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use wahl_core::config::{
    blow_up, fiber_decomposition_check, find_configuration_with, smooth_intersection, verify_configuration,
    SearchOptions, SphereConfiguration,
};
use wahl_core::constructions as cx;
use wahl_core::cutpaste::{freedman_classify, rational_blowdown, sw_transfer, BlowdownPlan, ClosedManifoldModel};
use wahl_core::lattice::{is_characteristic, BlowupLattice, HomologyClass, SymmetricForm};
use wahl_core::monodromy::{euler_count, evaluate, verify_certificate, verify_relation, FibrationCensus, MonodromyWord};
use wahl_core::plumbing::{boundary_h1, intersection_form, is_negative_definite, plumbed_invariants, GraphFile, PlumbingGraph};
use wahl_core::seifert::{h1_order_from_seifert, plumbing_to_seifert, seifert_to_plumbing, SeifertData};
use wahl_core::swcalc::{
    blowdown_dimension, chamber_sweep, class_condition_report, formal_dimension, small_perturbation_sw,
    unique_chamber, wall_between, wall_cross, wall_cross_back, SWContext,
};

use crate::input::{graph_from_file, load_graph};

pub const BUNDLED: &str = include_str!("../manifest/repro.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Published,
    Derived,
    Trivial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub provenance: Provenance,
    pub op: String,
    #[serde(default)]
    pub input: Value,
    pub expected: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproManifest {
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub provenance: Provenance,
    pub pass: bool,
    pub actual: Value,
    pub expected: Value,
}

type OpResult = Result<Value, String>;

fn field<'a>(input: &'a Value, key: &str) -> Result<&'a Value, String> {
    input.get(key).ok_or_else(|| format!("missing input field '{key}'"))
}

fn int(input: &Value, key: &str) -> Result<i64, String> {
    field(input, key)?.as_i64().ok_or_else(|| format!("'{key}' must be an integer"))
}

fn text<'a>(input: &'a Value, key: &str) -> Result<&'a str, String> {
    field(input, key)?.as_str().ok_or_else(|| format!("'{key}' must be a string"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct Resolver<'a> {
    base: Option<&'a Path>,
}

impl Resolver<'_> {
    fn graph(&self, v: &Value) -> Result<PlumbingGraph, String> {
        match v {
            Value::String(s) => match s.as_str() {
                "P1" => Ok(cx::p1()),
                "P2" => Ok(cx::p2()),
                "P4" => Ok(cx::p4()),
                path => load_graph(path, self.base).map_err(err),
            },
            Value::Object(m) if m.contains_key("wahl") => {
                let r = m["wahl"].as_i64().ok_or("'wahl' must be an integer")?;
                wahl_core::plumbing::wahl_tree(r).map_err(err)
            }
            other => {
                let file: GraphFile = serde_json::from_value(other.clone()).map_err(err)?;
                graph_from_file(file, "<inline graph>").map_err(err)
            }
        }
    }

    fn class(&self, v: &Value) -> Result<HomologyClass, String> {
        if let Some(name) = v.as_str() {
            let l = |n| BlowupLattice::cp2_blowup(n);
            return Ok(match name {
                "a1" => cx::a1(),
                "a2" => cx::a2(),
                "K1" => cx::k1(),
                "K2" => cx::k2(),
                "S1" => cx::s1(),
                "S2" => cx::s2(),
                "H13" => l(13).h().expect("rank one"),
                "H14" => l(14).h().expect("rank one"),
                "F9" => cx::fiber(9),
                _ => return Err(format!("unknown class '{name}'")),
            });
        }
        let lattice = self.lattice(field(v, "lattice")?)?;
        if let Some(ev) = v.get("evaluations") {
            let values: Vec<i64> = serde_json::from_value(ev.clone()).map_err(err)?;
            return HomologyClass::from_evaluations(lattice, &values).map_err(err);
        }
        let coeffs: Vec<i64> = serde_json::from_value(field(v, "coeffs")?.clone()).map_err(err)?;
        HomologyClass::new(lattice, coeffs).map_err(err)
    }

    fn lattice(&self, v: &Value) -> Result<BlowupLattice, String> {
        let [p, n]: [usize; 2] = serde_json::from_value(v.clone()).map_err(err)?;
        BlowupLattice::new(p, n).map_err(err)
    }

    fn config(&self, v: &Value) -> Result<SphereConfiguration, String> {
        match v.as_str() {
            Some("construction1") => Ok(cx::construction1()),
            Some("construction2") => Ok(cx::construction2()),
            Some("construction3") => Ok(cx::construction3()),
            _ => Err(format!("unknown configuration {v}")),
        }
    }

    fn census(&self, v: &Value) -> Result<FibrationCensus, String> {
        match v.as_str() {
            Some("I3") => Ok(cx::i3_census()),
            Some("I5") => Ok(cx::i5_census()),
            Some("I7") => Ok(cx::i7_census()),
            _ => {
                let spec: (u32, usize) = serde_json::from_value(v.clone()).map_err(err)?;
                FibrationCensus::ik_with_fishtails(spec.0, spec.1).map_err(err)
            }
        }
    }

    fn ambient(&self, v: &Value) -> Result<ClosedManifoldModel, String> {
        if let Some(n) = v.get("cp2_blowup") {
            let n = n.as_u64().ok_or("'cp2_blowup' must be a non-negative integer")?;
            return Ok(ClosedManifoldModel::cp2_blowup(n as usize));
        }
        let m: ClosedManifoldModel = serde_json::from_value(v.clone()).map_err(err)?;
        m.validate().map_err(err)?;
        Ok(m)
    }

    fn word(&self, v: &Value) -> Result<MonodromyWord, String> {
        v.as_str().ok_or("word must be a string")?.parse().map_err(err)
    }
}

fn run_op(op: &str, input: &Value, r: &Resolver) -> OpResult {
    match op {
        "h1_order" => {
            let b = boundary_h1(&r.graph(field(input, "graph")?)?).map_err(err)?;
            Ok(json!(b.h1_order.to_string()))
        }
        "smith_form" => {
            let q = intersection_form(&r.graph(field(input, "graph")?)?).map_err(err)?;
            Ok(json!(q.smith_normal_form().iter().map(|d| d.to_string()).collect::<Vec<_>>()))
        }
        "negative_definite" => Ok(json!(is_negative_definite(&r.graph(field(input, "graph")?)?).map_err(err)?)),
        "plumbed_invariants" => {
            let p = plumbed_invariants(&r.graph(field(input, "graph")?)?).map_err(err)?;
            Ok(json!({"e": p.e, "sigma": p.sigma}))
        }
        "blowdown" => {
            let plan = BlowdownPlan::for_graph(r.ambient(field(input, "ambient")?)?, &r.graph(field(input, "graph")?)?)
                .map_err(err)?;
            let out = rational_blowdown(&plan).map_err(err)?;
            let name = freedman_classify(&out).map_err(err)?;
            Ok(json!({"e": out.e, "sigma": out.sigma, "name": name.name}))
        }
        "class_report" => {
            let cfg = r.config(field(input, "config")?)?;
            let rep = class_condition_report(
                &r.class(field(input, "a")?)?,
                &r.class(field(input, "k")?)?,
                &r.class(field(input, "h")?)?,
                &cfg,
            )
            .map_err(err)?;
            Ok(json!({
                "a_sq": rep.a_sq, "h_dot_a": rep.h_dot_a, "k_dot_a": rep.k_dot_a,
                "restricts_to_zero": rep.restrictions.iter().all(|&v| v == 0),
                "all_pass": rep.all_pass(),
            }))
        }
        "pairings" => {
            let a = r.class(field(input, "a")?)?;
            let list = field(input, "with")?.as_array().ok_or("'with' must be a list")?;
            let vals = list
                .iter()
                .map(|c| a.pair(&r.class(c)?).map_err(err))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!(vals))
        }
        "formal_dimension" => {
            Ok(json!(formal_dimension(int(input, "k_sq")?, int(input, "sigma")?, int(input, "e")?).map_err(err)?))
        }
        "canonical_dimension" => {
            let k = r.class(field(input, "k")?)?;
            let n = k.lattice().negative_rank() as i64;
            Ok(json!(formal_dimension(k.square().map_err(err)?, 1 - n, 3 + n).map_err(err)?))
        }
        "wall_cross" => Ok(json!(wall_cross(int(input, "minus")?, int(input, "d")?).map_err(err)?)),
        "wall_between" => Ok(json!(wall_between(
            &r.class(field(input, "k")?)?,
            &r.class(field(input, "h")?)?,
            &r.class(field(input, "a")?)?
        )
        .map_err(err)?)),
        "small_perturbation_sw" => {
            let k = r.class(field(input, "k")?)?;
            let n = k.lattice().negative_rank();
            let ctx = SWContext::cp2_blowup(n, k).map_err(err)?;
            let v = small_perturbation_sw(&ctx, &r.class(field(input, "a")?)?, true).map_err(err)?;
            Ok(json!({"magnitude": v.value.abs(), "d": v.d, "sign_conventional": v.sign_conventional}))
        }
        "sw_transfer" => {
            let plan = BlowdownPlan::for_graph(r.ambient(field(input, "ambient")?)?, &r.graph(field(input, "graph")?)?)
                .map_err(err)?;
            Ok(json!(sw_transfer(int(input, "value")?, &plan, int(input, "d")?, true).map_err(err)?))
        }
        "dimension_transfer" => {
            let k = r.class(field(input, "k")?)?;
            let cfg = r.config(field(input, "config")?)?;
            let ks = cfg.classes.iter().map(|s| k.pair(s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            let n = k.lattice().negative_rank() as i64;
            let t = blowdown_dimension(k.square().map_err(err)?, 3 + n, 1 - n, &cfg.graph, &ks).map_err(err)?;
            Ok(json!({"d_before": t.d_before, "d_after": t.d_after}))
        }
        "unique_chamber" => Ok(json!(unique_chamber(int(input, "b_minus")?))),
        "chamber_sweep" => {
            let s = chamber_sweep(int(input, "max_b")? as usize, int(input, "bound")?);
            Ok(json!({"no_walls": s.no_walls(), "min_square": s.min_admissible_square}))
        }
        "evaluate_word" => {
            let m = evaluate(&r.word(field(input, "word")?)?);
            Ok(json!([
                [m.entry(0, 0).to_string(), m.entry(0, 1).to_string()],
                [m.entry(1, 0).to_string(), m.entry(1, 1).to_string()]
            ]))
        }
        "relation" => Ok(json!(verify_relation(&r.word(field(input, "lhs")?)?, &r.word(field(input, "rhs")?)?))),
        "power_family" => {
            let max = int(input, "max_k")?;
            Ok(json!((0..=max).all(|k| {
                evaluate(&MonodromyWord::letter(wahl_core::monodromy::Generator::A, k))
                    == wahl_core::monodromy::SL2Matrix::from_i64([[1, k], [0, 1]])
            })))
        }
        "euler_count" => Ok(json!(euler_count(&r.census(field(input, "census")?)?))),
        "certificate" => Ok(json!(verify_certificate(&r.census(field(input, "census")?)?).map_err(err)?)),
        "verify_configuration" => {
            let cfg = r.config(field(input, "config")?)?;
            Ok(json!(verify_configuration(&cfg).map_err(err)?.ok()))
        }
        "find_configuration" => {
            let g = r.graph(field(input, "graph")?)?;
            let l = r.lattice(field(input, "lattice")?)?;
            let fixed = match input.get("fixed") {
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|c| if c.is_null() { Ok(None) } else { r.class(c).map(Some) })
                    .collect::<Result<Vec<_>, _>>()?,
                _ => vec![None; g.len()],
            };
            let opts = SearchOptions::with_bound(int(input, "bound")?);
            let found = find_configuration_with(&g, l, &fixed, &opts).map_err(err)?;
            let verified = found.as_ref().map(|c| verify_configuration(c).map(|r| r.ok())).transpose().map_err(err)?;
            Ok(json!({"found": found.is_some(), "verified": verified.unwrap_or(false)}))
        }
        "smoothing_square" => {
            let (x, l) = blow_up(&r.class(field(input, "x")?)?, int(input, "m")?).map_err(err)?;
            let y = l.e(int(input, "with_e")? as usize);
            Ok(json!(smooth_intersection(&x, &y).map_err(err)?.square().map_err(err)?))
        }
        "fiber_decomposition" => Ok(json!(fiber_decomposition_check(&cx::i3_fiber(), &cx::fiber(9)))),
        "seifert_h1" => {
            let d: SeifertData = serde_json::from_value(field(input, "seifert")?.clone()).map_err(err)?;
            let d = SeifertData::new(d.e0, d.pairs).map_err(err)?;
            Ok(json!(h1_order_from_seifert(&d).map_err(err)?.to_string()))
        }
        "seifert_round_trip" => {
            let g = r.graph(field(input, "graph")?)?;
            let d = plumbing_to_seifert(&g).map_err(err)?;
            let back = seifert_to_plumbing(&d).map_err(err)?;
            let same = plumbing_to_seifert(&back).map_err(err)? == d && back.is_isomorphic_tree(&g).map_err(err)?;
            Ok(json!(d.is_normalized() && same))
        }
        "property" => {
            let cases = int(input, "cases")? as usize;
            let seed = int(input, "seed")? as u64;
            Ok(json!(property_failures(text(input, "suite")?, cases, seed)?))
        }
        other => Err(format!("unknown operation '{other}'")),
    }
}

fn rand_class(rng: &mut ChaCha8Rng, l: BlowupLattice) -> HomologyClass {
    HomologyClass::new(l, (0..l.rank()).map(|_| rng.gen_range(-9..=9)).collect()).expect("rank matches")
}

fn rand_lattice(rng: &mut ChaCha8Rng) -> BlowupLattice {
    BlowupLattice::new(rng.gen_range(0..=1), rng.gen_range(1..=14)).expect("valid ranks")
}

/// Number of failing cases among `cases` seeded random cases.
fn property_failures(suite: &str, cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..cases {
        let ok = match suite {
            "bilinearity" => {
                let l = rand_lattice(&mut rng);
                let (x, y, z) = (rand_class(&mut rng, l), rand_class(&mut rng, l), rand_class(&mut rng, l));
                let s = rng.gen_range(-9..=9);
                (&x + &(s * &y)).pair(&z) == Ok(x.pair(&z).unwrap_or(0) + s * y.pair(&z).unwrap_or(0))
                    && x.pair(&y) == y.pair(&x)
            }
            "characteristic" => {
                let l = rand_lattice(&mut rng);
                let k = HomologyClass::new(l, (0..l.rank()).map(|_| 2 * rng.gen_range(-5..=5) + 1).collect())
                    .expect("rank matches");
                let x = rand_class(&mut rng, l);
                is_characteristic(&k)
                    && (k.pair(&x).unwrap_or(1) - x.square().unwrap_or(0)).rem_euclid(2) == 0
            }
            "smith_chain" => {
                let n = rng.gen_range(1..=5);
                let mut rows = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in i..n {
                        let v = rng.gen_range(-6..=6);
                        rows[i][j] = v;
                        rows[j][i] = v;
                    }
                }
                let form = SymmetricForm::new(rows).map_err(err)?;
                let snf = form.smith_normal_form();
                let chain = snf.windows(2).all(|w| {
                    if w[0] == 0.into() {
                        w[1] == 0.into()
                    } else {
                        (&w[1] % &w[0]) == 0.into()
                    }
                });
                let product: num_bigint::BigInt = snf.iter().product();
                chain && product.magnitude() == form.determinant().magnitude()
            }
            "blow_up" => {
                let l = rand_lattice(&mut rng);
                let (x, y) = (rand_class(&mut rng, l), rand_class(&mut rng, l));
                let m = rng.gen_range(0..=4);
                let (bx, bl) = blow_up(&x, m).map_err(err)?;
                let by = y.extend_to(bl).map_err(err)?;
                bx.pair(&by) == x.pair(&y) && bx.square().map_err(err)? == x.square().map_err(err)? - m * m
            }
            "wall_cross" => {
                let minus = rng.gen_range(-1000..=1000);
                let d = 2 * rng.gen_range(0..=50);
                wall_cross(minus, d).and_then(|p| wall_cross_back(p, d)) == Ok(minus)
            }
            "sl2" => {
                let len = rng.gen_range(1..=24);
                let word: String = (0..len).map(|_| ['a', 'A', 'b', 'B'][rng.gen_range(0..4)]).collect();
                let w: MonodromyWord = word.parse().map_err(err)?;
                let m = evaluate(&w);
                m.det() == 1.into() && evaluate(&w.concat(&w.inverse())).is_identity()
            }
            other => return Err(format!("unknown property suite '{other}'")),
        };
        if !ok {
            failures += 1;
        }
    }
    Ok(failures)
}

pub fn parse_manifest(source: &str, text: &str) -> Result<ReproManifest, crate::input::InputError> {
    crate::input::parse_json(source, text)
}

pub fn run_manifest(m: &ReproManifest, base: Option<&Path>) -> Vec<CheckResult> {
    let resolver = Resolver { base };
    m.checks
        .iter()
        .map(|c| {
            let actual = match run_op(&c.op, &c.input, &resolver) {
                Ok(v) => v,
                Err(e) => json!({ "error": e }),
            };
            CheckResult {
                name: c.name.clone(),
                anchor: c.anchor.clone(),
                provenance: c.provenance,
                pass: actual == c.expected,
                actual,
                expected: c.expected.clone(),
            }
        })
        .collect()
}
