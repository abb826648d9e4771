//! File and inline-argument loading with line/column diagnostics.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use wahl_core::config::{ConfigFile, GraphRef, SphereConfiguration};
use wahl_core::lattice::{BlowupLattice, HomologyClass};
use wahl_core::plumbing::{GraphFile, PlumbingGraph};

/// Malformed input; always exit code 2.
#[derive(Debug)]
pub struct InputError {
    pub source: String,
    pub message: String,
}

impl InputError {
    pub fn new(source: impl Into<String>, message: impl fmt::Display) -> Self {
        Self { source: source.into(), message: message.to_string() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.source, self.message)
    }
}

impl std::error::Error for InputError {}

fn describe_json(err: &serde_json::Error) -> String {
    format!("line {}, column {}: {}", err.line(), err.column(), err)
}

pub fn parse_json<T: DeserializeOwned>(source: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::new(source, describe_json(&e)))
}

/// An argument that is either inline JSON (starting with `{` or `[`) or a
/// path to a JSON file. Relative paths resolve against `base`.
pub fn load_json<T: DeserializeOwned>(arg: &str, base: Option<&Path>) -> Result<(T, Option<PathBuf>), InputError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok((parse_json("<inline>", trimmed)?, None));
    }
    let path = match base {
        Some(b) if Path::new(arg).is_relative() => b.join(arg),
        _ => PathBuf::from(arg),
    };
    let text = fs::read_to_string(&path).map_err(|e| InputError::new(path.display().to_string(), e))?;
    let value = parse_json(&path.display().to_string(), &text)?;
    Ok((value, Some(path)))
}

pub fn graph_from_file(file: GraphFile, source: &str) -> Result<PlumbingGraph, InputError> {
    PlumbingGraph::try_from(file).map_err(|e| InputError::new(source, e))
}

pub fn load_graph(arg: &str, base: Option<&Path>) -> Result<PlumbingGraph, InputError> {
    let (file, _): (GraphFile, _) = load_json(arg, base)?;
    graph_from_file(file, arg)
}

fn parent(path: &Option<PathBuf>) -> Option<PathBuf> {
    path.as_ref().and_then(|p| p.parent().map(Path::to_path_buf))
}

pub struct LoadedConfig {
    pub lattice: BlowupLattice,
    pub graph: PlumbingGraph,
    pub classes: Vec<Option<HomologyClass>>,
    pub file: ConfigFile,
}

impl LoadedConfig {
    pub fn complete(&self, source: &str) -> Result<SphereConfiguration, InputError> {
        let classes = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone().ok_or_else(|| InputError::new(source, format!("classes[{i}] is null"))))
            .collect::<Result<Vec<_>, _>>()?;
        SphereConfiguration::new(self.lattice, self.graph.clone(), classes).map_err(|e| InputError::new(source, e))
    }
}

/// Loads a configuration file; the graph path resolves relative to it.
/// An empty class list means every class is unassigned.
pub fn load_config(arg: &str) -> Result<LoadedConfig, InputError> {
    let (file, path): (ConfigFile, _) = load_json(arg, None)?;
    let lattice = BlowupLattice::try_from(file.lattice).map_err(|e| InputError::new(arg, format!("lattice: {e}")))?;
    let graph = match &file.graph {
        GraphRef::Path(p) => load_graph(p, parent(&path).as_deref())?,
        GraphRef::Inline(g) => graph_from_file(g.clone(), &format!("{arg}: graph"))?,
    };
    let mut classes = file.partial_classes().map_err(|e| InputError::new(arg, format!("classes: {e}")))?;
    if classes.is_empty() {
        classes = vec![None; graph.len()];
    }
    if classes.len() != graph.len() {
        return Err(InputError::new(
            arg,
            format!("classes: {} entries for a {}-vertex graph", classes.len(), graph.len()),
        ));
    }
    Ok(LoadedConfig { lattice, graph, classes, file })
}

/// Comma or space separated integers, e.g. `3,-1,-1`.
pub fn parse_ints(arg: &str, what: &str) -> Result<Vec<i64>, InputError> {
    arg.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|e| InputError::new(what, format!("'{s}': {e}"))))
        .collect()
}

pub fn class_from(lattice: BlowupLattice, arg: &str, what: &str, evaluations: bool) -> Result<HomologyClass, InputError> {
    let values = parse_ints(arg, what)?;
    let r = if evaluations {
        HomologyClass::from_evaluations(lattice, &values)
    } else {
        HomologyClass::new(lattice, values)
    };
    r.map_err(|e| InputError::new(what, e))
}
