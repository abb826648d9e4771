//! Plumbing graphs of spheres and the invariants of the plumbed 4-manifold.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{SymmetricForm, SignatureStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlumbingError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge references unknown vertex id {0}")]
    UnknownVertex(u64),
    #[error("duplicate vertex id {0}")]
    DuplicateId(u64),
    #[error("graph is empty")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("wahl tree parameter must be even and at least 2, got {0}")]
    WahlParameter(i64),
}

/// A weighted graph of spheres; vertex weights are Euler numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    weights: Vec<i64>,
    edges: BTreeSet<(usize, usize)>,
}

impl PlumbingGraph {
    pub fn new(weights: Vec<i64>, edges: &[(usize, usize)]) -> Result<Self, PlumbingError> {
        if weights.is_empty() {
            return Err(PlumbingError::Empty);
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(PlumbingError::SelfLoop(a));
            }
            for v in [a, b] {
                if v >= weights.len() {
                    return Err(PlumbingError::UnknownVertex(v as u64));
                }
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(PlumbingError::DuplicateEdge(a, b));
            }
        }
        Ok(Self { weights, edges: set })
    }

    /// Star-shaped graph: a central vertex followed by arms listed
    /// center-outward.
    pub fn star(center: i64, arms: &[Vec<i64>]) -> Result<Self, PlumbingError> {
        let mut weights = vec![center];
        let mut edges = Vec::new();
        for arm in arms {
            let mut prev = 0;
            for &w in arm {
                weights.push(w);
                let v = weights.len() - 1;
                edges.push((prev, v));
                prev = v;
            }
        }
        Self::new(weights, &edges)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.len()
    }

    fn require_connected(&self) -> Result<(), PlumbingError> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(PlumbingError::Disconnected)
        }
    }

    /// Canonical encoding of a weighted tree, equal for isomorphic trees.
    pub fn tree_canonical_form(&self) -> Result<String, PlumbingError> {
        if !self.is_tree() {
            return Err(PlumbingError::NotATree);
        }
        Ok((0..self.len()).map(|root| self.encode_from(root, None)).min().unwrap())
    }

    fn encode_from(&self, v: usize, parent: Option<usize>) -> String {
        let mut children: Vec<String> = self
            .neighbors(v)
            .into_iter()
            .filter(|&u| Some(u) != parent)
            .map(|u| self.encode_from(u, Some(v)))
            .collect();
        children.sort();
        format!("({}{})", self.weights[v], children.concat())
    }

    /// Weighted-tree isomorphism.
    pub fn is_isomorphic_tree(&self, other: &PlumbingGraph) -> Result<bool, PlumbingError> {
        Ok(self.tree_canonical_form()? == other.tree_canonical_form()?)
    }
}

/// Wire format: `{"vertices":[{"id":0,"weight":-4},...],"edges":[[0,1],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[u64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: u64,
    pub weight: i64,
}

impl TryFrom<GraphFile> for PlumbingGraph {
    type Error = PlumbingError;

    fn try_from(file: GraphFile) -> Result<Self, PlumbingError> {
        let mut index = BTreeMap::new();
        for (i, v) in file.vertices.iter().enumerate() {
            if index.insert(v.id, i).is_some() {
                return Err(PlumbingError::DuplicateId(v.id));
            }
        }
        let edges = file
            .edges
            .iter()
            .map(|[a, b]| {
                let ia = *index.get(a).ok_or(PlumbingError::UnknownVertex(*a))?;
                let ib = *index.get(b).ok_or(PlumbingError::UnknownVertex(*b))?;
                Ok((ia, ib))
            })
            .collect::<Result<Vec<_>, PlumbingError>>()?;
        PlumbingGraph::new(file.vertices.iter().map(|v| v.weight).collect(), &edges)
    }
}

impl From<&PlumbingGraph> for GraphFile {
    fn from(g: &PlumbingGraph) -> Self {
        GraphFile {
            vertices: g
                .weights
                .iter()
                .enumerate()
                .map(|(i, &w)| VertexEntry { id: i as u64, weight: w })
                .collect(),
            edges: g.edges.iter().map(|&(a, b)| [a as u64, b as u64]).collect(),
        }
    }
}

/// `H_1` of the boundary 3-manifold, read off the cokernel of the form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryInvariants {
    /// `|H_1|`, or 0 when `H_1` is infinite.
    pub h1_order: BigInt,
    /// Invariant factors greater than one (infinite cyclic factors show as 0).
    pub h1_divisors: Vec<BigInt>,
}

impl BoundaryInvariants {
    pub fn is_finite(&self) -> bool {
        !self.h1_order.is_zero()
    }
}

/// Euler characteristic, signature and Betti numbers of a compact piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactPieceInvariants {
    pub e: i64,
    pub sigma: i64,
    pub b1: i64,
    pub b2: i64,
}

impl CompactPieceInvariants {
    /// The numbers of a rational homology ball. No handle decomposition is
    /// built; only these invariants enter the blow-down bookkeeping.
    pub fn rational_ball() -> Self {
        Self { e: 1, sigma: 0, b1: 0, b2: 0 }
    }

    pub fn is_negative_definite(&self) -> bool {
        self.sigma == -self.b2
    }
}

pub fn intersection_form(g: &PlumbingGraph) -> Result<SymmetricForm, PlumbingError> {
    g.require_connected()?;
    let n = g.len();
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = g.weights[i];
    }
    for (a, b) in g.edges() {
        rows[a][b] = 1;
        rows[b][a] = 1;
    }
    Ok(SymmetricForm::new(rows).expect("plumbing matrix is symmetric"))
}

pub fn boundary_h1(g: &PlumbingGraph) -> Result<BoundaryInvariants, PlumbingError> {
    let q = intersection_form(g)?;
    let order = q.determinant().abs();
    let h1_divisors = q.smith_normal_form().into_iter().filter(|d| !d.is_one()).collect();
    Ok(BoundaryInvariants { h1_order: order, h1_divisors })
}

pub fn signature_stats(g: &PlumbingGraph) -> Result<SignatureStats, PlumbingError> {
    Ok(intersection_form(g)?.signature_stats())
}

pub fn is_negative_definite(g: &PlumbingGraph) -> Result<bool, PlumbingError> {
    Ok(intersection_form(g)?.is_negative_definite())
}

/// One 0-handle plus one 2-handle per vertex.
pub fn plumbed_invariants(g: &PlumbingGraph) -> Result<CompactPieceInvariants, PlumbingError> {
    if !g.is_tree() {
        return Err(if g.is_connected() { PlumbingError::NotATree } else { PlumbingError::Disconnected });
    }
    let n = g.len() as i64;
    let stats = signature_stats(g)?;
    Ok(CompactPieceInvariants { e: n + 1, sigma: stats.signature(), b1: 0, b2: n })
}

/// Wahl-type tree: central `-4` vertex with arms `[-(r+1)]`, `[-3]` and
/// `[-2 x (r-2), -3]`.
///
/// For `r = 2, 4, 6` this gives the trees `P1`, `P2`, `P4`.
pub fn wahl_tree(r: i64) -> Result<PlumbingGraph, PlumbingError> {
    if r < 2 || r % 2 != 0 {
        return Err(PlumbingError::WahlParameter(r));
    }
    let mut chain = vec![-2; (r - 2) as usize];
    chain.push(-3);
    PlumbingGraph::star(-4, &[vec![-(r + 1)], vec![-3], chain])
}
