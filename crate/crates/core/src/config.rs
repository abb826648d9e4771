//! Sphere configurations inside blow-up lattices.
//!
//! A configuration assigns a class to every vertex of a plumbing graph. It
//! realizes the graph when the squares are the vertex weights and adjacent
//! classes meet once (in absolute value; sphere orientations are free) while
//! non-adjacent classes are orthogonal. Only this algebraic shadow is checked,
//! never that the classes are represented by embedded spheres.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{BlowupLattice, HomologyClass, LatticeError};
use crate::monodromy::FiberKind;
use crate::plumbing::{GraphFile, PlumbingGraph};

pub const DEFAULT_BOUND: i64 = 3;
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{classes} classes for {vertices} vertices")]
    CountMismatch { classes: usize, vertices: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("fixed classes are inconsistent:\n{0}")]
    InconsistentFixed(ConfigReport),
    #[error("search bound must be at least 1, got {0}")]
    Bound(i64),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("smoothing needs x.y >= 1, got {0}")]
    NotIntersecting(i64),
    #[error("negative double point count {0}")]
    NegativeCount(i64),
    #[error("blow-up multiplicity must be non-negative, got {0}")]
    Multiplicity(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereConfiguration {
    pub lattice: BlowupLattice,
    pub graph: PlumbingGraph,
    pub classes: Vec<HomologyClass>,
}

impl SphereConfiguration {
    pub fn new(
        lattice: BlowupLattice,
        graph: PlumbingGraph,
        classes: Vec<HomologyClass>,
    ) -> Result<Self, ConfigError> {
        if classes.len() != graph.len() {
            return Err(ConfigError::CountMismatch { classes: classes.len(), vertices: graph.len() });
        }
        for c in &classes {
            if c.lattice() != lattice {
                return Err(LatticeError::LatticeMismatch(c.lattice(), lattice).into());
            }
        }
        Ok(Self { lattice, graph, classes })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Square { vertex: usize, expected: i64, actual: i64 },
    Pairing { i: usize, j: usize, edge: bool, actual: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Square { vertex, expected, actual } => {
                write!(f, "square v{vertex}: expected {expected}, got {actual}")
            }
            Violation::Pairing { i, j, edge: true, actual } => {
                write!(f, "pairing v{i}.v{j}: expected +-1 (edge), got {actual}")
            }
            Violation::Pairing { i, j, edge: false, actual } => {
                write!(f, "pairing v{i}.v{j}: expected 0 (no edge), got {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfigReport {
    pub violations: Vec<Violation>,
    /// `(i, j, sign of pairing)` for every edge whose pairing is +-1.
    pub edge_signs: Vec<(usize, usize, i64)>,
}

impl ConfigReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ConfigReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the assigned vertices only; `None` entries are skipped.
pub fn verify_partial(
    graph: &PlumbingGraph,
    lattice: BlowupLattice,
    classes: &[Option<HomologyClass>],
) -> Result<ConfigReport, ConfigError> {
    if classes.len() != graph.len() {
        return Err(ConfigError::CountMismatch { classes: classes.len(), vertices: graph.len() });
    }
    let mut report = ConfigReport::default();
    for (i, c) in classes.iter().enumerate() {
        let Some(c) = c else { continue };
        if c.lattice() != lattice {
            return Err(LatticeError::LatticeMismatch(c.lattice(), lattice).into());
        }
        let sq = c.square()?;
        if sq != graph.weight(i) {
            report.violations.push(Violation::Square { vertex: i, expected: graph.weight(i), actual: sq });
        }
        for (j, d) in classes.iter().enumerate().skip(i + 1) {
            let Some(d) = d else { continue };
            let p = c.pair(d)?;
            let edge = graph.has_edge(i, j);
            if edge && p.abs() == 1 {
                report.edge_signs.push((i, j, p));
            } else if (edge && p.abs() != 1) || (!edge && p != 0) {
                report.violations.push(Violation::Pairing { i, j, edge, actual: p });
            }
        }
    }
    Ok(report)
}

pub fn verify_configuration(c: &SphereConfiguration) -> Result<ConfigReport, ConfigError> {
    let opts: Vec<Option<HomologyClass>> = c.classes.iter().cloned().map(Some).collect();
    verify_partial(&c.graph, c.lattice, &opts)
}

/// Extra linear constraints a search may impose on every unfixed class.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub bound: i64,
    pub budget: u64,
    /// Every class must be orthogonal to each of these.
    pub orthogonal_to: Vec<HomologyClass>,
    /// When set, every class `S` must satisfy `K.S = S.S + 2`.
    pub adjunction: Option<HomologyClass>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { bound: DEFAULT_BOUND, budget: DEFAULT_BUDGET, orthogonal_to: Vec::new(), adjunction: None }
    }
}

impl SearchOptions {
    pub fn with_bound(bound: i64) -> Self {
        Self { bound, ..Self::default() }
    }
}

pub fn find_configuration(
    graph: &PlumbingGraph,
    lattice: BlowupLattice,
    fixed: &[Option<HomologyClass>],
    bound: i64,
) -> Result<Option<SphereConfiguration>, ConfigError> {
    find_configuration_with(graph, lattice, fixed, &SearchOptions::with_bound(bound))
}

/// Depth-first search over coefficient vectors with entries in
/// `[-bound, bound]`, vertex-major and coordinate-ascending, so the first hit
/// is the lexicographically least completion of `fixed`.
pub fn find_configuration_with(
    graph: &PlumbingGraph,
    lattice: BlowupLattice,
    fixed: &[Option<HomologyClass>],
    opts: &SearchOptions,
) -> Result<Option<SphereConfiguration>, ConfigError> {
    if opts.bound < 1 {
        return Err(ConfigError::Bound(opts.bound));
    }
    let report = verify_partial(graph, lattice, fixed)?;
    if !report.ok() {
        return Err(ConfigError::InconsistentFixed(report));
    }
    for c in opts.orthogonal_to.iter().chain(opts.adjunction.iter()) {
        if c.lattice() != lattice {
            return Err(LatticeError::LatticeMismatch(c.lattice(), lattice).into());
        }
    }
    let mut search = Search::new(graph, lattice, fixed, opts);
    if search.vertex(0)? {
        let classes = search
            .assigned
            .into_iter()
            .map(|c| HomologyClass::new(lattice, c.expect("complete assignment")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(SphereConfiguration::new(lattice, graph.clone(), classes)?))
    } else {
        Ok(None)
    }
}

struct Constraint {
    // x.c = sum_j x_j * weighted[j]
    weighted: Vec<i64>,
    // suffix sums of weighted[j]^2 and |weighted[j]|
    tail_sq: Vec<i64>,
    tail_abs: Vec<i64>,
    targets: Vec<i64>,
}

impl Constraint {
    fn new(lattice: BlowupLattice, class: &[i64], targets: Vec<i64>) -> Self {
        let weighted: Vec<i64> = class.iter().enumerate().map(|(j, c)| lattice.sign(j) * c).collect();
        let n = weighted.len();
        let mut tail_sq = vec![0; n + 1];
        let mut tail_abs = vec![0; n + 1];
        for j in (0..n).rev() {
            tail_sq[j] = tail_sq[j + 1] + weighted[j] * weighted[j];
            tail_abs[j] = tail_abs[j + 1] + weighted[j].abs();
        }
        Self { weighted, tail_sq, tail_abs, targets }
    }
}

struct Search<'a> {
    graph: &'a PlumbingGraph,
    lattice: BlowupLattice,
    opts: &'a SearchOptions,
    assigned: Vec<Option<Vec<i64>>>,
    order: Vec<usize>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(
        graph: &'a PlumbingGraph,
        lattice: BlowupLattice,
        fixed: &[Option<HomologyClass>],
        opts: &'a SearchOptions,
    ) -> Self {
        let assigned: Vec<Option<Vec<i64>>> =
            fixed.iter().map(|c| c.as_ref().map(|c| c.coeffs().to_vec())).collect();
        let order = (0..graph.len()).filter(|&v| assigned[v].is_none()).collect();
        Self { graph, lattice, opts, assigned, order, nodes: 0 }
    }

    fn vertex(&mut self, idx: usize) -> Result<bool, ConfigError> {
        let Some(&v) = self.order.get(idx) else {
            return Ok(true);
        };
        let w = self.graph.weight(v);
        let mut constraints = Vec::new();
        for (u, c) in self.assigned.iter().enumerate() {
            if let Some(c) = c {
                let targets = if self.graph.has_edge(u, v) { vec![-1, 1] } else { vec![0] };
                constraints.push(Constraint::new(self.lattice, c, targets));
            }
        }
        for o in &self.opts.orthogonal_to {
            constraints.push(Constraint::new(self.lattice, o.coeffs(), vec![0]));
        }
        if let Some(k) = &self.opts.adjunction {
            constraints.push(Constraint::new(self.lattice, k.coeffs(), vec![w + 2]));
        }
        let mut x = vec![0i64; self.lattice.rank()];
        let mut partial = vec![0i64; constraints.len()];
        self.coordinate(idx, v, w, 0, 0, &mut x, &constraints, &mut partial)
    }

    /// `pos_norm` is the sum of squares over positive coordinates chosen so far
    /// while `j` is still positive; afterwards it is the remaining negative budget.
    #[allow(clippy::too_many_arguments)]
    fn coordinate(
        &mut self,
        idx: usize,
        v: usize,
        w: i64,
        j: usize,
        norm: i64,
        x: &mut Vec<i64>,
        cons: &[Constraint],
        partial: &mut Vec<i64>,
    ) -> Result<bool, ConfigError> {
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            return Err(ConfigError::BudgetExceeded(self.opts.budget));
        }
        let rank = self.lattice.rank();
        let pos = self.lattice.positive_rank();
        let b = self.opts.bound;
        // switch from accumulating the positive part to tracking the budget
        let budget = if j == pos { norm - w } else { norm };
        if j >= pos {
            let left = (rank - j) as i64;
            if budget < 0 || budget > left * b * b {
                return Ok(false);
            }
            for (c, p) in cons.iter().zip(partial.iter()) {
                let reachable = c.targets.iter().any(|t| {
                    let gap = t - p;
                    gap.abs() <= b * c.tail_abs[j] && gap * gap <= budget * c.tail_sq[j]
                });
                if !reachable {
                    return Ok(false);
                }
            }
        }
        if j == rank {
            self.assigned[v] = Some(x.clone());
            if self.vertex(idx + 1)? {
                return Ok(true);
            }
            self.assigned[v] = None;
            return Ok(false);
        }
        for val in -b..=b {
            x[j] = val;
            for (c, p) in cons.iter().zip(partial.iter_mut()) {
                *p += val * c.weighted[j];
            }
            let next = if j < pos { budget + val * val } else { budget - val * val };
            let found = self.coordinate(idx, v, w, j + 1, next, x, cons, partial)?;
            for (c, p) in cons.iter().zip(partial.iter_mut()) {
                *p -= val * c.weighted[j];
            }
            if found {
                return Ok(true);
            }
        }
        x[j] = 0;
        Ok(false)
    }
}

/// Blows up a point of multiplicity `m` on `x`: the lattice gains `E_new` and
/// the class becomes `x - m E_new`.
pub fn blow_up(x: &HomologyClass, m: i64) -> Result<(HomologyClass, BlowupLattice), ConfigError> {
    if m < 0 {
        return Err(ConfigError::Multiplicity(m));
    }
    let lattice = x.lattice().blow_up();
    let mut coeffs = x.coeffs().to_vec();
    coeffs.push(-m);
    Ok((HomologyClass::new(lattice, coeffs)?, lattice))
}

/// Smoothing the transverse intersections of `x` and `y` gives `x + y`.
pub fn smooth_intersection(x: &HomologyClass, y: &HomologyClass) -> Result<HomologyClass, ConfigError> {
    let p = x.pair(y)?;
    if p < 1 {
        return Err(ConfigError::NotIntersecting(p));
    }
    Ok(x.checked_add(y)?)
}

/// A section class carrying positive double points, as left by knot surgery
/// in a double node neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoSection {
    pub class: HomologyClass,
    pub double_points: u32,
}

pub fn pseudo_section(s: &HomologyClass, double_points: i64) -> Result<PseudoSection, ConfigError> {
    let n = u32::try_from(double_points).map_err(|_| ConfigError::NegativeCount(double_points))?;
    Ok(PseudoSection { class: s.clone(), double_points: n })
}

impl PseudoSection {
    /// Blows up one ordinary double point (multiplicity 2).
    pub fn resolve_one(&self) -> Result<(PseudoSection, BlowupLattice), ConfigError> {
        if self.double_points == 0 {
            return Ok((self.clone(), self.class.lattice()));
        }
        let (class, lattice) = blow_up(&self.class, 2)?;
        Ok((PseudoSection { class, double_points: self.double_points - 1 }, lattice))
    }

    pub fn resolve(&self) -> Result<(HomologyClass, BlowupLattice), ConfigError> {
        let mut cur = self.clone();
        while cur.double_points > 0 {
            cur = cur.resolve_one()?.0;
        }
        let lattice = cur.class.lattice();
        Ok((cur.class, lattice))
    }
}

/// A singular fiber as a list of `(component class, multiplicity)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberModel {
    pub kind: FiberKind,
    pub components: Vec<(HomologyClass, i64)>,
}

/// The components add up to `fiber`, and an `I_k` with `k >= 2` is a cycle of
/// `-2` spheres.
pub fn fiber_decomposition_check(f: &FiberModel, fiber: &HomologyClass) -> bool {
    let lattice = fiber.lattice();
    let mut sum = lattice.zero();
    for (c, m) in &f.components {
        let Ok(t) = c.checked_scale(*m).and_then(|t| sum.checked_add(&t)) else {
            return false;
        };
        sum = t;
    }
    if &sum != fiber {
        return false;
    }
    let k = match f.kind {
        FiberKind::Fishtail | FiberKind::I { k: 1 } => {
            return f.components.len() == 1 && f.components[0].1 == 1;
        }
        FiberKind::I { k } => k as usize,
    };
    if f.components.len() != k || f.components.iter().any(|(_, m)| *m != 1) {
        return false;
    }
    let classes: Vec<&HomologyClass> = f.components.iter().map(|(c, _)| c).collect();
    for i in 0..k {
        if classes[i].square() != Ok(-2) {
            return false;
        }
        for j in i + 1..k {
            let expected = if k == 2 {
                2
            } else if j == i + 1 || (i == 0 && j == k - 1) {
                1
            } else {
                0
            };
            if classes[i].pair(classes[j]) != Ok(expected) {
                return false;
            }
        }
    }
    true
}

/// Wire format: `{"lattice":{"positive":1,"negative":13},"graph":"p1.json","classes":[[...],...]}`.
/// The graph may also be given inline; `null` classes are left for search.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lattice: LatticeSpec,
    pub graph: GraphRef,
    #[serde(default)]
    pub classes: Vec<Option<Vec<i64>>>,
}

impl ConfigFile {
    /// Resolves the class list against `lattice`, keeping unassigned slots.
    pub fn partial_classes(&self) -> Result<Vec<Option<HomologyClass>>, ConfigError> {
        let lattice = BlowupLattice::try_from(self.lattice)?;
        self.classes
            .iter()
            .map(|c| c.as_ref().map(|v| HomologyClass::new(lattice, v.clone())).transpose())
            .collect::<Result<Vec<_>, _>>()
            .map_err(ConfigError::from)
    }
}

impl From<&SphereConfiguration> for LatticeSpec {
    fn from(c: &SphereConfiguration) -> Self {
        LatticeSpec { positive: c.lattice.positive_rank(), negative: c.lattice.negative_rank() }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub positive: usize,
    pub negative: usize,
}

impl TryFrom<LatticeSpec> for BlowupLattice {
    type Error = LatticeError;
    fn try_from(s: LatticeSpec) -> Result<Self, LatticeError> {
        BlowupLattice::new(s.positive, s.negative)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Path(String),
    Inline(GraphFile),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plumbing::wahl_tree;

    fn cp2(n: usize) -> BlowupLattice {
        BlowupLattice::cp2_blowup(n)
    }

    fn class(l: BlowupLattice, terms: &[(usize, i64)]) -> HomologyClass {
        let mut v = vec![0; l.rank()];
        for &(i, c) in terms {
            v[i] = c;
        }
        HomologyClass::new(l, v).unwrap()
    }

    // S1 = 3H - E1 - E2 - E4..E9 - 2E10, S2 = 3H - 2E1 - E2 - E4..E9 - E11
    fn thm2_classes() -> (HomologyClass, HomologyClass) {
        let l = cp2(13);
        let mut s1 = vec![(0, 3), (1, -1), (2, -1), (10, -2)];
        let mut s2 = vec![(0, 3), (1, -2), (2, -1), (11, -1)];
        for i in 4..=9 {
            s1.push((i, -1));
            s2.push((i, -1));
        }
        (class(l, &s1), class(l, &s2))
    }

    #[test]
    fn thm2_partial_check() {
        let (s1, s2) = thm2_classes();
        assert_eq!(s1.square().unwrap(), -3);
        assert_eq!(s2.square().unwrap(), -3);
        assert_eq!(s1.pair(&s2).unwrap(), 0);
        let fixed = vec![None, Some(s1), Some(s2), None];
        assert!(verify_partial(&wahl_tree(2).unwrap(), cp2(13), &fixed).unwrap().ok());
    }

    #[test]
    fn trivial_configurations() {
        let l = BlowupLattice::negative_definite(1);
        let g = PlumbingGraph::new(vec![-1], &[]).unwrap();
        let c = SphereConfiguration::new(l, g, vec![l.e(1)]).unwrap();
        assert!(verify_configuration(&c).unwrap().ok());

        let l4 = BlowupLattice::negative_definite(4);
        let bad = SphereConfiguration::new(l4, wahl_tree(2).unwrap(), vec![l4.e(1); 4]).unwrap();
        let report = verify_configuration(&bad).unwrap();
        assert!(!report.ok());
        // four wrong squares, three edges with pairing -1 are fine, three non-edges fail
        assert_eq!(report.violations.len(), 7);
        assert!(report.to_string().contains("square v0: expected -4, got -1"));
    }

    #[test]
    fn configuration_rank_mismatch() {
        let g = PlumbingGraph::new(vec![-1], &[]).unwrap();
        let l = BlowupLattice::negative_definite(1);
        assert!(matches!(
            SphereConfiguration::new(l, g.clone(), vec![cp2(1).e(1)]),
            Err(ConfigError::Lattice(_))
        ));
        assert!(matches!(
            SphereConfiguration::new(l, g, vec![]),
            Err(ConfigError::CountMismatch { .. })
        ));
    }

    #[test]
    fn p1_in_four_minus_cp2() {
        let l = BlowupLattice::negative_definite(4);
        let g = wahl_tree(2).unwrap();
        let c = find_configuration(&g, l, &[None, None, None, None], 1).unwrap().unwrap();
        assert!(verify_configuration(&c).unwrap().ok());
        assert_eq!(c.classes[0].coeffs(), &[-1, -1, -1, -1]);
        let again = find_configuration(&g, l, &[None, None, None, None], 1).unwrap().unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn unsolvable_vertex() {
        let g = PlumbingGraph::new(vec![-3], &[]).unwrap();
        let l = BlowupLattice::negative_definite(1);
        assert_eq!(find_configuration(&g, l, &[None], 3).unwrap(), None);
    }

    #[test]
    fn search_errors() {
        let g = PlumbingGraph::new(vec![-3], &[]).unwrap();
        let l = BlowupLattice::negative_definite(1);
        assert_eq!(find_configuration(&g, l, &[None], 0), Err(ConfigError::Bound(0)));
        let opts = SearchOptions { budget: 3, ..SearchOptions::default() };
        let big = BlowupLattice::negative_definite(6);
        assert_eq!(
            find_configuration_with(&wahl_tree(4).unwrap(), big, &vec![None; 6], &opts),
            Err(ConfigError::BudgetExceeded(3))
        );
        let bad_fixed = vec![Some(l.e(1))];
        assert!(matches!(
            find_configuration(&g, l, &bad_fixed, 1),
            Err(ConfigError::InconsistentFixed(_))
        ));
    }

    #[test]
    fn thm2_partial_data_completes() {
        let (s1, s2) = thm2_classes();
        let g = wahl_tree(2).unwrap();
        let fixed = vec![None, Some(s1.clone()), Some(s2.clone()), None];
        let c = find_configuration(&g, cp2(13), &fixed, 3).unwrap().unwrap();
        assert!(verify_configuration(&c).unwrap().ok());
        assert_eq!(c.classes[1], s1);
        assert_eq!(c.classes[2], s2);
    }

    #[test]
    fn blow_up_examples() {
        let l = cp2(9);
        let mut f = vec![(0, 3)];
        f.extend((1..=9).map(|i| (i, -1)));
        let fiber = class(l, &f);
        let (x, l10) = blow_up(&fiber, 2).unwrap();
        assert_eq!(l10, cp2(10));
        assert_eq!(x.coeff(10), -2);
        assert_eq!(x.square().unwrap(), -4);

        let (same, l11) = blow_up(&x, 0).unwrap();
        assert_eq!(l11.rank(), 12);
        assert_eq!(same.square().unwrap(), -4);

        let (e3, _) = blow_up(&l.e(3), 1).unwrap();
        assert_eq!(e3.square().unwrap(), -2);
        assert!(blow_up(&e3, -1).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let l = cp2(9);
        let mut f = vec![(0, 3)];
        f.extend((1..=9).map(|i| (i, -1)));
        let (f2, l10) = blow_up(&class(l, &f), 2).unwrap();
        let e3 = l10.e(3);
        assert_eq!(f2.pair(&e3).unwrap(), 1);
        let leg = smooth_intersection(&f2, &e3).unwrap();
        assert_eq!(leg.square().unwrap(), -3);

        let a = class(BlowupLattice::negative_definite(3), &[(0, 1), (1, -1)]);
        let b = class(BlowupLattice::negative_definite(3), &[(1, 1), (2, -1)]);
        assert_eq!(a.pair(&b).unwrap(), 1);
        let s = smooth_intersection(&a, &b).unwrap();
        assert_eq!(s.square().unwrap(), -2 - 2 + 2);
        assert_eq!(smooth_intersection(&a, &a), Err(ConfigError::NotIntersecting(-2)));
    }

    #[test]
    fn pseudo_section_examples() {
        let l = cp2(9);
        let ps = pseudo_section(&l.e(5), 1).unwrap();
        let (c, l10) = ps.resolve().unwrap();
        assert_eq!(l10, cp2(10));
        assert_eq!(c.square().unwrap(), -5);
        assert_eq!(c.coeff(10), -2);
        let id = pseudo_section(&l.e(5), 0).unwrap();
        assert_eq!(id.resolve().unwrap(), (l.e(5), l));
        assert_eq!(pseudo_section(&l.e(5), -1), Err(ConfigError::NegativeCount(-1)));
    }

    #[test]
    fn i3_fiber_decomposition() {
        let l = cp2(9);
        let a = class(l, &[(2, 1), (3, -1)]);
        let mut b = vec![(0, 3), (1, -2), (2, -1)];
        b.extend((4..=9).map(|i| (i, -1)));
        let b = class(l, &b);
        let c = class(l, &[(1, 1), (2, -1)]);
        let mut f = vec![(0, 3)];
        f.extend((1..=9).map(|i| (i, -1)));
        let fiber = class(l, &f);
        let model = FiberModel {
            kind: FiberKind::I { k: 3 },
            components: vec![(a.clone(), 1), (b.clone(), 1), (c.clone(), 1)],
        };
        assert!(fiber_decomposition_check(&model, &fiber));
        // E3 is a section: it meets exactly one component once
        let e3 = l.e(3);
        assert_eq!(
            [a.pair(&e3).unwrap(), b.pair(&e3).unwrap(), c.pair(&e3).unwrap(), fiber.pair(&e3).unwrap()],
            [1, 0, 0, 1]
        );

        let nodal = FiberModel { kind: FiberKind::Fishtail, components: vec![(fiber.clone(), 1)] };
        assert!(fiber_decomposition_check(&nodal, &fiber));

        let shifted = &fiber + &l.e(1);
        let wrong = FiberModel { kind: FiberKind::Fishtail, components: vec![(shifted, 1)] };
        assert!(!fiber_decomposition_check(&wrong, &fiber));
    }

    #[test]
    fn config_file_parses() {
        let json = r#"{"lattice":{"positive":0,"negative":1},"graph":{"vertices":[{"id":0,"weight":-1}],"edges":[]},"classes":[[1]]}"#;
        let f: ConfigFile = serde_json::from_str(json).unwrap();
        assert!(matches!(f.graph, GraphRef::Inline(_)));
        let json = r#"{"lattice":{"positive":1,"negative":13},"graph":"p1.json","classes":[null,[1,0,0,0,0,0,0,0,0,0,0,0,0,0]]}"#;
        let f: ConfigFile = serde_json::from_str(json).unwrap();
        assert!(matches!(f.graph, GraphRef::Path(ref p) if p == "p1.json"));
        let partial = f.partial_classes().unwrap();
        assert!(partial[0].is_none());
        assert_eq!(partial[1].as_ref().unwrap().square().unwrap(), 1);
    }
}
