//! Named trees, classes and sphere configurations for the four rational
//! blow-down constructions in blow-ups of `CP^2`.
//!
//! Configurations beyond the two published sphere classes were reconstructed
//! by bounded search and are checked, not quoted.

use crate::config::{find_configuration_with, FiberModel, SearchOptions, SphereConfiguration};
use crate::cutpaste::ClosedManifoldModel;
use crate::lattice::{BlowupLattice, HomologyClass};
use crate::monodromy::{census_from_positive_word, FiberKind, FibrationCensus, MonodromyWord};
use crate::plumbing::{wahl_tree, PlumbingGraph};

/// `c0 H + sum ci Ei`, given as `(index, coefficient)` pairs with `H` at 0.
pub fn class(lattice: BlowupLattice, terms: &[(usize, i64)]) -> HomologyClass {
    let mut v = vec![0; lattice.rank()];
    for &(i, c) in terms {
        v[i] += c;
    }
    HomologyClass::new(lattice, v).expect("index within rank")
}

fn minus_range(lattice: BlowupLattice, h: i64, ranges: &[(usize, usize, i64)], extra: &[(usize, i64)]) -> HomologyClass {
    let mut terms = vec![(0, h)];
    for &(lo, hi, c) in ranges {
        terms.extend((lo..=hi).map(|i| (i, -c)));
    }
    terms.extend_from_slice(extra);
    class(lattice, &terms)
}

pub fn p1() -> PlumbingGraph {
    wahl_tree(2).expect("valid parameter")
}

pub fn p2() -> PlumbingGraph {
    wahl_tree(4).expect("valid parameter")
}

pub fn p4() -> PlumbingGraph {
    wahl_tree(6).expect("valid parameter")
}

/// Evaluation 3 on `H` and 1 on every `E_i`.
pub fn canonical(n: usize) -> HomologyClass {
    let mut ev = vec![1; n + 1];
    ev[0] = 3;
    HomologyClass::from_evaluations(BlowupLattice::cp2_blowup(n), &ev).expect("rank matches")
}

pub fn k1() -> HomologyClass {
    canonical(13)
}

pub fn k2() -> HomologyClass {
    canonical(14)
}

pub fn fiber(n: usize) -> HomologyClass {
    minus_range(BlowupLattice::cp2_blowup(n), 3, &[(1, 9, 1)], &[])
}

/// `6H - 2E1 - 2E2 - 2(E4 + ... + E9) - E10 - E12 - E13`.
pub fn a1() -> HomologyClass {
    minus_range(BlowupLattice::cp2_blowup(13), 6, &[(1, 2, 2), (4, 9, 2)], &[(10, -1), (12, -1), (13, -1)])
}

/// `7h - 3e1 - 2(e2 + ... + e9) - e12 - e13 - 2e14`.
pub fn a2() -> HomologyClass {
    minus_range(BlowupLattice::cp2_blowup(14), 7, &[(1, 1, 3), (2, 9, 2)], &[(12, -1), (13, -1), (14, -2)])
}

/// `3H - E1 - E2 - (E4 + ... + E9) - 2E10`.
pub fn s1() -> HomologyClass {
    minus_range(BlowupLattice::cp2_blowup(13), 3, &[(1, 2, 1), (4, 9, 1)], &[(10, -2)])
}

/// `3H - 2E1 - E2 - (E4 + ... + E9) - E11`.
pub fn s2() -> HomologyClass {
    minus_range(BlowupLattice::cp2_blowup(13), 3, &[(1, 1, 2), (2, 2, 1), (4, 9, 1)], &[(11, -1)])
}

/// `P1` in `CP^2 # 13(-CP^2)`, orthogonal to `a1`, with `K1.S = S.S + 2`.
pub fn construction1() -> SphereConfiguration {
    let l = BlowupLattice::cp2_blowup(13);
    let center = class(l, &[(2, 1), (3, -1), (12, -1), (13, -1)]);
    let leg3 = class(l, &[(1, 1), (2, -1), (11, -1)]);
    SphereConfiguration::new(l, p1(), vec![center, s1(), s2(), leg3]).expect("consistent lattice")
}

/// An `I3` fiber in `CP^2 # 9(-CP^2)` with `E3` as a section meeting the first
/// component.
pub fn i3_fiber() -> FiberModel {
    let l = BlowupLattice::cp2_blowup(9);
    let a = class(l, &[(2, 1), (3, -1)]);
    let b = minus_range(l, 3, &[(1, 1, 2), (2, 2, 1), (4, 9, 1)], &[]);
    let c = class(l, &[(1, 1), (2, -1)]);
    FiberModel { kind: FiberKind::I { k: 3 }, components: vec![(a, 1), (b, 1), (c, 1)] }
}

/// `P2` in `CP^2 # 14(-CP^2)` with section `e5`, orthogonal to `a2`, with
/// `K2.S = S.S + 2`.
pub fn construction2() -> SphereConfiguration {
    let l = BlowupLattice::cp2_blowup(14);
    let f = fiber(14);
    let center = class(l, &[(4, 1), (5, -1), (10, -1), (11, -1)]);
    let minus5 = (2 * &f) + class(l, &[(13, -2), (14, -2), (5, 1)]);
    let a2p = minus_range(l, 1, &[(2, 4, 1)], &[(12, -1)]);
    let a5 = class(l, &[(3, 1), (4, -1)]);
    let a4 = class(l, &[(2, 1), (3, -1)]);
    let a3p = minus_range(l, 2, &[(1, 2, 1), (6, 9, 1)], &[(12, -1)]);
    SphereConfiguration::new(l, p2(), vec![center, minus5, a2p, a5, a4, a3p]).expect("consistent lattice")
}

/// The resolved pseudo-section `e5 - 2e10` in `CP^2 # 13(-CP^2)` together with
/// the central sphere `e4 - e5 - e11 - e12`.
pub fn construction3_fixed() -> Vec<Option<HomologyClass>> {
    let l = BlowupLattice::cp2_blowup(13);
    let center = class(l, &[(4, 1), (5, -1), (11, -1), (12, -1)]);
    let minus5 = class(l, &[(5, 1), (10, -2)]);
    vec![Some(center), Some(minus5), None, None, None, None]
}

/// `P2` in `CP^2 # 13(-CP^2)`, completed by search from
/// [`construction3_fixed`].
pub fn construction3() -> SphereConfiguration {
    let l = BlowupLattice::cp2_blowup(13);
    find_configuration_with(&p2(), l, &construction3_fixed(), &SearchOptions::with_bound(2))
        .expect("search within budget")
        .expect("configuration exists")
}

fn word(s: &str) -> MonodromyWord {
    s.parse().expect("valid word")
}

fn census(k: u32, conjugators: &[&str]) -> FibrationCensus {
    let mut c = FibrationCensus::default();
    c.push(FiberKind::I { k }, None).expect("k >= 1");
    for w in conjugators {
        c.push(FiberKind::Fishtail, Some(word(w))).expect("fishtail");
    }
    c
}

/// `I3` plus nine fishtails, read off `(a^3 b)^3`.
pub fn i3_census() -> FibrationCensus {
    census_from_positive_word(&word("(a^3 b)^3")).expect("positive word")
}

/// `I5` plus seven fishtails, read off `a^5 (a^-2 b a^2) a b a a a b`.
pub fn i5_census() -> FibrationCensus {
    census(5, &["a^-2 a b", "1", "ab", "1", "1", "1", "ab"])
}

/// `I7` plus five fishtails: Hurwitz moves on `(a^3 b)^3` give
/// `a^7 (a^-4 b a^4) (a^-1 b a) a a b`.
pub fn i7_census() -> FibrationCensus {
    census(7, &["a^-3 b", "b", "1", "1", "ab"])
}

/// A closed manifold, the tree cut out of it, and the expected result.
#[derive(Debug, Clone)]
pub struct BlowdownCase {
    pub name: &'static str,
    pub ambient: ClosedManifoldModel,
    pub graph: PlumbingGraph,
    pub expected: (i64, i64),
    pub expected_k: i64,
}

pub fn blowdown_cases() -> Vec<BlowdownCase> {
    let case = |name, n, graph, expected, expected_k| BlowdownCase {
        name,
        ambient: ClosedManifoldModel::cp2_blowup(n),
        graph,
        expected,
        expected_k,
    };
    vec![
        case("X1'", 13, p1(), (12, -8), 9),
        case("X2'", 14, p2(), (11, -7), 8),
        case("X3'", 13, p2(), (10, -6), 7),
        case("X3''", 15, p4(), (10, -6), 7),
        case("X4'", 14, p4(), (9, -5), 6),
    ]
}
