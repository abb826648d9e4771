//! Seifert invariants `M(e0; (a1,b1), ...)` and their star-shaped plumbings.
//!
//! Dictionary used throughout: a pair `(a, b)` with `a > 1` becomes an arm whose
//! weights are minus the negative continued fraction of `a / (a - b)`, and the
//! central vertex has weight `-(e0 + k + sum of b over pairs with a = 1)` where
//! `k` counts the pairs with `a > 1`. With this rule `M(0;(1,1),(3,2),(3,2),(3,2))`
//! is the `-4` vertex with three `-3` legs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plumbing::{PlumbingError, PlumbingGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("continued fraction needs p > q >= 1 coprime, got ({0}, {1})")]
    ContinuedFraction(i64, i64),
    #[error("invalid Seifert pair ({0}, {1}): need a > 0 and gcd(a, b) = 1")]
    InvalidPair(i64, i64),
    #[error("Euler number is zero: H_1 is infinite")]
    InfiniteH1,
    #[error("graph is not star-shaped")]
    NotStarShaped,
    #[error("arm weight {0} is not <= -2")]
    ArmWeight(i64),
    #[error(transparent)]
    Plumbing(#[from] PlumbingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertData {
    pub e0: i64,
    pub pairs: Vec<(i64, i64)>,
}

impl SeifertData {
    pub fn new(e0: i64, pairs: Vec<(i64, i64)>) -> Result<Self, SeifertError> {
        for &(a, b) in &pairs {
            if a <= 0 || a.gcd(&b) != 1 {
                return Err(SeifertError::InvalidPair(a, b));
            }
        }
        Ok(Self { e0, pairs })
    }

    /// Reduces every `b` with `a > 1` into `(0, a)` and folds all `a = 1`
    /// pairs into `e0`; the result carries exactly one leading `(1, 1)`.
    pub fn normalized(&self) -> Self {
        let mut e0 = self.e0;
        let mut pairs = vec![(1, 1)];
        for &(a, b) in &self.pairs {
            if a == 1 {
                e0 += b;
            } else {
                let (q, r) = b.div_mod_floor(&a);
                e0 += q;
                pairs.push((a, r));
            }
        }
        Self { e0: e0 - 1, pairs }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalized()
    }
}

/// `[a1, ..., ak]` with all `ai >= 2` and `p/q = a1 - 1/(a2 - 1/(... - 1/ak))`.
pub fn neg_cont_frac(p: i64, q: i64) -> Result<Vec<i64>, SeifertError> {
    if !(p > q && q >= 1 && p.gcd(&q) == 1) {
        return Err(SeifertError::ContinuedFraction(p, q));
    }
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q != 0 {
        let a = Integer::div_ceil(&p, &q);
        out.push(a);
        (p, q) = (q, a * q - p);
    }
    Ok(out)
}

/// Evaluates `[a1, ..., ak]` back to `p/q`.
pub fn eval_cont_frac(coeffs: &[i64]) -> BigRational {
    let mut acc: Option<BigRational> = None;
    for &a in coeffs.iter().rev() {
        let a = BigRational::from_integer(a.into());
        acc = Some(match acc {
            None => a,
            Some(x) => a - x.recip(),
        });
    }
    acc.unwrap_or_else(BigRational::zero)
}

/// `e = -(e0 + sum b_i / a_i)`.
pub fn euler_number(d: &SeifertData) -> BigRational {
    let sum = d
        .pairs
        .iter()
        .fold(BigRational::from_integer(d.e0.into()), |acc, &(a, b)| {
            acc + BigRational::new(b.into(), a.into())
        });
    -sum
}

/// `|H_1| = |(prod a_i) * e|`.
pub fn h1_order_from_seifert(d: &SeifertData) -> Result<BigInt, SeifertError> {
    let e = euler_number(d);
    if e.is_zero() {
        return Err(SeifertError::InfiniteH1);
    }
    let prod = d.pairs.iter().fold(BigInt::from(1), |acc, &(a, _)| acc * a);
    let order = BigRational::from_integer(prod) * e;
    debug_assert!(order.is_integer());
    Ok(order.to_integer().abs())
}

pub fn seifert_to_plumbing(d: &SeifertData) -> Result<PlumbingGraph, SeifertError> {
    let d = SeifertData::new(d.e0, d.pairs.clone())?.normalized();
    let mut unit_sum = 0;
    let mut arms = Vec::new();
    for &(a, b) in &d.pairs {
        if a == 1 {
            unit_sum += b;
        } else {
            let cf = neg_cont_frac(a, a - b)?;
            arms.push(cf.into_iter().map(|x| -x).collect::<Vec<_>>());
        }
    }
    let center = -(d.e0 + arms.len() as i64 + unit_sum);
    Ok(PlumbingGraph::star(center, &arms)?)
}

/// Inverse of [`seifert_to_plumbing`]; returns normalized data with arms in
/// the order of the center's neighbors.
pub fn plumbing_to_seifert(g: &PlumbingGraph) -> Result<SeifertData, SeifertError> {
    if !g.is_tree() {
        return Err(SeifertError::NotStarShaped);
    }
    let hubs: Vec<usize> = (0..g.len()).filter(|&v| g.degree(v) >= 3).collect();
    let center = match hubs.as_slice() {
        [] => 0,
        [c] => *c,
        _ => return Err(SeifertError::NotStarShaped),
    };
    let mut pairs = vec![(1, 1)];
    for start in g.neighbors(center) {
        let mut arm = Vec::new();
        let (mut prev, mut cur) = (center, start);
        loop {
            let w = g.weight(cur);
            if w > -2 {
                return Err(SeifertError::ArmWeight(w));
            }
            arm.push(-w);
            let next: Vec<usize> = g.neighbors(cur).into_iter().filter(|&u| u != prev).collect();
            match next.as_slice() {
                [] => break,
                [n] => (prev, cur) = (cur, *n),
                _ => return Err(SeifertError::NotStarShaped),
            }
        }
        let frac = eval_cont_frac(&arm);
        let (a, gamma) = (frac.numer(), frac.denom());
        let a = i64::try_from(a).map_err(|_| SeifertError::NotStarShaped)?;
        let gamma = i64::try_from(gamma).map_err(|_| SeifertError::NotStarShaped)?;
        pairs.push((a, a - gamma));
    }
    let k = pairs.len() as i64 - 1;
    Ok(SeifertData { e0: -g.weight(center) - k - 1, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plumbing::{boundary_h1, wahl_tree};
    use proptest::prelude::*;

    fn m(pairs: &[(i64, i64)]) -> SeifertData {
        SeifertData::new(0, pairs.to_vec()).unwrap()
    }

    fn p1_data() -> SeifertData {
        m(&[(1, 1), (3, 2), (3, 2), (3, 2)])
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(neg_cont_frac(3, 1).unwrap(), vec![3]);
        assert_eq!(neg_cont_frac(5, 3).unwrap(), vec![2, 3]);
        assert_eq!(neg_cont_frac(11, 9).unwrap(), vec![2, 2, 2, 2, 3]);
        assert_eq!(eval_cont_frac(&[2, 2, 2, 2, 3]), BigRational::new(11.into(), 9.into()));
        assert!(neg_cont_frac(3, 3).is_err());
        assert!(neg_cont_frac(4, 2).is_err());
        assert!(neg_cont_frac(2, 0).is_err());
    }

    #[test]
    fn euler_number_examples() {
        assert_eq!(euler_number(&p1_data()), BigRational::from_integer((-3).into()));
        assert_eq!(euler_number(&m(&[(1, 1)])), BigRational::from_integer((-1).into()));
        let e0_only = SeifertData::new(1, vec![]).unwrap();
        assert_eq!(euler_number(&e0_only), BigRational::from_integer((-1).into()));
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_order_from_seifert(&p1_data()).unwrap(), BigInt::from(81));
        assert_eq!(h1_order_from_seifert(&m(&[(1, 1)])).unwrap(), BigInt::from(1));
        let p2 = m(&[(1, 1), (3, 2), (5, 4), (7, 2)]);
        assert_eq!(h1_order_from_seifert(&p2).unwrap(), BigInt::from(289));
        let flat = SeifertData::new(-1, vec![(1, 1)]).unwrap();
        assert_eq!(h1_order_from_seifert(&flat), Err(SeifertError::InfiniteH1));
    }

    #[test]
    fn family_maps_to_drawn_trees() {
        assert_eq!(seifert_to_plumbing(&p1_data()).unwrap(), wahl_tree(2).unwrap());
        let p2 = seifert_to_plumbing(&m(&[(1, 1), (3, 2), (5, 4), (7, 2)])).unwrap();
        assert_eq!(p2.weights(), &[-4, -3, -5, -2, -2, -3]);
        assert!(p2.is_isomorphic_tree(&wahl_tree(4).unwrap()).unwrap());
        let p4 = seifert_to_plumbing(&m(&[(1, 1), (3, 2), (7, 6), (11, 2)])).unwrap();
        assert_eq!(p4.weights(), &[-4, -3, -7, -2, -2, -2, -2, -3]);
        assert!(p4.is_isomorphic_tree(&wahl_tree(6).unwrap()).unwrap());
    }

    #[test]
    fn printed_p2_data_disagrees_with_drawn_tree() {
        // (5,2) as printed vs (7,2) matching the drawing
        let printed = m(&[(1, 1), (3, 2), (5, 4), (5, 2)]);
        let g = seifert_to_plumbing(&printed).unwrap();
        assert_eq!(g.len(), 5);
        assert!(!g.is_isomorphic_tree(&wahl_tree(4).unwrap()).unwrap());
        assert_eq!(h1_order_from_seifert(&printed).unwrap(), BigInt::from(215));
    }

    #[test]
    fn normalization_carries_into_e0() {
        let d = SeifertData::new(0, vec![(3, 5), (1, 2)]).unwrap();
        let n = d.normalized();
        assert_eq!(n, SeifertData { e0: 2, pairs: vec![(1, 1), (3, 2)] });
        assert_eq!(euler_number(&d), euler_number(&n));
        assert!(p1_data().is_normalized());
        assert!(SeifertData::new(0, vec![(4, 2)]).is_err());
        assert!(SeifertData::new(0, vec![(0, 1)]).is_err());
    }

    #[test]
    fn non_star_rejected() {
        let two_hubs = PlumbingGraph::star(-2, &[vec![-2], vec![-2], vec![-2, -2, -2]]).unwrap();
        // add a second branch point at vertex 4
        let mut weights = two_hubs.weights().to_vec();
        weights.push(-2);
        let mut edges: Vec<(usize, usize)> = two_hubs.edges().collect();
        edges.push((4, 6));
        let g = PlumbingGraph::new(weights, &edges).unwrap();
        assert_eq!(plumbing_to_seifert(&g), Err(SeifertError::NotStarShaped));
        let bad_arm = PlumbingGraph::star(-4, &[vec![-1], vec![-3], vec![-3]]).unwrap();
        assert_eq!(plumbing_to_seifert(&bad_arm), Err(SeifertError::ArmWeight(-1)));
    }

    #[test]
    fn round_trip_on_family() {
        for r in [2, 4, 6] {
            let g = wahl_tree(r).unwrap();
            let d = plumbing_to_seifert(&g).unwrap();
            assert!(d.is_normalized());
            assert_eq!(seifert_to_plumbing(&d).unwrap(), g);
            assert_eq!(plumbing_to_seifert(&seifert_to_plumbing(&d).unwrap()).unwrap(), d);
            assert_eq!(
                h1_order_from_seifert(&d).unwrap(),
                boundary_h1(&g).unwrap().h1_order
            );
        }
    }

    #[test]
    fn continued_fraction_inverts_for_small_p() {
        for p in 2..=50i64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let cf = neg_cont_frac(p, q).unwrap();
                assert!(cf.iter().all(|&a| a >= 2));
                assert_eq!(eval_cont_frac(&cf), BigRational::new(p.into(), q.into()), "{p}/{q}");
            }
        }
    }

    proptest! {
        #[test]
        fn seifert_round_trip(e0 in -3i64..3, raw in prop::collection::vec((2i64..30, 1i64..30), 0..5)) {
            let pairs: Vec<(i64, i64)> = raw.into_iter().filter(|(a, b)| a.gcd(b) == 1).collect();
            let d = SeifertData::new(e0, pairs).unwrap().normalized();
            let g = seifert_to_plumbing(&d).unwrap();
            let back = plumbing_to_seifert(&g).unwrap();
            prop_assert_eq!(&back, &d);
            if let Ok(h) = h1_order_from_seifert(&d) {
                prop_assert_eq!(h, boundary_h1(&g).unwrap().h1_order);
            }
        }
    }
}
