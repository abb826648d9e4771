//! Rational blow-down bookkeeping.
//!
//! `X = Z u_Y P` becomes `X' = Z u_Y B` with `B` a rational homology ball.
//! Euler characteristic and signature are additive over the shared boundary;
//! simple connectivity and parity are carried as recorded assumptions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::SphereConfiguration;
use crate::lattice::{is_characteristic, HomologyClass, LatticeError, Parity};
use crate::plumbing::{boundary_h1, plumbed_invariants, BoundaryInvariants, CompactPieceInvariants, PlumbingError, PlumbingGraph};

pub const ASSUME_SIMPLY_CONNECTED: &str =
    "simply connected: recorded from a Van Kampen argument on the complement, not computed";
pub const ASSUME_ODD: &str = "odd intersection form: carried across the blow-down, not computed";
pub const ASSUME_LSPACE: &str =
    "boundary is a monopole L-space: recorded for Wahl-type boundaries, not computed";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutpasteError {
    #[error("simply connected manifold with b1 = {0}")]
    SimplyConnectedB1(i64),
    #[error("b2 = e - 2 = {b2} is smaller than |sigma| = {sigma}")]
    BettiTooSmall { b2: i64, sigma: i64 },
    #[error("b2 + sigma = {0} is odd")]
    BettiParity(i64),
    #[error("replacement piece is not a rational ball (b1 = {b1}, b2 = {b2})")]
    NotRationalBall { b1: i64, b2: i64 },
    #[error("classification needs a simply connected manifold")]
    NotSimplyConnected,
    #[error("L-space hypothesis unmet")]
    LSpaceUnmet,
    #[error("boundary is not a rational homology sphere")]
    InfiniteH1,
    #[error("piece is not negative definite")]
    PieceNotNegativeDefinite,
    #[error("piece or ball has b1 = {0}, b1 = 0 required")]
    NonzeroB1(i64),
    #[error("d >= 0 required, got {0}")]
    NegativeDimension(i64),
    #[error("spin^c restrictions to the boundary do not agree")]
    RestrictionsDisagree,
    #[error("configurations realize different graphs")]
    GraphMismatch,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Plumbing(#[from] PlumbingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedManifoldModel {
    pub e: i64,
    pub sigma: i64,
    pub b1: i64,
    pub simply_connected: bool,
    pub parity: Parity,
    #[serde(default)]
    pub assumptions: Vec<String>,
}

impl ClosedManifoldModel {
    pub fn new(e: i64, sigma: i64, b1: i64, simply_connected: bool, parity: Parity) -> Result<Self, CutpasteError> {
        let m = Self { e, sigma, b1, simply_connected, parity, assumptions: Vec::new() };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), CutpasteError> {
        if self.simply_connected {
            if self.b1 != 0 {
                return Err(CutpasteError::SimplyConnectedB1(self.b1));
            }
            let b2 = self.e - 2;
            if b2 < self.sigma.abs() {
                return Err(CutpasteError::BettiTooSmall { b2, sigma: self.sigma });
            }
            if (b2 + self.sigma) % 2 != 0 {
                return Err(CutpasteError::BettiParity(b2 + self.sigma));
            }
        }
        Ok(())
    }

    /// `CP^2 # n(-CP^2)`.
    pub fn cp2_blowup(n: usize) -> Self {
        let n = n as i64;
        Self { e: 3 + n, sigma: 1 - n, b1: 0, simply_connected: true, parity: Parity::Odd, assumptions: Vec::new() }
    }

    pub fn with_assumption(mut self, note: &str) -> Self {
        if !self.assumptions.iter().any(|a| a == note) {
            self.assumptions.push(note.to_string());
        }
        self
    }

    /// `b2 = e - 2 + 2 b1` for a closed oriented 4-manifold with `b3 = b1`.
    pub fn b2(&self) -> i64 {
        self.e - 2 + 2 * self.b1
    }

    pub fn b_plus(&self) -> i64 {
        (self.b2() + self.sigma) / 2
    }

    pub fn b_minus(&self) -> i64 {
        (self.b2() - self.sigma) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowdownPlan {
    pub ambient: ClosedManifoldModel,
    pub piece: CompactPieceInvariants,
    pub ball: CompactPieceInvariants,
    pub boundary: BoundaryInvariants,
    pub lspace_flag: bool,
}

impl BlowdownPlan {
    /// Cuts out the plumbing of `graph` and glues in a rational ball.
    /// `lspace_flag` starts true and the L-space assumption is recorded.
    pub fn for_graph(ambient: ClosedManifoldModel, graph: &PlumbingGraph) -> Result<Self, CutpasteError> {
        Ok(Self {
            ambient,
            piece: plumbed_invariants(graph)?,
            ball: CompactPieceInvariants::rational_ball(),
            boundary: boundary_h1(graph)?,
            lspace_flag: true,
        })
    }

    pub fn with_ambient(&self, ambient: ClosedManifoldModel) -> Self {
        Self { ambient, ..self.clone() }
    }
}

pub fn rational_blowdown(plan: &BlowdownPlan) -> Result<ClosedManifoldModel, CutpasteError> {
    if plan.ball.b2 != 0 || plan.ball.b1 != 0 {
        return Err(CutpasteError::NotRationalBall { b1: plan.ball.b1, b2: plan.ball.b2 });
    }
    let a = &plan.ambient;
    let mut out = ClosedManifoldModel {
        e: a.e - plan.piece.e + plan.ball.e,
        sigma: a.sigma - plan.piece.sigma + plan.ball.sigma,
        b1: a.b1,
        simply_connected: a.simply_connected,
        parity: a.parity,
        assumptions: a.assumptions.clone(),
    };
    if plan.piece != plan.ball {
        if out.simply_connected {
            out = out.with_assumption(ASSUME_SIMPLY_CONNECTED);
        }
        out = out.with_assumption(ASSUME_ODD);
        if plan.lspace_flag {
            out = out.with_assumption(ASSUME_LSPACE);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `None` when the invariants are not those of `CP^2 # k(-CP^2)`.
    pub k: Option<i64>,
    pub name: String,
    pub assumptions: Vec<String>,
}

pub const UNRECOGNIZED: &str = "unrecognized";

/// Names a simply connected closed manifold with the invariants of
/// `CP^2 # k(-CP^2)`, where `k = e - 3`.
pub fn freedman_classify(m: &ClosedManifoldModel) -> Result<Classification, CutpasteError> {
    if !m.simply_connected {
        return Err(CutpasteError::NotSimplyConnected);
    }
    let k = m.e - 3;
    let recognized = k >= 0 && m.sigma == 1 - k && m.parity == Parity::Odd;
    let (k, name) = match (recognized, k) {
        (false, _) => (None, UNRECOGNIZED.to_string()),
        (true, 0) => (Some(0), "CP²".to_string()),
        (true, k) => (Some(k), format!("CP²#{k}C̄P²")),
    };
    Ok(Classification { k, name, assumptions: m.assumptions.clone() })
}

/// Passes a Seiberg-Witten value from `X` to `X'` once every hypothesis of the
/// transfer holds; each failure has its own error.
pub fn sw_transfer(value: i64, plan: &BlowdownPlan, d: i64, restrictions_agree: bool) -> Result<i64, CutpasteError> {
    if !plan.lspace_flag {
        return Err(CutpasteError::LSpaceUnmet);
    }
    if !plan.boundary.is_finite() {
        return Err(CutpasteError::InfiniteH1);
    }
    if !plan.piece.is_negative_definite() {
        return Err(CutpasteError::PieceNotNegativeDefinite);
    }
    for b1 in [plan.piece.b1, plan.ball.b1] {
        if b1 != 0 {
            return Err(CutpasteError::NonzeroB1(b1));
        }
    }
    if plan.ball.b2 != 0 {
        return Err(CutpasteError::NotRationalBall { b1: plan.ball.b1, b2: plan.ball.b2 });
    }
    if d < 0 {
        return Err(CutpasteError::NegativeDimension(d));
    }
    if !restrictions_agree {
        return Err(CutpasteError::RestrictionsDisagree);
    }
    Ok(value)
}

/// The canonical reference class: evaluation 3 on `H` (if present) and 1 on
/// every `E_i`.
pub fn reference_canonical(cfg: &SphereConfiguration) -> HomologyClass {
    let l = cfg.lattice;
    let values: Vec<i64> = (0..l.rank()).map(|i| if l.sign(i) > 0 { 3 } else { 1 }).collect();
    HomologyClass::from_evaluations(l, &values).expect("rank matches")
}

/// `K` is characteristic and evaluates on `cfg` exactly as the reference
/// canonical class evaluates on `ref_cfg`.
pub fn characteristic_extension_check(
    k: &HomologyClass,
    cfg: &SphereConfiguration,
    ref_cfg: &SphereConfiguration,
) -> Result<bool, CutpasteError> {
    if cfg.graph != ref_cfg.graph {
        return Err(CutpasteError::GraphMismatch);
    }
    if !is_characteristic(k) {
        return Ok(false);
    }
    let k_ref = reference_canonical(ref_cfg);
    for (s, t) in cfg.classes.iter().zip(&ref_cfg.classes) {
        if k.pair(s)? != k_ref.pair(t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BlowupLattice;
    use crate::plumbing::wahl_tree;

    fn plan(n: usize, r: i64) -> BlowdownPlan {
        BlowdownPlan::for_graph(ClosedManifoldModel::cp2_blowup(n), &wahl_tree(r).unwrap()).unwrap()
    }

    #[test]
    fn model_invariants() {
        assert!(ClosedManifoldModel::new(12, -8, 0, true, Parity::Odd).is_ok());
        assert_eq!(
            ClosedManifoldModel::new(12, -8, 1, true, Parity::Odd),
            Err(CutpasteError::SimplyConnectedB1(1))
        );
        assert!(matches!(
            ClosedManifoldModel::new(4, -5, 0, true, Parity::Odd),
            Err(CutpasteError::BettiTooSmall { .. })
        ));
        let m = ClosedManifoldModel::cp2_blowup(13);
        assert_eq!((m.e, m.sigma, m.b_plus(), m.b_minus()), (16, -12, 1, 13));
    }

    #[test]
    fn blowdown_examples() {
        let x1 = rational_blowdown(&plan(13, 2)).unwrap();
        assert_eq!((x1.e, x1.sigma), (12, -8));
        assert!(x1.assumptions.iter().any(|a| a == ASSUME_SIMPLY_CONNECTED));

        let x2 = ClosedManifoldModel::new(17, -13, 0, true, Parity::Odd).unwrap();
        let out = rational_blowdown(&plan(14, 4).with_ambient(x2)).unwrap();
        assert_eq!((out.e, out.sigma), (11, -7));

        let mut same = plan(13, 2);
        same.piece = same.ball;
        let out = rational_blowdown(&same).unwrap();
        assert_eq!(out, ClosedManifoldModel::cp2_blowup(13));

        let mut bad = plan(13, 2);
        bad.ball.b2 = 1;
        assert_eq!(rational_blowdown(&bad), Err(CutpasteError::NotRationalBall { b1: 0, b2: 1 }));
    }

    #[test]
    fn blowdown_is_additive() {
        let p1 = plan(20, 2);
        let p2 = plan(20, 4);
        let a = rational_blowdown(&p2.with_ambient(rational_blowdown(&p1).unwrap())).unwrap();
        let b = rational_blowdown(&p1.with_ambient(rational_blowdown(&p2).unwrap())).unwrap();
        assert_eq!((a.e, a.sigma), (b.e, b.sigma));
        assert_eq!((a.e, a.sigma), (23 - 4 - 6, -19 + 4 + 6));
    }

    #[test]
    fn classify_examples() {
        let m = ClosedManifoldModel::new(12, -8, 0, true, Parity::Odd).unwrap();
        assert_eq!(freedman_classify(&m).unwrap().name, "CP²#9C̄P²");
        let even = ClosedManifoldModel::new(4, 0, 0, true, Parity::Even).unwrap();
        assert_eq!(freedman_classify(&even).unwrap().name, UNRECOGNIZED);
        let m = ClosedManifoldModel::new(9, -5, 0, true, Parity::Odd).unwrap();
        assert_eq!(freedman_classify(&m).unwrap().k, Some(6));
        let cp2 = ClosedManifoldModel::cp2_blowup(0);
        assert_eq!(freedman_classify(&cp2).unwrap().name, "CP²");
        let not_sc = ClosedManifoldModel::new(12, -8, 0, false, Parity::Odd).unwrap();
        assert_eq!(freedman_classify(&not_sc), Err(CutpasteError::NotSimplyConnected));
    }

    #[test]
    fn transfer_hypotheses() {
        let p = plan(13, 2);
        assert_eq!(sw_transfer(-1, &p, 0, true), Ok(-1));
        let mut no_l = p.clone();
        no_l.lspace_flag = false;
        assert_eq!(sw_transfer(-1, &no_l, 0, true), Err(CutpasteError::LSpaceUnmet));
        assert_eq!(
            sw_transfer(-1, &no_l, 0, true).unwrap_err().to_string(),
            "L-space hypothesis unmet"
        );
        assert_eq!(sw_transfer(-1, &p, -2, true), Err(CutpasteError::NegativeDimension(-2)));
        assert_eq!(sw_transfer(-1, &p, 0, false), Err(CutpasteError::RestrictionsDisagree));
        let mut indefinite = p.clone();
        indefinite.piece.sigma = 0;
        assert_eq!(sw_transfer(-1, &indefinite, 0, true), Err(CutpasteError::PieceNotNegativeDefinite));
        let mut b1 = p.clone();
        b1.piece.b1 = 1;
        assert_eq!(sw_transfer(-1, &b1, 0, true), Err(CutpasteError::NonzeroB1(1)));
        let mut open = p;
        open.boundary.h1_order = 0.into();
        assert_eq!(sw_transfer(-1, &open, 0, true), Err(CutpasteError::InfiniteH1));
    }

    #[test]
    fn extension_check_in_negative_definite_lattice() {
        let l = BlowupLattice::negative_definite(4);
        let g = wahl_tree(2).unwrap();
        let c = |v: [i64; 4]| HomologyClass::new(l, v.to_vec()).unwrap();
        // each class S satisfies K_ref.S = S.S + 2
        let cfg = SphereConfiguration::new(
            l,
            g.clone(),
            vec![c([1, -1, -1, -1]), c([-1, -1, 0, 1]), c([-1, 0, 1, -1]), c([-1, 1, -1, 0])],
        )
        .unwrap();
        assert!(crate::config::verify_configuration(&cfg).unwrap().ok());
        let k_ref = reference_canonical(&cfg);
        assert!(characteristic_extension_check(&k_ref, &cfg, &cfg).unwrap());
        let even = c([2, 1, 1, 1]);
        assert!(!characteristic_extension_check(&even, &cfg, &cfg).unwrap());
        let other = SphereConfiguration::new(
            BlowupLattice::negative_definite(1),
            PlumbingGraph::new(vec![-1], &[]).unwrap(),
            vec![BlowupLattice::negative_definite(1).e(1)],
        )
        .unwrap();
        assert_eq!(characteristic_extension_check(&k_ref, &cfg, &other), Err(CutpasteError::GraphMismatch));
    }
}
