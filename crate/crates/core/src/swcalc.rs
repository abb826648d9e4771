//! Seiberg-Witten numerology when `b2+ = 1`.
//!
//! Only the integer bookkeeping lives here: formal dimensions, the wall
//! crossing formula, sign changes of `K` across the positive cone, and the
//! value of the invariant in a chamber adjacent to one where it vanishes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::SphereConfiguration;
use crate::lattice::{is_characteristic, BlowupLattice, HomologyClass, LatticeError};
use crate::plumbing::{intersection_form, plumbed_invariants, PlumbingError, PlumbingGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwError {
    #[error("K^2 - (3 sigma + 2 e) = {0} is not divisible by 4")]
    NotDivisible(i64),
    #[error("wall crossing needs an even non-negative dimension, got {0}")]
    WallCrossDimension(i64),
    #[error("wall precondition failed: {0}")]
    WallPrecondition(&'static str),
    #[error("K is not characteristic")]
    NotCharacteristic,
    #[error("period anchor H must have positive square, got {0}")]
    NonPositiveAnchor(i64),
    #[error("no wall between H and a")]
    NoWall,
    #[error("value unknown: the invariant is not known to vanish in the H chamber")]
    PscUnknown,
    #[error("restricted square {0} is not an integer")]
    NonIntegralSquare(String),
    #[error("{found} sphere values for a {expected}-vertex piece")]
    RestrictionLength { expected: usize, found: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Plumbing(#[from] PlumbingError),
}

/// `d = (K^2 - (3 sigma + 2 e)) / 4`.
pub fn formal_dimension(k_sq: i64, sigma: i64, e: i64) -> Result<i64, SwError> {
    let num = k_sq - (3 * sigma + 2 * e);
    if num % 4 != 0 {
        return Err(SwError::NotDivisible(num));
    }
    Ok(num / 4)
}

fn crossing_sign(d: i64) -> Result<i64, SwError> {
    if d < 0 || d % 2 != 0 {
        return Err(SwError::WallCrossDimension(d));
    }
    Ok(if (d / 2) % 2 == 0 { 1 } else { -1 })
}

/// `SW+ = SW- - (-1)^(d/2)`.
pub fn wall_cross(minus: i64, d: i64) -> Result<i64, SwError> {
    Ok(minus - crossing_sign(d)?)
}

/// Inverse of [`wall_cross`].
pub fn wall_cross_back(plus: i64, d: i64) -> Result<i64, SwError> {
    Ok(plus + crossing_sign(d)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberedValue {
    pub minus: i64,
    pub plus: i64,
    pub d: i64,
}

impl ChamberedValue {
    pub fn from_minus(minus: i64, d: i64) -> Result<Self, SwError> {
        Ok(Self { minus, plus: wall_cross(minus, d)?, d })
    }

    pub fn is_consistent(&self) -> bool {
        wall_cross(self.minus, self.d) == Ok(self.plus)
    }
}

/// Whether `K` changes sign along the segment from `H` to `a` in the
/// positive cone.
pub fn wall_between(k: &HomologyClass, h: &HomologyClass, a: &HomologyClass) -> Result<bool, SwError> {
    if h.square()? <= 0 {
        return Err(SwError::WallPrecondition("H.H > 0"));
    }
    if a.square()? < 0 {
        return Err(SwError::WallPrecondition("a.a >= 0"));
    }
    if h.pair(a)? <= 0 {
        return Err(SwError::WallPrecondition("H.a > 0"));
    }
    let kh = k.pair(h)?;
    let ka = k.pair(a)?;
    Ok((kh > 0 && ka < 0) || (kh < 0 && ka > 0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SWContext {
    pub e: i64,
    pub sigma: i64,
    pub k: HomologyClass,
    pub h: HomologyClass,
}

impl SWContext {
    pub fn new(e: i64, sigma: i64, k: HomologyClass, h: HomologyClass) -> Result<Self, SwError> {
        if k.lattice() != h.lattice() {
            return Err(LatticeError::LatticeMismatch(k.lattice(), h.lattice()).into());
        }
        if !is_characteristic(&k) {
            return Err(SwError::NotCharacteristic);
        }
        let hh = h.square()?;
        if hh <= 0 {
            return Err(SwError::NonPositiveAnchor(hh));
        }
        Ok(Self { e, sigma, k, h })
    }

    /// `CP^2 # n(-CP^2)` with anchor `H`.
    pub fn cp2_blowup(n: usize, k: HomologyClass) -> Result<Self, SwError> {
        let lattice = BlowupLattice::cp2_blowup(n);
        let h = lattice.h().expect("positive rank 1");
        Self::new(3 + n as i64, 1 - n as i64, k, h)
    }

    pub fn dimension(&self) -> Result<i64, SwError> {
        formal_dimension(self.k.square()?, self.sigma, self.e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwValue {
    pub value: i64,
    pub d: i64,
    /// Set when the sign depends on an unfixed homology orientation.
    pub sign_conventional: bool,
}

/// Value in the `a` chamber, given that it vanishes in the `H` chamber.
/// Crossing from `H` to `a` applies the wall crossing formula once.
pub fn small_perturbation_sw(
    ctx: &SWContext,
    a: &HomologyClass,
    psc_chamber_vanishes: bool,
) -> Result<SwValue, SwError> {
    let d = ctx.dimension()?;
    if d < 0 || d % 2 != 0 {
        return Ok(SwValue { value: 0, d, sign_conventional: false });
    }
    if !wall_between(&ctx.k, &ctx.h, a)? {
        return Err(SwError::NoWall);
    }
    if !psc_chamber_vanishes {
        return Err(SwError::PscUnknown);
    }
    Ok(SwValue { value: wall_cross(0, d)?, d, sign_conventional: true })
}

/// At most nine blow-ups of `CP^2` leave a single chamber.
pub fn unique_chamber(b_minus: i64) -> bool {
    b_minus <= 9
}

/// Result of sweeping all characteristic `K` on `<1> + b<-1>`, `b <= max_b`,
/// with coefficients in `[-bound, bound]` and `d(K) >= 0`.
///
/// `K^2` and `d(K)` only see absolute values, so vectors of absolute values
/// are enumerated and counts are weighted by the `2^(b+1)` sign choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberSweep {
    pub max_b: usize,
    pub bound: i64,
    pub checked: u128,
    pub admissible: u128,
    pub min_admissible_square: Option<i64>,
    /// Admissible classes with `K^2 <= 0`, up to sign.
    pub nonpositive: u128,
    /// Admissible classes with `K^2 < 0` or `K = 0`, up to sign.
    pub outside_light_cone: u128,
    /// First few admissible absolute-value vectors with `K^2 <= 0`, as `(b, K)`.
    pub witnesses: Vec<(usize, Vec<i64>)>,
}

impl ChamberSweep {
    /// Every admissible class has positive square.
    pub fn strictly_positive(&self) -> bool {
        self.nonpositive == 0
    }

    /// Every admissible class is nonzero with non-negative square, which is
    /// enough for `K.w != 0` on the whole positive cone.
    pub fn no_walls(&self) -> bool {
        self.outside_light_cone == 0
    }
}

const MAX_WITNESSES: usize = 8;

pub fn chamber_sweep(max_b: usize, bound: i64) -> ChamberSweep {
    let odd: Vec<i64> = (1..=bound.abs()).filter(|v| v % 2 == 1).collect();
    let mut out = ChamberSweep {
        max_b,
        bound,
        checked: 0,
        admissible: 0,
        min_admissible_square: None,
        nonpositive: 0,
        outside_light_cone: 0,
        witnesses: Vec::new(),
    };
    if odd.is_empty() {
        return out;
    }
    for b in 0..=max_b {
        let threshold = 9 - b as i64;
        let weight = 1u128 << (b + 1);
        let mut digits = vec![0usize; b + 1];
        loop {
            let k_sq: i64 = odd[digits[0]].pow(2) - digits[1..].iter().map(|&i| odd[i].pow(2)).sum::<i64>();
            out.checked += weight;
            // d >= 0 iff K^2 >= 3 sigma + 2 e = 9 - b
            if k_sq >= threshold {
                out.admissible += weight;
                out.min_admissible_square = Some(out.min_admissible_square.map_or(k_sq, |m| m.min(k_sq)));
                if k_sq <= 0 {
                    out.nonpositive += weight;
                    if out.witnesses.len() < MAX_WITNESSES {
                        out.witnesses.push((b, digits.iter().map(|&i| odd[i]).collect()));
                    }
                }
                if k_sq < 0 {
                    out.outside_light_cone += weight;
                }
            }
            let Some(pos) = digits.iter().rposition(|&i| i + 1 < odd.len()) else { break };
            digits[pos] += 1;
            for d in &mut digits[pos + 1..] {
                *d = 0;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionLine {
    pub condition: String,
    pub value: String,
    pub pass: bool,
}

impl fmt::Display for ConditionLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{}: {}: {}", self.condition, self.value, verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassConditionReport {
    pub a_sq: i64,
    pub h_dot_a: i64,
    pub k_dot_a: i64,
    pub restrictions: Vec<i64>,
    pub lines: Vec<ConditionLine>,
}

impl ClassConditionReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

impl fmt::Display for ClassConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The conditions a class `a` needs for the wall argument: `a.a >= 0`,
/// `H.a > 0`, `K.a < 0`, and `a` vanishing on every sphere of `cfg`.
pub fn class_condition_report(
    a: &HomologyClass,
    k: &HomologyClass,
    h: &HomologyClass,
    cfg: &SphereConfiguration,
) -> Result<ClassConditionReport, SwError> {
    let a_sq = a.square()?;
    let h_dot_a = h.pair(a)?;
    let k_dot_a = k.pair(a)?;
    let restrictions = cfg.classes.iter().map(|s| a.pair(s)).collect::<Result<Vec<_>, _>>()?;
    let list = restrictions.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    let lines = vec![
        ConditionLine { condition: "a.a >= 0".into(), value: a_sq.to_string(), pass: a_sq >= 0 },
        ConditionLine { condition: "H.a > 0".into(), value: h_dot_a.to_string(), pass: h_dot_a > 0 },
        ConditionLine { condition: "K.a < 0".into(), value: k_dot_a.to_string(), pass: k_dot_a < 0 },
        ConditionLine {
            condition: "a|P = 0".into(),
            value: format!("[{list}]"),
            pass: restrictions.iter().all(|&v| v == 0),
        },
    ];
    Ok(ClassConditionReport { a_sq, h_dot_a, k_dot_a, restrictions, lines })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionTransfer {
    pub k_sq_before: i64,
    pub k_sq_after: i64,
    pub d_before: i64,
    pub d_after: i64,
}

/// Formal dimension before and after replacing a plumbed piece by a rational
/// ball. `k_on_spheres[i]` is `K` evaluated on sphere `i`; the piece carries
/// `K|P` of square `v^T Q^-1 v` and the ball carries nothing.
pub fn blowdown_dimension(
    k_sq: i64,
    e: i64,
    sigma: i64,
    piece: &PlumbingGraph,
    k_on_spheres: &[i64],
) -> Result<DimensionTransfer, SwError> {
    if k_on_spheres.len() != piece.len() {
        return Err(SwError::RestrictionLength { expected: piece.len(), found: k_on_spheres.len() });
    }
    let q = intersection_form(piece)?;
    let restricted = q.inverse_quadratic(k_on_spheres)?;
    if !restricted.is_integer() {
        return Err(SwError::NonIntegralSquare(restricted.to_string()));
    }
    let restricted: BigInt = restricted.to_integer();
    let k_sq_after = (BigInt::from(k_sq) - restricted)
        .to_i64()
        .ok_or(SwError::Lattice(LatticeError::Overflow))?;
    let p = plumbed_invariants(piece)?;
    let d_before = formal_dimension(k_sq, sigma, e)?;
    let d_after = formal_dimension(k_sq_after, sigma - p.sigma, e - p.e + 1)?;
    Ok(DimensionTransfer { k_sq_before: k_sq, k_sq_after, d_before, d_after })
}
