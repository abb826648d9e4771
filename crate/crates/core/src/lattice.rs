//! Integral intersection lattices and symmetric integer forms.
//!
//! Blow-up lattices are diagonal: `<1> + n<-1>` (the homology of CP^2 # n -CP^2)
//! or `n<-1>`. Basis order is fixed as `(H, E1, ..., En)`; blowing up appends a
//! new `E` at the end. General symmetric forms (plumbing intersection matrices)
//! are handled by [`SymmetricForm`] with exact big-integer arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected rank {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("classes live in different lattices ({0} vs {1})")]
    LatticeMismatch(BlowupLattice, BlowupLattice),
    #[error("positive rank must be 0 or 1, got {0}")]
    PositiveRank(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("form is singular")]
    Singular,
    #[error("integer overflow in class arithmetic")]
    Overflow,
}

/// The diagonal lattice `positive<1> + negative<-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupLattice {
    positive: usize,
    negative: usize,
}

impl BlowupLattice {
    pub fn new(positive: usize, negative: usize) -> Result<Self, LatticeError> {
        if positive > 1 {
            return Err(LatticeError::PositiveRank(positive));
        }
        Ok(Self { positive, negative })
    }

    /// Lattice of CP^2 # n -CP^2, basis `(H, E1, ..., En)`.
    pub fn cp2_blowup(n: usize) -> Self {
        Self { positive: 1, negative: n }
    }

    /// Lattice of # n -CP^2, basis `(E1, ..., En)`.
    pub fn negative_definite(n: usize) -> Self {
        Self { positive: 0, negative: n }
    }

    pub fn positive_rank(&self) -> usize {
        self.positive
    }

    pub fn negative_rank(&self) -> usize {
        self.negative
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }

    /// Self-pairing of the `i`-th basis vector.
    pub fn sign(&self, i: usize) -> i64 {
        if i < self.positive {
            1
        } else {
            -1
        }
    }

    /// `"H"` for the positive generator, `"E{k}"` (1-based) otherwise.
    pub fn label(&self, i: usize) -> String {
        if i < self.positive {
            "H".to_string()
        } else {
            format!("E{}", i - self.positive + 1)
        }
    }

    /// The lattice after one more blow-up.
    pub fn blow_up(&self) -> Self {
        Self { positive: self.positive, negative: self.negative + 1 }
    }

    pub fn basis(&self, i: usize) -> HomologyClass {
        let mut coeffs = vec![0; self.rank()];
        coeffs[i] = 1;
        HomologyClass { lattice: *self, coeffs }
    }

    /// The positive generator `H`, if there is one.
    pub fn h(&self) -> Option<HomologyClass> {
        (self.positive == 1).then(|| self.basis(0))
    }

    /// Exceptional class `E_k`, 1-based.
    pub fn e(&self, k: usize) -> HomologyClass {
        assert!(k >= 1 && k <= self.negative, "E{k} is not in {self}");
        self.basis(self.positive + k - 1)
    }

    pub fn zero(&self) -> HomologyClass {
        HomologyClass { lattice: *self, coeffs: vec![0; self.rank()] }
    }

    pub fn gram(&self) -> SymmetricForm {
        let n = self.rank();
        let mut rows = vec![vec![0; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = self.sign(i);
        }
        SymmetricForm { n, entries: rows.concat() }
    }
}

impl fmt::Display for BlowupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.positive, self.negative) {
            (1, 0) => write!(f, "<1>"),
            (1, n) => write!(f, "<1>+{n}<-1>"),
            (_, n) => write!(f, "{n}<-1>"),
        }
    }
}

/// An integral class, stored as coordinates in the basis of its lattice.
///
/// Cohomology classes are identified with classes via Poincare duality, so a
/// class `K` acts on `x` by `K.x`. Use [`HomologyClass::from_evaluations`] when
/// a class is specified by its values on the basis (`K(H) = 3, K(E_i) = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    lattice: BlowupLattice,
    coeffs: Vec<i64>,
}

impl HomologyClass {
    pub fn new(lattice: BlowupLattice, coeffs: Vec<i64>) -> Result<Self, LatticeError> {
        if coeffs.len() != lattice.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: lattice.rank(),
                found: coeffs.len(),
            });
        }
        Ok(Self { lattice, coeffs })
    }

    /// The class whose pairing with the `i`-th basis vector is `values[i]`.
    pub fn from_evaluations(lattice: BlowupLattice, values: &[i64]) -> Result<Self, LatticeError> {
        let coeffs = values.iter().enumerate().map(|(i, v)| lattice.sign(i) * v).collect();
        Self::new(lattice, coeffs)
    }

    /// Values of this class on the basis vectors.
    pub fn evaluations(&self) -> Vec<i64> {
        self.coeffs.iter().enumerate().map(|(i, c)| self.lattice.sign(i) * c).collect()
    }

    pub fn lattice(&self) -> BlowupLattice {
        self.lattice
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    pub fn pair(&self, other: &HomologyClass) -> Result<i64, LatticeError> {
        pair(self, other)
    }

    pub fn square(&self) -> Result<i64, LatticeError> {
        pair(self, self)
    }

    /// Pads with zeros into a lattice obtained by further blow-ups.
    pub fn extend_to(&self, lattice: BlowupLattice) -> Result<Self, LatticeError> {
        if lattice.positive != self.lattice.positive || lattice.negative < self.lattice.negative {
            return Err(LatticeError::LatticeMismatch(self.lattice, lattice));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(lattice.rank(), 0);
        Ok(Self { lattice, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &HomologyClass) -> Result<Self, LatticeError> {
        if self.lattice != other.lattice {
            return Err(LatticeError::LatticeMismatch(self.lattice, other.lattice));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { lattice: self.lattice, coeffs })
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self, LatticeError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(k).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { lattice: self.lattice, coeffs })
    }
}

/// `sum_i eps_i x_i y_i` with `eps_i` the diagonal signs.
pub fn pair(x: &HomologyClass, y: &HomologyClass) -> Result<i64, LatticeError> {
    if x.lattice != y.lattice {
        return Err(LatticeError::LatticeMismatch(x.lattice, y.lattice));
    }
    let mut acc: i64 = 0;
    for (i, (a, b)) in x.coeffs.iter().zip(&y.coeffs).enumerate() {
        let term = a
            .checked_mul(*b)
            .and_then(|t| t.checked_mul(x.lattice.sign(i)))
            .ok_or(LatticeError::Overflow)?;
        acc = acc.checked_add(term).ok_or(LatticeError::Overflow)?;
    }
    Ok(acc)
}

/// `K.x = x.x (mod 2)` for every basis vector; on a diagonal lattice this means
/// every coordinate is odd.
pub fn is_characteristic(k: &HomologyClass) -> bool {
    k.coeffs.iter().all(|c| c.rem_euclid(2) == 1)
}

// Lattice mismatches are programming errors in the arithmetic operators; use
// `checked_add` where the lattices come from user input.
impl Add for &HomologyClass {
    type Output = HomologyClass;
    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        self.checked_add(rhs).expect("class addition")
    }
}

impl Add for HomologyClass {
    type Output = HomologyClass;
    fn add(self, rhs: HomologyClass) -> HomologyClass {
        &self + &rhs
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;
    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        self + &(-rhs)
    }
}

impl Sub for HomologyClass {
    type Output = HomologyClass;
    fn sub(self, rhs: HomologyClass) -> HomologyClass {
        &self - &rhs
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        self.checked_scale(-1).expect("class negation")
    }
}

impl Neg for HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        -&self
    }
}

impl Mul<&HomologyClass> for i64 {
    type Output = HomologyClass;
    fn mul(self, rhs: &HomologyClass) -> HomologyClass {
        rhs.checked_scale(self).expect("class scaling")
    }
}

impl Mul<HomologyClass> for i64 {
    type Output = HomologyClass;
    fn mul(self, rhs: HomologyClass) -> HomologyClass {
        self * &rhs
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let label = self.lattice.label(i);
            let mag = c.abs();
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag == 1 {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}{label}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureStats {
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
    pub parity: Parity,
}

impl SignatureStats {
    pub fn signature(&self) -> i64 {
        self.b_plus as i64 - self.b_minus as i64
    }

    pub fn is_negative_definite(&self) -> bool {
        self.b_plus == 0 && self.b_zero == 0
    }
}

/// A symmetric integer matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricForm {
    n: usize,
    entries: Vec<i64>,
}

impl SymmetricForm {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { n, entries: rows.concat() })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    fn big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(self.big_rows())
    }

    /// Inertia and parity, by exact congruence diagonalization.
    pub fn signature_stats(&self) -> SignatureStats {
        let (b_plus, b_minus, b_zero) = inertia(self.big_rows());
        let parity = if (0..self.n).all(|i| self.get(i, i) % 2 == 0) {
            Parity::Even
        } else {
            Parity::Odd
        };
        SignatureStats { b_plus, b_minus, b_zero, parity }
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature_stats().b_minus == self.n
    }

    /// Invariant factors `d1 | d2 | ... | dn` (zeros last for singular forms).
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        smith_divisors(self.big_rows())
    }

    /// `v^T Q^{-1} v`, the square of the rational class dual to the values `v`.
    pub fn inverse_quadratic(&self, v: &[i64]) -> Result<BigRational, LatticeError> {
        if v.len() != self.n {
            return Err(LatticeError::DimensionMismatch { expected: self.n, found: v.len() });
        }
        let x = solve_rational(self, v)?;
        Ok(x
            .iter()
            .zip(v)
            .map(|(xi, vi)| xi * BigRational::from_integer(BigInt::from(*vi)))
            .fold(BigRational::zero(), |acc, t| acc + t))
    }
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Counts of positive, negative and zero entries after symmetric elimination.
///
/// Each step replaces the trailing block `A'` by `p*A' - a a^T` where `p` is the
/// pivot; the true trailing block is congruent to `p` times that, so a negative
/// pivot flips the sign bookkeeping for everything after it.
fn inertia(mut a: Vec<Vec<BigInt>>) -> (usize, usize, usize) {
    let n = a.len();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut flipped = false;
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // row/col k += row/col j; new diagonal is 2*a[k][j]
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        let positive = p.is_positive() != flipped;
        if positive {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = &p * &a[i][j] - &a[i][k] * &a[k][j];
            }
        }
        for i in k + 1..n {
            a[i][k] = BigInt::zero();
            a[k][i] = BigInt::zero();
        }
        if p.is_negative() {
            flipped = !flipped;
        }
        k += 1;
    }
    (pos, neg, zero)
}

fn solve_rational(q: &SymmetricForm, v: &[i64]) -> Result<Vec<BigRational>, LatticeError> {
    let n = q.n;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..n).map(|j| BigRational::from_integer(q.get(i, j).into())).collect();
            row.push(BigRational::from_integer(v[i].into()));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(LatticeError::Singular)?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for c in k..=n {
            a[k][c] = &a[k][c] / &pivot;
        }
        for r in 0..n {
            if r != k && !a[r][k].is_zero() {
                let f = a[r][k].clone();
                for c in k..=n {
                    let t = &f * &a[k][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Invariant factors of an arbitrary integer matrix.
pub fn smith_divisors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let diag = rows.min(cols);
    for t in 0..diag {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // trailing block is zero
                return finish(a, diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
    }
    finish(a, diag)
}

fn finish(a: Vec<Vec<BigInt>>, diag: usize) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = (0..diag).map(|i| a[i][i].abs()).collect();
    // nonzero divisors first; the chain property already holds among them
    d.sort_by(|x, y| match (x.is_zero(), y.is_zero()) {
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        _ => std::cmp::Ordering::Equal,
    });
    d
}
