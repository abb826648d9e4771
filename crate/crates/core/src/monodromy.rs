//! Exact SL(2,Z) words in the fishtail monodromies
//! `a = [[1,1],[0,1]]` and `b = [[1,0],[-1,1]]`.
//!
//! Words are evaluated left to right in the order they are written. Word
//! syntax: letters `a`, `A` (= a^-1), `b`, `B`, integer powers `^n`, and
//! parentheses, e.g. `(a^3 b)^3` or `a^5 (a^-2 b a^2) a b a a a b`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("fiber {0} needs a conjugator word")]
    MissingConjugator(usize),
    #[error("I_k fiber needs k >= 1")]
    BadFiber,
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    m: [[BigInt; 2]; 2],
}

impl SL2Matrix {
    pub fn identity() -> Self {
        Self::from_i64([[1, 0], [0, 1]])
    }

    /// Panics unless the determinant is 1.
    pub fn from_i64(m: [[i64; 2]; 2]) -> Self {
        let out = Self { m: m.map(|row| row.map(BigInt::from)) };
        assert!(out.det().is_one(), "determinant must be 1");
        out
    }

    /// `a^n = [[1, n], [0, 1]]`.
    pub fn a_pow(n: i64) -> Self {
        Self::from_i64([[1, n], [0, 1]])
    }

    /// `b^n = [[1, 0], [-n, 1]]`.
    pub fn b_pow(n: i64) -> Self {
        Self::from_i64([[1, 0], [-n, 1]])
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.m[i][j]
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn inverse(&self) -> Self {
        let [[p, q], [r, s]] = &self.m;
        Self { m: [[s.clone(), -q], [-r, p.clone()]] }
    }
}

impl Mul for &SL2Matrix {
    type Output = SL2Matrix;
    fn mul(self, rhs: &SL2Matrix) -> SL2Matrix {
        let (x, y) = (&self.m, &rhs.m);
        let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        SL2Matrix { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
}

/// A reduced word: adjacent letters differ and every exponent is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MonodromyWord {
    letters: Vec<(Generator, i64)>,
}

impl MonodromyWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(g: Generator, exp: i64) -> Self {
        let mut w = Self::empty();
        w.push(g, exp);
        w
    }

    pub fn a() -> Self {
        Self::letter(Generator::A, 1)
    }

    pub fn b() -> Self {
        Self::letter(Generator::B, 1)
    }

    pub fn letters(&self) -> &[(Generator, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    fn push(&mut self, g: Generator, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                last.1 += exp;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, exp));
    }

    pub fn concat(&self, other: &MonodromyWord) -> Self {
        let mut out = self.clone();
        for &(g, e) in &other.letters {
            out.push(g, e);
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let mut out = Self::empty();
        for &(g, e) in self.letters.iter().rev() {
            out.push(g, -e);
        }
        out
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::empty(), |acc, _| acc.concat(&base))
    }

    /// `w x w^-1`.
    pub fn conjugate(&self, x: &MonodromyWord) -> Self {
        self.concat(x).concat(&self.inverse())
    }
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| {
                let c = match g {
                    Generator::A => 'a',
                    Generator::B => 'b',
                };
                if e == 1 {
                    c.to_string()
                } else {
                    format!("{c}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for MonodromyWord {
    type Err = MonodromyError;

    fn from_str(s: &str) -> Result<Self, MonodromyError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let w = p.sequence()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected character"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> MonodromyError {
        MonodromyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sequence(&mut self) -> Result<MonodromyWord, MonodromyError> {
        let mut w = MonodromyWord::empty();
        while let Some(c) = self.peek() {
            let atom = match c {
                b'a' | b'A' | b'b' | b'B' => {
                    self.pos += 1;
                    let g = if c.eq_ignore_ascii_case(&b'a') { Generator::A } else { Generator::B };
                    let sign = if c.is_ascii_uppercase() { -1 } else { 1 };
                    MonodromyWord::letter(g, sign)
                }
                b'1' if !matches!(self.src.get(self.pos + 1), Some(b'0'..=b'9')) => {
                    self.pos += 1;
                    MonodromyWord::empty()
                }
                b'(' => {
                    self.pos += 1;
                    let inner = self.sequence()?;
                    if self.peek() != Some(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    self.pos += 1;
                    inner
                }
                b')' => break,
                _ => return Err(self.err("expected a, A, b, B or '('")),
            };
            let atom = if self.peek() == Some(b'^') {
                self.pos += 1;
                atom.pow(self.integer()?)
            } else {
                atom
            };
            w = w.concat(&atom);
        }
        Ok(w)
    }

    fn integer(&mut self) -> Result<i64, MonodromyError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| MonodromyError::Parse { pos: start, msg: "expected an integer exponent".into() })
    }
}

pub fn evaluate(w: &MonodromyWord) -> SL2Matrix {
    w.letters.iter().fold(SL2Matrix::identity(), |acc, &(g, e)| {
        let m = match g {
            Generator::A => SL2Matrix::a_pow(e),
            Generator::B => SL2Matrix::b_pow(e),
        };
        &acc * &m
    })
}

pub fn verify_relation(lhs: &MonodromyWord, rhs: &MonodromyWord) -> bool {
    evaluate(lhs) == evaluate(rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FiberKind {
    /// A cycle of `k` spheres (`I_1` is a nodal fiber).
    I { k: u32 },
    Fishtail,
}

impl FiberKind {
    pub fn euler_contribution(&self) -> i64 {
        match self {
            FiberKind::I { k } => *k as i64,
            FiberKind::Fishtail => 1,
        }
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::I { k } => write!(f, "I_{k}"),
            FiberKind::Fishtail => write!(f, "fishtail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularFiber {
    pub kind: FiberKind,
    /// The fiber's local monodromy is `w a^k w^-1`.
    pub conjugator: Option<MonodromyWord>,
}

impl SingularFiber {
    pub fn local_monodromy(&self) -> Option<MonodromyWord> {
        let k = match self.kind {
            FiberKind::I { k } => k as i64,
            FiberKind::Fishtail => 1,
        };
        let core = MonodromyWord::letter(Generator::A, k);
        match (&self.conjugator, self.kind) {
            (Some(w), _) => Some(w.conjugate(&core)),
            (None, FiberKind::I { .. }) => Some(core),
            (None, FiberKind::Fishtail) => None,
        }
    }
}

/// The singular fibers of an elliptic fibration over the disk, in monodromy
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FibrationCensus {
    pub fibers: Vec<SingularFiber>,
}

impl FibrationCensus {
    /// One `I_k` followed by `n` fishtails, without conjugators.
    pub fn ik_with_fishtails(k: u32, n: usize) -> Result<Self, MonodromyError> {
        if k == 0 {
            return Err(MonodromyError::BadFiber);
        }
        let mut fibers = vec![SingularFiber { kind: FiberKind::I { k }, conjugator: None }];
        fibers.extend((0..n).map(|_| SingularFiber { kind: FiberKind::Fishtail, conjugator: None }));
        Ok(Self { fibers })
    }

    pub fn push(&mut self, kind: FiberKind, conjugator: Option<MonodromyWord>) -> Result<(), MonodromyError> {
        if kind == (FiberKind::I { k: 0 }) {
            return Err(MonodromyError::BadFiber);
        }
        self.fibers.push(SingularFiber { kind, conjugator });
        Ok(())
    }

    /// The ordered product of the local monodromies.
    pub fn total_monodromy(&self) -> Result<MonodromyWord, MonodromyError> {
        self.fibers.iter().enumerate().try_fold(MonodromyWord::empty(), |acc, (i, f)| {
            let local = f.local_monodromy().ok_or(MonodromyError::MissingConjugator(i))?;
            Ok(acc.concat(&local))
        })
    }
}

/// Euler characteristic of the fibration: `k` per `I_k`, one per fishtail.
/// An elliptic fibration on E(1) has 12.
pub fn euler_count(c: &FibrationCensus) -> i64 {
    c.fibers.iter().map(|f| f.kind.euler_contribution()).sum()
}

/// The census extends over the sphere as E(1) iff the total monodromy is
/// trivial and the Euler count is 12.
pub fn verify_certificate(c: &FibrationCensus) -> Result<bool, MonodromyError> {
    let total = c.total_monodromy()?;
    Ok(evaluate(&total).is_identity() && euler_count(c) == 12)
}

/// Census certificate read off a word over `a` and `b` with positive
/// exponents: the leading `a^k` block is the `I_k` fiber, every later `a` is a
/// fishtail, and every `b` is the fishtail `(ab) a (ab)^-1`.
pub fn census_from_positive_word(w: &MonodromyWord) -> Result<FibrationCensus, MonodromyError> {
    let mut c = FibrationCensus::default();
    let ab = MonodromyWord::a().concat(&MonodromyWord::b());
    for (i, &(g, e)) in w.letters().iter().enumerate() {
        if e < 0 {
            return Err(MonodromyError::Parse { pos: i, msg: "negative exponent in positive word".into() });
        }
        match (i, g) {
            (0, Generator::A) => c.push(FiberKind::I { k: e as u32 }, None)?,
            (_, Generator::A) => {
                for _ in 0..e {
                    c.push(FiberKind::Fishtail, Some(MonodromyWord::empty()))?;
                }
            }
            (_, Generator::B) => {
                for _ in 0..e {
                    c.push(FiberKind::Fishtail, Some(ab.clone()))?;
                }
            }
        }
    }
    Ok(c)
}

/// All reduced words of length at most `max_len`, shortest first.
pub fn words_up_to(max_len: u64) -> Vec<MonodromyWord> {
    let mut out = vec![MonodromyWord::empty()];
    let mut frontier = vec![MonodromyWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for (g, e) in [(Generator::A, 1), (Generator::A, -1), (Generator::B, 1), (Generator::B, -1)] {
                let cand = w.concat(&MonodromyWord::letter(g, e));
                if cand.length() == w.length() + 1 {
                    next.push(cand);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Bounded search for `count` fishtails `w_i a w_i^-1` (conjugators of length
/// at most `max_conjugator_len`) with `prefix * prod = I`. Conjugates are
/// deduplicated by matrix; candidates are tried in order of conjugator length.
pub fn search_fishtail_factorization(
    prefix: &SL2Matrix,
    count: usize,
    max_conjugator_len: u64,
    budget: u64,
) -> Result<Option<Vec<MonodromyWord>>, MonodromyError> {
    let a = MonodromyWord::a();
    let mut seen = BTreeSet::new();
    let mut candidates = Vec::new();
    for w in words_up_to(max_conjugator_len) {
        let m = evaluate(&w.conjugate(&a));
        if seen.insert(m.to_string()) {
            candidates.push((w, m));
        }
    }
    let mut nodes = 0u64;
    let mut chosen = Vec::new();
    fn go(
        cur: &SL2Matrix,
        left: usize,
        cands: &[(MonodromyWord, SL2Matrix)],
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool, MonodromyError> {
        *nodes += 1;
        if *nodes > budget {
            return Err(MonodromyError::BudgetExceeded(budget));
        }
        if left == 0 {
            return Ok(cur.is_identity());
        }
        for (i, (_, m)) in cands.iter().enumerate() {
            chosen.push(i);
            if go(&(cur * m), left - 1, cands, chosen, nodes, budget)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    if go(prefix, count, &candidates, &mut chosen, &mut nodes, budget)? {
        Ok(Some(chosen.into_iter().map(|i| candidates[i].0.clone()).collect()))
    } else {
        Ok(None)
    }
}
