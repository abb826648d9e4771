//! Exact integer calculus for rational blow-downs of Wahl-type plumbing trees
//! inside blow-ups of the complex projective plane.
//!
//! - [`lattice`]: diagonal unimodular lattices, classes, exact forms.
//! - [`plumbing`]: plumbing trees, boundary `H_1`, definiteness.
//! - [`seifert`]: Seifert invariants of star-shaped plumbings.
//! - [`config`]: sphere configurations, bounded search, blow-up calculus.
//! - [`cutpaste`]: blow-down bookkeeping and topological classification.
//! - [`swcalc`]: Seiberg-Witten dimension and wall-crossing numerology.
//! - [`monodromy`]: `SL(2,Z)` words and elliptic fibration certificates.
//! - [`constructions`]: the named trees, classes and configurations.

use thiserror::Error;

pub mod config;
pub mod constructions;
pub mod cutpaste;
pub mod lattice;
pub mod monodromy;
pub mod plumbing;
pub mod seifert;
pub mod swcalc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Plumbing(#[from] plumbing::PlumbingError),
    #[error(transparent)]
    Seifert(#[from] seifert::SeifertError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Cutpaste(#[from] cutpaste::CutpasteError),
    #[error(transparent)]
    Sw(#[from] swcalc::SwError),
    #[error(transparent)]
    Monodromy(#[from] monodromy::MonodromyError),
}
