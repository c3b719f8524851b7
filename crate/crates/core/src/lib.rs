//! Exact verification toolkit for the combinatorics and matrix algebra behind
//! (k,c) Speh-block calculus on general linear groups.
//!
//! Everything here computes over exact domains — integers, rationals, and
//! multivariate Laurent rational functions — so every check is a literal
//! identity test, never a floating-point comparison.
//!
//! The crate is organised in layers:
//!
//! - [`combinatorics`]: partitions, compositions, dominance order, nilpotent
//!   orbit data, and block anti-diagonal permutation matrices.
//! - [`algebra`]: Laurent polynomials and rational functions over ℚ with GCD
//!   canonicalisation, plus matrices over the fraction field and the
//!   upper·diagonal·lower block factorisation.
//! - [`unipotent`]: coordinate sets of unipotent radicals, the (k,c)
//!   character functional, modulus-character exponents, and torus-conjugation
//!   bookkeeping.
//! - [`kappa`]: the interleaving permutation κ, its conjugation action on
//!   unipotent coordinates, elimination orders, and the symbolic
//!   root-exchange checks.
//! - [`intertwining`]: unramified rank-one intertwining factors and their
//!   products over inversion sets of κ.
//! - [`rep`]: inducing-data expressions for Speh blocks, highest-derivative
//!   bookkeeping, duals, and central characters.
//! - [`suites`]: named verification suites with canonical JSON reports.

pub mod algebra;
pub mod combinatorics;
pub mod intertwining;
pub mod kappa;
pub mod rep;
pub mod sampling;
pub mod suites;
pub mod unipotent;

pub use algebra::{Context, FracMatrix, LaurentPoly, LaurentRat, ZeroPole};
pub use combinatorics::{Composition, Dominance, OrbitData, Partition, PermMatrix};
pub use intertwining::{GkProduct, PrincipalSeriesCharacter, SatakeData};
pub use kappa::{EliminationPlan, KappaContext};
pub use rep::{CuspidalLabel, EssSqInt, GenericTau, Mode, RepExpr};
pub use suites::{run_suite, SuiteParams, SuiteReport};
pub use unipotent::{CharacterFunctional, CoordSet, ExponentVector};

use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A constructor or operation was handed data outside its domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Division by an identically zero polynomial or rational function.
    #[error("division by zero")]
    DivisionByZero,

    /// Two symbolic operands were built over different variable contexts.
    #[error("variable contexts differ: [{0}] vs [{1}]")]
    ContextMismatch(String, String),

    /// A substitution needed a fractional power of a non-monomial value.
    #[error("substitution for '{0}' requires integer exponents or a unit monomial value")]
    NonIntegralSubstitution(String),

    /// The block factorisation m = u·d·l does not exist over the fraction
    /// field (the matrix sits outside the open cell).
    #[error("block decomposition failed: {0}")]
    DecompositionFails(String),

    /// Inducing exponents were not weakly decreasing.
    #[error("not in standard-module order: {0}")]
    NotLanglandsForm(String),

    /// A derivative was requested of the dimension-one terminal expression.
    #[error("expression is already terminal")]
    AlreadyTerminal,

    /// A rank-one factor degenerates (its defining character is trivial).
    #[error("degenerate rank-one factor at slot pair ({0}, {1})")]
    DegenerateFactor(usize, usize),

    /// Archimedean-mode inducing data must consist of characters.
    #[error("archimedean mode accepts only character blocks: {0}")]
    NotCharacterData(String),

    /// An unknown suite or compute command was requested.
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    /// JSON (de)serialisation failed.
    #[error("serialisation error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
