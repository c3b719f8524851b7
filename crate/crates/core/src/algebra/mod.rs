//! Exact multivariate Laurent arithmetic over ℚ and matrices over its
//! fraction field.
//!
//! The building blocks:
//!
//! - [`Context`]: an ordered, shared set of variable names. Every symbolic
//!   value carries one, and binary operations insist that both operands use
//!   the same context.
//! - [`LaurentPoly`]: a Laurent polynomial — finitely many terms
//!   `coeff · ∏ xᵢ^eᵢ` with rational coefficients and rational exponents
//!   (rational exponents cover half-integer power ladders such as
//!   `q^((c-1)/2), …, q^((1-c)/2)`).
//! - [`LaurentRat`]: a quotient of two Laurent polynomials kept in canonical
//!   reduced form: numerator and denominator coprime, denominator a genuine
//!   polynomial (minimal exponent 0 in each variable) and monic under the
//!   graded-lexicographic order.
//! - [`FracMatrix`]: a dense matrix over [`LaurentRat`] with exact inverse,
//!   determinant, block extraction, and the upper·diagonal·lower block
//!   factorisation [`FracMatrix::uml_decompose`].
//!
//! All equality tests are structural on canonical forms, so `a == b` decides
//! mathematical equality.

mod context;
mod gcd;
mod matrix;
mod poly;
mod rat;

pub use context::Context;
pub use gcd::{div_exact, poly_gcd};
pub use matrix::FracMatrix;
pub(crate) use matrix::{symbol_block, symbol_names};
pub use poly::{Exp, LaurentPoly, Mono};
pub use rat::{LaurentRat, ZeroPole};
