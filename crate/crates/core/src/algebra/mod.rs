//! Exact arithmetic over ℚ: polynomials, rational functions, linear algebra,
//! resultants, Gröbner bases and factorization.

pub mod factor;
pub mod field;
pub mod groebner;
pub mod matrix;
pub mod mratfun;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod rational;
pub mod resultant;
pub mod subspace;
pub mod upoly;
mod zassenhaus;

pub use factor::{factor_over_function_field, factor_rational, Factorization, FunctionFieldFactor};
pub use field::Field;
pub use groebner::{groebner_basis, ideal_membership, is_unit_ideal, normal_form};
pub use matrix::{solve_linear, Matrix, QMatrix, SolveMode};
pub use mratfun::RationalFunction;
pub use parse::{parse_poly, parse_rational, parse_rational_function};
pub use poly::{Monomial, MultiPoly, TermOrder};
pub use ratfun::{QPoly, RatFun};
pub use rational::{q, qf, Q};
pub use resultant::resultant;
pub use subspace::Subspace;
pub use upoly::UniPoly;
