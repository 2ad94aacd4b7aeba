//! Exact univariate algebra: polynomials and rational functions over the
//! rationals, the ordering near `t = 1-`, and a linear solver generic over
//! any [`Field`](crate::scalar::Field).

mod expr;
mod linsolve;
mod poly;
mod ratfunc;
pub mod sturm;

pub use expr::{parse_constant, parse_rational_function, ExprError};
pub use linsolve::{solve_linear, LinearError, Matrix};
pub use poly::{zero_order_at_one, Polynomial, ZeroPolynomial};
pub use ratfunc::{compare_near_one, sign_near_one, RationalFunction, SignAtOneMinus};
