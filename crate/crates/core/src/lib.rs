//! Solvers for perfect-information stochastic games on finite arenas.
//!
//! * [`discounted`]: multi-discounted payoffs, exact profile evaluation,
//!   value iteration and the stopping-state transform.
//! * [`priority_mp`]: priority mean-payoff expectations through Markov-chain
//!   decomposition and an exhaustive saddle-point solver.
//! * [`blackwell`]: rational discount parametrizations, Blackwell-optimal
//!   profiles found by comparing value functions near `t = 1`, and the
//!   discounted-to-priority limit checker.
//! * [`sim`]: seeded Monte-Carlo estimators used for cross-checks.
//!
//! Exact arithmetic runs over [`Rational`] and [`RatFn`]; the numeric solver
//! is generic over [`scalar::Real`] (`f32` or `f64`).

// Input errors carry the offending values and their JSON location; they are
// produced once per run, so their size is irrelevant.
#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod arena;
pub mod blackwell;
pub mod cli;
pub mod discounted;
pub mod priority_mp;
pub mod scalar;
pub mod sim;

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;
/// Rational function of the discount parameter `t`.
pub type RatFn = algebra::RationalFunction;
/// Polynomial in `t` over [`Rational`].
pub type Poly = algebra::Polynomial;
/// Exact value vector of a profile under constant discounts.
pub type ExactValues = Vec<Rational>;
/// Symbolic value vector of a profile under a parametrization.
pub type ValueFunctions = Vec<RatFn>;
/// Value-iteration result in double precision.
pub type DiscountedSolve64 = discounted::DiscountedSolveResult<f64>;
/// Value-iteration result in single precision.
pub type DiscountedSolve32 = discounted::DiscountedSolveResult<f32>;
