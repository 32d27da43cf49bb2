//! Exact integer and rational linear algebra, normal forms and linear programming.

pub mod lp;
pub mod matrix;
pub mod rational;
pub mod snf;

pub use lp::{cone_separator, in_cone, lp_unbounded, Constraint, LpError, LpProblem, Relation};
pub use matrix::{dot, QMatrix, ZMatrix};
pub use rational::{fmt_rational, int, parse_rational, rat, rat_int, Int, Rational};
pub use snf::{hermite_normal_form, smith_normal_form, solve_integer_left, solve_linear, Smith};
