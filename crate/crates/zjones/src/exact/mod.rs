//! Exact coefficient arithmetic: arbitrary-precision rationals, sparse
//! multivariate polynomials, and truncated power series in `h`.

pub mod mpoly;
pub mod rat;
pub mod series;

pub use mpoly::{MPoly, Var, VarSet};
pub use rat::{parse_rat, rat, rat_int, rat_string, rat_to_f64, Rat};
pub use series::{poly_series_arith, EvalOutcome, HSeries, SeriesOp};
