//! Computational study of the coloured Jones polynomial at complex colour.
//!
//! The crate has an exact half and a numeric half. The exact half works in
//! arbitrary-precision rational arithmetic end to end: chord diagrams and the
//! sl2 weight system, truncated `h`-power series with polynomial coefficients
//! in the colour variable, cyclotomic-style expansions for built-in knots,
//! torus-knot expansions with their factorially divergent coefficients, and
//! the bivariate-colour (Lorentz) series. The numeric half turns those
//! divergent series back into numbers: formal Borel transform, Gevrey
//! diagnostics, analytic continuation of the Borel transform for torus knots,
//! directional Laplace resummation, and branch-ambiguity scans.
//!
//! Start with the `examples/` directory: each file is a small runnable tour
//! of one capability. The `zjones` binary exposes the same operations as
//! batch subcommands with JSON/CSV output, including `selftest`, which runs
//! the full acceptance suite.

pub mod acceptance;
pub mod borel;
pub mod chord;
pub mod cli;
pub mod error;
pub mod exact;
pub mod knot;
pub mod lorentz;
pub mod quad;
pub mod torus;

pub use error::{Error, Result};
