//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operands belong to different polynomial variable rings.
    RingMismatch,
    /// A negative or otherwise unusable truncation order was requested.
    InvalidOrder(String),
    /// Series division where the denominator vanishes to higher order than
    /// the numerator: the quotient is not a power series.
    Pole { num_valuation: usize, den_valuation: usize },
    /// Division by the zero series or zero scalar.
    DivisionByZero,
    /// Series division whose denominator leading coefficient is not an
    /// invertible scalar in the coefficient ring.
    NonUnitLeadingCoefficient,
    /// Numeric evaluation with a variable left unassigned.
    UnassignedVariable(String),
    /// A chord-diagram word where some token does not occur exactly twice.
    MalformedDiagram(String),
    /// 4T generator with out-of-range or coincident insertion gaps.
    InvalidPositions(String),
    /// A brute-force oracle refused a problem above its size bound.
    ResourceBound { size: usize, limit: usize },
    /// Unparseable or out-of-domain knot specification.
    BadKnot(String),
    /// Torus parameters must be coprime and >= 2.
    NonCoprime { m: i64, p: i64 },
    /// Evaluation of a formula whose prefactor is singular at the request.
    SingularPrefactor(String),
    /// An integration contour runs into (or too close to) a pole.
    ContourPole(String),
    /// A point or segment touches the branch cut of the Borel transform.
    BranchCut(String),
    /// A quadrature or summation could not reach the requested tolerance.
    ToleranceNotMet { requested: f64, achieved: f64 },
    /// Floating-point budget insufficient for the requested evaluation.
    PrecisionExceeded(String),
    /// Representation-label parameters outside their series' domain.
    RepDomain(String),
    /// Diagnostic fit undefined (for example an all-zero series).
    UndefinedFit(String),
    /// Input not supported by this operation (for example multi-component
    /// planar diagrams in the bracket oracle).
    Unsupported(String),
    /// Malformed textual or JSON input.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch => write!(f, "mixed polynomial variable rings"),
            Error::InvalidOrder(m) => write!(f, "invalid truncation order: {m}"),
            Error::Pole { num_valuation, den_valuation } => write!(
                f,
                "series division pole: denominator valuation {den_valuation} exceeds numerator valuation {num_valuation}"
            ),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NonUnitLeadingCoefficient => {
                write!(f, "denominator leading coefficient is not an invertible scalar")
            }
            Error::UnassignedVariable(v) => write!(f, "unassigned variable: {v}"),
            Error::MalformedDiagram(m) => write!(f, "malformed chord diagram: {m}"),
            Error::InvalidPositions(m) => write!(f, "invalid 4T gap positions: {m}"),
            Error::ResourceBound { size, limit } => {
                write!(f, "problem size {size} exceeds oracle bound {limit}")
            }
            Error::BadKnot(m) => write!(f, "bad knot specification: {m}"),
            Error::NonCoprime { m, p } => {
                write!(f, "torus parameters ({m},{p}) must be coprime integers >= 2")
            }
            Error::SingularPrefactor(m) => write!(f, "singular prefactor: {m}"),
            Error::ContourPole(m) => write!(f, "contour-pole collision: {m}"),
            Error::BranchCut(m) => write!(f, "branch cut touched: {m}"),
            Error::ToleranceNotMet { requested, achieved } => {
                write!(f, "tolerance not met: requested {requested:.3e}, achieved {achieved:.3e}")
            }
            Error::PrecisionExceeded(m) => write!(f, "precision budget exceeded: {m}"),
            Error::RepDomain(m) => write!(f, "representation parameter out of domain: {m}"),
            Error::UndefinedFit(m) => write!(f, "undefined fit: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported input: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error (3 = invalid arguments, 4 = computation
    /// error, 5 = tolerance not met).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::BadKnot(_) | Error::RepDomain(_) | Error::InvalidOrder(_) => 3,
            Error::ToleranceNotMet { .. } => 5,
            _ => 4,
        }
    }
}
