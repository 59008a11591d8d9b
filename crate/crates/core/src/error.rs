use std::fmt;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Gamma evaluated at zero or a negative integer.
    Pole { x: f64 },
    /// Result exceeds the representable floating range.
    Overflow { x: f64 },
    /// A series reached its term budget before meeting the tail bound.
    Convergence { terms: usize, tail_bound: f64 },
    /// An argument outside an operation's domain.
    Domain(String),
    /// A fractional order that is not an integer multiple of the series step.
    Alignment { mu: f64, base_order: f64 },
    /// Two series with different base order or origin were combined.
    Mismatch(String),
    /// A multiplier function failed its endpoint or positivity checks.
    Multiplier(String),
    /// The leading-coefficient discriminant is negative (no real branch).
    Discriminant { value: f64 },
    /// The series recurrence denominator vanished.
    Resonance { denominator: f64 },
    /// Quadratic solver invoked with a zero quadratic coefficient; use the linear path.
    LinearDegenerate,
    /// The relaxation denominator vanished.
    SingularDenominator { value: f64 },
    /// An operator-norm ratio exceeded its proven bound (indicates a code defect).
    BoundViolation {
        ratio: f64,
        bound: f64,
        detail: String,
    },
    /// Invalid run configuration (CLI layer).
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { x } => write!(f, "gamma pole at x = {x}"),
            Error::Overflow { x } => write!(f, "overflow evaluating at x = {x}"),
            Error::Convergence { terms, tail_bound } => write!(
                f,
                "series did not converge within {terms} terms (tail bound {tail_bound:.3e})"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Alignment { mu, base_order } => write!(
                f,
                "order {mu} is not an integer multiple of the series step {base_order}"
            ),
            Error::Mismatch(msg) => write!(f, "series mismatch: {msg}"),
            Error::Multiplier(msg) => write!(f, "invalid multiplier: {msg}"),
            Error::Discriminant { value } => {
                write!(f, "negative discriminant {value:.6e}: no real leading coefficient")
            }
            Error::Resonance { denominator } => write!(
                f,
                "recurrence denominator {denominator:.3e} vanishes; solution branch is resonant"
            ),
            Error::LinearDegenerate => write!(
                f,
                "quadratic coefficient is zero; use the linear solver path"
            ),
            Error::SingularDenominator { value } => {
                write!(f, "relaxation denominator {value:.3e} vanishes")
            }
            Error::BoundViolation { ratio, bound, detail } => write!(
                f,
                "norm ratio {ratio:.6} exceeds proven bound {bound:.6} ({detail})"
            ),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
