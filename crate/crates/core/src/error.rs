use alloc::string::String;

/// Errors raised by the core computations.
///
/// Variants fall in two groups: validation failures (bad parameters, wrong
/// dimensions, size limits) and refutations, where an identity that must hold
/// exactly was found to fail. The CLI maps the second group to its own exit
/// status, so [`Error::is_refutation`] is the single place that decides it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid multigraph: {0}")]
    InvalidGraph(String),

    #[error("({a},{b},{c}) is not a finite root system: 1/a + 1/b + 1/c <= 1")]
    NotFinite { a: u32, b: u32, c: u32 },

    #[error("({a},{b},{c}) is a finite root system but not minuscule")]
    NotMinuscule { a: u32, b: u32, c: u32 },

    #[error("({a},{b},{c}) violates the standing assumptions: {reason}")]
    OutsideAssumptions { a: u32, b: u32, c: u32, reason: &'static str },

    #[error("reflection requires a root with self-intersection -2, got {0}")]
    InvalidRoot(i64),

    #[error("Weyl orbit exceeded {limit} classes")]
    OrbitExplosion { limit: usize },

    #[error("distinct divisors {i} and {j} have negative product {product}")]
    ModelViolation { i: usize, j: usize, product: i64 },

    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimit { what: &'static str, size: usize, limit: usize },

    #[error("unsupported family for {0}")]
    UnsupportedFamily(&'static str),

    #[error("not strongly regular at ({i},{j}): expected {expected}, found {actual}")]
    NotStronglyRegular { i: usize, j: usize, expected: String, actual: String },

    #[error("inconsistent spectrum: {0}")]
    InconsistentSpectrum(String),

    #[error("spectrum refuted: {0}")]
    SpectrumRefuted(String),

    #[error("spectrum not verified against this graph: {0}")]
    UnverifiedSpectrum(String),

    #[error("internal inconsistency in {what}: {left} != {right}")]
    Inconsistency { what: &'static str, left: String, right: String },

    #[error("duality gap: primal {primal} != dual {dual}")]
    DualityGap { primal: String, dual: String },

    #[error("lower bound {value} is within the guard distance of an integer")]
    NearInteger { value: String },

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("numeric factorization residual {residual:e} exceeds {bound:e}")]
    NumericFailure { residual: f64, bound: f64 },

    #[error("lattice and subset models disagree: {0}")]
    ModelDisagreement(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True when the error refutes an exact identity rather than rejecting input.
    pub fn is_refutation(&self) -> bool {
        matches!(
            self,
            Error::ModelViolation { .. }
                | Error::NotStronglyRegular { .. }
                | Error::InconsistentSpectrum(_)
                | Error::SpectrumRefuted(_)
                | Error::UnverifiedSpectrum(_)
                | Error::Inconsistency { .. }
                | Error::DualityGap { .. }
                | Error::NumericFailure { .. }
                | Error::ModelDisagreement(_)
                | Error::NearInteger { .. }
        )
    }
}
