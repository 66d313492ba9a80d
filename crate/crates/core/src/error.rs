use thiserror::Error;

/// Errors raised by the geometry and operator routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed body description: {0}")]
    Parse(String),

    #[error("need at least 3 non-collinear points, got {0} hull vertices")]
    TooFewPoints(usize),

    /// Zero-area input. `A(K) = C(ex(K))` for a segment, so it is trivially rigid.
    #[error("degenerate body (segment or point): empty interior")]
    EmptyInterior,

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("origin is not strictly inside the body (slack {slack:e})")]
    NotCentered { slack: f64 },

    #[error("invalid interval [{lo}, {hi}]: {reason}")]
    InvalidInterval { lo: f64, hi: f64, reason: &'static str },

    #[error("epsilon {0} must lie in (0, π/2)")]
    InvalidEpsilon(f64),

    #[error("angle partition did not converge on [{lo}, {hi}] within depth {depth}")]
    PartitionDepth { lo: f64, hi: f64, depth: usize },

    #[error("degenerate chord: p({lo}) and p({hi}) coincide")]
    DegenerateChord { lo: f64, hi: f64 },

    /// `c <= tol`: the caller must shrink `I` towards its extreme points and retry.
    #[error("J meets supporting configuration of I (c = {c:e}); shrink I to its extreme-point hull and retry")]
    SupportContact { c: f64 },

    #[error("shrink of I did not separate it from J after n = {n}")]
    ShrinkExhausted { n: u64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("moment residual {0:e} exceeds tolerance")]
    MomentResidual(f64),

    #[error("target is outside the convex hull of the sites")]
    Infeasible,

    #[error("spectrum check failed: eigenvalue {re}+{im}i is {dist:e} away from ex(K)")]
    Spectrum { re: f64, im: f64, dist: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
