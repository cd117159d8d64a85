//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A distribution was built from an empty atom list.
    #[error("distribution has no atoms")]
    EmptySupport,
    /// An atom had zero, negative or non-finite mass.
    #[error("atom at {location} has non-positive mass {mass}")]
    NonPositiveMass {
        /// Atom location.
        location: f64,
        /// Offending mass.
        mass: f64,
    },
    /// Masses do not sum to one.
    #[error("masses sum to {sum}, expected 1")]
    MassNotNormalized {
        /// Total mass found.
        sum: f64,
    },
    /// A location, knot or entry was NaN or infinite.
    #[error("non-finite value {0}")]
    NonFinite(f64),
    /// Quantile level outside the open unit interval.
    #[error("quantile level {0} outside (0, 1)")]
    AlphaOutOfRange(f64),
    /// Knot list is empty or its x-coordinates are not strictly increasing.
    #[error("invalid knots: {0}")]
    InvalidKnots(&'static str),
    /// Jump locations not strictly increasing.
    #[error("invalid jumps: {0}")]
    InvalidJumps(&'static str),
    /// A function claimed to be increasing is not.
    #[error("function is not monotone in the declared direction (at x = {at})")]
    NotIncreasing {
        /// First knot where monotonicity breaks.
        at: f64,
    },
    /// A distortion does not satisfy the boundary conditions on [0, 1].
    #[error("bad boundary: {0}")]
    BadBoundary(&'static str),
    /// Integral diverges because the integrator keeps varying in a tail where the integrand is nonzero.
    #[error("integral is not finite")]
    NonFiniteIntegral,
    /// The integrand evaluated to NaN at a required point.
    #[error("integrand undefined at x = {0}")]
    EvaluationGap(f64),
    /// Integration by parts needs a left-continuous U and right-continuous V.
    #[error("continuity mismatch: {0}")]
    ContinuityMismatch(&'static str),
    /// The probe (x, alpha) does not lie on the completed graph of F.
    #[error("probe (x = {x}, alpha = {alpha}) is not compatible with the cdf")]
    NotACompatiblePair {
        /// Probe location.
        x: f64,
        /// Probe level.
        alpha: f64,
    },
    /// The generator is not monotone in the direction its kind requires.
    #[error("generator has the wrong monotonicity for the requested kind")]
    WrongMonotonicity,
    /// Generator grows without bound in a tail.
    #[error("generator is unbounded")]
    UnboundedGenerator,
    /// Relative slopes are undefined because the base is flat where the function varies.
    #[error("base function is flat on a piece where the function varies (near x = {at})")]
    DegenerateBase {
        /// Left end of the offending piece.
        at: f64,
    },
    /// Extreme-ray cut outside the domain.
    #[error("cut {0} out of range")]
    CutOutOfRange(f64),
    /// Unknown ordering name.
    #[error("unknown ordering name")]
    UnknownName,
    /// Vectors of different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch {
        /// Length of the first vector.
        left: usize,
        /// Length of the second vector.
        right: usize,
    },
    /// Log-majorization requested on a vector with a non-positive entry.
    #[error("log-majorization needs positive entries, found {0}")]
    NonPositiveEntryForLog(f64),
    /// The cdf-side and quantile-side forms of a functional disagree.
    #[error("internal identity violated: {lhs} vs {rhs}")]
    InternalIdentityViolation {
        /// cdf-side value.
        lhs: f64,
        /// quantile-side value.
        rhs: f64,
    },
    /// S-Gini parameter must exceed one.
    #[error("rho = {0} must be > 1")]
    RhoOutOfRange(f64),
    /// Grid size too small for a sampled function.
    #[error("grid size {0} too small")]
    GridTooSmall(usize),
    /// The derived Gini index needs a nonnegative support with positive mean.
    #[error("Gini index undefined: mean {mean}, smallest atom {min}")]
    GiniUndefined {
        /// Mean of the distribution.
        mean: f64,
        /// Smallest atom location.
        min: f64,
    },
    /// Unknown theorem identifier.
    #[error("unknown theorem identifier")]
    UnknownTheorem,
    /// Exhaustive scan would enumerate too many vectors.
    #[error("exhaustive scan too large: {vectors} vectors")]
    ScanTooLarge {
        /// Number of vectors |grid|^n.
        vectors: u64,
    },
    /// Instance specification has a zero count or an invalid range.
    #[error("invalid instance specification: {0}")]
    InvalidSpec(&'static str),
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
