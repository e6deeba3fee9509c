use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while loading a scenario or evaluating statistics.
///
/// Variants fall into two families that the command-line front end maps onto
/// distinct exit codes: configuration problems (bad or unreadable input
/// documents) and domain problems (valid documents asking for something the
/// model cannot evaluate).
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o failure on `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("missing required field `{0}`")]
    MissingField(String),

    #[error("`{field}` must be strictly positive (got {value})")]
    NonPositive { field: String, value: f64 },

    #[error("`{field}` is out of range: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("alpha_out_of_range: path-loss exponent {alpha} outside ({min}, {max}]")]
    AlphaOutOfRange { alpha: f64, min: f64, max: f64 },

    #[error("no_ground_intersection: boresight at {incidence_deg} deg misses the Earth")]
    NoGroundIntersection { incidence_deg: f64 },

    #[error("{what} = {value} outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("mgf_overflow: exponent {exponent:.3e} exceeds cap {cap} at t = {t:.3e}")]
    MgfOverflow { t: f64, exponent: f64, cap: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error:.3e})")]
    QuadratureNonConvergence { subdivisions: usize, error: f64 },

    #[error("insufficient_trials_for_variance: {trials} trial(s), need at least 2")]
    InsufficientTrials { trials: u64 },

    #[error("empty_grid: {0} is empty")]
    EmptyGrid(&'static str),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io_error",
            Error::Malformed(_) => "malformed_document",
            Error::MissingField(_) => "missing_field",
            Error::NonPositive { .. } => "non_positive",
            Error::InvalidField { .. } => "invalid_field",
            Error::AlphaOutOfRange { .. } => "alpha_out_of_range",
            Error::NoGroundIntersection { .. } => "no_ground_intersection",
            Error::OutOfRange { .. } => "out_of_range",
            Error::OrderOutOfRange { .. } => "order_out_of_range",
            Error::MgfOverflow { .. } => "mgf_overflow",
            Error::QuadratureNonConvergence { .. } => "quadrature_non_convergence",
            Error::InsufficientTrials { .. } => "insufficient_trials_for_variance",
            Error::EmptyGrid(_) => "empty_grid",
        }
    }

    /// True for errors caused by the input documents themselves rather than
    /// by the model's domain of validity.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::Malformed(_)
                | Error::MissingField(_)
                | Error::NonPositive { .. }
                | Error::InvalidField { .. }
                | Error::EmptyGrid(_)
        )
    }
}
