use alloc::string::String;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("could not parse number `{0}`")]
    Parse(String),

    #[error("moment of order {requested} requested from a model with horizon {horizon}")]
    HorizonExceeded { requested: usize, horizon: usize },

    #[error("model `{0}` only declares a finite moment prefix; its generating function tail is unknown")]
    TruncatedSeries(String),

    #[error("partition enumeration is capped at order {cap}, got {k}")]
    EnumerationCap { k: usize, cap: usize },

    #[error("order {0} is odd but the model only has non-zero even moments")]
    OddOrder(usize),

    #[error("weight moment V_{0} is negative; the log-space path needs non-negative moments")]
    NegativeWeightMoment(usize),

    #[error("alternating sum for the centered moment of order {k} lost {digits:.1} digits")]
    Cancellation { k: usize, digits: f64 },

    #[error("saddle equation u H'(u) = {target} has no solution below the radius of convergence")]
    SaddleUnreachable { target: f64 },

    #[error("saddle solver stopped with residual {residual:e} above tolerance {tolerance:e}")]
    SaddleNotConverged { residual: f64, tolerance: f64 },

    #[error("tilt parameter u = {u} lies outside (0, {radius})")]
    OutsideRadius { u: f64, radius: f64 },

    #[error("auxiliary distribution reached only mass {mass} after {terms} terms")]
    MassNotReached { mass: f64, terms: usize },

    #[error("x = {x} is outside the small-intensity regime for order {k}")]
    WrongRegime { k: usize, x: f64 },

    #[error("the first two weight moments both vanish")]
    DegenerateMoments,
}

impl Error {
    /// Name of the module the error originates from, used in diagnostics.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } | Error::Parse(_) => "input",
            Error::HorizonExceeded { .. } => "weights",
            Error::EnumerationCap { .. } | Error::NegativeWeightMoment(_) | Error::Cancellation { .. } => "moments",
            Error::TruncatedSeries(_)
            | Error::OddOrder(_)
            | Error::SaddleUnreachable { .. }
            | Error::SaddleNotConverged { .. }
            | Error::WrongRegime { .. }
            | Error::DegenerateMoments => "asymptotics",
            Error::OutsideRadius { .. } | Error::MassNotReached { .. } => "auxdist",
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
