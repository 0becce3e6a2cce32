use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// sigma, temperature or eps not strictly positive (or not finite).
    InvalidParams {
        name: &'static str,
        value: f64,
    },
    /// Breakpoints not strictly increasing, or the wrong count for the cells.
    InvalidBreakpoints,
    /// Cells of a piecewise field disagree on eps.
    MixedEps,
    NonPositiveStep(f64),
    /// t_end - t is not a whole number of steps.
    MisalignedEnd {
        span: f64,
        dt: f64,
    },
    EndBeforeStart {
        t: f64,
        t_end: f64,
    },
    ZeroCollisions,
    LengthMismatch {
        a: usize,
        b: usize,
    },
    Empty,
    TooFewPoints(usize),
    NonPositiveValue(f64),
    InvalidHistogram,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams { name, value } => {
                write!(f, "{name} must be positive and finite, got {value}")
            }
            Error::InvalidBreakpoints => {
                write!(f, "breakpoints must be strictly increasing, one more than cells")
            }
            Error::MixedEps => write!(f, "all cells of a field must share eps"),
            Error::NonPositiveStep(dt) => write!(f, "step size must be positive, got {dt}"),
            Error::MisalignedEnd { span, dt } => {
                write!(f, "span {span} is not a whole number of steps of {dt}")
            }
            Error::EndBeforeStart { t, t_end } => write!(f, "t_end {t_end} is before t {t}"),
            Error::ZeroCollisions => write!(f, "flight-time density needs at least one collision"),
            Error::LengthMismatch { a, b } => write!(f, "sample counts differ: {a} vs {b}"),
            Error::Empty => write!(f, "empty sample set"),
            Error::TooFewPoints(n) => write!(f, "need at least 3 points, got {n}"),
            Error::NonPositiveValue(x) => write!(f, "log fit needs positive values, got {x}"),
            Error::InvalidHistogram => write!(f, "histogram needs bins > 0 and lo < hi"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
