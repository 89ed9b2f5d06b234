use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A spin vector whose squared norm is not 1.
    SpinNotNormalized { norm_sqr: f64 },
    /// A field direction that is not a unit vector.
    DirectionNotUnit { norm: f64 },
    /// Amplitude would leave the finite array of an unbounded walk.
    AmplitudeAtEdge { site: i64 },
    /// The lattice is too small for the requested walk.
    LatticeTooSmall { half_width: usize, required: usize },
    /// A parameter that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// Probability mass lies beyond what a single fold can map back.
    FoldOutOfRange { site: i64 },
    /// A Fisher information of zero or less has no Cramér-Rao bound.
    NotEstimable { fisher_information: f64 },
    /// A grid description that cannot be used.
    InvalidGrid(&'static str),
    /// Two arrays that must share a shape do not.
    ShapeMismatch { expected: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SpinNotNormalized { norm_sqr } => {
                write!(f, "spin vector is not normalized (|a0|^2 + |a1|^2 = {norm_sqr})")
            }
            Error::DirectionNotUnit { norm } => {
                write!(f, "field direction is not a unit vector (norm = {norm})")
            }
            Error::AmplitudeAtEdge { site } => write!(
                f,
                "amplitude at site {site} would leave the unbounded lattice; allocate a half width of at least the step count"
            ),
            Error::LatticeTooSmall { half_width, required } => {
                write!(f, "lattice half width {half_width} is below the required {required}")
            }
            Error::NonFinite(what) => write!(f, "{what} must be finite"),
            Error::FoldOutOfRange { site } => {
                write!(f, "probability at site {site} is beyond the reach of a single fold")
            }
            Error::NotEstimable { fisher_information } => write!(
                f,
                "Fisher information {fisher_information} is not positive; the point cannot be estimated"
            ),
            Error::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
            Error::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {expected} entries, found {found}")
            }
        }
    }
}

impl core::error::Error for Error {}
