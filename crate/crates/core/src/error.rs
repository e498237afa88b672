use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// The precondition a (body, hyperplane) pair failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// Paraboloid cut with `ζ ≤ 0`: the plane misses the solid.
    PlaneBelowParaboloid,
    /// `q = 1 − Σ p_i² ≤ 0`: the plane is at least as steep as the asymptotic cone.
    SlopeTooSteep,
    /// Hyperboloid cut with `d < √q`: the plane misses the upper sheet.
    PlaneBelowVertex,
    /// Cone or one-sheeted cut with `d < 0`.
    NegativeOffset,
    /// One-sheeted cut whose plane does not keep the whole truncation base below it.
    BaseNotSubmerged,
    /// Ellipsoid cut with distance from the centre `≥ 1`.
    PlaneMissesEllipsoid,
}

impl Infeasibility {
    pub fn condition(self) -> &'static str {
        match self {
            Infeasibility::PlaneBelowParaboloid => "zeta > 0",
            Infeasibility::SlopeTooSteep => "q > 0",
            Infeasibility::PlaneBelowVertex => "d >= sqrt(q)",
            Infeasibility::NegativeOffset => "d >= 0",
            Infeasibility::BaseNotSubmerged => "1 + eps*d >= sqrt(1 + eps^2) * sqrt(1 - q)",
            Infeasibility::PlaneMissesEllipsoid => "zeta < 1",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A structural input was malformed (wrong length, non-positive semiaxis, ...).
    InvalidInput(&'static str),
    /// A scalar argument was outside the domain of the operation.
    Domain {
        what: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
    },
    /// The plane does not cut a compact set of the required shape.
    Infeasible(Infeasibility),
    /// A requested volume is not attainable by the family.
    VolumeOutOfRange { value: f64, lower: f64, upper: f64 },
    /// Rejection sampling ran out of attempts.
    Sampling { index: u64, attempts: u32 },
    /// A Monte Carlo bounding box was too loose to be useful.
    HitRate { rate: f64, minimum: f64 },
    /// An iterative routine stopped before reaching its tolerance.
    Accuracy { achieved: f64, requested: f64 },
    /// A tangent point of the candidate surface lies outside the body.
    SurfaceOutsideBody { index: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::Domain {
                what,
                value,
                lower,
                upper,
            } => write!(f, "{what} = {value} outside [{lower}, {upper}]"),
            Error::Infeasible(why) => {
                write!(f, "infeasible cut: condition `{}` violated", why.condition())
            }
            Error::VolumeOutOfRange {
                value,
                lower,
                upper,
            } => write!(f, "volume {value} not attainable, expected ({lower}, {upper}]"),
            Error::Sampling { index, attempts } => write!(
                f,
                "no admissible sample for index {index} after {attempts} attempts"
            ),
            Error::HitRate { rate, minimum } => {
                write!(f, "hit rate {rate:e} below minimum {minimum:e}")
            }
            Error::Accuracy {
                achieved,
                requested,
            } => write!(f, "accuracy {achieved:e} not within requested {requested:e}"),
            Error::SurfaceOutsideBody { index } => {
                write!(f, "tangent point of sample {index} lies outside the body")
            }
        }
    }
}

impl Error {
    /// Whether the error stems from the caller's parameters rather than a
    /// numerical breakdown.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Domain { .. }
                | Error::Infeasible(_)
                | Error::VolumeOutOfRange { .. }
                | Error::SurfaceOutsideBody { .. }
        )
    }
}

impl core::error::Error for Error {}
