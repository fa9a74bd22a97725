use core::fmt;

/// Failure of a computation in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its invariant (non-positive radius, negative
    /// damping, empty interval, ...).
    InvalidParameter { name: &'static str, value: f64 },
    /// A Drude function was evaluated exactly on one of its poles.
    Pole { what: &'static str },
    /// `12 ω_p² − 9 γ_s² ≤ 0`: the polarizability has no resonance in the
    /// first quadrant.
    Overdamped { omega_plasma: f64, gamma: f64 },
    /// The small-distance asymptote diverges at `ω_q = ω_p √(2/3)`.
    ResonantRatio { omega_wall: f64 },
    /// A reflection-coefficient denominator vanished. On the physical branch
    /// this cannot happen, so it signals a branch-selection problem.
    DegenerateDenominator { which: &'static str },
    /// An operation needs the undamped (plasma-model) wall.
    RequiresPlasmaWall { gamma_w: f64 },
    /// Adaptive quadrature ran out of subdivisions.
    Integration { estimate: f64, error: f64, evaluations: usize },
    /// A Matsubara-type series did not meet its tail tolerance.
    Series { partial: f64, terms: usize },
}

/// Coarse classification, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Domain,
    NonConvergence,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter { .. } => ErrorKind::InvalidInput,
            Error::Pole { .. }
            | Error::Overdamped { .. }
            | Error::ResonantRatio { .. }
            | Error::DegenerateDenominator { .. }
            | Error::RequiresPlasmaWall { .. } => ErrorKind::Domain,
            Error::Integration { .. } | Error::Series { .. } => ErrorKind::NonConvergence,
        }
    }

    pub(crate) fn invalid(name: &'static str, value: f64) -> Self {
        Error::InvalidParameter { name, value }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
            Error::Pole { what } => write!(f, "evaluated at a pole of {what}"),
            Error::Overdamped { omega_plasma, gamma } => write!(
                f,
                "overdamped sphere: 12*omega_p^2 - 9*gamma^2 <= 0 (omega_p = {omega_plasma}, gamma = {gamma})"
            ),
            Error::ResonantRatio { omega_wall } => {
                write!(f, "small-distance asymptote diverges at omega_q = omega_p*sqrt(2/3) (omega_q = {omega_wall})")
            }
            Error::DegenerateDenominator { which } => {
                write!(f, "reflection coefficient `{which}` has a vanishing denominator")
            }
            Error::RequiresPlasmaWall { gamma_w } => {
                write!(f, "operation requires an undamped wall, got gamma_w = {gamma_w}")
            }
            Error::Integration { estimate, error, evaluations } => write!(
                f,
                "quadrature did not converge after {evaluations} evaluations (estimate {estimate:e}, error {error:e})"
            ),
            Error::Series { partial, terms } => {
                write!(f, "series did not converge after {terms} terms (partial sum {partial:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
