use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point or argument lies outside the coordinate domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Polar coordinates are singular at the requested point (e.g. `r = 0`).
    #[error("degenerate coordinates: {0}")]
    DegenerateCoordinate(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A bound state that does not exist for the given negative curvature.
    #[error(
        "level (N_r={nr}, m={m}) is not admissible at kappa={kappa}: \
         requires n+1 < {bound} with n = 2 N_r + |m|"
    )]
    NotAdmissible { kappa: f64, nr: u32, m: i32, bound: f64 },

    /// Gauss hypergeometric parameters do not exist in the flat limit.
    #[error("hypergeometric parameters are undefined at kappa = 0; use the Kummer branch")]
    ConfluentBranch,

    #[error("no convergence: {0}")]
    Convergence(String),

    /// An integration step changed the energy by more than the allowed fraction.
    #[error("step rejected at t={t}: relative energy drift {drift:e} per step; try dt <= {suggested_dt:e}")]
    StepRejected { t: f64, drift: f64, suggested_dt: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// `true` for failures caused by the input (domain, parameters, admissibility).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::DegenerateCoordinate(_)
                | Error::Parameter(_)
                | Error::NotAdmissible { .. }
                | Error::ConfluentBranch
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
