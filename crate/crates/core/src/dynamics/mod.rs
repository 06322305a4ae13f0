//! Classical mechanics on the curved surface in projective coordinates.
//!
//! With mass `m` and coupling `alpha` the Lagrangian is
//!
//! ```text
//! L = m/2 [ v_r^2 / (1 + kappa r^2)^2 + r^2 v_phi^2 / (1 + kappa r^2) ] - alpha^2 r^2 / 2
//! ```
//!
//! and its Legendre transform
//!
//! ```text
//! H = 1/(2m) [ (1 + kappa r^2)^2 p_r^2 + (1 + kappa r^2) p_phi^2 / r^2 ] + alpha^2 r^2 / 2.
//! ```
//!
//! The potential enters `L` with a minus sign and `H` with a plus sign, so the
//! two are Legendre-dual.

mod poisson;
mod trajectory;

pub use poisson::{poisson_bracket, BracketValue, FnObservable, Observable, Product, Quantity};
pub use trajectory::{integrate_trajectory, Invariants, Termination, Trajectory, TrajectorySample};

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Curvature};

/// Canonical point `(r, phi, p_r, p_phi)` of the projective polar chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub r: f64,
    pub phi: f64,
    pub p_r: f64,
    pub p_phi: f64,
}

impl PhaseState {
    pub fn new(r: f64, phi: f64, p_r: f64, p_phi: f64) -> Self {
        PhaseState { r, phi: normalize_angle(phi), p_r, p_phi }
    }

    /// Same state written with `r >= 0` (a negative radius is the antipodal
    /// point with reversed radial momentum).
    pub fn canonicalized(self) -> Self {
        if self.r < 0.0 {
            PhaseState::new(-self.r, self.phi + std::f64::consts::PI, -self.p_r, self.p_phi)
        } else {
            PhaseState::new(self.r, self.phi, self.p_r, self.p_phi)
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.r, self.phi, self.p_r, self.p_phi]
    }

    /// Raw constructor that keeps `phi` as given (used for finite differences).
    pub(crate) fn from_array(a: [f64; 4]) -> Self {
        PhaseState { r: a[0], phi: a[1], p_r: a[2], p_phi: a[3] }
    }

    /// Cotangent lift of the polar-to-Cartesian coordinate change.
    pub fn to_cartesian(self) -> Result<CartesianPhaseState> {
        if self.r == 0.0 && self.p_phi != 0.0 {
            return Err(Error::DegenerateCoordinate("r = 0 with nonzero p_phi".into()));
        }
        let (s, c) = self.phi.sin_cos();
        let ang = if self.r == 0.0 { 0.0 } else { self.p_phi / self.r };
        Ok(CartesianPhaseState {
            x: self.r * c,
            y: self.r * s,
            p_x: c * self.p_r - s * ang,
            p_y: s * self.p_r + c * ang,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPhaseState {
    pub x: f64,
    pub y: f64,
    pub p_x: f64,
    pub p_y: f64,
}

impl CartesianPhaseState {
    pub fn to_polar(self) -> PhaseState {
        let r = self.x.hypot(self.y);
        let phi = self.y.atan2(self.x);
        let (s, c) = phi.sin_cos();
        PhaseState::new(r, phi, c * self.p_x + s * self.p_y, self.x * self.p_y - self.y * self.p_x)
    }
}

/// Tangent vector `(v_r, v_phi)` at `(r, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityState {
    pub r: f64,
    pub phi: f64,
    pub v_r: f64,
    pub v_phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianVelocityState {
    pub x: f64,
    pub y: f64,
    pub v_x: f64,
    pub v_y: f64,
}

impl VelocityState {
    pub fn to_cartesian(self) -> CartesianVelocityState {
        let (s, c) = self.phi.sin_cos();
        CartesianVelocityState {
            x: self.r * c,
            y: self.r * s,
            v_x: c * self.v_r - s * self.r * self.v_phi,
            v_y: s * self.v_r + c * self.r * self.v_phi,
        }
    }
}

/// Curvature, potential coupling `alpha` and mass of the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsParams {
    pub kappa: Curvature,
    pub alpha: f64,
    pub mass: f64,
}

impl DynamicsParams {
    pub fn new(kappa: Curvature, alpha: f64) -> Result<Self> {
        Self::with_mass(kappa, alpha, 1.0)
    }

    pub fn with_mass(kappa: Curvature, alpha: f64, mass: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Parameter(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Parameter(format!("mass must be positive, got {mass}")));
        }
        Ok(DynamicsParams { kappa, alpha, mass })
    }

    pub(crate) fn potential(&self, r: f64) -> f64 {
        0.5 * self.alpha * self.alpha * r * r
    }
}

/// Conserved momenta of the three Killing symmetries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoetherMomenta {
    pub p1: f64,
    pub p2: f64,
    pub j: f64,
}

impl NoetherMomenta {
    /// `P1^2 + P2^2 + kappa J^2`.
    pub fn casimir(&self, kappa: Curvature) -> f64 {
        self.p1 * self.p1 + self.p2 * self.p2 + kappa.value() * self.j * self.j
    }
}

pub fn lagrangian_polar(params: &DynamicsParams, state: &VelocityState) -> Result<f64> {
    let lift = params.kappa.check_radius(state.r)?;
    let kinetic = state.v_r * state.v_r / (lift * lift)
        + state.r * state.r * state.v_phi * state.v_phi / lift;
    Ok(0.5 * params.mass * kinetic - params.potential(state.r))
}

pub fn lagrangian_cartesian(params: &DynamicsParams, state: &CartesianVelocityState) -> Result<f64> {
    let r2 = state.x * state.x + state.y * state.y;
    let lift = params.kappa.check_radius(r2.sqrt())?;
    let ang = state.x * state.v_y - state.y * state.v_x;
    let quad = state.v_x * state.v_x + state.v_y * state.v_y + params.kappa.value() * ang * ang;
    Ok(0.5 * params.mass * quad / (lift * lift) - 0.5 * params.alpha * params.alpha * r2)
}

/// Velocities to canonical momenta in the polar chart.
pub fn legendre_polar(params: &DynamicsParams, state: &VelocityState) -> Result<PhaseState> {
    let lift = params.kappa.check_radius(state.r)?;
    if state.r == 0.0 && state.v_phi != 0.0 {
        return Err(Error::DegenerateCoordinate("angular velocity at r = 0".into()));
    }
    let m = params.mass;
    Ok(PhaseState::new(
        state.r,
        state.phi,
        m * state.v_r / (lift * lift),
        m * state.r * state.r * state.v_phi / lift,
    ))
}

/// Inverse of [`legendre_polar`].
pub fn inverse_legendre_polar(params: &DynamicsParams, state: &PhaseState) -> Result<VelocityState> {
    let lift = params.kappa.check_radius(state.r)?;
    if state.r == 0.0 && state.p_phi != 0.0 {
        return Err(Error::DegenerateCoordinate("angular momentum at r = 0".into()));
    }
    let m = params.mass;
    let v_phi = if state.r == 0.0 { 0.0 } else { lift * state.p_phi / (m * state.r * state.r) };
    Ok(VelocityState { r: state.r, phi: state.phi, v_r: lift * lift * state.p_r / m, v_phi })
}

/// Velocities to canonical momenta in the Cartesian chart:
/// `p_x = m [v_x - kappa y (x v_y - y v_x)] / (1 + kappa r^2)^2` and
/// `p_y = m [v_y + kappa x (x v_y - y v_x)] / (1 + kappa r^2)^2`.
pub fn legendre_cartesian(
    params: &DynamicsParams,
    state: &CartesianVelocityState,
) -> Result<CartesianPhaseState> {
    let r2 = state.x * state.x + state.y * state.y;
    let lift = params.kappa.check_radius(r2.sqrt())?;
    let k = params.kappa.value();
    let ang = state.x * state.v_y - state.y * state.v_x;
    let scale = params.mass / (lift * lift);
    Ok(CartesianPhaseState {
        x: state.x,
        y: state.y,
        p_x: scale * (state.v_x - k * state.y * ang),
        p_y: scale * (state.v_y + k * state.x * ang),
    })
}

/// Inverse of [`legendre_cartesian`].
pub fn inverse_legendre_cartesian(
    params: &DynamicsParams,
    state: &CartesianPhaseState,
) -> Result<CartesianVelocityState> {
    let (x, y) = (state.x, state.y);
    let lift = params.kappa.check_radius(x.hypot(y))?;
    let k = params.kappa.value();
    let scale = lift / params.mass;
    Ok(CartesianVelocityState {
        x,
        y,
        v_x: scale * ((1.0 + k * x * x) * state.p_x + k * x * y * state.p_y),
        v_y: scale * ((1.0 + k * y * y) * state.p_y + k * x * y * state.p_x),
    })
}

pub fn hamiltonian_polar(params: &DynamicsParams, state: &PhaseState) -> Result<f64> {
    let lift = params.kappa.check_radius(state.r)?;
    let angular = if state.p_phi == 0.0 {
        0.0
    } else if state.r == 0.0 {
        return Err(Error::DegenerateCoordinate("angular momentum at r = 0".into()));
    } else {
        lift * state.p_phi * state.p_phi / (state.r * state.r)
    };
    let kinetic = lift * lift * state.p_r * state.p_r + angular;
    Ok(kinetic / (2.0 * params.mass) + params.potential(state.r))
}

pub fn hamiltonian_cartesian(params: &DynamicsParams, state: &CartesianPhaseState) -> Result<f64> {
    let r2 = state.x * state.x + state.y * state.y;
    let lift = params.kappa.check_radius(r2.sqrt())?;
    let radial = state.x * state.p_x + state.y * state.p_y;
    let quad = state.p_x * state.p_x + state.p_y * state.p_y + params.kappa.value() * radial * radial;
    Ok(lift * quad / (2.0 * params.mass) + 0.5 * params.alpha * params.alpha * r2)
}

/// `P1 = (1 + kappa r^2) cos(phi) p_r - sin(phi) p_phi / r`,
/// `P2 = (1 + kappa r^2) sin(phi) p_r + cos(phi) p_phi / r`, `J = p_phi`.
pub fn noether_momenta(kappa: Curvature, state: &PhaseState) -> Result<NoetherMomenta> {
    let lift = kappa.check_radius(state.r)?;
    if state.r == 0.0 {
        return Err(Error::DegenerateCoordinate("Noether momenta need r > 0".into()));
    }
    let (s, c) = state.phi.sin_cos();
    let ang = state.p_phi / state.r;
    Ok(NoetherMomenta {
        p1: lift * c * state.p_r - s * ang,
        p2: lift * s * state.p_r + c * ang,
        j: state.p_phi,
    })
}

/// Energy written through the Noether momenta:
/// `H = (P1^2 + P2^2 + kappa J^2) / 2m + alpha^2 r^2 / 2`.
pub fn hamiltonian_noether(params: &DynamicsParams, momenta: &NoetherMomenta, r: f64) -> Result<f64> {
    if !(params.mass > 0.0) {
        return Err(Error::Parameter(format!("mass must be positive, got {}", params.mass)));
    }
    Ok(momenta.casimir(params.kappa) / (2.0 * params.mass) + params.potential(r))
}
