use crate::error::{Error, Result};

use super::{hamiltonian_polar, noether_momenta, DynamicsParams, PhaseState};

/// Maximum relative change of the energy allowed in a single step.
const MAX_STEP_DRIFT: f64 = 1e-3;

/// Energy and Noether momenta at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub h: f64,
    pub j: f64,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: PhaseState,
    pub invariants: Invariants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// Stopped because the next steps would cross the hyperbolic boundary.
    DomainExit,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
}

impl Trajectory {
    /// Largest absolute deviation of each invariant from its initial value.
    pub fn max_drift(&self) -> Invariants {
        let first = self.samples[0].invariants;
        self.samples.iter().fold(
            Invariants { h: 0.0, j: 0.0, p1: 0.0, p2: 0.0 },
            |acc, s| Invariants {
                h: acc.h.max((s.invariants.h - first.h).abs()),
                j: acc.j.max((s.invariants.j - first.j).abs()),
                p1: acc.p1.max((s.invariants.p1 - first.p1).abs()),
                p2: acc.p2.max((s.invariants.p2 - first.p2).abs()),
            },
        )
    }

    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }
}

fn invariants(params: &DynamicsParams, s: &PhaseState) -> Result<Invariants> {
    let n = noether_momenta(params.kappa, s)?;
    Ok(Invariants { h: hamiltonian_polar(params, s)?, j: n.j, p1: n.p1, p2: n.p2 })
}

/// Right-hand side of Hamilton's equations in `(r, phi, p_r, p_phi)`.
fn vector_field(params: &DynamicsParams, y: [f64; 4]) -> [f64; 4] {
    let [r, _, p_r, p_phi] = y;
    let k = params.kappa.value();
    let m = params.mass;
    let lift = 1.0 + k * r * r;
    let r2 = r * r;
    [
        lift * lift * p_r / m,
        lift * p_phi / (m * r2),
        -((4.0 * k * r * lift * p_r * p_r - 2.0 * p_phi * p_phi / (r2 * r)) / (2.0 * m)
            + params.alpha * params.alpha * r),
        0.0,
    ]
}

fn rk4_step(params: &DynamicsParams, y: [f64; 4], dt: f64) -> [f64; 4] {
    let add = |a: [f64; 4], b: [f64; 4], s: f64| -> [f64; 4] { std::array::from_fn(|i| a[i] + s * b[i]) };
    let k1 = vector_field(params, y);
    let k2 = vector_field(params, add(y, k1, 0.5 * dt));
    let k3 = vector_field(params, add(y, k2, 0.5 * dt));
    let k4 = vector_field(params, add(y, k3, dt));
    std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates Hamilton's equations with the classical fixed-step fourth-order
/// Runge-Kutta scheme, logging `H`, `J`, `P1`, `P2` after every step.
///
/// On the hyperbolic disk the integration stops early (with
/// [`Termination::DomainExit`]) once the boundary is within ten steps at the
/// current radial speed, or once `1 + kappa r^2` drops below `1e-8` (the
/// boundary sits at infinite geodesic distance, so escaping orbits approach
/// it only exponentially).
pub fn integrate_trajectory(
    params: &DynamicsParams,
    state0: PhaseState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter(format!("time step must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Parameter(format!("end time must be >= 0, got {t_end}")));
    }
    let first = invariants(params, &state0)?;
    let steps = (t_end / dt).round() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample { t: 0.0, state: state0, invariants: first });

    let boundary = params.kappa.boundary_radius();
    let mut y = state0.to_array();
    let mut h_prev = first.h;
    for step in 1..=steps {
        let t = step as f64 * dt;
        y = rk4_step(params, y, dt);
        let state = PhaseState::from_array(y).canonicalized();
        y = [state.r, y[1], state.p_r, state.p_phi];

        let inv = match invariants(params, &state) {
            Ok(inv) if inv.h.is_finite() => inv,
            _ => {
                return Err(Error::StepRejected { t, drift: f64::INFINITY, suggested_dt: 0.5 * dt });
            }
        };
        let drift = (inv.h - h_prev).abs();
        let allowed = MAX_STEP_DRIFT * h_prev.abs() + 1e-14;
        if drift > allowed {
            let suggested_dt = 0.5 * dt * (allowed / drift).powf(0.2);
            return Err(Error::StepRejected { t, drift: drift / h_prev.abs().max(1e-300), suggested_dt });
        }
        h_prev = inv.h;
        samples.push(TrajectorySample { t, state, invariants: inv });

        if let Some(rb) = boundary {
            let speed = vector_field(params, y)[0].abs();
            if rb - state.r <= 10.0 * dt * speed || params.kappa.lift(state.r) < 1e-8 {
                return Ok(Trajectory { samples, termination: Termination::DomainExit });
            }
        }
    }
    Ok(Trajectory { samples, termination: Termination::Completed })
}
