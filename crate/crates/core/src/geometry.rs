//! Curvature-tagged elementary functions, the metric of the constant-curvature
//! surfaces in two polar charts, and the invariant measure weight.
//!
//! Two radial coordinates are used throughout the crate:
//!
//! - the geodesic radius `rho`, in which the metric reads
//!   `d rho^2 + S_kappa(rho)^2 d phi^2`;
//! - the projective radius `r = T_kappa(rho)`, in which it reads
//!   `dr^2 / (1 + kappa r^2)^2 + r^2 / (1 + kappa r^2) d phi^2`.
//!
//! The factor `1 + kappa r^2` shows up everywhere and is called the *lift*.

use std::f64::consts::{FRAC_PI_2, LN_2, TAU};

use crate::error::{Error, Result};

/// Below this value of `|kappa| x^2` the curvature-tagged functions are
/// evaluated from their Taylor series.
const SERIES_CROSSOVER: f64 = 1e-4;

/// Dimensionless Gaussian curvature.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Curvature(f64);

impl Curvature {
    pub const FLAT: Curvature = Curvature(0.0);

    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::Parameter(format!("curvature must be finite, got {kappa}")));
        }
        Ok(Curvature(kappa))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_flat(self) -> bool {
        self.0 == 0.0
    }

    /// `sqrt(|kappa|)`.
    #[inline]
    pub fn root(self) -> f64 {
        self.0.abs().sqrt()
    }

    /// `S_kappa(x)`: `sin(sqrt(k) x)/sqrt(k)`, `x`, or `sinh(sqrt(-k) x)/sqrt(-k)`.
    pub fn sine(self, x: f64) -> f64 {
        let k = self.0;
        if k == 0.0 {
            return x;
        }
        let kx2 = k * x * x;
        if kx2.abs() < SERIES_CROSSOVER {
            return x * (1.0 - kx2 / 6.0 * (1.0 - kx2 / 20.0 * (1.0 - kx2 / 42.0)));
        }
        let a = self.root();
        if k > 0.0 {
            (a * x).sin() / a
        } else {
            (a * x).sinh() / a
        }
    }

    /// `C_kappa(x) = d S_kappa / dx`.
    pub fn cosine(self, x: f64) -> f64 {
        let k = self.0;
        if k == 0.0 {
            return 1.0;
        }
        let kx2 = k * x * x;
        if kx2.abs() < SERIES_CROSSOVER {
            return 1.0 - kx2 / 2.0 * (1.0 - kx2 / 12.0 * (1.0 - kx2 / 30.0));
        }
        let a = self.root();
        if k > 0.0 {
            (a * x).cos()
        } else {
            (a * x).cosh()
        }
    }

    /// `T_kappa(x) = S_kappa(x) / C_kappa(x)`; fails at zeros of `C_kappa`.
    pub fn tangent(self, x: f64) -> Result<f64> {
        let c = self.cosine(x);
        if c.abs() <= 4.0 * f64::EPSILON {
            return Err(Error::Domain(format!(
                "T_kappa undefined at x={x} (C_kappa vanishes for kappa={})",
                self.0
            )));
        }
        Ok(self.sine(x) / c)
    }

    /// `1 + kappa r^2`.
    #[inline]
    pub fn lift(self, r: f64) -> f64 {
        1.0 + self.0 * r * r
    }

    /// Projective radius of the metric boundary for `kappa < 0`, `1/sqrt(-kappa)`.
    pub fn boundary_radius(self) -> Option<f64> {
        (self.0 < 0.0).then(|| 1.0 / self.root())
    }

    /// Largest geodesic radius covered by the projective chart: the equator
    /// `pi / (2 sqrt(kappa))` on the sphere, infinite otherwise.
    pub fn geodesic_extent(self) -> f64 {
        if self.0 > 0.0 {
            FRAC_PI_2 / self.root()
        } else {
            f64::INFINITY
        }
    }

    /// Validates a projective radius and returns its lift `1 + kappa r^2`.
    pub fn check_radius(self, r: f64) -> Result<f64> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
        }
        let lift = self.lift(r);
        if lift <= 0.0 {
            return Err(Error::Domain(format!(
                "r={r} lies outside the hyperbolic disk r < {} (kappa={})",
                1.0 / self.root(),
                self.0
            )));
        }
        Ok(lift)
    }

    /// Projective radius `r = T_kappa(rho)` of a geodesic radius.
    pub fn projective_radius(self, rho: f64) -> Result<f64> {
        if !(rho >= 0.0) {
            return Err(Error::Domain(format!("geodesic radius must be >= 0, got {rho}")));
        }
        if rho >= self.geodesic_extent() {
            return Err(Error::Domain(format!(
                "geodesic radius {rho} reaches the equator of the kappa={} sphere",
                self.0
            )));
        }
        self.tangent(rho)
    }

    /// Geodesic radius `rho` of a projective radius.
    pub fn geodesic_radius(self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        let k = self.0;
        let a = self.root();
        Ok(if k == 0.0 {
            r
        } else if k > 0.0 {
            (a * r).atan() / a
        } else {
            (a * r).atanh() / a
        })
    }
}

/// Point of the projective polar chart with the angle reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub phi: f64,
}

impl PolarPoint {
    pub fn new(r: f64, phi: f64) -> Self {
        PolarPoint { r, phi: normalize_angle(phi) }
    }

    /// Builds the point and checks it lies in the chart for `kappa`.
    pub fn checked(kappa: Curvature, r: f64, phi: f64) -> Result<Self> {
        kappa.check_radius(r)?;
        if !phi.is_finite() {
            return Err(Error::Domain(format!("angle must be finite, got {phi}")));
        }
        Ok(Self::new(r, phi))
    }
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn normalize_angle(phi: f64) -> f64 {
    let a = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// A radius together with an accurately evaluated lift `1 + kappa r^2`.
///
/// Near the boundary of the hyperbolic disk `1 + kappa r^2` cancels
/// catastrophically when computed from `r`, so integrands and eigenfunctions
/// receive the lift (and its logarithm, which stays finite after the lift
/// itself underflows) alongside `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    pub r: f64,
    pub lift: f64,
    pub ln_lift: f64,
}

impl RadialPoint {
    pub fn from_projective(kappa: Curvature, r: f64) -> Self {
        let x = kappa.value() * r * r;
        RadialPoint { r, lift: 1.0 + x, ln_lift: x.ln_1p() }
    }

    /// Evaluates `r = T_kappa(rho)` and the lift `1 / C_kappa(rho)^2` without
    /// cancellation. On the sphere `rho` must stay below the equator.
    pub fn from_geodesic(kappa: Curvature, rho: f64) -> Self {
        let k = kappa.value();
        if k == 0.0 {
            return RadialPoint { r: rho, lift: 1.0, ln_lift: 0.0 };
        }
        let a = kappa.root();
        let x = a * rho;
        if k > 0.0 {
            let c = x.cos();
            RadialPoint { r: x.tan() / a, lift: 1.0 / (c * c), ln_lift: -2.0 * c.abs().ln() }
        } else {
            // ln cosh x = x + ln(1 + e^{-2x}) - ln 2 for x >= 0
            let ln_cosh = x + (-2.0 * x).exp().ln_1p() - LN_2;
            let ln_lift = -2.0 * ln_cosh;
            RadialPoint { r: x.tanh() / a, lift: ln_lift.exp(), ln_lift }
        }
    }
}

/// Diagonal metric components; the off-diagonal entry vanishes in both charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub g_rr: f64,
    pub g_phiphi: f64,
}

/// Metric in geodesic polar coordinates: `(1, S_kappa(rho)^2)`.
pub fn metric_geodesic(kappa: Curvature, rho: f64) -> Result<MetricComponents> {
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("geodesic radius must be >= 0, got {rho}")));
    }
    let s = kappa.sine(rho);
    Ok(MetricComponents { g_rr: 1.0, g_phiphi: s * s })
}

/// Metric in projective polar coordinates:
/// `(1/(1 + kappa r^2)^2, r^2/(1 + kappa r^2))`.
pub fn metric_polar(kappa: Curvature, r: f64) -> Result<MetricComponents> {
    let lift = kappa.check_radius(r)?;
    Ok(MetricComponents { g_rr: 1.0 / (lift * lift), g_phiphi: r * r / lift })
}

/// Density of the invariant measure, `d mu = w(r) dr dphi` with
/// `w(r) = r / (1 + kappa r^2)^{3/2}`.
pub fn measure_weight(kappa: Curvature, r: f64) -> Result<f64> {
    let lift = kappa.check_radius(r)?;
    Ok(r / (lift * lift.sqrt()))
}

/// `dw/dr = (1 - 2 kappa r^2) / (1 + kappa r^2)^{5/2}`.
pub fn measure_weight_derivative(kappa: Curvature, r: f64) -> Result<f64> {
    let lift = kappa.check_radius(r)?;
    Ok((1.0 - 2.0 * kappa.value() * r * r) / (lift * lift * lift.sqrt()))
}
