//! Killing fields of the projective metric, the Lie derivative of the metric,
//! the Lie algebra they span and the invariance of the measure.
//!
//! A vector field is written `X = f(r, phi) d/dr + h(r, phi) d/dphi`. Every
//! Killing field is a real combination `c1 X1 + c2 X2 + c3 XJ` of
//!
//! ```text
//! X1 = (1 + kappa r^2) cos(phi) d/dr - sin(phi)/r d/dphi
//! X2 = (1 + kappa r^2) sin(phi) d/dr + cos(phi)/r d/dphi
//! XJ = d/dphi
//! ```
//!
//! with brackets `[X1, X2] = -kappa XJ`, `[X1, XJ] = X2`, `[X2, XJ] = -X1`.

use crate::error::{Error, Result};
use crate::geometry::{measure_weight, measure_weight_derivative, metric_polar, Curvature, PolarPoint};

/// Values and first partials of the two components of a vector field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldJet {
    pub f: f64,
    pub f_r: f64,
    pub f_phi: f64,
    pub h: f64,
    pub h_r: f64,
    pub h_phi: f64,
}

/// A vector field on the surface. Fields without analytic partials get them
/// from central differences.
pub trait GeneralField {
    /// Components `(f, h)` at `(r, phi)`.
    fn components(&self, kappa: Curvature, r: f64, phi: f64) -> (f64, f64);

    fn analytic_jet(&self, _kappa: Curvature, _r: f64, _phi: f64) -> Option<FieldJet> {
        None
    }
}

/// Relative finite-difference step for field partials.
const FD_STEP: f64 = 1e-6;

/// Components and partials at `point`, from the analytic jet when available.
pub fn field_jet<F: GeneralField + ?Sized>(field: &F, kappa: Curvature, point: PolarPoint) -> Result<FieldJet> {
    let (r, phi) = (point.r, point.phi);
    kappa.check_radius(r)?;
    if r <= 0.0 {
        return Err(Error::DegenerateCoordinate("vector field partials need r > 0".into()));
    }
    if let Some(jet) = field.analytic_jet(kappa, r, phi) {
        return Ok(jet);
    }
    let dr = FD_STEP * r.max(1.0);
    if r - dr <= 0.0 || kappa.lift(r + dr) <= 0.0 {
        return Err(Error::Domain(format!("difference stencil at r={r} leaves the chart")));
    }
    let dphi = FD_STEP;
    let (f, h) = field.components(kappa, r, phi);
    let (f_rp, h_rp) = field.components(kappa, r + dr, phi);
    let (f_rm, h_rm) = field.components(kappa, r - dr, phi);
    let (f_pp, h_pp) = field.components(kappa, r, phi + dphi);
    let (f_pm, h_pm) = field.components(kappa, r, phi - dphi);
    Ok(FieldJet {
        f,
        f_r: (f_rp - f_rm) / (2.0 * dr),
        f_phi: (f_pp - f_pm) / (2.0 * dphi),
        h,
        h_r: (h_rp - h_rm) / (2.0 * dr),
        h_phi: (h_pp - h_pm) / (2.0 * dphi),
    })
}

/// Member `c1 X1 + c2 X2 + c3 XJ` of the three-dimensional Killing algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KillingField {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl KillingField {
    pub const X1: KillingField = KillingField { c1: 1.0, c2: 0.0, c3: 0.0 };
    pub const X2: KillingField = KillingField { c1: 0.0, c2: 1.0, c3: 0.0 };
    pub const XJ: KillingField = KillingField { c1: 0.0, c2: 0.0, c3: 1.0 };

    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        KillingField { c1, c2, c3 }
    }

    /// Field with `f = (1 + kappa r^2)(a sin(phi) + b cos(phi))` and
    /// `h = (a cos(phi) - b sin(phi))/r + c`, i.e. `b X1 + a X2 + c XJ`.
    pub fn from_general_solution(a: f64, b: f64, c: f64) -> Self {
        KillingField { c1: b, c2: a, c3: c }
    }

    pub fn scaled(self, s: f64) -> Self {
        KillingField { c1: s * self.c1, c2: s * self.c2, c3: s * self.c3 }
    }

    pub fn is_zero(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0 && self.c3 == 0.0
    }

    pub fn jet(&self, kappa: Curvature, r: f64, phi: f64) -> FieldJet {
        let k = kappa.value();
        let lift = kappa.lift(r);
        let (s, c) = phi.sin_cos();
        let trig = self.c1 * c + self.c2 * s;
        let trig_phi = -self.c1 * s + self.c2 * c;
        FieldJet {
            f: lift * trig,
            f_r: 2.0 * k * r * trig,
            f_phi: lift * trig_phi,
            h: trig_phi / r + self.c3,
            h_r: -trig_phi / (r * r),
            h_phi: -trig / r,
        }
    }
}

impl GeneralField for KillingField {
    fn components(&self, kappa: Curvature, r: f64, phi: f64) -> (f64, f64) {
        let j = self.jet(kappa, r, phi);
        (j.f, j.h)
    }

    fn analytic_jet(&self, kappa: Curvature, r: f64, phi: f64) -> Option<FieldJet> {
        Some(self.jet(kappa, r, phi))
    }
}

/// Field given by a closure returning `(f, h)`.
pub struct FnField<F>(pub F);

impl<F: Fn(f64, f64) -> (f64, f64)> GeneralField for FnField<F> {
    fn components(&self, _kappa: Curvature, r: f64, phi: f64) -> (f64, f64) {
        (self.0)(r, phi)
    }
}

/// Hides the analytic partials of a field, forcing finite differences.
pub struct Numeric<F>(pub F);

impl<F: GeneralField> GeneralField for Numeric<F> {
    fn components(&self, kappa: Curvature, r: f64, phi: f64) -> (f64, f64) {
        self.0.components(kappa, r, phi)
    }
}

/// `X1`, `X2`, `XJ`.
pub fn killing_basis() -> [KillingField; 3] {
    [KillingField::X1, KillingField::X2, KillingField::XJ]
}

/// The three independent components of the Lie derivative of the metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieDerivative {
    pub rr: f64,
    pub rphi: f64,
    pub phiphi: f64,
}

impl LieDerivative {
    pub fn max_abs(&self) -> f64 {
        self.rr.abs().max(self.rphi.abs()).max(self.phiphi.abs())
    }
}

/// `L_X g` for the diagonal projective metric.
pub fn lie_derivative_metric<F: GeneralField + ?Sized>(
    field: &F,
    kappa: Curvature,
    point: PolarPoint,
) -> Result<LieDerivative> {
    let j = field_jet(field, kappa, point)?;
    let r = point.r;
    let g = metric_polar(kappa, r)?;
    let lift = kappa.lift(r);
    let k = kappa.value();
    let dg_rr = -4.0 * k * r / (lift * lift * lift);
    let dg_phiphi = 2.0 * r / (lift * lift);
    Ok(LieDerivative {
        rr: j.f * dg_rr + 2.0 * g.g_rr * j.f_r,
        rphi: g.g_rr * j.f_phi + g.g_phiphi * j.h_r,
        phiphi: j.f * dg_phiphi + 2.0 * g.g_phiphi * j.h_phi,
    })
}

/// Residuals of the first-order Killing system
///
/// ```text
/// f_r - 2 kappa r f / (1 + kappa r^2)
/// f_phi + r^2 (1 + kappa r^2) h_r
/// r (1 + kappa r^2) h_phi + f
/// ```
pub fn killing_residual<F: GeneralField + ?Sized>(
    field: &F,
    kappa: Curvature,
    point: PolarPoint,
) -> Result<[f64; 3]> {
    let j = field_jet(field, kappa, point)?;
    let r = point.r;
    let lift = kappa.lift(r);
    Ok([
        j.f_r - 2.0 * kappa.value() * r * j.f / lift,
        j.f_phi + r * r * lift * j.h_r,
        r * lift * j.h_phi + j.f,
    ])
}

/// `d/dr (w f) + d/dphi (w h)` with `w` the measure density; vanishes exactly
/// when the flow of the field preserves the measure.
pub fn measure_divergence<F: GeneralField + ?Sized>(field: &F, kappa: Curvature, point: PolarPoint) -> Result<f64> {
    let j = field_jet(field, kappa, point)?;
    let w = measure_weight(kappa, point.r)?;
    let dw = measure_weight_derivative(kappa, point.r)?;
    Ok(dw * j.f + w * j.f_r + w * j.h_phi)
}

/// Lie bracket within the Killing algebra, from the structure constants.
pub fn bracket(a: KillingField, b: KillingField, kappa: Curvature) -> KillingField {
    let x1x2 = a.c1 * b.c2 - a.c2 * b.c1;
    let x1xj = a.c1 * b.c3 - a.c3 * b.c1;
    let x2xj = a.c2 * b.c3 - a.c3 * b.c2;
    KillingField { c1: -x2xj, c2: x1xj, c3: -kappa.value() * x1x2 }
}

/// Pointwise commutator `[A, B]^i = A^j d_j B^i - B^j d_j A^i`, as `(f, h)`.
pub fn commutator<A, B>(a: &A, b: &B, kappa: Curvature, point: PolarPoint) -> Result<(f64, f64)>
where
    A: GeneralField + ?Sized,
    B: GeneralField + ?Sized,
{
    let ja = field_jet(a, kappa, point)?;
    let jb = field_jet(b, kappa, point)?;
    Ok((
        ja.f * jb.f_r + ja.h * jb.f_phi - jb.f * ja.f_r - jb.h * ja.f_phi,
        ja.f * jb.h_r + ja.h * jb.h_phi - jb.f * ja.h_r - jb.h * ja.h_phi,
    ))
}
