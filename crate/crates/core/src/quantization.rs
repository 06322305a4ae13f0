//! Quantum operators built from the Noether momenta, the Hamiltonian, the
//! dimensionless Schrödinger residual, and conversion to and from physical
//! units.
//!
//! In dimensionless units (`hbar = m = 1`, frequency 1)
//!
//! ```text
//! P1 = -i [ (1 + kappa r^2) cos(phi) d_r - sin(phi)/r d_phi ]
//! P2 = -i [ (1 + kappa r^2) sin(phi) d_r + cos(phi)/r d_phi ]
//! J  = -i d_phi
//! H  = (P1^2 + P2^2 + kappa J^2)/2 + r^2/2
//! ```
//!
//! The frequency of the oscillator is called `omega` here; the coupling of the
//! classical potential is `alpha = sqrt(m) omega`.

use num_complex::Complex64;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{measure_weight, Curvature, PolarPoint};
use crate::oracle::adaptive_gauss;
use crate::symmetry::KillingField;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Value and partial derivatives up to second order of a complex field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: Complex64,
    pub d_r: Complex64,
    pub d_phi: Complex64,
    pub d_rr: Complex64,
    pub d_rphi: Complex64,
    pub d_phiphi: Complex64,
}

/// Complex wavefunction on the surface, single-valued in `phi`.
pub trait ScalarField {
    fn jet(&self, kappa: Curvature, r: f64, phi: f64) -> Result<Jet>;
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn jet(&self, kappa: Curvature, r: f64, phi: f64) -> Result<Jet> {
        (**self).jet(kappa, r, phi)
    }
}

/// Relative step of the difference stencils used for closure-backed fields.
const STENCIL_STEP: f64 = 1e-4;

/// Field defined by a closure; derivatives come from five-point stencils.
pub struct FnScalarField<F>(pub F);

impl<F: Fn(f64, f64) -> Complex64> ScalarField for FnScalarField<F> {
    fn jet(&self, kappa: Curvature, r: f64, phi: f64) -> Result<Jet> {
        let f = &self.0;
        let hr = STENCIL_STEP * r.max(1.0);
        let hp = STENCIL_STEP;
        if r - 2.0 * hr <= 0.0 {
            return Err(Error::DegenerateCoordinate(format!("stencil at r={r} crosses the origin")));
        }
        if kappa.lift(r + 2.0 * hr) <= 0.0 {
            return Err(Error::Domain(format!("stencil at r={r} leaves the hyperbolic disk")));
        }
        let v = f(r, phi);
        let along_r = [f(r - 2.0 * hr, phi), f(r - hr, phi), f(r + hr, phi), f(r + 2.0 * hr, phi)];
        let along_p = [f(r, phi - 2.0 * hp), f(r, phi - hp), f(r, phi + hp), f(r, phi + 2.0 * hp)];
        let first = |s: &[Complex64; 4], h: f64| (s[0] - 8.0 * s[1] + 8.0 * s[2] - s[3]) / (12.0 * h);
        let second =
            |s: &[Complex64; 4], h: f64| (-s[0] + 16.0 * s[1] - 30.0 * v + 16.0 * s[2] - s[3]) / (12.0 * h * h);
        let cross = |a: f64, b: f64| {
            (f(r + a, phi + b) - f(r + a, phi - b) - f(r - a, phi + b) + f(r - a, phi - b)) / (4.0 * a * b)
        };
        // Richardson-combined cross stencil, fourth order like the others
        let d_rphi = (4.0 * cross(hr, hp) - cross(2.0 * hr, 2.0 * hp)) / 3.0;
        Ok(Jet {
            value: v,
            d_r: first(&along_r, hr),
            d_phi: first(&along_p, hp),
            d_rr: second(&along_r, hr),
            d_rphi,
            d_phiphi: second(&along_p, hp),
        })
    }
}

/// `R(r) exp(i m phi)` with the radial function given as `(R, R', R'')`.
pub struct SeparableField<F> {
    pub radial: F,
    pub m: i32,
}

impl<F: Fn(f64) -> [f64; 3]> ScalarField for SeparableField<F> {
    fn jet(&self, kappa: Curvature, r: f64, phi: f64) -> Result<Jet> {
        kappa.check_radius(r)?;
        Ok(separable_jet((self.radial)(r), self.m, phi))
    }
}

pub(crate) fn separable_jet(radial: [f64; 3], m: i32, phi: f64) -> Jet {
    let [g, dg, ddg] = radial;
    let mf = m as f64;
    let e = Complex64::from_polar(1.0, mf * phi);
    Jet {
        value: e * g,
        d_r: e * dg,
        d_phi: I * mf * e * g,
        d_rr: e * ddg,
        d_rphi: I * mf * e * dg,
        d_phiphi: -mf * mf * e * g,
    }
}

/// Smooth test function with compact radial support,
/// `g((r - r0)/width) * sum_k c_k e^{i k phi}` with the bump
/// `g(t) = exp(-1/(1 - t^2))` on `|t| < 1`. Derivatives are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpField {
    pub r0: f64,
    pub width: f64,
    /// Fourier modes `(k, c_k)`.
    pub modes: Vec<(i32, Complex64)>,
}

impl BumpField {
    /// Radial support `(r0 - width, r0 + width)`.
    pub fn support(&self) -> (f64, f64) {
        (self.r0 - self.width, self.r0 + self.width)
    }

    fn radial(&self, r: f64) -> [f64; 3] {
        let t = (r - self.r0) / self.width;
        if t.abs() >= 1.0 {
            return [0.0; 3];
        }
        let u = 1.0 - t * t;
        let g = (-1.0 / u).exp();
        let d1 = -2.0 * t / (u * u);
        let d2 = -2.0 / (u * u) - 8.0 * t * t / (u * u * u);
        let w = self.width;
        [g, g * d1 / w, g * (d2 + d1 * d1) / (w * w)]
    }

    fn angular(&self, phi: f64) -> [Complex64; 3] {
        self.modes.iter().fold([Complex64::default(); 3], |acc, &(k, c)| {
            let kf = f64::from(k);
            let e = c * Complex64::from_polar(1.0, kf * phi);
            [acc[0] + e, acc[1] + I * kf * e, acc[2] - kf * kf * e]
        })
    }
}

impl ScalarField for BumpField {
    fn jet(&self, kappa: Curvature, r: f64, phi: f64) -> Result<Jet> {
        kappa.check_radius(r)?;
        let [g, g1, g2] = self.radial(r);
        let [a, a1, a2] = self.angular(phi);
        Ok(Jet { value: a * g, d_r: a * g1, d_phi: a1 * g, d_rr: a * g2, d_rphi: a1 * g1, d_phiphi: a2 * g })
    }
}

/// `integral conj(f) g dmu` over the annulus `r_lo < r < r_hi`, by nested
/// adaptive Gauss-Legendre quadrature in `phi` and `r`.
pub fn measure_inner_product<F, G>(kappa: Curvature, f: F, g: G, r_lo: f64, r_hi: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Result<Complex64>,
    G: Fn(f64, f64) -> Result<Complex64>,
{
    let part = |imag: bool| {
        adaptive_gauss(
            |r| {
                let Ok(w) = measure_weight(kappa, r) else { return f64::NAN };
                let inner = adaptive_gauss(
                    |phi| match (f(r, phi), g(r, phi)) {
                        (Ok(a), Ok(b)) => {
                            let z = a.conj() * b;
                            if imag {
                                z.im
                            } else {
                                z.re
                            }
                        }
                        _ => f64::NAN,
                    },
                    0.0,
                    TAU,
                    tol,
                );
                inner.map_or(f64::NAN, |v| v * w)
            },
            r_lo,
            r_hi,
            tol,
        )
    };
    Ok(Complex64::new(part(false)?, part(true)?))
}

/// One of the three quantized Noether momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Momentum {
    P1,
    P2,
    J,
}

impl Momentum {
    pub const ALL: [Momentum; 3] = [Momentum::P1, Momentum::P2, Momentum::J];

    /// Killing field `X` with `P = -i X`.
    pub fn generator(self) -> KillingField {
        match self {
            Momentum::P1 => KillingField::X1,
            Momentum::P2 => KillingField::X2,
            Momentum::J => KillingField::XJ,
        }
    }
}

fn checked_point(kappa: Curvature, r: f64) -> Result<f64> {
    let lift = kappa.check_radius(r)?;
    if r <= 0.0 {
        return Err(Error::DegenerateCoordinate("operators are evaluated at r > 0".into()));
    }
    Ok(lift)
}

/// `P psi` at `point`.
pub fn apply_momentum_operator<S: ScalarField + ?Sized>(
    which: Momentum,
    kappa: Curvature,
    psi: &S,
    point: PolarPoint,
) -> Result<Complex64> {
    checked_point(kappa, point.r)?;
    let psi_jet = psi.jet(kappa, point.r, point.phi)?;
    let x = which.generator().jet(kappa, point.r, point.phi);
    Ok(-I * (x.f * psi_jet.d_r + x.h * psi_jet.d_phi))
}

/// `P_outer (P_inner psi)` at `point`, composing the first-order operators
/// through the second-order jet of `psi`.
pub fn apply_momentum_pair<S: ScalarField + ?Sized>(
    outer: Momentum,
    inner: Momentum,
    kappa: Curvature,
    psi: &S,
    point: PolarPoint,
) -> Result<Complex64> {
    checked_point(kappa, point.r)?;
    let p = psi.jet(kappa, point.r, point.phi)?;
    let a = outer.generator().jet(kappa, point.r, point.phi);
    let b = inner.generator().jet(kappa, point.r, point.phi);
    // inner image g = -i (b.f psi_r + b.h psi_phi) and its partials
    let g_r = -I * (b.f_r * p.d_r + b.f * p.d_rr + b.h_r * p.d_phi + b.h * p.d_rphi);
    let g_phi = -I * (b.f_phi * p.d_r + b.f * p.d_rphi + b.h_phi * p.d_phi + b.h * p.d_phiphi);
    Ok(-I * (a.f * g_r + a.h * g_phi))
}

/// `(P1^2 + P2^2 + kappa J^2) psi / 2` by operator composition.
pub fn apply_casimir<S: ScalarField + ?Sized>(kappa: Curvature, psi: &S, point: PolarPoint) -> Result<Complex64> {
    let p11 = apply_momentum_pair(Momentum::P1, Momentum::P1, kappa, psi, point)?;
    let p22 = apply_momentum_pair(Momentum::P2, Momentum::P2, kappa, psi, point)?;
    let jj = apply_momentum_pair(Momentum::J, Momentum::J, kappa, psi, point)?;
    Ok(0.5 * (p11 + p22 + kappa.value() * jj))
}

/// `(1 + kappa r^2) [ (1 + kappa r^2) psi_rr + (1 + 2 kappa r^2) psi_r / r + psi_phiphi / r^2 ]`,
/// the Laplace-Beltrami operator of the surface.
fn laplace_beltrami(kappa: Curvature, r: f64, j: &Jet) -> Complex64 {
    let lift = kappa.lift(r);
    let k = kappa.value();
    lift * (lift * j.d_rr + (1.0 + 2.0 * k * r * r) * j.d_r / r + j.d_phiphi / (r * r))
}

/// `H psi` with `H = -Delta/2 + alpha^2 r^2 / 2`.
pub fn apply_hamiltonian<S: ScalarField + ?Sized>(
    kappa: Curvature,
    alpha: f64,
    psi: &S,
    point: PolarPoint,
) -> Result<Complex64> {
    checked_point(kappa, point.r)?;
    let r = point.r;
    let j = psi.jet(kappa, r, point.phi)?;
    Ok(-0.5 * laplace_beltrami(kappa, r, &j) + 0.5 * alpha * alpha * r * r * j.value)
}

/// Residual of the dimensionless Schrödinger equation
/// `Delta psi - r^2 psi + 2 E psi`; zero for an eigenpair.
pub fn schrodinger_residual<S: ScalarField + ?Sized>(
    kappa: Curvature,
    e_bar: f64,
    psi: &S,
    point: PolarPoint,
) -> Result<Complex64> {
    checked_point(kappa, point.r)?;
    let r = point.r;
    let j = psi.jet(kappa, r, point.phi)?;
    Ok(laplace_beltrami(kappa, r, &j) - r * r * j.value + 2.0 * e_bar * j.value)
}

/// Physical constants used to strip units from the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    pub hbar: f64,
    pub mass: f64,
    /// Angular frequency of the oscillator.
    pub omega: f64,
}

/// Kinds of dimensioned quantity that can be converted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Curvature,
    Energy,
}

impl Default for PhysicalScales {
    fn default() -> Self {
        PhysicalScales { hbar: 1.0, mass: 1.0, omega: 1.0 }
    }
}

impl PhysicalScales {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(PhysicalScales { hbar, mass, omega })
    }

    /// Oscillator length `sqrt(hbar / (m omega))`.
    pub fn length(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// Potential coupling `alpha = sqrt(m) omega` of the classical Hamiltonian.
    pub fn alpha(&self) -> f64 {
        self.mass.sqrt() * self.omega
    }

    fn factor(&self, dim: Dimension) -> f64 {
        match dim {
            Dimension::Length => 1.0 / self.length(),
            Dimension::Curvature => self.hbar / (self.mass * self.omega),
            Dimension::Energy => 1.0 / (self.hbar * self.omega),
        }
    }

    /// `r/l`, `kappa l^2`, or `E/(hbar omega)` with `l` the oscillator length.
    pub fn to_dimensionless(&self, dim: Dimension, value: f64) -> f64 {
        value * self.factor(dim)
    }

    pub fn from_dimensionless(&self, dim: Dimension, value: f64) -> f64 {
        value / self.factor(dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    fn gaussian() -> SeparableField<impl Fn(f64) -> [f64; 3]> {
        SeparableField {
            radial: |r: f64| {
                let g = (-r * r / 2.0).exp();
                [g, -r * g, (r * r - 1.0) * g]
            },
            m: 0,
        }
    }

    /// A smooth non-separable test function.
    fn blob() -> FnScalarField<impl Fn(f64, f64) -> Complex64> {
        FnScalarField(|r: f64, phi: f64| {
            let (x, y) = (r * phi.cos(), r * phi.sin());
            Complex64::new(1.0 + x - 0.5 * y * y, 0.3 * x * y + y) * (-0.7 * r * r).exp()
        })
    }

    #[test]
    fn angular_momentum_eigenfunction() {
        let psi = SeparableField { radial: |r: f64| [r * r, 2.0 * r, 2.0], m: 3 };
        let p = PolarPoint::new(0.8, 1.2);
        let got = apply_momentum_operator(Momentum::J, k(0.5), &psi, p).unwrap();
        let value = psi.jet(k(0.5), p.r, p.phi).unwrap().value;
        assert!((got - 3.0 * value).norm() < 1e-14);
    }

    #[test]
    fn linear_momentum_of_coordinate() {
        let x = FnScalarField(|r: f64, phi: f64| Complex64::new(r * phi.cos(), 0.0));
        for &(r, phi) in &[(0.5, 0.3), (1.7, 2.5), (3.0, 5.0)] {
            let got = apply_momentum_operator(Momentum::P1, k(0.0), &x, PolarPoint::new(r, phi)).unwrap();
            assert!((got + I).norm() < 1e-9, "{got}");
        }
        let c = FnScalarField(|_: f64, _: f64| Complex64::new(2.0, 0.0));
        let got = apply_momentum_operator(Momentum::P2, k(0.4), &c, PolarPoint::new(1.0, 1.0)).unwrap();
        assert!(got.norm() < 1e-12);
    }

    #[test]
    fn flat_ground_state() {
        let psi = gaussian();
        for &(r, phi) in &[(0.3, 0.0), (1.0, 1.0), (2.5, 4.0)] {
            let p = PolarPoint::new(r, phi);
            let h = apply_hamiltonian(k(0.0), 1.0, &psi, p).unwrap();
            let v = psi.jet(k(0.0), r, phi).unwrap().value;
            assert!((h - v).norm() < 1e-14);
            assert!(schrodinger_residual(k(0.0), 1.0, &psi, p).unwrap().norm() < 1e-8);
        }
        let one = SeparableField { radial: |_: f64| [1.0, 0.0, 0.0], m: 0 };
        assert!(apply_hamiltonian(k(0.7), 0.0, &one, PolarPoint::new(1.0, 0.0)).unwrap().norm() == 0.0);
        let res = schrodinger_residual(k(0.0), 0.0, &one, PolarPoint::new(1.0, 0.0)).unwrap();
        assert_eq!(res, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn hamiltonian_is_the_casimir() {
        let psi = blob();
        for &kv in &[-0.5, 0.0, 0.7, 1.0] {
            for &(r, phi) in &[(0.3, 0.2), (0.9, 2.0), (1.2, 4.4)] {
                let p = PolarPoint::new(r, phi);
                let h = apply_hamiltonian(k(kv), 0.0, &psi, p).unwrap();
                let c = apply_casimir(k(kv), &psi, p).unwrap();
                assert!((h - c).norm() < 1e-6 * h.norm().max(1.0), "kappa={kv}: {h} vs {c}");
            }
        }
    }

    #[test]
    fn quantum_brackets() {
        // [P1, P2] = i kappa J and [J, H] = 0, evaluated by composition
        let psi = blob();
        for &kv in &[-0.5, 0.7] {
            let kk = k(kv);
            let p = PolarPoint::new(0.8, 1.3);
            let lhs = apply_momentum_pair(Momentum::P1, Momentum::P2, kk, &psi, p).unwrap()
                - apply_momentum_pair(Momentum::P2, Momentum::P1, kk, &psi, p).unwrap();
            let rhs = I * kv * apply_momentum_operator(Momentum::J, kk, &psi, p).unwrap();
            assert!((lhs - rhs).norm() < 1e-6, "{lhs} vs {rhs}");
        }
    }

    fn bump(modes: Vec<(i32, Complex64)>) -> BumpField {
        BumpField { r0: 0.6, width: 0.3, modes }
    }

    #[test]
    fn bump_jet_matches_differences() {
        let b = bump(vec![(1, Complex64::new(0.5, 0.2)), (-2, Complex64::new(0.0, 1.0))]);
        let fd = FnScalarField(|r: f64, phi: f64| b.jet(k(0.3), r, phi).unwrap().value);
        let (a, n) = (b.jet(k(0.3), 0.7, 1.1).unwrap(), fd.jet(k(0.3), 0.7, 1.1).unwrap());
        for (x, y) in [(a.d_r, n.d_r), (a.d_phi, n.d_phi), (a.d_rr, n.d_rr), (a.d_rphi, n.d_rphi), (a.d_phiphi, n.d_phiphi)] {
            assert!((x - y).norm() < 1e-6 * x.norm().max(1.0), "{x} {y}");
        }
        assert_eq!(b.jet(k(0.3), 1.0, 0.0).unwrap().value, Complex64::default());
    }

    #[test]
    fn momenta_are_formally_symmetric() {
        let u = bump(vec![(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.3, -0.2))]);
        let v = bump(vec![(-1, Complex64::new(0.4, 0.1)), (2, Complex64::new(0.0, 0.7))]);
        let (lo, hi) = u.support();
        for kv in [-0.5, 1.0] {
            let kk = k(kv);
            for which in Momentum::ALL {
                let pu = |r: f64, phi: f64| apply_momentum_operator(which, kk, &u, PolarPoint::new(r, phi));
                let pv = |r: f64, phi: f64| apply_momentum_operator(which, kk, &v, PolarPoint::new(r, phi));
                let uv = |r: f64, phi: f64| Ok(u.jet(kk, r, phi)?.value);
                let vv = |r: f64, phi: f64| Ok(v.jet(kk, r, phi)?.value);
                let lhs = measure_inner_product(kk, pu, vv, lo, hi, 1e-12).unwrap();
                let rhs = measure_inner_product(kk, uv, pv, lo, hi, 1e-12).unwrap();
                assert!((lhs - rhs).norm() < 1e-6 * lhs.norm().max(1e-3), "{which:?}: {lhs} {rhs}");
            }
        }
    }

    #[test]
    fn stencil_domain_errors() {
        let psi = blob();
        assert!(matches!(
            apply_hamiltonian(k(-1.0), 1.0, &psi, PolarPoint::new(1.0 - 1e-5, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(apply_momentum_operator(Momentum::P1, k(0.0), &psi, PolarPoint::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn scaling_examples() {
        let unit = PhysicalScales::default();
        for dim in [Dimension::Length, Dimension::Curvature, Dimension::Energy] {
            assert_eq!(unit.to_dimensionless(dim, 2.5), 2.5);
        }
        let s = PhysicalScales::new(1.0546, 2.0, 3.0).unwrap();
        assert!((s.to_dimensionless(Dimension::Energy, 2.0 * 1.0546 * 3.0) - 2.0).abs() < 1e-15);
        for dim in [Dimension::Length, Dimension::Curvature, Dimension::Energy] {
            let x = 0.123;
            let back = s.from_dimensionless(dim, s.to_dimensionless(dim, x));
            assert!((back - x).abs() <= 1e-15 * x);
        }
        // kappa r^2 is scale free
        let (kappa, r) = (0.37, 1.9);
        let kr2 = s.to_dimensionless(Dimension::Curvature, kappa) * s.to_dimensionless(Dimension::Length, r).powi(2);
        assert!((kr2 - kappa * r * r).abs() < 1e-15);
        assert!(PhysicalScales::new(1.0, 0.0, 1.0).is_err());
        assert!((s.alpha() - 2f64.sqrt() * 3.0).abs() < 1e-15);
        let _ = PI;
    }
}
