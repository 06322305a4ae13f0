use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::{Curvature, RadialPoint};

const GAUSS_ORDER: usize = 20;
const MAX_SEGMENTS: usize = 20_000;

/// Nodes and weights of the Gauss-Legendre rule on `[-1, 1]`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let nf = n as f64;
        (0..n)
            .map(|i| {
                // Tricomi's estimate, then Newton on P_n
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let kf = k as f64;
                        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = nf * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

fn gauss_on<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * gauss_legendre().iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Segment {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Self {
        let m = 0.5 * (a + b);
        let whole = gauss_on(f, a, b);
        let value = gauss_on(f, a, m) + gauss_on(f, m, b);
        Segment { a, b, value, error: (value - whole).abs() }
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive Gauss-Legendre integration of `f` over the finite interval
/// `[a, b]`, bisecting the segment with the largest error estimate until the
/// total estimate is below `max(tol, tol * |I|)`.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Parameter(format!("interval [{a}, {b}] must be finite")));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut heap = BinaryHeap::new();
    let first = Segment::new(&f, a, b);
    let (mut total, mut error) = (first.value, first.error);
    heap.push(first);
    loop {
        if !total.is_finite() {
            return Err(Error::Convergence("integrand is not finite on the interval".into()));
        }
        if error <= tol.max(tol * total.abs()) {
            return Ok(total);
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::Convergence(format!(
                "quadrature error estimate {error:e} above tolerance {tol:e} after {MAX_SEGMENTS} segments"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            return Err(Error::Convergence("quadrature segment shrank to machine precision".into()));
        }
        let left = Segment::new(&f, worst.a, m);
        let right = Segment::new(&f, m, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // the running sums drift; refresh them occasionally
        if heap.len() % 256 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// `integral g(rho) drho` over geodesic radii, `g` receiving the point with
/// its lift. An infinite upper limit is mapped to `[0, 1)` by
/// `rho = rho_lo + t / (1 - t)`.
pub fn integrate_geodesic<F: Fn(RadialPoint) -> f64>(
    g: F,
    kappa: Curvature,
    rho_lo: f64,
    rho_hi: f64,
    tol: f64,
) -> Result<f64> {
    if !(rho_lo >= 0.0 && rho_hi >= rho_lo) {
        return Err(Error::Parameter(format!("invalid geodesic interval [{rho_lo}, {rho_hi}]")));
    }
    if rho_hi > kappa.geodesic_extent() {
        return Err(Error::Domain(format!("geodesic radius {rho_hi} lies beyond the chart")));
    }
    if rho_hi.is_infinite() {
        let mapped = |t: f64| {
            let u = 1.0 - t;
            let v = g(RadialPoint::from_geodesic(kappa, rho_lo + t / u));
            if v == 0.0 {
                0.0
            } else {
                v / (u * u)
            }
        };
        adaptive_gauss(mapped, 0.0, 1.0, tol)
    } else {
        adaptive_gauss(|rho| g(RadialPoint::from_geodesic(kappa, rho)), rho_lo, rho_hi, tol)
    }
}

/// `integral f dr` between projective radii. `r_hi` may be infinite, which
/// means the edge of the chart: infinity on the plane and sphere, the
/// boundary circle on the hyperbolic plane (where the boundary radius itself
/// is accepted too).
///
/// Curved integrals are evaluated in the geodesic radius, which turns the
/// boundary of the disk into an infinite, smoothly decaying tail and keeps the
/// lift accurate where it underflows in `r`.
pub fn quadrature<F: Fn(RadialPoint) -> f64>(f: F, kappa: Curvature, r_lo: f64, r_hi: f64, tol: f64) -> Result<f64> {
    if !(r_lo >= 0.0 && r_hi >= r_lo) || r_lo.is_infinite() {
        return Err(Error::Parameter(format!("invalid radial interval [{r_lo}, {r_hi}]")));
    }
    if kappa.is_flat() {
        if r_hi.is_infinite() {
            return integrate_geodesic(f, kappa, r_lo, f64::INFINITY, tol);
        }
        return adaptive_gauss(|r| f(RadialPoint::from_projective(kappa, r)), r_lo, r_hi, tol);
    }
    let to_rho = |r: f64| -> Result<f64> {
        match kappa.boundary_radius() {
            Some(rb) if r >= rb && (r.is_infinite() || r == rb) => Ok(f64::INFINITY),
            _ if r.is_infinite() => Ok(kappa.geodesic_extent()),
            _ => kappa.geodesic_radius(r),
        }
    };
    let (a, b) = (to_rho(r_lo)?, to_rho(r_hi)?);
    // dr = (1 + kappa r^2) drho
    integrate_geodesic(|pt| f(pt) * pt.lift, kappa, a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    #[test]
    fn rule_is_exact_for_polynomials() {
        let w: f64 = gauss_legendre().iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
        let i = gauss_on(&|x: f64| x.powi(38), -1.0, 1.0);
        assert!((i - 2.0 / 39.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_examples() {
        let g = quadrature(|p| (-p.r * p.r).exp() * p.r, k(0.0), 0.0, f64::INFINITY, 1e-13).unwrap();
        assert!((g - 0.5).abs() < 1e-12);
        let w = quadrature(|p| p.r / p.lift.powf(1.5), k(1.0), 0.0, f64::INFINITY, 1e-13).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        let h = quadrature(|p| p.r / p.lift.powf(1.5), k(-0.5), 0.0, 1.0, 1e-13).unwrap();
        assert!((h - 0.8284271247461901).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_area_to_the_boundary() {
        // area of the geodesic disk of radius rho is 2 pi (cosh rho - 1) at kappa = -1
        let rb = 1f64.tanh();
        let a = quadrature(|p| p.r / p.lift.powf(1.5), k(-1.0), 0.0, rb, 1e-13).unwrap();
        assert!((a - (1f64.cosh() - 1.0)).abs() < 1e-12);
        // a decaying density reaches the boundary itself
        let b = quadrature(|p| p.r * p.lift.sqrt(), k(-1.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((b - 1.0 / 3.0).abs() < 1e-11, "{b}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        assert!(matches!(adaptive_gauss(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10), Err(Error::Convergence(_))));
        let step = adaptive_gauss(|x: f64| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, 1e-10).unwrap();
        assert!((step - 0.7).abs() < 1e-8, "{step}");
        assert!(matches!(adaptive_gauss(|_| f64::NAN, 0.0, 1.0, 1e-8), Err(Error::Convergence(_))));
    }
}
