use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Curvature, RadialPoint};
use crate::oracle::integrate_geodesic;
use crate::quantization::{separable_jet, Jet, ScalarField};

use super::special::{radial_polynomial, SeriesPolynomial};
use super::{Hypergeometric, Level};

/// Tolerance of the norm and overlap integrals.
const OVERLAP_TOL: f64 = 1e-12;

/// `C r^beta (1 + kappa r^2)^s f(r) e^{i m phi}`, or with `e^{-r^2/2}` in place
/// of the power of the lift when flat.
#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub level: Level,
    pub polynomial: SeriesPolynomial,
    /// Normalization constant `C` (1 for the bare state).
    pub scale: f64,
}

impl Eigenstate {
    /// The state with `f(0) = 1` and `C = 1`.
    pub fn new(level: Level) -> Result<Self> {
        let polynomial = match level.hyper {
            Hypergeometric::Gauss { .. } => radial_polynomial(&level)?,
            Hypergeometric::Kummer { a, c } => {
                if a != -f64::from(level.nr) {
                    return Err(Error::Consistency(format!(
                        "Kummer parameter a = {a} is not -N_r = -{} for this energy",
                        level.nr
                    )));
                }
                SeriesPolynomial::kummer(level.nr, c)?
            }
        };
        Ok(Eigenstate { level, polynomial, scale: 1.0 })
    }

    /// The state scaled to unit norm under the invariant measure.
    pub fn normalized(level: Level) -> Result<Self> {
        let mut state = Eigenstate::new(level)?;
        state.scale = state.norm_squared()?.sqrt().recip();
        Ok(state)
    }

    pub fn kappa(&self) -> Curvature {
        self.level.kappa
    }

    /// `(sign, ln |R|)` of the radial factor, finite wherever `R != 0`.
    fn ln_radial(&self, pt: RadialPoint) -> (f64, f64) {
        let f = self.polynomial.eval(pt.r);
        if f == 0.0 || self.scale == 0.0 || (self.level.beta > 0 && pt.r == 0.0) {
            return (0.0, f64::NEG_INFINITY);
        }
        let power = if self.level.beta == 0 { 0.0 } else { f64::from(self.level.beta) * pt.r.ln() };
        let envelope = match self.level.s {
            Some(s) => s * pt.ln_lift,
            None => -0.5 * pt.r * pt.r,
        };
        (f.signum() * self.scale.signum(), power + envelope + f.abs().ln() + self.scale.abs().ln())
    }

    /// Radial factor `R(r)`.
    pub fn radial(&self, pt: RadialPoint) -> f64 {
        let (sign, ln) = self.ln_radial(pt);
        if sign == 0.0 {
            0.0
        } else {
            sign * ln.exp()
        }
    }

    /// `[R, R', R'']` at a projective radius.
    pub fn radial_jet(&self, pt: RadialPoint) -> [f64; 3] {
        let r = pt.r;
        let beta = self.level.beta as i32;
        let bf = f64::from(beta);
        let a0 = r.powi(beta);
        let a1 = if beta >= 1 { bf * r.powi(beta - 1) } else { 0.0 };
        let a2 = if beta >= 2 { bf * (bf - 1.0) * r.powi(beta - 2) } else { 0.0 };
        let (b, u, v) = match self.level.s {
            Some(s) => {
                let k = self.level.kappa.value();
                let b = (s * pt.ln_lift).exp();
                let u = 2.0 * s * k * r / pt.lift;
                let v = 2.0 * s * k / pt.lift + 4.0 * s * (s - 1.0) * k * k * r * r / (pt.lift * pt.lift);
                (b, u, v)
            }
            None => ((-0.5 * r * r).exp(), -r, r * r - 1.0),
        };
        let [f, f1, f2] = self.polynomial.eval_with_derivatives(r);
        let c = self.scale * b;
        [
            c * a0 * f,
            c * (a1 * f + a0 * f1 + u * a0 * f),
            c * (a2 * f + 2.0 * a1 * f1 + a0 * f2 + 2.0 * u * (a1 * f + a0 * f1) + v * a0 * f),
        ]
    }

    /// `2 pi * integral R^2 dmu` over the whole chart.
    pub fn norm_squared(&self) -> Result<f64> {
        overlap(self, self)
    }
}

impl ScalarField for Eigenstate {
    fn jet(&self, kappa: Curvature, r: f64, phi: f64) -> Result<Jet> {
        if kappa != self.level.kappa {
            return Err(Error::Parameter(format!(
                "state belongs to kappa={} but was evaluated at kappa={}",
                self.level.kappa.value(),
                kappa.value()
            )));
        }
        kappa.check_radius(r)?;
        let pt = RadialPoint::from_projective(kappa, r);
        Ok(separable_jet(self.radial_jet(pt), self.level.m, phi))
    }
}

/// `<a, b>` under the invariant measure; the angular integral gives `2 pi`
/// for equal `m` and zero otherwise.
fn overlap(a: &Eigenstate, b: &Eigenstate) -> Result<f64> {
    if a.level.kappa != b.level.kappa {
        return Err(Error::Parameter("overlap of states on different surfaces".into()));
    }
    if a.level.m != b.level.m {
        return Ok(0.0);
    }
    let kappa = a.level.kappa;
    // R_a R_b dmu = R_a R_b S(rho) drho with S = r (1 + kappa r^2)^{-1/2}
    let integrand = |pt: RadialPoint| {
        let (sa, la) = a.ln_radial(pt);
        let (sb, lb) = b.ln_radial(pt);
        if sa * sb == 0.0 || pt.r == 0.0 {
            return 0.0;
        }
        sa * sb * (la + lb + pt.r.ln() - 0.5 * pt.ln_lift).exp()
    };
    let radial = integrate_geodesic(integrand, kappa, 0.0, kappa.geodesic_extent(), OVERLAP_TOL)?;
    Ok(TAU * radial)
}

/// Normalization constant `C` of the level.
pub fn normalization_constant(level: &Level) -> Result<f64> {
    Ok(Eigenstate::normalized(*level)?.scale)
}

/// `Psi(r, phi)`, unnormalized (`C = 1`) or normalized.
pub fn wavefunction(level: &Level, r: f64, phi: f64, normalized: bool) -> Result<Complex64> {
    let state = if normalized { Eigenstate::normalized(*level)? } else { Eigenstate::new(*level)? };
    state.level.kappa.check_radius(r)?;
    let value = state.radial(RadialPoint::from_projective(state.level.kappa, r));
    Ok(Complex64::from_polar(1.0, f64::from(state.level.m) * phi) * value)
}

/// Matrix of overlaps `<a_i, a_j>`.
pub fn gram_matrix(states: &[Eigenstate]) -> Result<Vec<Vec<f64>>> {
    let n = states.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = overlap(&states[i], &states[j])?;
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PolarPoint;
    use crate::quantization::schrodinger_residual;
    use crate::spectrum::admissible_levels;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    #[test]
    fn wavefunction_examples() {
        let ground = Level::new(k(0.0), 0, 0).unwrap();
        assert!((wavefunction(&ground, 1.0, 0.0, false).unwrap().re - 0.60653066).abs() < 1e-8);
        let l = Level::new(k(1.0), 0, 2).unwrap();
        assert_eq!(wavefunction(&l, 0.0, 0.3, false).unwrap().norm(), 0.0);
        let h = Level::new(k(-0.5), 0, 0).unwrap();
        assert!((wavefunction(&h, 1.0, 0.0, false).unwrap().re - 0.5f64.powf(0.7807764)).abs() < 1e-7);
    }

    #[test]
    fn flat_ground_normalization() {
        let c = normalization_constant(&Level::new(k(0.0), 0, 0).unwrap()).unwrap();
        assert!((c - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normalized_states_have_unit_norm() {
        for &kv in &[-0.5, 0.0, 1.0] {
            for l in admissible_levels(k(kv), 3) {
                let s = Eigenstate::normalized(l).unwrap();
                assert!((s.norm_squared().unwrap() - 1.0).abs() < 1e-8, "{kv} {l:?}");
            }
        }
    }

    #[test]
    fn sphere_states_are_orthogonal() {
        let a = Eigenstate::normalized(Level::new(k(1.0), 0, 0).unwrap()).unwrap();
        let b = Eigenstate::normalized(Level::new(k(1.0), 1, 0).unwrap()).unwrap();
        assert!(gram_matrix(&[a, b]).unwrap()[0][1].abs() < 1e-8);
    }

    #[test]
    fn analytic_jet_matches_differences() {
        let s = Eigenstate::new(Level::new(k(0.7), 1, 2).unwrap()).unwrap();
        for r in [0.2, 0.9, 2.0] {
            let pt = |x: f64| RadialPoint::from_projective(k(0.7), x);
            let [_, d1, d2] = s.radial_jet(pt(r));
            let h = 1e-4;
            let fd1 = (s.radial(pt(r + h)) - s.radial(pt(r - h))) / (2.0 * h);
            let fd2 = (s.radial(pt(r + h)) - 2.0 * s.radial(pt(r)) + s.radial(pt(r - h))) / (h * h);
            assert!((d1 - fd1).abs() < 1e-6 * d1.abs().max(1.0));
            assert!((d2 - fd2).abs() < 1e-5 * d2.abs().max(1.0));
        }
    }

    #[test]
    fn eigenstates_solve_the_schrodinger_equation() {
        for &kv in &[-0.5, -0.1, 0.0, 0.5, 1.0] {
            for l in admissible_levels(k(kv), 4) {
                let s = Eigenstate::normalized(l).unwrap();
                let rmax = if kv < 0.0 { 0.95 / (-kv).sqrt() } else { 3.0 };
                for i in 1..=20 {
                    let r = rmax * i as f64 / 20.0;
                    let res = schrodinger_residual(k(kv), l.e_bar, &s, PolarPoint::new(r, 0.4 * i as f64)).unwrap();
                    assert!(res.norm() < 1e-6, "{kv} {l:?} r={r}: {res}");
                }
            }
        }
    }
}
