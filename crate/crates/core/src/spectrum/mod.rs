//! Closed-form bound-state spectrum of the curved oscillator.
//!
//! In dimensionless units the energy of the level with radial number `N_r`
//! and angular number `m` depends only on `n = 2 N_r + |m|`:
//!
//! ```text
//! E = (n + 1)/2 * [ (n + 1) kappa + sqrt(kappa^2 + 4) ]
//! ```
//!
//! On the hyperbolic plane only finitely many levels are normalizable: those
//! with `q = 2 kappa (n + 1) + sqrt(kappa^2 + 4) > 0`.

mod special;
mod wavefunction;

pub use special::{gauss_2f1_polynomial, kummer_m, radial_polynomial, SeriesPolynomial};
pub use wavefunction::{gram_matrix, normalization_constant, wavefunction, Eigenstate};

use crate::error::{Error, Result};
use crate::geometry::Curvature;
use crate::quantization::{Dimension, PhysicalScales};

/// Which sign in front of the square root the energy formula uses.
///
/// Only [`EnergyBranch::Corrected`] is physical; [`EnergyBranch::AsPrinted`]
/// (the minus root, which gives negative energies in the flat limit) exists
/// so that the verification suites can demonstrate that they reject it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyBranch {
    #[default]
    Corrected,
    AsPrinted,
}

/// Parameters of the special function carrying the radial polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hypergeometric {
    /// `2F1(a, b; c; -kappa r^2)`, curved case.
    Gauss { a: f64, b: f64, c: f64 },
    /// `M(a; c; r^2)`, flat case.
    Kummer { a: f64, c: f64 },
}

/// A bound state `(N_r, m)` together with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub kappa: Curvature,
    pub nr: u32,
    pub m: i32,
    /// `|m|`.
    pub beta: u32,
    /// `2 N_r + |m|`.
    pub n: u32,
    pub e_bar: f64,
    pub q: f64,
    /// Exponent of `1 + kappa r^2` in the radial factor; `None` when flat.
    pub s: Option<f64>,
    pub hyper: Hypergeometric,
    pub branch: EnergyBranch,
}

fn principal(nr: u32, m: i32) -> u32 {
    2 * nr + m.unsigned_abs()
}

/// `sqrt(kappa^2 + 4) / (2 |kappa|)`: levels need `n + 1` strictly below this
/// on the hyperbolic plane.
pub fn admissibility_bound(kappa: Curvature) -> f64 {
    let k = kappa.value();
    if k >= 0.0 {
        f64::INFINITY
    } else {
        (k * k + 4.0).sqrt() / (2.0 * k.abs())
    }
}

fn closed_form_q(kappa: Curvature, n: u32, branch: EnergyBranch) -> f64 {
    let k = kappa.value();
    let root = (k * k + 4.0).sqrt();
    let n1 = f64::from(n) + 1.0;
    match branch {
        EnergyBranch::Corrected => 2.0 * k * n1 + root,
        EnergyBranch::AsPrinted => 2.0 * k * n1 - root,
    }
}

impl Level {
    pub fn new(kappa: Curvature, nr: u32, m: i32) -> Result<Level> {
        Level::with_branch(kappa, nr, m, EnergyBranch::Corrected)
    }

    pub fn with_branch(kappa: Curvature, nr: u32, m: i32, branch: EnergyBranch) -> Result<Level> {
        let n = principal(nr, m);
        let beta = m.unsigned_abs();
        let k = kappa.value();
        // admissibility is a property of the state, not of the energy formula
        if closed_form_q(kappa, n, EnergyBranch::Corrected) <= 0.0 {
            return Err(Error::NotAdmissible { kappa: k, nr, m, bound: admissibility_bound(kappa) });
        }
        let q = closed_form_q(kappa, n, branch);
        let n1 = f64::from(n) + 1.0;
        let root = (k * k + 4.0).sqrt();
        let e_bar = match branch {
            EnergyBranch::Corrected => 0.5 * n1 * (n1 * k + root),
            EnergyBranch::AsPrinted => 0.5 * n1 * (n1 * k - root),
        };
        let c = f64::from(beta) + 1.0;
        let (s, hyper) = if kappa.is_flat() {
            (None, Hypergeometric::Kummer { a: 0.5 * (1.0 + f64::from(beta) - e_bar), c })
        } else {
            let b = c + f64::from(nr) - q / (2.0 * k);
            (Some(0.25 - q / (4.0 * k)), Hypergeometric::Gauss { a: -f64::from(nr), b, c })
        };
        Ok(Level { kappa, nr, m, beta, n, e_bar, q, s, hyper, branch })
    }

    /// Number of states sharing this level's energy.
    pub fn degeneracy(&self) -> u32 {
        self.n + 1
    }
}

/// `q = sqrt(kappa^2 + 8 kappa E + 4)`.
pub fn q_parameter(kappa: Curvature, e_bar: f64) -> Result<f64> {
    let k = kappa.value();
    let radicand = k * k + 8.0 * k * e_bar + 4.0;
    if radicand < 0.0 {
        return Err(Error::Domain(format!("kappa^2 + 8 kappa E + 4 = {radicand} is negative")));
    }
    Ok(radicand.sqrt())
}

/// Dimensionless energy of `(N_r, m)`.
pub fn energy_dimensionless(kappa: Curvature, nr: u32, m: i32) -> Result<f64> {
    Ok(Level::new(kappa, nr, m)?.e_bar)
}

/// Energy in physical units for a physical curvature.
pub fn energy_physical(scales: &PhysicalScales, kappa_physical: f64, nr: u32, m: i32) -> Result<f64> {
    let kappa = Curvature::new(scales.to_dimensionless(Dimension::Curvature, kappa_physical))?;
    let e_bar = energy_dimensionless(kappa, nr, m)?;
    Ok(scales.from_dimensionless(Dimension::Energy, e_bar))
}

/// All admissible states with `n <= max_n`, ordered by `n`, then `|m|`, then
/// positive `m` first. On the hyperbolic plane this is the complete bound
/// set once `max_n` reaches the admissibility bound.
pub fn admissible_levels(kappa: Curvature, max_n: u32) -> Vec<Level> {
    admissible_levels_with(kappa, max_n, EnergyBranch::Corrected)
}

pub fn admissible_levels_with(kappa: Curvature, max_n: u32, branch: EnergyBranch) -> Vec<Level> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        if closed_form_q(kappa, n, EnergyBranch::Corrected) <= 0.0 {
            break;
        }
        for nr in (0..=n / 2).rev() {
            let beta = (n - 2 * nr) as i32;
            for m in if beta == 0 { vec![0] } else { vec![beta, -beta] } {
                out.push(Level::with_branch(kappa, nr, m, branch).expect("admissibility checked above"));
            }
        }
    }
    out
}

/// Largest admissible `n`, or `None` when every `n` is admissible. Fails
/// with [`Error::NotAdmissible`] when not even the ground state is bound,
/// which happens for `kappa <= -2/sqrt(3)`.
pub fn max_admissible_n(kappa: Curvature) -> Result<Option<u32>> {
    let bound = admissibility_bound(kappa);
    if bound.is_infinite() {
        return Ok(None);
    }
    if closed_form_q(kappa, 0, EnergyBranch::Corrected) <= 0.0 {
        return Err(Error::NotAdmissible { kappa: kappa.value(), nr: 0, m: 0, bound });
    }
    // n + 1 < bound
    let mut n = (bound - 1.0).ceil().max(0.0) as u32;
    while n > 0 && closed_form_q(kappa, n, EnergyBranch::Corrected) <= 0.0 {
        n -= 1;
    }
    Ok(Some(n))
}

/// `(a, b, c)` of the Gauss hypergeometric polynomial; undefined when flat.
pub fn hypergeometric_params(level: &Level) -> Result<(f64, f64, f64)> {
    match level.hyper {
        Hypergeometric::Gauss { a, b, c } => Ok((a, b, c)),
        Hypergeometric::Kummer { .. } => Err(Error::ConfluentBranch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_parameter(k(0.0), 123.0).unwrap(), 2.0);
        assert!((q_parameter(k(1.0), 1.6180340).unwrap() - 4.2360680).abs() < 1e-6);
        assert!(matches!(q_parameter(k(-1.0), 10.0), Err(Error::Domain(_))));
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy_dimensionless(k(0.0), 0, 0).unwrap(), 1.0);
        assert!((energy_dimensionless(k(1.0), 0, 0).unwrap() - 1.6180340).abs() < 1e-7);
        assert!((energy_dimensionless(k(-0.5), 0, 0).unwrap() - 0.7807764).abs() < 1e-7);
        match energy_dimensionless(k(-0.5), 1, 0) {
            Err(Error::NotAdmissible { bound, .. }) => assert!((bound - 2.0615528).abs() < 1e-7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn physical_energy() {
        let unit = PhysicalScales::default();
        assert_eq!(energy_physical(&unit, 0.0, 0, 0).unwrap(), 1.0);
        let s = PhysicalScales::new(1.0, 1.0, 2.0).unwrap();
        assert_eq!(energy_physical(&s, 0.0, 0, 0).unwrap(), 2.0);
        // fixed dimensionless curvature: linear in omega
        let e = |w: f64| {
            let s = PhysicalScales::new(1.0, 1.0, w).unwrap();
            energy_physical(&s, 0.3 * w, 1, 1).unwrap()
        };
        assert!((e(3.0) - 3.0 * e(1.0)).abs() < 1e-12);
    }

    #[test]
    fn level_enumeration() {
        let set: Vec<(u32, i32)> = admissible_levels(k(-0.5), 50).iter().map(|l| (l.nr, l.m)).collect();
        assert_eq!(set, vec![(0, 0), (0, 1), (0, -1)]);
        let deep = admissible_levels(k(-0.1), 100);
        assert_eq!(deep.iter().map(|l| l.n).max(), Some(9));
        assert_eq!(max_admissible_n(k(-0.1)).unwrap(), Some(9));
        assert_eq!(max_admissible_n(k(-0.5)).unwrap(), Some(1));
        assert!(max_admissible_n(k(-1.2)).is_err());
        assert!(admissible_levels(k(-1.2), 5).is_empty());
        assert_eq!(max_admissible_n(k(1.0)).unwrap(), None);
        assert_eq!(admissible_levels(k(1.0), 20).len(), (1..=21).sum::<usize>());
    }

    #[test]
    fn degenerate_levels_share_energy() {
        for &kv in &[-0.1, 0.0, 0.5] {
            for l in admissible_levels(k(kv), 8) {
                let first = Level::new(k(kv), 0, l.n as i32).unwrap();
                assert_eq!(l.e_bar, first.e_bar);
            }
        }
    }

    #[test]
    fn hypergeometric_examples() {
        let (a, b, c) = hypergeometric_params(&Level::new(k(1.0), 0, 0).unwrap()).unwrap();
        assert_eq!((a, c), (0.0, 1.0));
        assert!((b + 1.1180340).abs() < 1e-7);
        let (a, b, _) = hypergeometric_params(&Level::new(k(1.0), 1, 0).unwrap()).unwrap();
        assert_eq!(a, -1.0);
        assert!((b + 2.1180340).abs() < 1e-7);
        assert!(matches!(hypergeometric_params(&Level::new(k(0.0), 0, 0).unwrap()), Err(Error::ConfluentBranch)));
    }

    #[test]
    fn hypergeometric_sum_and_product() {
        for &kv in &[-0.5, -0.1, 0.5, 1.0] {
            for l in admissible_levels(k(kv), 6) {
                let (a, b, c) = hypergeometric_params(&l).unwrap();
                let beta = f64::from(l.beta);
                assert!((a + b - (2.0 * (beta + 1.0) * kv - l.q) / (2.0 * kv)).abs() < 1e-12 * b.abs().max(1.0));
                let prod = ((beta + 1.0).powi(2) * kv - (beta + 1.0) * l.q + 2.0 * l.e_bar) / (4.0 * kv);
                assert!((a * b - prod).abs() < 1e-12 * prod.abs().max(1.0), "{kv} {l:?}");
                assert_eq!(c, beta + 1.0);
                let q = q_parameter(k(kv), l.e_bar).unwrap();
                assert!((q - l.q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn printed_branch_is_negative_when_flat() {
        let l = Level::with_branch(k(0.0), 0, 0, EnergyBranch::AsPrinted).unwrap();
        assert_eq!(l.e_bar, -1.0);
    }
}
