use crate::error::{Error, Result};

use super::Level;

/// Guard on the number of terms of a non-terminating confluent series.
const KUMMER_MAX_TERMS: usize = 10_000;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn check_lower(c: f64) -> Result<()> {
    if is_nonpositive_integer(c) || !c.is_finite() {
        return Err(Error::Parameter(format!("lower parameter c = {c} must not be a nonpositive integer")));
    }
    Ok(())
}

/// Terminating Gauss series `2F1(-N, b; c; z)`.
pub fn gauss_2f1_polynomial(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !is_nonpositive_integer(a) {
        return Err(Error::Parameter(format!("upper parameter a = {a} must be a nonpositive integer")));
    }
    check_lower(c)?;
    let n = (-a) as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// Confluent hypergeometric function `M(a; c; z)`.
///
/// Sums until the term falls below machine precision relative to the sum, or
/// exactly when `a` is a nonpositive integer.
pub fn kummer_m(a: f64, c: f64, z: f64) -> Result<f64> {
    check_lower(c)?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..KUMMER_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // past the largest term the tail is geometric with ratio |z|/k
        if kf > z.abs() && term.abs() <= f64::EPSILON * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!("Kummer series M({a}; {c}; {z}) not converged in {KUMMER_MAX_TERMS} terms")))
}

/// Polynomial `f(r) = sum_k a_k r^k` with only even powers populated.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPolynomial {
    /// `coeffs[k]` multiplies `r^k`.
    pub coeffs: Vec<f64>,
}

impl SeriesPolynomial {
    /// Coefficients of `M(-N; c; r^2)`.
    pub fn kummer(n: u32, c: f64) -> Result<Self> {
        check_lower(c)?;
        let mut coeffs = vec![0.0; 2 * n as usize + 1];
        let a = -f64::from(n);
        let mut t = 1.0;
        coeffs[0] = 1.0;
        for j in 0..n as usize {
            let jf = j as f64;
            t *= (a + jf) / ((c + jf) * (jf + 1.0));
            coeffs[2 * j + 2] = t;
        }
        Ok(SeriesPolynomial { coeffs })
    }

    /// Coefficients of `2F1(-N, b; c; -kappa r^2)` expanded in `r`.
    pub fn gauss(n: u32, b: f64, c: f64, kappa: f64) -> Result<Self> {
        check_lower(c)?;
        let mut coeffs = vec![0.0; 2 * n as usize + 1];
        let a = -f64::from(n);
        let mut t = 1.0;
        coeffs[0] = 1.0;
        for j in 0..n as usize {
            let jf = j as f64;
            t *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * (-kappa);
            coeffs[2 * j + 2] = t;
        }
        Ok(SeriesPolynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// `[f(r), f'(r), f''(r)]`.
    pub fn eval_with_derivatives(&self, r: f64) -> [f64; 3] {
        let (mut f, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * r + 2.0 * d1;
            d1 = d1 * r + f;
            f = f * r + c;
        }
        [f, d1, d2]
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
    }
}

/// Even power series solving the reduced radial equation, built with the
/// two-step recursion
///
/// ```text
/// a_{k+2} = [(k+beta+1) q - (k+beta+1)^2 kappa - 2E] a_k / ((k+2)(k+2 beta+2)),  a_0 = 1, a_1 = 0.
/// ```
///
/// For an eigenvalue the numerator vanishes at `k = 2 N_r` and the series is
/// a polynomial; if it does not, the energy is inconsistent and a
/// [`Error::Consistency`] is returned.
pub fn radial_polynomial(level: &Level) -> Result<SeriesPolynomial> {
    let k = level.kappa.value();
    let beta = f64::from(level.beta);
    let q = level.q;
    let e2 = 2.0 * level.e_bar;
    let degree = 2 * level.nr as usize;
    let mut coeffs = vec![0.0; degree + 1];
    coeffs[0] = 1.0;
    let numerator = |idx: usize| {
        let j = idx as f64 + beta + 1.0;
        let parts = [j * q, j * j * k, e2];
        (parts[0] - parts[1] - parts[2], parts.iter().map(|p| p.abs()).sum::<f64>())
    };
    for idx in (0..degree).step_by(2) {
        let (num, _) = numerator(idx);
        let kf = idx as f64;
        coeffs[idx + 2] = num * coeffs[idx] / ((kf + 2.0) * (kf + 2.0 * beta + 2.0));
    }
    let (tail, scale) = numerator(degree);
    if tail.abs() > 1e-9 * scale.max(1.0) {
        return Err(Error::Consistency(format!(
            "series for (N_r={}, m={}) does not terminate at degree {degree}: numerator {tail:e}",
            level.nr, level.m
        )));
    }
    Ok(SeriesPolynomial { coeffs })
}
