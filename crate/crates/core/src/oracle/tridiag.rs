use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 300;
const INVERSE_ITERATIONS: usize = 6;

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Parameter(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("tridiagonal matrix has non-finite entries".into()));
        }
        Ok(SymTridiagonal { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        self.count_below_with(x, self.pivot_floor())
    }

    fn pivot_floor(&self) -> f64 {
        let max_off = self.off.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * max_off
    }

    fn count_below_with(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / d;
            }
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (from 0) by bisection.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::Parameter(format!("eigenvalue index {k} out of range for size {}", self.len())));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        lo -= pad;
        hi += pad;
        let pivmin = self.pivot_floor();
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                return Ok(mid);
            }
            if self.count_below_with(mid, pivmin) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::Convergence(format!("bisection for eigenvalue {k} did not converge")))
    }

    /// Unit eigenvector for an eigenvalue computed by [`eigenvalue`], made
    /// orthogonal to `previous` (vectors of nearby eigenvalues).
    ///
    /// [`eigenvalue`]: SymTridiagonal::eigenvalue
    pub fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = self.len();
        let lu = ShiftedLu::new(self, lambda);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
        let (lo, hi) = self.gershgorin();
        let target = 1e-13 * lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..INVERSE_ITERATIONS {
            for p in previous {
                let dot: f64 = p.iter().zip(&x).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(p).for_each(|(xi, pi)| *xi -= dot * pi);
            }
            lu.solve(&mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::Convergence("inverse iteration broke down".into()));
            }
            x.iter_mut().for_each(|v| *v /= norm);
            if self.residual(&x, lambda) <= target {
                break;
            }
        }
        for p in previous {
            let dot: f64 = p.iter().zip(&x).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(p).for_each(|(xi, pi)| *xi -= dot * pi);
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        // fix the sign: first significant component positive
        let lead = x.iter().copied().find(|v| v.abs() > 1e-8).unwrap_or(1.0);
        if lead < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        Ok(x)
    }

    /// `|| (T - lambda) x ||_2`.
    pub fn residual(&self, x: &[f64], lambda: f64) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = (self.diag[i] - lambda) * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y * y
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// LU factorization with partial pivoting of `T - lambda I`.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &SymTridiagonal, lambda: f64) -> Self {
        let n = t.len();
        let (lo, hi) = t.gershgorin();
        let tiny = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        let mut dl = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - lambda).collect();
        let mut du = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        ShiftedLu { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in 0..n {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k).unwrap() - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let t = SymTridiagonal::new(
            (0..200).map(|i| (i as f64 * 0.37).sin() * 3.0).collect(),
            (0..199).map(|i| 1.0 + 0.5 * (i as f64).cos()).collect(),
        )
        .unwrap();
        let mut vecs: Vec<Vec<f64>> = Vec::new();
        for k in 0..6 {
            let l = t.eigenvalue(k).unwrap();
            let v = t.eigenvector(l, &vecs).unwrap();
            assert!(t.residual(&v, l) < 1e-12);
            vecs.push(v);
        }
        for i in 0..6 {
            for j in 0..6 {
                let d: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shape_and_index_errors() {
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(laplacian(3).eigenvalue(3).is_err());
        assert_eq!(laplacian(4).count_below(0.0), 0);
        assert_eq!(laplacian(4).count_below(5.0), 4);
    }
}
