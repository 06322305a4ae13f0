//! Independent numerical ground truth for the closed-form spectrum.
//!
//! The radial equation is discretized in the geodesic radius `rho`, where it
//! reads
//!
//! ```text
//! E R = -1/(2 S) (S R')' + 1/2 [ beta^2 / S^2 + T^2 ] R,   S = S_kappa(rho), T = T_kappa(rho)
//! ```
//!
//! with weight `S drho` (the invariant measure). A conservative three-point
//! stencil on the cell centres `(i + 1/2) h` gives a symmetric tridiagonal
//! matrix after scaling by the square root of the weight; its lowest
//! eigenvalues come from Sturm bisection and its vectors from inverse
//! iteration.
//!
//! Working in `rho` rather than the projective radius keeps the grid uniform
//! in physical distance: on the hyperbolic plane the boundary circle moves to
//! infinity and weakly bound states, whose tails stretch over many units of
//! geodesic distance, stay resolved.

mod quadrature;
mod tridiag;

pub use quadrature::{adaptive_gauss, integrate_geodesic, quadrature};
pub use tridiag::SymTridiagonal;

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::geometry::{Curvature, RadialPoint};
use crate::spectrum::{EnergyBranch, Level};

/// Target spacing of default grids.
pub const DEFAULT_SPACING: f64 = 2e-3;
/// Minimum size of default grids.
pub const DEFAULT_POINTS: usize = 8000;
/// Outer radius of the default flat grid.
pub const FLAT_RHO_MAX: f64 = 12.0;
/// Default outer radius on the hyperbolic plane, in units of `1/sqrt(-kappa)`.
const HYPERBOLIC_SPAN: f64 = 40.0;
const MAX_EXTENSIONS: usize = 8;

/// Uniform cell-centred grid `rho_i = (i + 1/2) h`, `i < n_points`, on
/// `[0, rho_max]`, with a Dirichlet wall at `rho_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub kappa: Curvature,
    pub rho_max: f64,
    pub n_points: usize,
    pub h: f64,
}

impl RadialGrid {
    pub const MIN_POINTS: usize = 64;

    pub fn new(kappa: Curvature, rho_max: f64, n_points: usize) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(Error::Parameter(format!("grid needs at least {} points, got {n_points}", Self::MIN_POINTS)));
        }
        if !(rho_max > 0.0 && rho_max.is_finite()) {
            return Err(Error::Parameter(format!("grid radius must be positive and finite, got {rho_max}")));
        }
        if rho_max > kappa.geodesic_extent() * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "grid radius {rho_max} exceeds the geodesic extent {} of the chart",
                kappa.geodesic_extent()
            )));
        }
        let rho_max = rho_max.min(kappa.geodesic_extent());
        Ok(RadialGrid { kappa, rho_max, n_points, h: rho_max / n_points as f64 })
    }

    /// Default grid: the whole hemisphere on the sphere, `rho <= 12` on the
    /// plane, `rho <= 40/sqrt(-kappa)` on the hyperbolic plane, with spacing
    /// at most `2e-3` and at least 8000 points.
    pub fn for_curvature(kappa: Curvature) -> Self {
        let k = kappa.value();
        let rho_max = if k > 0.0 {
            kappa.geodesic_extent()
        } else if k == 0.0 {
            FLAT_RHO_MAX
        } else {
            HYPERBOLIC_SPAN / kappa.root()
        };
        let n = ((rho_max / DEFAULT_SPACING).ceil() as usize).max(DEFAULT_POINTS);
        RadialGrid::new(kappa, rho_max, n).expect("default grid parameters are valid")
    }

    /// Same domain, half the spacing.
    pub fn refined(&self) -> Self {
        RadialGrid { n_points: 2 * self.n_points, h: 0.5 * self.h, ..*self }
    }

    /// Twice the domain at the same spacing; the sphere's domain is already
    /// maximal and is returned unchanged.
    pub fn extended(&self) -> Self {
        if self.kappa.value() > 0.0 {
            return *self;
        }
        RadialGrid { rho_max: 2.0 * self.rho_max, n_points: 2 * self.n_points, ..*self }
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h
    }

    /// Projective radius of the outer wall (infinite at the equator).
    pub fn r_max(&self) -> f64 {
        if self.rho_max >= self.kappa.geodesic_extent() {
            return f64::INFINITY;
        }
        RadialPoint::from_geodesic(self.kappa, self.rho_max).r
    }
}

/// `ln S_kappa(rho)` without overflow for large hyperbolic radii.
fn ln_sine(kappa: Curvature, rho: f64) -> f64 {
    let k = kappa.value();
    if k == 0.0 {
        return rho.ln();
    }
    let a = kappa.root();
    let x = a * rho;
    if k > 0.0 {
        (x.sin() / a).ln()
    } else {
        // ln sinh x = x + ln(1 - e^{-2x}) - ln 2
        x + (-(-2.0 * x).exp_m1()).ln() - LN_2 - a.ln()
    }
}

/// Lower edge of the continuum on the hyperbolic plane, `(kappa^2 + 4)/(8 |kappa|)`.
pub fn continuum_threshold(kappa: Curvature) -> Option<f64> {
    let k = kappa.value();
    (k < 0.0).then(|| (k * k + 4.0) / (8.0 * k.abs()))
}

/// Output of [`radial_eigensolve`].
#[derive(Debug, Clone)]
pub struct RadialEigenResult {
    pub grid: RadialGrid,
    pub beta: u32,
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// `R(rho_i)` for each eigenvalue, normalized so that
    /// `sum_i S(rho_i) h R(rho_i)^2 = 1` and positive near the origin.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Continuum edge (hyperbolic plane only).
    pub threshold: Option<f64>,
    /// Number of discrete eigenvalues below the continuum edge.
    pub bound_count: Option<usize>,
}

impl RadialEigenResult {
    /// Quadrature weights `S(rho_i) h` of the discrete inner product.
    pub fn weights(&self) -> Vec<f64> {
        let g = &self.grid;
        (0..g.n_points).map(|i| ln_sine(g.kappa, g.node(i)).exp() * g.h).collect()
    }

    /// `max |<R_i, R_j> - delta_ij|` under the discrete weights.
    pub fn orthonormality_defect(&self) -> f64 {
        let w = self.weights();
        let v = &self.eigenvectors;
        let mut worst: f64 = 0.0;
        for i in 0..v.len() {
            for j in 0..=i {
                let dot: f64 = v[i].iter().zip(&v[j]).zip(&w).map(|((a, b), w)| a * b * w).sum();
                worst = worst.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }
}

/// Scaled matrix `W^{-1/2} A W^{-1/2}` and the log-weights `ln S(rho_i)`.
fn assemble(kappa: Curvature, beta: u32, grid: &RadialGrid) -> Result<(SymTridiagonal, Vec<f64>)> {
    let n = grid.n_points;
    let h2 = grid.h * grid.h;
    let b2 = f64::from(beta).powi(2);
    let ln_s: Vec<f64> = (0..n).map(|i| ln_sine(kappa, grid.node(i))).collect();
    // faces at rho = (i + 1) h; the face at rho = 0 carries no flux
    let ln_face: Vec<f64> = (0..n).map(|i| ln_sine(kappa, (i + 1) as f64 * grid.h)).collect();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let below = if i == 0 { 0.0 } else { (ln_face[i - 1] - ln_s[i]).exp() };
        // the outer wall is a Dirichlet face, half a cell beyond the last node
        let above = (ln_face[i] - ln_s[i]).exp() * if i + 1 == n { 2.0 } else { 1.0 };
        let t = RadialPoint::from_geodesic(kappa, grid.node(i)).r;
        let potential = 0.5 * (b2 * (-2.0 * ln_s[i]).exp() + t * t);
        diag.push(0.5 * (below + above) / h2 + potential);
    }
    let off = (0..n - 1).map(|i| -0.5 * (ln_face[i] - 0.5 * (ln_s[i] + ln_s[i + 1])).exp() / h2).collect();
    Ok((SymTridiagonal::new(diag, off)?, ln_s))
}

fn solve(kappa: Curvature, beta: u32, count: usize, grid: &RadialGrid, vectors: bool) -> Result<RadialEigenResult> {
    if grid.kappa != kappa {
        return Err(Error::Parameter(format!(
            "grid built for kappa={} used at kappa={}",
            grid.kappa.value(),
            kappa.value()
        )));
    }
    if count == 0 || count > grid.n_points {
        return Err(Error::Parameter(format!("cannot extract {count} eigenvalues from {} points", grid.n_points)));
    }
    let (matrix, ln_s) = assemble(kappa, beta, grid)?;
    let eigenvalues = (0..count).map(|k| matrix.eigenvalue(k)).collect::<Result<Vec<_>>>()?;
    let mut eigenvectors = Vec::new();
    if vectors {
        let mut raw: Vec<Vec<f64>> = Vec::with_capacity(count);
        for &lambda in &eigenvalues {
            let v = matrix.eigenvector(lambda, &raw)?;
            raw.push(v);
        }
        let inv_sqrt_h = grid.h.sqrt().recip();
        eigenvectors = raw
            .into_iter()
            .map(|v| v.iter().zip(&ln_s).map(|(x, ls)| x * (-0.5 * ls).exp() * inv_sqrt_h).collect())
            .collect();
    }
    let threshold = continuum_threshold(kappa);
    let bound_count = threshold.map(|t| matrix.count_below(t));
    Ok(RadialEigenResult { grid: *grid, beta, eigenvalues, eigenvectors, threshold, bound_count })
}

/// Lowest `count` eigenpairs of the radial problem with angular number `beta`.
pub fn radial_eigensolve(kappa: Curvature, beta: u32, count: usize, grid: &RadialGrid) -> Result<RadialEigenResult> {
    solve(kappa, beta, count, grid, true)
}

/// Lowest `count` eigenvalues only.
pub fn radial_eigenvalues(kappa: Curvature, beta: u32, count: usize, grid: &RadialGrid) -> Result<RadialEigenResult> {
    solve(kappa, beta, count, grid, false)
}

/// Starting from the default grid, doubles the domain (at fixed spacing)
/// until the lowest `count` bound eigenvalues move by less than `tol`
/// relative. The sphere needs no search: its chart ends at the equator.
pub fn converged_grid(kappa: Curvature, beta: u32, count: usize, tol: f64) -> Result<RadialGrid> {
    let mut grid = RadialGrid::for_curvature(kappa);
    if kappa.value() > 0.0 {
        return Ok(grid);
    }
    let bound = |res: &RadialEigenResult| -> Vec<f64> {
        let limit = res.bound_count.unwrap_or(usize::MAX).min(count);
        res.eigenvalues.iter().copied().take(limit).collect()
    };
    let mut previous = bound(&radial_eigenvalues(kappa, beta, count, &grid)?);
    for _ in 0..MAX_EXTENSIONS {
        let next = grid.extended();
        let current = bound(&radial_eigenvalues(kappa, beta, count, &next)?);
        let settled = current.len() == previous.len()
            && current.iter().zip(&previous).all(|(a, b)| (a - b).abs() <= tol * a.abs().max(1e-300));
        grid = next;
        if settled {
            return Ok(grid);
        }
        previous = current;
    }
    Err(Error::Convergence(format!(
        "radial eigenvalues did not settle to {tol:e} after {MAX_EXTENSIONS} domain doublings"
    )))
}

/// Richardson extrapolation of a second-order quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Richardson {
    pub value: f64,
    /// Observed convergence order; `None` when the data cannot determine it.
    pub order: Option<f64>,
}

impl Richardson {
    /// `(4 E_{h/2} - E_h) / 3`. The order is left undetermined.
    pub fn from_pair(coarse: f64, fine: f64) -> Self {
        Richardson { value: (4.0 * fine - coarse) / 3.0, order: None }
    }

    /// Extrapolates the finest pair and reports
    /// `log2((E_h - E_{h/2}) / (E_{h/2} - E_{h/4}))`.
    pub fn from_triple(coarse: f64, medium: f64, fine: f64) -> Self {
        let ratio = (coarse - medium) / (medium - fine);
        let order = (ratio.is_finite() && ratio > 0.0).then(|| ratio.log2());
        Richardson { value: (4.0 * fine - medium) / 3.0, order }
    }
}

/// One line of a closed-form versus oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub nr: u32,
    pub closed: f64,
    /// Oracle value on the base grid and on the refined grid.
    pub oracle_coarse: f64,
    pub oracle_fine: f64,
    pub extrapolated: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub rel_err_extrapolated: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumComparison {
    pub kappa: Curvature,
    pub beta: u32,
    pub grid: RadialGrid,
    pub rows: Vec<ComparisonRow>,
    /// Bound states found by the oracle below the continuum (hyperbolic only).
    pub oracle_bound_count: Option<usize>,
}

impl SpectrumComparison {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err).fold(0.0, f64::max)
    }

    pub fn max_rel_err_extrapolated(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err_extrapolated).fold(0.0, f64::max)
    }

    /// On the hyperbolic plane, whether the oracle's bound set has exactly
    /// the closed form's size.
    pub fn bound_count_matches(&self) -> bool {
        self.oracle_bound_count.map_or(true, |c| c == self.rows.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    /// Base grid; `None` searches for a converged domain.
    pub grid: Option<RadialGrid>,
    pub branch: EnergyBranch,
    /// Relative tolerance of the domain search.
    pub domain_tol: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { grid: None, branch: EnergyBranch::Corrected, domain_tol: 1e-11 }
    }
}

/// Compares the first `count` admissible closed-form levels with angular
/// number `beta` against the oracle on a base grid and its refinement.
pub fn compare_spectra(kappa: Curvature, beta: u32, count: usize, options: &CompareOptions) -> Result<SpectrumComparison> {
    let m = i32::try_from(beta).map_err(|_| Error::Parameter(format!("beta {beta} too large")))?;
    let mut levels = Vec::new();
    for nr in 0..count as u32 {
        match Level::with_branch(kappa, nr, m, options.branch) {
            Ok(l) => levels.push(l),
            Err(Error::NotAdmissible { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let wanted = levels.len().max(1);
    let grid = match options.grid {
        Some(g) => g,
        None => converged_grid(kappa, beta, wanted, options.domain_tol)?,
    };
    let coarse = radial_eigenvalues(kappa, beta, wanted, &grid)?;
    let fine = radial_eigenvalues(kappa, beta, wanted, &grid.refined())?;
    let rows = levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let (c, f) = (coarse.eigenvalues[i], fine.eigenvalues[i]);
            let extrapolated = Richardson::from_pair(c, f).value;
            let scale = l.e_bar.abs().max(f64::MIN_POSITIVE);
            ComparisonRow {
                nr: l.nr,
                closed: l.e_bar,
                oracle_coarse: c,
                oracle_fine: f,
                extrapolated,
                abs_err: (f - l.e_bar).abs(),
                rel_err: (f - l.e_bar).abs() / scale,
                rel_err_extrapolated: (extrapolated - l.e_bar).abs() / scale,
            }
        })
        .collect();
    Ok(SpectrumComparison { kappa, beta, grid, rows, oracle_bound_count: fine.bound_count })
}
