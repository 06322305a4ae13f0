//! Seeded property suites. Each suite samples its inputs from a ChaCha
//! generator seeded by the caller, so a report is reproducible bit for bit.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    hamiltonian_noether, hamiltonian_polar, integrate_trajectory, noether_momenta, poisson_bracket, DynamicsParams,
    PhaseState, Quantity,
};
use crate::error::{Error, Result};
use crate::geometry::{measure_weight, measure_weight_derivative, normalize_angle, Curvature, PolarPoint, RadialPoint};
use crate::oracle::{compare_spectra, converged_grid, radial_eigenvalues, CompareOptions, RadialGrid, SpectrumComparison};
use crate::quantization::{
    apply_casimir, apply_hamiltonian, apply_momentum_operator, measure_inner_product, schrodinger_residual,
    BumpField, FnScalarField, Momentum, ScalarField,
};
use crate::spectrum::{
    admissible_levels_with, gram_matrix, q_parameter, radial_polynomial, EnergyBranch, Eigenstate, Hypergeometric,
    Level, SeriesPolynomial,
};
use crate::symmetry::{bracket, commutator, killing_basis, killing_residual, lie_derivative_metric, measure_divergence, Numeric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Geometry,
    Dynamics,
    Symmetry,
    Quantization,
    Spectrum,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Geometry, Suite::Dynamics, Suite::Symmetry, Suite::Quantization, Suite::Spectrum];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Dynamics => "dynamics",
            Suite::Symmetry => "symmetry",
            Suite::Quantization => "quantization",
            Suite::Spectrum => "spectrum",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Suite::Geometry => 0x9e01,
            Suite::Dynamics => 0x9e02,
            Suite::Symmetry => 0x9e03,
            Suite::Quantization => 0x9e04,
            Suite::Spectrum => 0x9e05,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown suite '{s}'")))
    }
}

/// One checked property: the worst value observed against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl Check {
    /// Passes when `worst < tolerance`; an error fails the check and becomes
    /// its note.
    pub fn measured(name: &str, tolerance: f64, worst: Result<f64>) -> Self {
        match worst {
            Ok(w) => Check {
                name: name.into(),
                worst: w,
                tolerance,
                passed: w < tolerance,
                note: String::new(),
            },
            Err(e) => Check { name: name.into(), worst: f64::NAN, tolerance, passed: false, note: e.to_string() },
        }
    }

    /// A yes/no property; `worst` is 0 or 1.
    pub fn exact(name: &str, passed: Result<bool>, note: impl Into<String>) -> Self {
        match passed {
            Ok(p) => Check {
                name: name.into(),
                worst: if p { 0.0 } else { 1.0 },
                tolerance: 0.5,
                passed: p,
                note: note.into(),
            },
            Err(e) => Check { name: name.into(), worst: f64::NAN, tolerance: 0.5, passed: false, note: e.to_string() },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    /// Closed-form versus oracle tables (spectrum suite only).
    pub comparisons: Vec<SpectrumComparison>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Energy formula under test in the spectrum suite.
    pub branch: EnergyBranch,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 42, branch: EnergyBranch::Corrected }
    }
}

pub fn run_suite(suite: Suite, options: &VerifyOptions) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ suite.salt());
    let (checks, comparisons) = match suite {
        Suite::Geometry => (geometry_suite(&mut rng), Vec::new()),
        Suite::Dynamics => (dynamics_suite(&mut rng), Vec::new()),
        Suite::Symmetry => (symmetry_suite(&mut rng), Vec::new()),
        Suite::Quantization => (quantization_suite(&mut rng), Vec::new()),
        Suite::Spectrum => spectrum_suite(&mut rng, options.branch),
    };
    SuiteReport { suite, checks, comparisons }
}

pub fn run_all(options: &VerifyOptions) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, options)).collect()
}

/// Running maximum; a NaN sample poisons the result.
#[derive(Debug, Clone, Copy)]
struct Worst(f64);

impl Worst {
    fn new() -> Self {
        Worst(0.0)
    }

    fn add(&mut self, v: f64) {
        self.0 = if v.is_nan() || self.0.is_nan() { f64::NAN } else { self.0.max(v) };
    }

    fn get(self) -> f64 {
        if self.0.is_nan() {
            f64::INFINITY
        } else {
            self.0
        }
    }
}

fn curv(k: f64) -> Curvature {
    Curvature::new(k).expect("finite curvature")
}

/// Radius in `[lo, hi]` clipped to 90% of the hyperbolic disk.
fn sample_radius(rng: &mut ChaCha8Rng, kappa: Curvature, lo: f64, hi: f64) -> f64 {
    let hi = kappa.boundary_radius().map_or(hi, |b| hi.min(0.9 * b));
    rng.gen_range(lo..hi)
}

fn geometry_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut chart = Worst::new();
    let mut pythagoras = Worst::new();
    let mut derivative = Worst::new();
    let mut weight = Worst::new();
    let mut angle = Worst::new();
    let mut failure = None;
    for _ in 0..1000 {
        let kappa = curv(rng.gen_range(-2.0..2.0));
        let rho = rng.gen_range(0.0..kappa.geodesic_extent().min(3.0) * 0.95);
        let result = (|| -> Result<()> {
            let r = kappa.projective_radius(rho)?;
            let back = kappa.geodesic_radius(r)?;
            let via_point = RadialPoint::from_geodesic(kappa, rho).r;
            chart.add((back - rho).abs().max((via_point - r).abs() / r.max(1.0)));
            let (s, c) = (kappa.sine(rho), kappa.cosine(rho));
            pythagoras.add((c * c + kappa.value() * s * s - 1.0).abs() / (c * c).max(1.0));
            let h = 1e-5;
            let ds = (kappa.sine(rho + h) - kappa.sine(rho - h)) / (2.0 * h);
            derivative.add((ds - c).abs());
            let rr = sample_radius(rng, kappa, 0.05, 3.0);
            let hr = 1e-6 * rr.max(1.0);
            let dw = (measure_weight(kappa, rr + hr)? - measure_weight(kappa, rr - hr)?) / (2.0 * hr);
            let exact = measure_weight_derivative(kappa, rr)?;
            weight.add((dw - exact).abs() / exact.abs().max(1.0));
            Ok(())
        })();
        if let Err(e) = result {
            failure.get_or_insert(e);
        }
        let phi = rng.gen_range(-50.0..50.0);
        let a = normalize_angle(phi);
        let turns = ((phi - a) / TAU).round();
        angle.add(if (0.0..TAU).contains(&a) { (phi - a - turns * TAU).abs() } else { f64::INFINITY });
    }
    // first order in kappa: S = x - kappa x^3/6, C = 1 - kappa x^2/2
    let mut near_flat = Worst::new();
    for i in 0..=40 {
        let x = 0.1 * f64::from(i);
        for k in [-1e-6, -1e-9, 1e-9, 1e-6] {
            let kk = curv(k);
            near_flat.add((kk.sine(x) - (x - k * x.powi(3) / 6.0)).abs());
            near_flat.add((kk.cosine(x) - (1.0 - k * x * x / 2.0)).abs());
        }
    }
    let gate = |w: Worst| match &failure {
        Some(e) => Err(Error::Consistency(e.to_string())),
        None => Ok(w.get()),
    };
    vec![
        Check::measured("chart round trip", 1e-12, gate(chart)),
        Check::measured("C^2 + kappa S^2 = 1", 1e-12, gate(pythagoras)),
        Check::measured("S' = C", 1e-8, gate(derivative)),
        Check::measured("measure density derivative", 1e-7, gate(weight)),
        Check::measured("continuity at kappa = 0", 1e-10, Ok(near_flat.get())),
        Check::measured("angle normalization", 1e-12, Ok(angle.get())),
    ]
}

fn random_state(rng: &mut ChaCha8Rng, kappa: Curvature) -> PhaseState {
    let r = sample_radius(rng, kappa, 0.1, 2.5);
    PhaseState::new(r, rng.gen_range(0.0..TAU), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn dynamics_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut algebra = Worst::new();
    let mut conservation = Worst::new();
    let mut casimir = Worst::new();
    let mut failure: Option<Error> = None;
    for _ in 0..1000 {
        let kappa = curv(rng.gen_range(-1.0..1.0));
        let s = random_state(rng, kappa);
        let (p1, p2, j) = (Quantity::P1(kappa), Quantity::P2(kappa), Quantity::J);
        let pb = |a: &Quantity, b: &Quantity| poisson_bracket(a, b, &s).value;
        let (v1, v2, vj) = (
            crate::dynamics::Observable::value(&p1, &s),
            crate::dynamics::Observable::value(&p2, &s),
            s.p_phi,
        );
        let scale = 1.0 + v1.abs() + v2.abs() + vj.abs();
        algebra.add((pb(&p1, &p2) - kappa.value() * vj).abs() / scale);
        algebra.add((pb(&p1, &j) + v2).abs() / scale);
        algebra.add((pb(&p2, &j) - v1).abs() / scale);
        let free = Quantity::Energy(DynamicsParams::new(kappa, 0.0).expect("valid parameters"));
        let alpha = rng.gen_range(0.0..2.0);
        let params = DynamicsParams::new(kappa, alpha).expect("valid parameters");
        let oscillator = Quantity::Energy(params);
        let e_scale = scale * scale;
        conservation.add(pb(&j, &free).abs() / e_scale);
        conservation.add(pb(&p1, &free).abs() / e_scale);
        conservation.add(pb(&p2, &free).abs() / e_scale);
        conservation.add(pb(&j, &oscillator).abs() / e_scale);
        match noether_momenta(kappa, &s)
            .and_then(|n| Ok((hamiltonian_noether(&params, &n, s.r)?, hamiltonian_polar(&params, &s)?)))
        {
            Ok((a, b)) => casimir.add((a - b).abs() / b.abs().max(1.0)),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    let casimir_result = match failure {
        Some(e) => Err(e),
        None => Ok(casimir.get()),
    };

    let mut drift_hj = Worst::new();
    let mut drift_p = Worst::new();
    let mut trajectory_failure = None;
    for alpha in [0.0, 0.5, 1.0] {
        for kv in [-0.5, 0.0, 0.7] {
            let kappa = curv(kv);
            let params = DynamicsParams::new(kappa, alpha).expect("valid parameters");
            for _ in 0..2 {
                let state = if alpha == 0.0 {
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    PhaseState::new(
                        rng.gen_range(0.3..0.6),
                        rng.gen_range(0.0..TAU),
                        rng.gen_range(-0.05..0.05),
                        sign * rng.gen_range(0.02..0.05),
                    )
                } else {
                    PhaseState::new(
                        rng.gen_range(0.3..0.6),
                        rng.gen_range(0.0..TAU),
                        rng.gen_range(-0.1..0.1),
                        rng.gen_range(0.05..0.2),
                    )
                };
                match integrate_trajectory(&params, state, 10.0, 1e-3) {
                    Ok(t) => {
                        let d = t.max_drift();
                        drift_hj.add(d.h.max(d.j));
                        if alpha == 0.0 {
                            drift_p.add(d.p1.max(d.p2));
                        }
                    }
                    Err(e) => {
                        trajectory_failure.get_or_insert(e);
                    }
                }
            }
        }
    }
    let gate = |w: Worst| match &trajectory_failure {
        Some(e) => Err(Error::Consistency(e.to_string())),
        None => Ok(w.get()),
    };
    vec![
        Check::measured("momentum algebra", 1e-10, Ok(algebra.get())),
        Check::measured("momenta commute with H", 1e-10, Ok(conservation.get())),
        Check::measured("Casimir identity", 1e-10, casimir_result),
        Check::measured("trajectory drift of H and J", 1e-8, gate(drift_hj)),
        Check::measured("trajectory drift of P1 and P2 (free)", 1e-8, gate(drift_p)),
    ]
}

fn symmetry_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut residual_fd = Worst::new();
    let mut residual_exact = Worst::new();
    let mut lie = Worst::new();
    let mut divergence = Worst::new();
    let mut structure = Worst::new();
    let mut failure = None;
    let basis = killing_basis();
    for kv in [-0.5, 0.0, 0.5, 1.0] {
        let kappa = curv(kv);
        for _ in 0..50 {
            let point = PolarPoint::new(sample_radius(rng, kappa, 0.1, 2.0), rng.gen_range(0.0..TAU));
            let result = (|| -> Result<()> {
                for x in basis {
                    let numeric = Numeric(x);
                    let res = killing_residual(&numeric, kappa, point)?;
                    residual_fd.add(res.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
                    let exact = killing_residual(&x, kappa, point)?;
                    residual_exact.add(exact.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
                    lie.add(lie_derivative_metric(&numeric, kappa, point)?.max_abs());
                    divergence.add(measure_divergence(&numeric, kappa, point)?.abs());
                }
                for (i, &a) in basis.iter().enumerate() {
                    for &b in &basis[i + 1..] {
                        let (f, h) = commutator(&Numeric(a), &Numeric(b), kappa, point)?;
                        let expected = bracket(a, b, kappa).jet(kappa, point.r, point.phi);
                        structure.add((f - expected.f).abs().max((h - expected.h).abs()));
                    }
                }
                Ok(())
            })();
            if let Err(e) = result {
                failure.get_or_insert(e);
            }
        }
    }
    let gate = |w: Worst| match &failure {
        Some(e) => Err(Error::Consistency(e.to_string())),
        None => Ok(w.get()),
    };
    vec![
        Check::measured("Killing residual (differences)", 1e-7, gate(residual_fd)),
        Check::measured("Killing residual (analytic)", 1e-12, gate(residual_exact)),
        Check::measured("Lie derivative of the metric", 1e-7, gate(lie)),
        Check::measured("measure divergence", 1e-7, gate(divergence)),
        Check::measured("bracket structure constants", 1e-6, gate(structure)),
    ]
}

fn random_bump(rng: &mut ChaCha8Rng, r0: f64, width: f64) -> BumpField {
    let modes = (0..3)
        .map(|_| (rng.gen_range(-2..=2), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    BumpField { r0, width, modes }
}

/// Wraps `op` applied to `psi` as a scalar field for nested differencing.
fn image<'a, S: ScalarField>(
    kappa: Curvature,
    psi: &'a S,
    op: impl Fn(Curvature, &S, PolarPoint) -> Result<Complex64> + 'a,
) -> FnScalarField<impl Fn(f64, f64) -> Complex64 + 'a> {
    FnScalarField(move |r: f64, phi: f64| {
        op(kappa, psi, PolarPoint::new(r, phi)).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

fn momentum(which: Momentum) -> impl Fn(Curvature, &BumpField, PolarPoint) -> Result<Complex64> {
    move |k, psi, p| apply_momentum_operator(which, k, psi, p)
}

fn quantization_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let kappas = [-0.5, 0.0, 0.5, 1.0];
    let mut casimir = Worst::new();
    let mut j_h = Worst::new();
    let mut p1_p2 = Worst::new();
    let mut failure = None;
    for &kv in &kappas {
        let kappa = curv(kv);
        let bump = random_bump(rng, 0.6, 0.3);
        for _ in 0..10 {
            let point = PolarPoint::new(rng.gen_range(0.4..0.8), rng.gen_range(0.0..TAU));
            let result = (|| -> Result<()> {
                let hpsi = apply_hamiltonian(kappa, 0.0, &bump, point)?;
                let scale = hpsi.norm().max(1.0);
                let mut squares = Complex64::default();
                for which in Momentum::ALL {
                    let inner = image(kappa, &bump, momentum(which));
                    let twice = apply_momentum_operator(which, kappa, &inner, point)?;
                    squares += if which == Momentum::J { kappa.value() * twice } else { twice };
                }
                casimir.add((hpsi - 0.5 * squares).norm() / scale);
                casimir.add((hpsi - apply_casimir(kappa, &bump, point)?).norm() / scale);

                let h_of_j = apply_hamiltonian(kappa, 0.0, &image(kappa, &bump, momentum(Momentum::J)), point)?;
                let h_image = image(kappa, &bump, |k, psi: &BumpField, p| apply_hamiltonian(k, 0.0, psi, p));
                let j_of_h = apply_momentum_operator(Momentum::J, kappa, &h_image, point)?;
                j_h.add((j_of_h - h_of_j).norm() / scale);

                let p1_of_p2 =
                    apply_momentum_operator(Momentum::P1, kappa, &image(kappa, &bump, momentum(Momentum::P2)), point)?;
                let p2_of_p1 =
                    apply_momentum_operator(Momentum::P2, kappa, &image(kappa, &bump, momentum(Momentum::P1)), point)?;
                let jpsi = apply_momentum_operator(Momentum::J, kappa, &bump, point)?;
                let expected = Complex64::new(0.0, kv) * jpsi;
                p1_p2.add((p1_of_p2 - p2_of_p1 - expected).norm() / scale);
                Ok(())
            })();
            if let Err(e) = result {
                failure.get_or_insert(e);
            }
        }
    }

    let mut symmetric = Worst::new();
    for &kv in &[-0.5, 0.0, 1.0] {
        let kappa = curv(kv);
        let u = random_bump(rng, 0.6, 0.3);
        let v = random_bump(rng, 0.65, 0.25);
        let (lo, hi) = u.support();
        for which in Momentum::ALL {
            let result = (|| -> Result<f64> {
                let uu = |r: f64, phi: f64| Ok(u.jet(kappa, r, phi)?.value);
                let vv = |r: f64, phi: f64| Ok(v.jet(kappa, r, phi)?.value);
                let pu = |r: f64, phi: f64| apply_momentum_operator(which, kappa, &u, PolarPoint::new(r, phi));
                let pv = |r: f64, phi: f64| apply_momentum_operator(which, kappa, &v, PolarPoint::new(r, phi));
                let lhs = measure_inner_product(kappa, pu, vv, lo, hi, 1e-12)?;
                let rhs = measure_inner_product(kappa, uu, pv, lo, hi, 1e-12)?;
                // Cauchy-Schwarz bound on either side
                let pu_norm = measure_inner_product(kappa, pu, pu, lo, hi, 1e-12)?.re.sqrt();
                let v_norm = measure_inner_product(kappa, vv, vv, lo, hi, 1e-12)?.re.sqrt();
                Ok((lhs - rhs).norm() / (pu_norm * v_norm))
            })();
            match result {
                Ok(w) => symmetric.add(w),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
    }

    let mut eigen = Worst::new();
    let mut cache: Vec<(f64, Vec<Eigenstate>)> = Vec::new();
    for &kv in &[-0.5, -0.1, 0.0, 0.5, 1.0] {
        let states = admissible_levels_with(curv(kv), 4, EnergyBranch::Corrected)
            .into_iter()
            .map(Eigenstate::normalized)
            .collect::<Result<Vec<_>>>();
        match states {
            Ok(s) => cache.push((kv, s)),
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    if !cache.is_empty() {
        for _ in 0..100 {
            let (kv, states) = &cache[rng.gen_range(0..cache.len())];
            let kappa = curv(*kv);
            let state = &states[rng.gen_range(0..states.len())];
            let point = PolarPoint::new(sample_radius(rng, kappa, 0.05, 3.0), rng.gen_range(0.0..TAU));
            match schrodinger_residual(kappa, state.level.e_bar, state, point) {
                Ok(res) => eigen.add(res.norm()),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
    }

    let gate = |w: Worst| match &failure {
        Some(e) => Err(Error::Consistency(e.to_string())),
        None => Ok(w.get()),
    };
    vec![
        Check::measured("H(alpha=0) equals the Casimir", 1e-6, gate(casimir)),
        Check::measured("[J, H] = 0", 1e-6, gate(j_h)),
        Check::measured("[P1, P2] = i kappa J", 1e-6, gate(p1_p2)),
        Check::measured("momenta formally symmetric", 1e-6, gate(symmetric)),
        Check::measured("eigenstate residual", 1e-6, gate(eigen)),
    ]
}

/// Tolerance of the oracle domain search inside the suite.
const DOMAIN_TOL: f64 = 1e-11;

fn spectrum_suite(rng: &mut ChaCha8Rng, branch: EnergyBranch) -> (Vec<Check>, Vec<SpectrumComparison>) {
    let flat = Curvature::FLAT;
    let mut checks = Vec::new();
    let mut comparisons = Vec::new();

    let mut euclid = Worst::new();
    for n in 0..=10u32 {
        for nr in 0..=n / 2 {
            let beta = (n - 2 * nr) as i32;
            for m in [beta, -beta] {
                match Level::with_branch(flat, nr, m, branch) {
                    Ok(l) => euclid.add((l.e_bar - f64::from(n + 1)).abs()),
                    Err(_) => euclid.add(f64::INFINITY),
                }
            }
        }
    }
    checks.push(Check::measured("Euclidean limit", 1e-12, Ok(euclid.get())));

    let flat_oracle = (|| -> Result<f64> {
        let grid = RadialGrid::for_curvature(flat);
        let mut worst = Worst::new();
        for beta in 0..=2u32 {
            let res = radial_eigenvalues(flat, beta, 3, &grid)?;
            for (nr, e) in res.eigenvalues.iter().enumerate() {
                let l = Level::with_branch(flat, nr as u32, beta as i32, branch)?;
                worst.add((e - l.e_bar).abs() / l.e_bar.abs());
            }
        }
        Ok(worst.get())
    })();
    checks.push(Check::measured("flat oracle (8000 points)", 1e-4, flat_oracle));

    let options = CompareOptions { branch, ..CompareOptions::default() };
    let mut fine = Worst::new();
    let mut extrapolated = Worst::new();
    let mut compare_failure = None;
    for kv in [-0.5, -0.1, 0.5, 1.0] {
        for beta in 0..=1u32 {
            match compare_spectra(curv(kv), beta, 3, &options) {
                Ok(c) => {
                    fine.add(c.max_rel_err());
                    extrapolated.add(c.max_rel_err_extrapolated());
                    comparisons.push(c);
                }
                Err(e) => {
                    compare_failure.get_or_insert(e);
                }
            }
        }
    }
    let gate = |w: Worst| match &compare_failure {
        Some(e) => Err(Error::Consistency(e.to_string())),
        None => Ok(w.get()),
    };
    checks.push(Check::measured("curved oracle (refined grid)", 1e-4, gate(fine)));
    checks.push(Check::measured("curved oracle (Richardson)", 1e-6, gate(extrapolated)));

    let hyperbolic = curv(-0.5);
    let bound = (|| -> Result<bool> {
        let grid = converged_grid(hyperbolic, 0, 2, DOMAIN_TOL)?;
        Ok(radial_eigenvalues(hyperbolic, 0, 2, &grid)?.bound_count == Some(1))
    })();
    checks.push(Check::exact("oracle bound set at kappa=-0.5", bound, "one beta=0 state below the continuum"));
    let levels = admissible_levels_with(hyperbolic, 50, branch);
    let ns: Vec<u32> = levels.iter().map(|l| l.n).collect();
    checks.push(Check::exact(
        "closed-form bound set at kappa=-0.5",
        Ok(ns == [0, 1, 1]),
        format!("n values {ns:?}"),
    ));
    let top = admissible_levels_with(curv(-0.1), 50, branch).iter().map(|l| l.n).max();
    checks.push(Check::exact("largest n at kappa=-0.1", Ok(top == Some(9)), format!("{top:?}")));

    let recursion = (|| -> Result<f64> {
        let mut worst = Worst::new();
        for kv in [-0.5, 0.5, 1.0] {
            for l in admissible_levels_with(curv(kv), 14, branch) {
                if l.nr > 5 || l.beta > 4 {
                    continue;
                }
                let Hypergeometric::Gauss { b, c, .. } = l.hyper else { continue };
                let rec = radial_polynomial(&l)?;
                let hyp = SeriesPolynomial::gauss(l.nr, b, c, kv)?;
                for (x, y) in rec.coeffs.iter().zip(&hyp.coeffs) {
                    worst.add(if *y == 0.0 { x.abs() } else { (x - y).abs() / y.abs() });
                }
            }
        }
        Ok(worst.get())
    })();
    checks.push(Check::measured("recursion matches 2F1", 1e-10, recursion));

    let continuity = (|| -> Result<f64> {
        let mut worst = Worst::new();
        for flat_level in admissible_levels_with(flat, 4, branch) {
            let reference = Eigenstate::new(flat_level)?;
            let radii: Vec<f64> = (0..=200).map(|i| 0.02 * f64::from(i)).collect();
            let values: Vec<f64> = radii.iter().map(|&r| reference.radial(RadialPoint::from_projective(flat, r))).collect();
            let sup = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
            for k in [-1e-6, 1e-6] {
                let kappa = curv(k);
                let near = Eigenstate::new(Level::with_branch(kappa, flat_level.nr, flat_level.m, branch)?)?;
                for (&r, &v) in radii.iter().zip(&values) {
                    worst.add((near.radial(RadialPoint::from_projective(kappa, r)) - v).abs() / sup);
                }
            }
        }
        Ok(worst.get())
    })();
    checks.push(Check::measured("continuity as kappa -> 0", 1e-4, continuity));

    let mut kummer = Worst::new();
    for l in admissible_levels_with(flat, 10, branch) {
        match l.hyper {
            Hypergeometric::Kummer { a, c } => {
                kummer.add((a + f64::from(l.nr)).abs().max((c - f64::from(l.beta) - 1.0).abs()));
            }
            Hypergeometric::Gauss { .. } => kummer.add(f64::INFINITY),
        }
    }
    checks.push(Check::measured("flat branch is Kummer with a = -N_r", 1e-12, Ok(kummer.get())));

    let gram = (|| -> Result<f64> {
        let mut worst = Worst::new();
        for kv in [-0.5, 0.0, 1.0] {
            let states = admissible_levels_with(curv(kv), 10, branch)
                .into_iter()
                .take(6)
                .map(Eigenstate::normalized)
                .collect::<Result<Vec<_>>>()?;
            for (i, row) in gram_matrix(&states)?.iter().enumerate() {
                for (j, g) in row.iter().enumerate() {
                    worst.add((g - if i == j { 1.0 } else { 0.0 }).abs());
                }
            }
        }
        Ok(worst.get())
    })();
    checks.push(Check::measured("orthonormality", 1e-6, gram));

    let mut consistency = Worst::new();
    let mut degenerate = true;
    for _ in 0..200 {
        let kv = rng.gen_range(-1.0..2.0);
        let kappa = curv(kv);
        let levels = admissible_levels_with(kappa, 8, branch);
        for l in &levels {
            match q_parameter(kappa, l.e_bar) {
                Ok(q) => consistency.add((q - l.q).abs() / q.abs().max(1.0)),
                Err(_) => consistency.add(f64::INFINITY),
            }
        }
        degenerate &= levels.windows(2).all(|w| w[0].n != w[1].n || w[0].e_bar == w[1].e_bar);
    }
    checks.push(Check::measured("q from the energy", 1e-12, Ok(consistency.get())));
    checks.push(Check::exact("degeneracy in n", Ok(degenerate), "equal n gives identical energies"));
    (checks, comparisons)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn checks_fail_on_errors_and_nan() {
        let c = Check::measured("x", 1.0, Err(Error::ConfluentBranch));
        assert!(!c.passed);
        let mut w = Worst::new();
        w.add(0.5);
        w.add(f64::NAN);
        assert_eq!(w.get(), f64::INFINITY);
    }

    #[test]
    fn geometry_suite_passes() {
        let report = run_suite(Suite::Geometry, &VerifyOptions::default());
        assert!(report.passed(), "{:#?}", report.checks);
    }
}
