use std::f64::consts::TAU;

use curvaspec::oracle::{converged_grid, radial_eigensolve, RadialGrid};
use curvaspec::spectrum::{admissible_levels, Eigenstate};
use curvaspec::{Curvature, RadialPoint};

fn grid_for(kappa: Curvature, beta: u32, count: usize) -> RadialGrid {
    if kappa.value() < 0.0 {
        converged_grid(kappa, beta, count, 1e-11).unwrap()
    } else {
        RadialGrid::for_curvature(kappa)
    }
}

#[test]
fn oracle_eigenvectors_match_closed_form_states() {
    for kv in [-0.5, 0.0, 1.0] {
        let kappa = Curvature::new(kv).unwrap();
        for level in admissible_levels(kappa, 4).into_iter().take(3) {
            let count = level.nr as usize + 1;
            let grid = grid_for(kappa, level.beta, count);
            let res = radial_eigensolve(kappa, level.beta, count, &grid).unwrap();
            assert!(res.orthonormality_defect() < 1e-8, "{kv} {level:?}");
            let oracle = &res.eigenvectors[level.nr as usize];
            let state = Eigenstate::normalized(level).unwrap();
            // the oracle normalizes the radial factor alone; the state includes the angular 2 pi
            let closed: Vec<f64> = (0..grid.n_points)
                .map(|i| TAU.sqrt() * state.radial(RadialPoint::from_geodesic(kappa, grid.node(i))))
                .collect();
            let dot: f64 = oracle.iter().zip(&closed).map(|(a, b)| a * b).sum();
            let sign = dot.signum();
            let interior = grid.n_points * 9 / 10;
            let worst = oracle[..interior]
                .iter()
                .zip(&closed)
                .map(|(a, b)| (sign * a - b).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-3, "kappa={kv} {level:?}: {worst}");
        }
    }
}

#[test]
fn oracle_matches_spectrum_examples() {
    let sphere = Curvature::new(1.0).unwrap();
    let res = radial_eigensolve(sphere, 0, 2, &RadialGrid::for_curvature(sphere)).unwrap();
    for (e, exact) in res.eigenvalues.iter().zip([1.6180, 7.8541]) {
        assert!((e - exact).abs() < 1e-4 * exact);
    }
}

#[test]
fn eigenvalues_fall_as_the_domain_grows() {
    let h = 5e-3;
    for (kv, radii) in [(0.0, vec![1.5, 2.0, 3.0, 4.5, 6.0]), (0.5, vec![0.8, 1.2, 1.6, 2.0, 2.2])] {
        let kappa = Curvature::new(kv).unwrap();
        for beta in 0..3 {
            let mut previous: Option<Vec<f64>> = None;
            for &rho in &radii {
                let grid = RadialGrid::new(kappa, rho, (rho / h).round() as usize).unwrap();
                let values = radial_eigensolve(kappa, beta, 3, &grid).unwrap().eigenvalues;
                if let Some(prev) = &previous {
                    for (p, v) in prev.iter().zip(&values) {
                        assert!(v <= p, "kappa={kv} beta={beta} rho={rho}: {v} > {p}");
                    }
                }
                previous = Some(values);
            }
        }
    }
}
