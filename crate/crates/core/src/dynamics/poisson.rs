use crate::geometry::Curvature;

use super::{DynamicsParams, PhaseState};

/// A phase-space function. Implementors that know their partial derivatives
/// with respect to `(r, phi, p_r, p_phi)` return them from [`gradient`];
/// otherwise brackets fall back to central differences.
///
/// [`gradient`]: Observable::gradient
pub trait Observable {
    fn value(&self, state: &PhaseState) -> f64;

    fn gradient(&self, _state: &PhaseState) -> Option<[f64; 4]> {
        None
    }
}

/// Built-in observables with analytic gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    R,
    Phi,
    MomentumR,
    MomentumPhi,
    P1(Curvature),
    P2(Curvature),
    J,
    Energy(DynamicsParams),
}

impl Observable for Quantity {
    fn value(&self, s: &PhaseState) -> f64 {
        match *self {
            Quantity::R => s.r,
            Quantity::Phi => s.phi,
            Quantity::MomentumR => s.p_r,
            Quantity::MomentumPhi | Quantity::J => s.p_phi,
            Quantity::P1(k) => {
                let (sn, c) = s.phi.sin_cos();
                k.lift(s.r) * c * s.p_r - sn * s.p_phi / s.r
            }
            Quantity::P2(k) => {
                let (sn, c) = s.phi.sin_cos();
                k.lift(s.r) * sn * s.p_r + c * s.p_phi / s.r
            }
            Quantity::Energy(p) => {
                let lift = p.kappa.lift(s.r);
                (lift * lift * s.p_r * s.p_r + lift * s.p_phi * s.p_phi / (s.r * s.r)) / (2.0 * p.mass)
                    + p.potential(s.r)
            }
        }
    }

    fn gradient(&self, s: &PhaseState) -> Option<[f64; 4]> {
        Some(match *self {
            Quantity::R => [1.0, 0.0, 0.0, 0.0],
            Quantity::Phi => [0.0, 1.0, 0.0, 0.0],
            Quantity::MomentumR => [0.0, 0.0, 1.0, 0.0],
            Quantity::MomentumPhi | Quantity::J => [0.0, 0.0, 0.0, 1.0],
            Quantity::P1(k) => {
                let (sn, c) = s.phi.sin_cos();
                let lift = k.lift(s.r);
                let r2 = s.r * s.r;
                [
                    2.0 * k.value() * s.r * c * s.p_r + sn * s.p_phi / r2,
                    -lift * sn * s.p_r - c * s.p_phi / s.r,
                    lift * c,
                    -sn / s.r,
                ]
            }
            Quantity::P2(k) => {
                let (sn, c) = s.phi.sin_cos();
                let lift = k.lift(s.r);
                let r2 = s.r * s.r;
                [
                    2.0 * k.value() * s.r * sn * s.p_r - c * s.p_phi / r2,
                    lift * c * s.p_r - sn * s.p_phi / s.r,
                    lift * sn,
                    c / s.r,
                ]
            }
            Quantity::Energy(p) => {
                let k = p.kappa.value();
                let lift = p.kappa.lift(s.r);
                let r2 = s.r * s.r;
                let m = p.mass;
                [
                    (4.0 * k * s.r * lift * s.p_r * s.p_r - 2.0 * s.p_phi * s.p_phi / (r2 * s.r))
                        / (2.0 * m)
                        + p.alpha * p.alpha * s.r,
                    0.0,
                    lift * lift * s.p_r / m,
                    lift * s.p_phi / (m * r2),
                ]
            }
        })
    }
}

/// Observable defined by a closure; brackets involving it use finite differences.
pub struct FnObservable<F>(pub F);

impl<F: Fn(&PhaseState) -> f64> Observable for FnObservable<F> {
    fn value(&self, state: &PhaseState) -> f64 {
        (self.0)(state)
    }
}

/// Pointwise product of two observables.
pub struct Product<A, B>(pub A, pub B);

impl<A: Observable, B: Observable> Observable for Product<A, B> {
    fn value(&self, s: &PhaseState) -> f64 {
        self.0.value(s) * self.1.value(s)
    }

    fn gradient(&self, s: &PhaseState) -> Option<[f64; 4]> {
        let (ga, gb) = (self.0.gradient(s)?, self.1.gradient(s)?);
        let (a, b) = (self.0.value(s), self.1.value(s));
        Some(std::array::from_fn(|i| a * gb[i] + b * ga[i]))
    }
}

/// Result of a Poisson bracket evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketValue {
    pub value: f64,
    /// Set when at least one gradient came from finite differences.
    pub finite_difference: bool,
}

fn numeric_gradient<O: Observable + ?Sized>(obs: &O, s: &PhaseState) -> [f64; 4] {
    let base = s.to_array();
    std::array::from_fn(|i| {
        let h = 1e-6 * base[i].abs().max(1.0);
        let mut plus = base;
        let mut minus = base;
        plus[i] += h;
        minus[i] -= h;
        (obs.value(&PhaseState::from_array(plus)) - obs.value(&PhaseState::from_array(minus)))
            / (2.0 * h)
    })
}

/// `{F, G} = F_r G_{p_r} + F_phi G_{p_phi} - F_{p_r} G_r - F_{p_phi} G_phi`.
pub fn poisson_bracket<F, G>(f: &F, g: &G, state: &PhaseState) -> BracketValue
where
    F: Observable + ?Sized,
    G: Observable + ?Sized,
{
    let mut finite_difference = false;
    let mut grad = |o: &dyn Fn() -> Option<[f64; 4]>, fallback: &dyn Fn() -> [f64; 4]| {
        o().unwrap_or_else(|| {
            finite_difference = true;
            fallback()
        })
    };
    let df = grad(&|| f.gradient(state), &|| numeric_gradient(f, state));
    let dg = grad(&|| g.gradient(state), &|| numeric_gradient(g, state));
    BracketValue {
        value: df[0] * dg[2] + df[1] * dg[3] - df[2] * dg[0] - df[3] * dg[1],
        finite_difference,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut ChaCha8Rng, kappa: f64) -> PhaseState {
        let rmax = if kappa < 0.0 { 0.9 / (-kappa).sqrt() } else { 2.0 };
        PhaseState::new(
            rng.gen_range(0.1..rmax),
            rng.gen_range(0.0..6.28),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        )
    }

    #[test]
    fn bracket_examples() {
        let k = Curvature::new(1.0).unwrap();
        let s = PhaseState::new(1.0, 0.3, 1.0, 3.0);
        let b = poisson_bracket(&Quantity::P1(k), &Quantity::P2(k), &s);
        assert!((b.value - 3.0).abs() < 1e-12);
        assert!(!b.finite_difference);
        assert_eq!(poisson_bracket(&Quantity::R, &Quantity::MomentumR, &s).value, 1.0);
        let prm = DynamicsParams::new(k, 1.3).unwrap();
        assert!(poisson_bracket(&Quantity::J, &Quantity::Energy(prm), &s).value.abs() < 1e-14);
    }

    #[test]
    fn analytic_gradients_match_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &kv in &[-0.5, 0.0, 0.7] {
            let k = Curvature::new(kv).unwrap();
            let prm = DynamicsParams::new(k, 0.8).unwrap();
            for _ in 0..50 {
                let s = random_state(&mut rng, kv);
                for q in [Quantity::P1(k), Quantity::P2(k), Quantity::Energy(prm)] {
                    let a = q.gradient(&s).unwrap();
                    let n = numeric_gradient(&q, &s);
                    for i in 0..4 {
                        assert!((a[i] - n[i]).abs() < 1e-6 * a[i].abs().max(1.0), "{q:?} {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn closure_observables_are_flagged() {
        let s = PhaseState::new(0.5, 1.0, 0.2, -0.3);
        let f = FnObservable(|s: &PhaseState| s.r * s.r);
        let b = poisson_bracket(&f, &Quantity::MomentumR, &s);
        assert!(b.finite_difference);
        assert!((b.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn antisymmetry_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = Curvature::new(0.7).unwrap();
        let prm = DynamicsParams::new(k, 0.5).unwrap();
        for _ in 0..100 {
            let s = random_state(&mut rng, 0.7);
            let (a, b, c) = (Quantity::P1(k), Quantity::Energy(prm), Quantity::P2(k));
            let ab = poisson_bracket(&a, &b, &s).value;
            let ba = poisson_bracket(&b, &a, &s).value;
            assert!((ab + ba).abs() < 1e-12 * ab.abs().max(1.0));
            // {a, b c} = {a, b} c + b {a, c}
            let lhs = poisson_bracket(&a, &Product(b, c), &s).value;
            let rhs = ab * c.value(&s) + b.value(&s) * poisson_bracket(&a, &c, &s).value;
            assert!((lhs - rhs).abs() < 1e-10 * rhs.abs().max(1.0));
        }
    }
}
