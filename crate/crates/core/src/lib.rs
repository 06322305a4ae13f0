//! Quantum and classical mechanics of a particle in a harmonic well on the
//! constant-curvature surfaces: sphere (`kappa > 0`), plane (`kappa = 0`) and
//! hyperbolic plane (`kappa < 0`).
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: curvature-tagged trigonometric functions, the metric in
//!   geodesic and projective polar coordinates, the invariant measure.
//! - [`dynamics`]: Lagrangians, Legendre maps, Hamiltonians, Noether momenta,
//!   Poisson brackets and trajectory integration.
//! - [`symmetry`]: Killing fields, Lie derivatives of the metric, the Lie
//!   algebra of isometries and measure invariance.
//! - [`quantization`]: momentum and Hamiltonian operators acting on scalar
//!   fields, the dimensionless Schrödinger residual and unit scaling.
//! - [`spectrum`]: closed-form energies, hypergeometric machinery and
//!   eigenfunctions.
//! - [`oracle`]: an independent finite-difference radial eigensolver,
//!   adaptive quadrature and Richardson extrapolation.
//! - [`verify`]: seeded property suites used by the command-line `verify`.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod quantization;
pub mod spectrum;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Curvature, MetricComponents, PolarPoint, RadialPoint};
pub use dynamics::{
    CartesianPhaseState, CartesianVelocityState, DynamicsParams, NoetherMomenta, PhaseState,
    VelocityState,
};
pub use oracle::{RadialEigenResult, RadialGrid};
pub use quantization::{Jet, PhysicalScales, ScalarField};
pub use spectrum::{EnergyBranch, Level, SeriesPolynomial};
pub use symmetry::{GeneralField, KillingField};
