//! Shared fixtures for the criterion benchmarks.

use curvaspec::{Curvature, Level};

/// One sphere, the plane and one hyperbolic plane.
pub fn curvatures() -> [(&'static str, Curvature); 3] {
    [
        ("sphere", Curvature::new(1.0).unwrap()),
        ("flat", Curvature::new(0.0).unwrap()),
        ("hyperbolic", Curvature::new(-0.1).unwrap()),
    ]
}

/// A moderately excited level that is bound for every curvature above.
pub fn level(kappa: Curvature) -> Level {
    Level::new(kappa, 2, 1).unwrap()
}
