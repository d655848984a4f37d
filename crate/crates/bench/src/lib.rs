//! Fixed workloads shared by the criterion benches.

use desitter_core::{Alpha, DeSitterParams, Truncation};

/// (k/H, α) points spanning weak to strong squeezing.
pub const POINTS: [(f64, Alpha); 3] = [
    (2.0, Alpha::BunchDavies),
    (1.0, Alpha::BunchDavies),
    (0.5, Alpha::Finite(-1.0)),
];

pub fn params(k_over_h: f64, alpha: Alpha) -> DeSitterParams {
    DeSitterParams::from_ratio(k_over_h, alpha).expect("benchmark parameters are valid")
}

/// Truncation with tail bound below `tol` for the given point.
pub fn truncation(p: &DeSitterParams, tol: f64) -> Truncation {
    Truncation::for_params(p, tol).expect("benchmark truncation is valid")
}
