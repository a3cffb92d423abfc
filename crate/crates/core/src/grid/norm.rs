//! Interior norms and the relative-residual convention.
//!
//! Residuals are measured as interior RMS values (nodes within `layer` of the
//! boundary are skipped) divided by the sum of the RMS values of the terms that
//! are supposed to cancel. Operator residuals also add a magnitude floor,
//! `‖u‖ / diam^order`, so that inputs whose cancelling terms are themselves
//! zero (a linear field under a second-order operator, say) report rounding
//! noise as a small number instead of as `noise / noise ≈ 1`. When every term
//! vanishes the absolute RMS is returned.

use super::domain::GridDomain;
use super::field::Field;

/// Boundary layer excluded from residual norms unless stated otherwise.
pub const DEFAULT_LAYER: usize = 2;

/// Below this reference magnitude a residual is reported in absolute terms.
const TINY: f64 = 1e-300;

pub(crate) fn interior_indices(domain: &GridDomain, layer: usize) -> impl Iterator<Item = usize> + '_ {
    (0..domain.len()).filter(move |&i| domain.is_interior(domain.ijk(i), layer))
}

/// Root mean square over interior nodes of the node-wise Euclidean norm.
pub fn interior_rms<const N: usize>(field: &Field<N>, layer: usize) -> f64 {
    let d = field.domain();
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in interior_indices(d, layer) {
        sum += field.components().iter().map(|p| p[i].norm_sqr()).sum::<f64>();
        count += 1;
    }
    if count == 0 {
        return 0.0;
    }
    (sum / count as f64).sqrt()
}

/// Largest node-wise norm over interior nodes.
pub fn interior_max<const N: usize>(field: &Field<N>, layer: usize) -> f64 {
    let d = field.domain();
    interior_indices(d, layer)
        .map(|i| {
            field
                .components()
                .iter()
                .map(|p| p[i].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// `residual / Σ terms`, or `residual` when the terms are all (numerically) zero.
pub fn relative(residual: f64, terms: &[f64]) -> f64 {
    let scale: f64 = terms.iter().sum();
    if scale > TINY {
        residual / scale
    } else {
        residual
    }
}

/// `‖u‖ / diam^order` over the interior, the natural size of an order-`order`
/// derivative of `u` on this box.
pub fn magnitude_floor<const N: usize>(u: &Field<N>, layer: usize, order: i32) -> f64 {
    let diam = u.domain().extent().iter().map(|l| l * l).sum::<f64>().sqrt();
    interior_rms(u, layer) / diam.powi(order)
}

/// Relative interior residual of `residual` against the cancelling `terms`.
pub fn relative_residual<const N: usize>(residual: &Field<N>, terms: &[&Field<N>], layer: usize) -> f64 {
    let norms: Vec<f64> = terms.iter().map(|t| interior_rms(*t, layer)).collect();
    relative(interior_rms(residual, layer), &norms)
}
