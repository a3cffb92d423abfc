//! Uniform 3D grids, complex fields on them and the differential calculus
//! (`∂_k`, ∇, div, rot, Δ and the Dirac operators `D`, `D_r`).

mod calculus;
mod domain;
mod field;
pub mod norm;
pub mod stencil;
pub mod vfld;

pub use calculus::{
    dirac_left, dirac_left_decomposed, dirac_right, dirac_right_decomposed, div, grad, laplacian,
    leibniz_residual, partial, rot, rot_rot, second_partial,
};
pub use domain::{GridDomain, MIN_NODES};
pub use field::{BiquaternionField, Field, ScalarField, VectorField};
pub use norm::{interior_max, interior_rms, magnitude_floor, relative, relative_residual, DEFAULT_LAYER};
pub use vfld::{Rank, RawField};
