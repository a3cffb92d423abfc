//! Spatial pseudoanalytic function theory on uniform grids.
//!
//! The crate implements the biquaternionic main Vekua equation
//! `DW - (Df/f) C_H W = 0` that arises from factorizing the stationary
//! Schrödinger operator `-Δ + q` with `q = Δf/f`, together with the Bers
//! derivative, its inverse (the antiderivative), conjugate-solution
//! constructions and exact-solution factories for symmetric `f`. A planar
//! module mirrors the classical complex theory as a cross-check.

pub mod antiderivative;
pub mod biquaternion;
pub mod error;
pub mod grid;
pub mod potential;
pub mod registry;
pub mod symmetric;
pub mod vekua2d;
pub mod vekua_ops;

pub use biquaternion::{Biquaternion, ComplexScalar};
pub use error::{Error, Result};
pub use num_complex::Complex64;
