//! The antiderivative of a Bers derivative and the two conjugate-solution
//! constructions.
//!
//! ```text
//! W  = ½ ( f 𝒜[w/f] - f⁻¹ rot 𝐁[f w] + ∇h/f )
//! 𝐖  = -f⁻¹ { rot 𝐁[f² ∇(W0/f)] + ∇h }
//! W0 = -f 𝒜[f⁻² rot(f 𝐖)]
//! ```
//!
//! `rot 𝐁[·]` is supplied by a [`CurlInverse`] strategy.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{self, interior_rms, magnitude_floor, relative, BiquaternionField, ScalarField, VectorField};
use crate::potential::{self, curl_inverse, CurlInverse, PotentialPath, DEFAULT_CURL_INVERSE};
use crate::vekua_ops::{schrodinger_residual, v1bar_residual, FactorizingFunction};

/// The harmonic function `h` left free by the constructions.
#[derive(Clone, Debug, Default)]
pub enum HarmonicGauge {
    #[default]
    Zero,
    Field(ScalarField),
}

impl HarmonicGauge {
    /// Accept `h` if its Laplacian residual is within `tol`.
    pub fn field(h: ScalarField, tol: f64, layer: usize) -> Result<Self> {
        h.check_finite()?;
        let residual = laplace_relative(&h, layer);
        if !(residual <= tol) {
            return Err(Error::NotHarmonic { residual, tolerance: tol });
        }
        Ok(HarmonicGauge::Field(h))
    }

    /// `∇h`, or `None` for the zero gauge.
    pub fn gradient(&self) -> Option<VectorField> {
        match self {
            HarmonicGauge::Zero => None,
            HarmonicGauge::Field(h) => Some(grid::grad(h)),
        }
    }
}

/// Relative interior size of `Δu` against its three second partials and the floor of `u`.
pub fn laplace_relative(u: &ScalarField, layer: usize) -> f64 {
    let mut terms: Vec<f64> = (0..3)
        .map(|k| interior_rms(&grid::partial(&grid::partial(u, k), k), layer))
        .collect();
    terms.push(magnitude_floor(u, layer, 2));
    relative(interior_rms(&grid::laplacian(u), layer), &terms)
}

/// Relative interior size of `div X` against its three partials and the floor of `X`.
pub fn div_relative(x: &VectorField, layer: usize) -> f64 {
    let mut terms: Vec<f64> = (0..3)
        .map(|k| interior_rms(&grid::partial(&x.scalar_component(k), k), layer))
        .collect();
    terms.push(magnitude_floor(x, layer, 1));
    relative(interior_rms(&grid::div(x), layer), &terms)
}

/// Residual of `div(f² ∇φ0) = 0` for `φ0 = W0/f`.
pub fn eqphi0_residual(w0: &ScalarField, f: &FactorizingFunction, layer: usize) -> f64 {
    let f2 = f.f().mul(f.f());
    div_relative(&grid::grad(&w0.div_scalar(f.f())).mul_scalar(&f2), layer)
}

/// Residual of `rot(f⁻² rot Φ) = 0`.
pub fn eqphi_residual(phi: &VectorField, f: &FactorizingFunction, layer: usize) -> f64 {
    let f2 = f.f().mul(f.f());
    potential::rot_relative(&grid::rot(phi).div_scalar(&f2), layer)
}

/// Residual of `div Φ = 0`.
pub fn divphi_residual(phi: &VectorField, layer: usize) -> f64 {
    div_relative(phi, layer)
}

/// Settings shared by the reconstruction operators.
#[derive(Clone)]
pub struct Reconstructor {
    curl: Arc<dyn CurlInverse>,
    tol: f64,
    layer: usize,
}

impl Reconstructor {
    pub fn new(curl: Arc<dyn CurlInverse>, tol: f64, layer: usize) -> Self {
        Reconstructor { curl, tol, layer }
    }

    /// Uses the default curl inverse.
    pub fn with_tolerance(tol: f64, layer: usize) -> Self {
        let curl = curl_inverse(DEFAULT_CURL_INVERSE).expect("default curl inverse is registered");
        Reconstructor::new(curl, tol, layer)
    }

    pub fn curl(&self) -> &dyn CurlInverse {
        self.curl.as_ref()
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn layer(&self) -> usize {
        self.layer
    }

    /// A solution `W` of `V W = 0` whose Bers derivative is `w`.
    ///
    /// `w` must solve `(D + M^(Df/f)) w = 0`.
    pub fn antiderivative(
        &self,
        w: &VectorField,
        f: &FactorizingFunction,
        gauge: &HarmonicGauge,
        path: &PotentialPath,
    ) -> Result<BiquaternionField> {
        let residual = v1bar_residual(&w.to_biquaternion(), f, self.layer);
        if !(residual <= self.tol) {
            return Err(Error::NotAV1Solution { residual, tolerance: self.tol });
        }
        let w0 = potential::potential_a_unchecked(&w.div_scalar(f.f()), path)?
            .mul(f.f())
            .scale_real(0.5);
        let mut phi = self.curl.apply(&w.mul_scalar(f.f())).neg();
        if let Some(gh) = gauge.gradient() {
            phi = phi.add(&gh);
        }
        let vec = phi.div_scalar(f.f()).scale_real(0.5);
        Ok(BiquaternionField::from_parts(&w0, &vec))
    }

    /// Vector part `𝐖` completing a Schrödinger solution `W0` to a solution of `V W = 0`.
    pub fn conjugate_vector(
        &self,
        w0: &ScalarField,
        f: &FactorizingFunction,
        gauge: &HarmonicGauge,
    ) -> Result<VectorField> {
        let residual = schrodinger_residual(w0, f.q(), self.layer);
        if !(residual <= self.tol) {
            return Err(Error::NotASchrodingerSolution { residual, tolerance: self.tol });
        }
        let f2 = f.f().mul(f.f());
        let source = grid::grad(&w0.div_scalar(f.f())).mul_scalar(&f2);
        let mut phi = self.curl.apply(&source);
        if let Some(gh) = gauge.gradient() {
            phi = phi.add(&gh);
        }
        Ok(phi.div_scalar(f.f()).neg())
    }

    /// Scalar part `W0` completing `𝐖` (with `Φ = f𝐖` solving the `Φ` system).
    pub fn conjugate_scalar(
        &self,
        w: &VectorField,
        f: &FactorizingFunction,
        path: &PotentialPath,
    ) -> Result<ScalarField> {
        let phi = w.mul_scalar(f.f());
        let residual = eqphi_residual(&phi, f, self.layer).max(divphi_residual(&phi, self.layer));
        if !(residual <= self.tol) {
            return Err(Error::NotAPhiSolution { residual, tolerance: self.tol });
        }
        let f2 = f.f().mul(f.f());
        let grad_phi0 = grid::rot(&phi).div_scalar(&f2);
        Ok(potential::potential_a_unchecked(&grad_phi0, path)?.mul(f.f()).neg())
    }
}
