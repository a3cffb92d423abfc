//! Planar grids and complex fields on them.
//!
//! The planar stencils are the 3D ones applied to a `[n1, n2, 1]` shape.

use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::stencil;
use crate::grid::{RawField, Rank, MIN_NODES};

/// Axis-aligned rectangle sampled on a uniform grid, x fastest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneDomain {
    origin: [f64; 2],
    extent: [f64; 2],
    res: [usize; 2],
}

impl PlaneDomain {
    pub fn new(origin: [f64; 2], extent: [f64; 2], res: [usize; 2]) -> Result<Self> {
        for k in 0..2 {
            if !origin[k].is_finite() || !extent[k].is_finite() || extent[k] <= 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "axis {k}: origin {} extent {} (extent must be finite and positive)",
                    origin[k], extent[k]
                )));
            }
            if res[k] < MIN_NODES {
                return Err(Error::InvalidGrid(format!(
                    "axis {k}: {} nodes, at least {MIN_NODES} required",
                    res[k]
                )));
            }
        }
        Ok(PlaneDomain { origin, extent, res })
    }

    /// `[lo, hi]²` with `n` nodes per axis.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        PlaneDomain::new([lo; 2], [hi - lo; 2], [n; 2])
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn extent(&self) -> [f64; 2] {
        self.extent
    }

    pub fn res(&self) -> [usize; 2] {
        self.res
    }

    pub fn spacing(&self) -> [f64; 2] {
        [0, 1].map(|k| self.extent[k] / (self.res[k] - 1) as f64)
    }

    pub fn h(&self) -> f64 {
        let s = self.spacing();
        s[0].max(s[1])
    }

    pub fn len(&self) -> usize {
        self.res[0] * self.res[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn shape(&self) -> [usize; 3] {
        [self.res[0], self.res[1], 1]
    }

    pub fn index(&self, ij: [usize; 2]) -> usize {
        ij[0] + self.res[0] * ij[1]
    }

    pub fn ij(&self, idx: usize) -> [usize; 2] {
        [idx % self.res[0], idx / self.res[0]]
    }

    pub fn coords(&self, ij: [usize; 2]) -> [f64; 2] {
        let h = self.spacing();
        [0, 1].map(|k| self.origin[k] + ij[k] as f64 * h[k])
    }

    pub fn node_coords(&self, idx: usize) -> [f64; 2] {
        self.coords(self.ij(idx))
    }

    pub fn is_interior(&self, ij: [usize; 2], layer: usize) -> bool {
        (0..2).all(|k| ij[k] >= layer && ij[k] + layer < self.res[k])
    }

    /// Grid node at `p`, if `p` is one.
    pub fn node_at(&self, p: [f64; 2]) -> Result<[usize; 2]> {
        let h = self.spacing();
        let mut ij = [0usize; 2];
        for k in 0..2 {
            let t = (p[k] - self.origin[k]) / h[k];
            let r = t.round();
            if (t - r).abs() > 1e-9 || r < 0.0 || r as usize >= self.res[k] {
                return Err(Error::InvalidGrid(format!("point {p:?} is not a grid node")));
            }
            ij[k] = r as usize;
        }
        Ok(ij)
    }

    fn diameter(&self) -> f64 {
        self.extent[0].hypot(self.extent[1])
    }
}

/// A complex value at every node of a [`PlaneDomain`].
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField2D {
    domain: PlaneDomain,
    values: Vec<Complex64>,
}

impl ComplexField2D {
    pub fn new(domain: PlaneDomain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::FieldMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                domain.len()
            )));
        }
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node });
        }
        Ok(ComplexField2D { domain, values })
    }

    fn raw(domain: PlaneDomain, values: Vec<Complex64>) -> Self {
        ComplexField2D { domain, values }
    }

    pub fn from_fn(domain: &PlaneDomain, f: impl Fn([f64; 2]) -> Complex64) -> Result<Self> {
        ComplexField2D::new(*domain, (0..domain.len()).map(|i| f(domain.node_coords(i))).collect())
    }

    pub fn from_real_fn(domain: &PlaneDomain, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        ComplexField2D::from_fn(domain, |p| Complex64::new(f(p), 0.0))
    }

    pub fn constant(domain: &PlaneDomain, c: Complex64) -> Self {
        ComplexField2D::raw(*domain, vec![c; domain.len()])
    }

    pub fn domain(&self) -> &PlaneDomain {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexField2D::raw(self.domain, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.domain, other.domain, "fields live on different grids");
        ComplexField2D::raw(
            self.domain,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// Real part, as a complex field with zero imaginary part.
    pub fn re(&self) -> Self {
        self.map(|v| Complex64::new(v.re, 0.0))
    }

    /// Imaginary part, as a complex field with zero imaginary part.
    pub fn im(&self) -> Self {
        self.map(|v| Complex64::new(v.im, 0.0))
    }

    pub fn recip(&self) -> Self {
        self.map(|v| v.inv())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|v| v * s)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a / b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn d_x(&self) -> Self {
        self.partial(0)
    }

    pub fn d_y(&self) -> Self {
        self.partial(1)
    }

    fn partial(&self, axis: usize) -> Self {
        let h = self.domain.spacing()[axis];
        ComplexField2D::raw(
            self.domain,
            stencil::first_derivative(&self.values, self.domain.shape(), axis, h),
        )
    }

    /// `∂z = ½(∂x - i∂y)`.
    pub fn d_z(&self) -> Self {
        let i = Complex64::i();
        self.d_x().zip_map(&self.d_y(), |a, b| 0.5 * (a - i * b))
    }

    /// `∂z̄ = ½(∂x + i∂y)`.
    pub fn d_zbar(&self) -> Self {
        let i = Complex64::i();
        self.d_x().zip_map(&self.d_y(), |a, b| 0.5 * (a + i * b))
    }

    /// Compact five-point Laplacian.
    pub fn laplacian(&self) -> Self {
        let h = self.domain.spacing();
        let shape = self.domain.shape();
        let xx = stencil::second_derivative(&self.values, shape, 0, h[0]);
        let yy = stencil::second_derivative(&self.values, shape, 1, h[1]);
        ComplexField2D::raw(self.domain, xx.into_iter().zip(yy).map(|(a, b)| a + b).collect())
    }

    /// Interior root mean square, skipping `layer` nodes at each edge.
    pub fn interior_rms(&self, layer: usize) -> f64 {
        let (sum, count) = (0..self.domain.len())
            .filter(|&i| self.domain.is_interior(self.domain.ij(i), layer))
            .fold((0.0, 0usize), |(s, c), i| (s + self.values[i].norm_sqr(), c + 1));
        if count == 0 {
            0.0
        } else {
            (sum / count as f64).sqrt()
        }
    }

    /// `‖u‖ / diam^order` over the interior.
    pub fn magnitude_floor(&self, layer: usize, order: i32) -> f64 {
        self.interior_rms(layer) / self.domain.diameter().powi(order)
    }

    pub fn to_raw(&self) -> RawField {
        RawField {
            rank: Rank::Complex2d,
            origin: self.domain.origin.to_vec(),
            extent: self.domain.extent.to_vec(),
            res: self.domain.res.to_vec(),
            comps: vec![self.values.clone()],
        }
    }

    pub fn from_raw_field(raw: RawField, path: &Path) -> Result<Self> {
        let bad = |msg: String| Error::Format { path: path.to_path_buf(), msg };
        if raw.rank != Rank::Complex2d {
            return Err(bad(format!("expected a complex2d field, found {}", raw.rank.name())));
        }
        let domain = PlaneDomain::new(
            [raw.origin[0], raw.origin[1]],
            [raw.extent[0], raw.extent[1]],
            [raw.res[0], raw.res[1]],
        )
        .map_err(|e| bad(e.to_string()))?;
        let values = raw.comps.into_iter().next().unwrap_or_default();
        ComplexField2D::new(domain, values).map_err(|e| bad(e.to_string()))
    }

    pub fn write_vfld(&self, path: &Path) -> Result<()> {
        self.to_raw().write(path)
    }

    pub fn read_vfld(path: &Path) -> Result<Self> {
        ComplexField2D::from_raw_field(RawField::read(path)?, path)
    }
}

impl Add for &ComplexField2D {
    type Output = ComplexField2D;
    fn add(self, rhs: &ComplexField2D) -> ComplexField2D {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexField2D {
    type Output = ComplexField2D;
    fn sub(self, rhs: &ComplexField2D) -> ComplexField2D {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul for &ComplexField2D {
    type Output = ComplexField2D;
    fn mul(self, rhs: &ComplexField2D) -> ComplexField2D {
        self.zip_map(rhs, |a, b| a * b)
    }
}

impl Neg for &ComplexField2D {
    type Output = ComplexField2D;
    fn neg(self) -> ComplexField2D {
        self.map(|v| -v)
    }
}
