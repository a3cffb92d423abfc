//! The planar theory: the main Vekua equation `∂z̄W = (fz̄/f) W̄` with the
//! generating pair `(f, i/f)`, its Bers derivative and antiderivative, the
//! operators `A`, `Ā` and conjugate solutions of the associated Schrödinger
//! equations.
//!
//! | operator | action on `W`              |
//! |----------|----------------------------|
//! | `V`      | `∂z̄W - (fz̄/f) W̄`           |
//! | `V̄`      | `∂zW - (fz/f) W̄`           |
//! | `V₁`     | `∂z̄W + (fz/f) W̄`           |
//! | `V̄₁`     | `∂zW + (fz̄/f) W̄`           |
//!
//! so that `¼(Δ - q)φ = V₁V̄φ = V̄₁Vφ` for real `φ`, `q = Δf/f`.

mod field;

pub use field::{ComplexField2D, PlaneDomain};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{relative, stencil};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative interior residual against cancelling terms and a magnitude floor.
fn rel(res: &ComplexField2D, terms: &[&ComplexField2D], floor: f64, layer: usize) -> f64 {
    let mut norms: Vec<f64> = terms.iter().map(|t| t.interior_rms(layer)).collect();
    norms.push(floor);
    relative(res.interior_rms(layer), &norms)
}

/// A real nonvanishing `f` with cached `fz/f`, `fz̄/f`, `q = Δf/f` and
/// `r = 2|∇f/f|² - q`.
#[derive(Clone, Debug)]
pub struct PlaneFactorizer {
    f: ComplexField2D,
    fz: ComplexField2D,
    fzbar: ComplexField2D,
    q: ComplexField2D,
    r: ComplexField2D,
}

impl PlaneFactorizer {
    /// `f` must be real (imaginary parts are rejected) with `|f| ≥ eps_f`.
    pub fn new(f: ComplexField2D, eps_f: f64) -> Result<Self> {
        if let Some(node) = f.values().iter().position(|v| v.im != 0.0) {
            return Err(Error::FieldMismatch(format!("f must be real, node {node} is not")));
        }
        let (node, min_abs) = f
            .values()
            .iter()
            .map(|v| v.norm())
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        if !(min_abs >= eps_f) {
            return Err(Error::NonvanishingViolation { min_abs, node, threshold: eps_f });
        }
        let fz = f.d_z().div(&f);
        let fzbar = f.d_zbar().div(&f);
        let q = f.laplacian().div(&f);
        // |∇f/f|² = 4 |fz/f|² for real f
        let r = fz.zip_map(&q, |g, q| 8.0 * g.norm_sqr() - q);
        Ok(PlaneFactorizer { f, fz, fzbar, q, r })
    }

    pub fn f(&self) -> &ComplexField2D {
        &self.f
    }

    pub fn fz_over_f(&self) -> &ComplexField2D {
        &self.fz
    }

    pub fn fzbar_over_f(&self) -> &ComplexField2D {
        &self.fzbar
    }

    pub fn q(&self) -> &ComplexField2D {
        &self.q
    }

    /// Potential of the associated equation satisfied by `Im W`.
    pub fn r(&self) -> &ComplexField2D {
        &self.r
    }

    pub fn domain(&self) -> &PlaneDomain {
        self.f.domain()
    }

    /// The generating pair `(f, i/f)`.
    pub fn generating_pair(&self) -> Result<GeneratingPair> {
        GeneratingPair::new(self.f.clone(), self.f.recip().scale(I))
    }

    fn coeff_times_conj(c: &ComplexField2D, w: &ComplexField2D) -> ComplexField2D {
        c.zip_map(w, |c, w| c * w.conj())
    }
}

pub fn op_v(w: &ComplexField2D, f: &PlaneFactorizer) -> ComplexField2D {
    &w.d_zbar() - &PlaneFactorizer::coeff_times_conj(&f.fzbar, w)
}

pub fn op_vbar(w: &ComplexField2D, f: &PlaneFactorizer) -> ComplexField2D {
    &w.d_z() - &PlaneFactorizer::coeff_times_conj(&f.fz, w)
}

pub fn op_v1(w: &ComplexField2D, f: &PlaneFactorizer) -> ComplexField2D {
    &w.d_zbar() + &PlaneFactorizer::coeff_times_conj(&f.fz, w)
}

pub fn op_v1bar(w: &ComplexField2D, f: &PlaneFactorizer) -> ComplexField2D {
    &w.d_z() + &PlaneFactorizer::coeff_times_conj(&f.fzbar, w)
}

/// Relative interior residual of `V W = 0`.
pub fn main_vekua_residual(w: &ComplexField2D, f: &PlaneFactorizer, layer: usize) -> f64 {
    let d = w.d_zbar();
    let g = PlaneFactorizer::coeff_times_conj(&f.fzbar, w);
    rel(&(&d - &g), &[&d, &g], w.magnitude_floor(layer, 1), layer)
}

/// Relative interior residual of `V₁ w = 0`.
pub fn v1_residual(w: &ComplexField2D, f: &PlaneFactorizer, layer: usize) -> f64 {
    let d = w.d_zbar();
    let g = PlaneFactorizer::coeff_times_conj(&f.fz, w);
    rel(&(&d + &g), &[&d, &g], w.magnitude_floor(layer, 1), layer)
}

/// Relative interior residual of `(-Δ + potential) u = 0`.
pub fn schrodinger_residual_2d(u: &ComplexField2D, potential: &ComplexField2D, layer: usize) -> f64 {
    let lap = u.laplacian();
    let pu = potential * u;
    rel(&(&pu - &lap), &[&lap, &pu], u.magnitude_floor(layer, 2), layer)
}

/// Residuals of `V₁V̄φ = ¼(Δ-q)φ` and `V̄₁Vφ = ¼(Δ-q)φ`.
pub fn factorization_residuals(phi: &ComplexField2D, f: &PlaneFactorizer, layer: usize) -> (f64, f64) {
    let target = (&phi.laplacian() - &(f.q() * phi)).scale(Complex64::new(0.25, 0.0));
    let a = op_v1(&op_vbar(phi, f), f);
    let b = op_v1bar(&op_v(phi, f), f);
    let floor = phi.magnitude_floor(layer, 2);
    (rel(&(&a - &target), &[&a, &target], floor, layer), rel(&(&b - &target), &[&b, &target], floor, layer))
}

/// Bers derivative `Ẇ = Wz - (fz/f) W̄` of a solution of `V W = 0`.
pub fn bers_derivative_2d(
    w: &ComplexField2D,
    f: &PlaneFactorizer,
    tol: f64,
    layer: usize,
) -> Result<ComplexField2D> {
    let residual = main_vekua_residual(w, f, layer);
    if !(residual <= tol) {
        return Err(Error::NotAVekuaSolution { residual, tolerance: tol });
    }
    Ok(op_vbar(w, f))
}

/// The second representation `f ∂z(W1/f) + (i/f) ∂z(f W2)`.
pub fn bers_derivative_2d_split(w: &ComplexField2D, f: &PlaneFactorizer) -> ComplexField2D {
    let a = f.f() * &w.re().div(f.f()).d_z();
    let b = (f.f() * &w.im()).d_z().div(f.f()).scale(I);
    &a + &b
}

/// Base node and additive constant of the planar line integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanePath {
    pub base: [f64; 2],
    pub c: f64,
}

impl PlanePath {
    pub fn new(base: [f64; 2]) -> Self {
        PlanePath { base, c: 0.0 }
    }

    pub fn with_constant(self, c: f64) -> Self {
        PlanePath { c, ..self }
    }

    pub fn at_origin(domain: &PlaneDomain) -> Self {
        PlanePath::new(domain.origin())
    }
}

/// Order of the two legs of a staircase path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Staircase {
    XThenY,
    YThenX,
}

/// `∫ (p dx + q dy)` from the base node to every node along a staircase path.
fn staircase_integral(
    p: &[Complex64],
    q: &[Complex64],
    domain: &PlaneDomain,
    base: [usize; 2],
    order: Staircase,
) -> Vec<Complex64> {
    let [n1, n2] = domain.res();
    let h = domain.spacing();
    let column = |v: &[Complex64], i: usize| -> Vec<Complex64> { (0..n2).map(|j| v[i + n1 * j]).collect() };
    let row = |v: &[Complex64], j: usize| -> Vec<Complex64> { v[n1 * j..n1 * (j + 1)].to_vec() };
    let mut out = vec![Complex64::new(0.0, 0.0); domain.len()];
    match order {
        Staircase::XThenY => {
            let first = stencil::cumulative_trapezoid(&row(p, base[1]), base[0], h[0]);
            for i in 0..n1 {
                let second = stencil::cumulative_trapezoid(&column(q, i), base[1], h[1]);
                for j in 0..n2 {
                    out[i + n1 * j] = first[i] + second[j];
                }
            }
        }
        Staircase::YThenX => {
            let first = stencil::cumulative_trapezoid(&column(q, base[0]), base[1], h[1]);
            for j in 0..n2 {
                let second = stencil::cumulative_trapezoid(&row(p, j), base[0], h[0]);
                for i in 0..n1 {
                    out[i + n1 * j] = first[j] + second[i];
                }
            }
        }
    }
    out
}

/// Relative size of `∂yΦ1 + ∂xΦ2` (`sign = 1`) or `∂yΦ1 - ∂xΦ2` (`sign = -1`).
fn compatibility(phi: &ComplexField2D, sign: f64, layer: usize) -> f64 {
    let a = phi.re().d_y();
    let b = phi.im().d_x().scale(Complex64::new(sign, 0.0));
    rel(&(&a + &b), &[&a, &b], phi.magnitude_floor(layer, 1), layer)
}

/// `A[Φ] = 2∫(Φ1 dx - Φ2 dy) + c`, the real `φ` with `φz = Φ`.
pub fn operator_a(phi: &ComplexField2D, path: &PlanePath, tol: f64, layer: usize) -> Result<ComplexField2D> {
    let residual = compatibility(phi, 1.0, layer);
    if !(residual <= tol) {
        return Err(Error::CompatibilityViolated { residual, tolerance: tol });
    }
    operator_a_unchecked(phi, path, Staircase::XThenY)
}

/// `Ā[Φ] = 2∫(Φ1 dx + Φ2 dy) + c`, the real `φ` with `φz̄ = Φ`.
pub fn operator_abar(phi: &ComplexField2D, path: &PlanePath, tol: f64, layer: usize) -> Result<ComplexField2D> {
    let residual = compatibility(phi, -1.0, layer);
    if !(residual <= tol) {
        return Err(Error::CompatibilityViolated { residual, tolerance: tol });
    }
    operator_abar_unchecked(phi, path, Staircase::XThenY)
}

fn real_line_integral(
    phi: &ComplexField2D,
    path: &PlanePath,
    order: Staircase,
    dy_sign: f64,
) -> Result<ComplexField2D> {
    let d = *phi.domain();
    let base = d.node_at(path.base)?;
    let p: Vec<Complex64> = phi.values().iter().map(|v| Complex64::new(2.0 * v.re, 0.0)).collect();
    let q: Vec<Complex64> = phi.values().iter().map(|v| Complex64::new(2.0 * dy_sign * v.im, 0.0)).collect();
    let vals = staircase_integral(&p, &q, &d, base, order)
        .into_iter()
        .map(|v| v + path.c)
        .collect();
    ComplexField2D::new(d, vals)
}

pub fn operator_a_unchecked(phi: &ComplexField2D, path: &PlanePath, order: Staircase) -> Result<ComplexField2D> {
    real_line_integral(phi, path, order, -1.0)
}

pub fn operator_abar_unchecked(
    phi: &ComplexField2D,
    path: &PlanePath,
    order: Staircase,
) -> Result<ComplexField2D> {
    real_line_integral(phi, path, order, 1.0)
}

/// A solution of `V W = 0` whose Bers derivative is `Φ`.
///
/// Writing `W = φ f + ψ i/f` with real `φ, ψ`, the Vekua equation gives
/// `φz = Φ/(2f)` and `ψz = -i f Φ/2`. The constants `Re c`, `Im c` are added
/// to `φ` and `ψ`.
pub fn antiderivative_2d(
    phi: &ComplexField2D,
    f: &PlaneFactorizer,
    base: [f64; 2],
    c: Complex64,
    tol: f64,
    layer: usize,
) -> Result<ComplexField2D> {
    let residual = v1_residual(phi, f, layer);
    if !(residual <= tol) {
        return Err(Error::NotAV1Solution { residual, tolerance: tol });
    }
    let half = Complex64::new(0.5, 0.0);
    let p = phi.div(f.f()).scale(half);
    let q = (f.f() * phi).scale(-I * half);
    let a = operator_a_unchecked(&p, &PlanePath::new(base).with_constant(c.re), Staircase::XThenY)?;
    let b = operator_a_unchecked(&q, &PlanePath::new(base).with_constant(c.im), Staircase::XThenY)?;
    Ok(&(f.f() * &a) + &b.div(f.f()).scale(I))
}

/// `W2 = f⁻¹ Ā[i f² ∂z̄(W1/f)]`, so that `W1 + i W2` solves `V W = 0`.
pub fn conjugate_2d(w1: &ComplexField2D, f: &PlaneFactorizer, path: &PlanePath, tol: f64, layer: usize) -> Result<ComplexField2D> {
    let residual = schrodinger_residual_2d(w1, f.q(), layer);
    if !(residual <= tol) {
        return Err(Error::NotASchrodingerSolution { residual, tolerance: tol });
    }
    let f2 = f.f() * f.f();
    let arg = (&f2 * &w1.div(f.f()).d_zbar()).scale(I);
    Ok(operator_abar_unchecked(&arg, path, Staircase::XThenY)?.div(f.f()))
}

/// `W1 = -f Ā[i f⁻² ∂z̄(f W2)]`, so that `W1 + i W2` solves `V W = 0`.
pub fn conjugate_2d_inverse(
    w2: &ComplexField2D,
    f: &PlaneFactorizer,
    path: &PlanePath,
    tol: f64,
    layer: usize,
) -> Result<ComplexField2D> {
    let residual = schrodinger_residual_2d(w2, f.r(), layer);
    if !(residual <= tol) {
        return Err(Error::NotASchrodingerSolution { residual, tolerance: tol });
    }
    let f2 = f.f() * f.f();
    let arg = (f.f() * w2).d_zbar().div(&f2).scale(I);
    Ok(-&(f.f() * &operator_abar_unchecked(&arg, path, Staircase::XThenY)?))
}

/// A pair `(F, G)` with `Im(F̄ G) > 0` at every node.
#[derive(Clone, Debug)]
pub struct GeneratingPair {
    pub f: ComplexField2D,
    pub g: ComplexField2D,
}

/// `a, b, A, B` of a generating pair.
#[derive(Clone, Debug)]
pub struct CharacteristicCoefficients {
    pub a: ComplexField2D,
    pub b: ComplexField2D,
    pub big_a: ComplexField2D,
    pub big_b: ComplexField2D,
}

impl GeneratingPair {
    pub fn new(f: ComplexField2D, g: ComplexField2D) -> Result<Self> {
        for i in 0..f.values().len() {
            let value = (f.at(i).conj() * g.at(i)).im;
            if !(value > 0.0) {
                return Err(Error::DegeneratePair { value, node: i });
            }
        }
        Ok(GeneratingPair { f, g })
    }

    /// `F Ḡ - F̄ G = -2i Im(F̄ G)`.
    fn denominator(&self) -> ComplexField2D {
        self.f.zip_map(&self.g, |f, g| f * g.conj() - f.conj() * g)
    }

    pub fn characteristic_coefficients(&self) -> CharacteristicCoefficients {
        let den = self.denominator();
        let (f, g) = (&self.f, &self.g);
        let (fzb, gzb, fz, gz) = (f.d_zbar(), g.d_zbar(), f.d_z(), g.d_z());
        let minus = |x: &ComplexField2D| -x;
        let a = minus(&(&(&f.conj() * &gzb) - &(&fzb * &g.conj())).div(&den));
        let b = (&(f * &gzb) - &(&fzb * g)).div(&den);
        let big_a = minus(&(&(&f.conj() * &gz) - &(&fz * &g.conj())).div(&den));
        let big_b = (&(f * &gz) - &(&fz * g)).div(&den);
        CharacteristicCoefficients { a, b, big_a, big_b }
    }

    /// `(F*, G*) = (-2F̄, 2Ḡ) / (F Ḡ - F̄ G)`.
    pub fn adjoint(&self) -> (ComplexField2D, ComplexField2D) {
        let den = self.denominator();
        (
            self.f.conj().scale(Complex64::new(-2.0, 0.0)).div(&den),
            self.g.conj().scale(Complex64::new(2.0, 0.0)).div(&den),
        )
    }

    /// Real `(φ, ψ)` with `W = φF + ψG`.
    pub fn decompose(&self, w: &ComplexField2D) -> (ComplexField2D, ComplexField2D) {
        let im_fg = self.f.zip_map(&self.g, |f, g| Complex64::new((f.conj() * g).im, 0.0));
        let phi = w.zip_map(&self.g, |w, g| Complex64::new((w.conj() * g).im, 0.0)).div(&im_fg);
        let psi = w.zip_map(&self.f, |w, f| Complex64::new(-(w.conj() * f).im, 0.0)).div(&im_fg);
        (phi, psi)
    }

    pub fn compose(&self, phi: &ComplexField2D, psi: &ComplexField2D) -> ComplexField2D {
        &(phi * &self.f) + &(psi * &self.g)
    }

    /// `∫ W d(F,G)z` from `base` to every node along a staircase path:
    /// `F(z) Re∫G*W dz + G(z) Re∫F*W dz`.
    pub fn fg_integral(&self, w: &ComplexField2D, base: [f64; 2], order: Staircase) -> Result<ComplexField2D> {
        let d = *w.domain();
        let b = d.node_at(base)?;
        let (fs, gs) = self.adjoint();
        // ∫ u dz = ∫ u dx + ∫ i u dy
        let re_integral = |u: &ComplexField2D| -> Vec<f64> {
            let p = u.values().to_vec();
            let q: Vec<Complex64> = u.values().iter().map(|v| I * v).collect();
            staircase_integral(&p, &q, &d, b, order).into_iter().map(|v| v.re).collect()
        };
        let s_g = re_integral(&(&gs * w));
        let s_f = re_integral(&(&fs * w));
        let vals = (0..d.len())
            .map(|i| self.f.at(i) * s_g[i] + self.g.at(i) * s_f[i])
            .collect();
        ComplexField2D::new(d, vals)
    }
}

/// Largest relative mismatch in `a₁ = a` and `b₁ = -B` between a pair and a
/// candidate successor.
pub fn successor_mismatch(pair: &GeneratingPair, successor: &GeneratingPair, layer: usize) -> f64 {
    let c = pair.characteristic_coefficients();
    let c1 = successor.characteristic_coefficients();
    let da = &c1.a - &c.a;
    let db = &c1.b + &c.big_b;
    let ra = rel(&da, &[&c1.a, &c.a], 0.0, layer);
    let rb = rel(&db, &[&c1.b, &c.big_b], 0.0, layer);
    ra.max(rb)
}
