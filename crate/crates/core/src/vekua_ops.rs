//! The operators `V`, `V̄`, `V₁`, `V̄₁` built from a factorizing function `f`,
//! the generating quartet and the Bers derivative.
//!
//! With `g = Df/f` (purely vectorial because `f` is scalar):
//!
//! | operator | action on `W`              |
//! |----------|----------------------------|
//! | `V`      | `DW - g · C_H W`           |
//! | `V̄`      | `D_r W - (C_H W) · g`      |
//! | `V₁`     | `D_r W + g · W`            |
//! | `V̄₁`     | `DW + W · g`               |
//!
//! so that `(-Δ + q)φ = V̄₁ V φ = V₁ V̄ φ` for scalar `φ`, `q = Δf/f`.


use crate::biquaternion::Biquaternion;
use crate::error::{Error, Result};
use crate::grid::{
    self, dirac_left, dirac_right, interior_rms, magnitude_floor, relative, BiquaternionField, GridDomain,
    ScalarField, VectorField,
};

/// Default lower bound on `|f|` at every node.
pub const DEFAULT_EPS_F: f64 = 1e-10;

/// A nonvanishing scalar field `f` together with `Df/f` and `q = Δf/f`.
#[derive(Clone, Debug)]
pub struct FactorizingFunction {
    f: ScalarField,
    df_over_f: VectorField,
    q: ScalarField,
}

/// Validate `f` and cache `Df/f` and `Δf/f` (both from the grid stencils).
pub fn make_factorizer(f: ScalarField, eps_f: f64) -> Result<FactorizingFunction> {
    f.check_finite()?;
    let (node, min_abs) = f
        .values()
        .iter()
        .map(|v| v.norm())
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, a)| if a < acc.1 { (i, a) } else { acc });
    if min_abs < eps_f {
        return Err(Error::NonvanishingViolation { min_abs, node, threshold: eps_f });
    }
    let df_over_f = grid::grad(&f).div_scalar(&f);
    let q = grid::laplacian(&f).div_scalar(&f);
    Ok(FactorizingFunction { f, df_over_f, q })
}

impl FactorizingFunction {
    pub fn new(f: ScalarField) -> Result<Self> {
        make_factorizer(f, DEFAULT_EPS_F)
    }

    pub fn f(&self) -> &ScalarField {
        &self.f
    }

    /// `Df/f = ∇f/f`.
    pub fn df_over_f(&self) -> &VectorField {
        &self.df_over_f
    }

    /// The potential `q = Δf/f`.
    pub fn q(&self) -> &ScalarField {
        &self.q
    }

    pub fn domain(&self) -> &GridDomain {
        self.f.domain()
    }

    fn g(&self, idx: usize) -> Biquaternion {
        Biquaternion::vector(self.df_over_f.at(idx))
    }

    /// Node-wise `a(W_i, g_i)` combined with a precomputed field.
    fn combine(
        &self,
        base: &BiquaternionField,
        w: &BiquaternionField,
        op: impl Fn(Biquaternion, Biquaternion, Biquaternion) -> Biquaternion,
    ) -> BiquaternionField {
        let nodes: Vec<_> = (0..w.len()).map(|i| op(base.at(i), w.at(i), self.g(i))).collect();
        BiquaternionField::from_nodes(w.domain(), &nodes)
    }

    /// `g · C_H W`.
    pub fn g_times_conj(&self, w: &BiquaternionField) -> BiquaternionField {
        let z = BiquaternionField::zeros(w.domain());
        self.combine(&z, w, |_, w, g| g * w.quat_conj())
    }

    /// `C_H W · g`.
    pub fn conj_times_g(&self, w: &BiquaternionField) -> BiquaternionField {
        let z = BiquaternionField::zeros(w.domain());
        self.combine(&z, w, |_, w, g| w.quat_conj() * g)
    }

    /// `g · W`.
    pub fn g_times(&self, w: &BiquaternionField) -> BiquaternionField {
        let z = BiquaternionField::zeros(w.domain());
        self.combine(&z, w, |_, w, g| g * w)
    }

    /// `W · g`.
    pub fn times_g(&self, w: &BiquaternionField) -> BiquaternionField {
        let z = BiquaternionField::zeros(w.domain());
        self.combine(&z, w, |_, w, g| w * g)
    }
}

/// `V W = DW - (Df/f) C_H W`.
pub fn op_v(w: &BiquaternionField, f: &FactorizingFunction) -> BiquaternionField {
    f.combine(&dirac_left(w), w, |dw, w, g| dw - g * w.quat_conj())
}

/// `V̄ W = D_r W - (C_H W)(Df/f)`.
pub fn op_vbar(w: &BiquaternionField, f: &FactorizingFunction) -> BiquaternionField {
    f.combine(&dirac_right(w), w, |dw, w, g| dw - w.quat_conj() * g)
}

/// `V₁ w = D_r w + (Df/f) w`.
pub fn op_v1(w: &BiquaternionField, f: &FactorizingFunction) -> BiquaternionField {
    f.combine(&dirac_right(w), w, |dw, w, g| dw + g * w)
}

/// `V̄₁ w = D w + w (Df/f)`.
pub fn op_v1bar(w: &BiquaternionField, f: &FactorizingFunction) -> BiquaternionField {
    f.combine(&dirac_left(w), w, |dw, w, g| dw + w * g)
}

/// Relative size of `dw ± gw` against both terms and the floor of `w`.
fn first_order_relative(
    res: &BiquaternionField,
    dw: &BiquaternionField,
    gw: &BiquaternionField,
    w: &BiquaternionField,
    layer: usize,
) -> f64 {
    relative(
        interior_rms(res, layer),
        &[interior_rms(dw, layer), interior_rms(gw, layer), magnitude_floor(w, layer, 1)],
    )
}

/// Relative interior residual of `V W = 0`.
pub fn v_residual(w: &BiquaternionField, f: &FactorizingFunction, layer: usize) -> f64 {
    let dw = dirac_left(w);
    let gw = f.g_times_conj(w);
    first_order_relative(&dw.sub(&gw), &dw, &gw, w, layer)
}

/// Relative interior residual of `V̄ W = 0`.
pub fn vbar_residual(w: &BiquaternionField, f: &FactorizingFunction, layer: usize) -> f64 {
    let dw = dirac_right(w);
    let wg = f.conj_times_g(w);
    first_order_relative(&dw.sub(&wg), &dw, &wg, w, layer)
}

/// Relative interior residual of `V₁ w = 0`.
pub fn v1_residual(w: &BiquaternionField, f: &FactorizingFunction, layer: usize) -> f64 {
    let dw = dirac_right(w);
    let gw = f.g_times(w);
    first_order_relative(&dw.add(&gw), &dw, &gw, w, layer)
}

/// Relative interior residual of `V̄₁ w = 0`, i.e. of `(D + M^(Df/f)) w = 0`.
pub fn v1bar_residual(w: &BiquaternionField, f: &FactorizingFunction, layer: usize) -> f64 {
    let dw = dirac_left(w);
    let wg = f.times_g(w);
    first_order_relative(&dw.add(&wg), &dw, &wg, w, layer)
}

/// Relative interior residual of `(D - M^(Df/f)) w = 0`.
pub fn d_minus_m_residual(w: &BiquaternionField, f: &FactorizingFunction, layer: usize) -> f64 {
    let dw = dirac_left(w);
    let wg = f.times_g(w);
    first_order_relative(&dw.sub(&wg), &dw, &wg, w, layer)
}

/// The generating quartet `F0 = f`, `Fk = e_k / f`.
#[derive(Clone, Debug)]
pub struct GeneratingQuartet {
    elems: [BiquaternionField; 4],
}

impl GeneratingQuartet {
    pub fn new(f: &FactorizingFunction) -> Self {
        let inv = f.f().recip();
        let elems = std::array::from_fn(|a| {
            if a == 0 {
                f.f().to_biquaternion()
            } else {
                let e = Biquaternion::unit(a);
                let nodes: Vec<_> = inv.values().iter().map(|&s| e.scale(s)).collect();
                BiquaternionField::from_nodes(f.domain(), &nodes)
            }
        });
        GeneratingQuartet { elems }
    }

    pub fn get(&self, alpha: usize) -> &BiquaternionField {
        &self.elems[alpha]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BiquaternionField> {
        self.elems.iter()
    }
}

/// Scalar coordinates `φ0 = W0/f`, `φk = f Wk` of `W = Σ φ_α F_α`.
pub fn phi_coords(w: &BiquaternionField, f: &FactorizingFunction) -> [ScalarField; 4] {
    let v = w.vec();
    [
        w.sc().div_scalar(f.f()),
        v.scalar_component(0).mul(f.f()),
        v.scalar_component(1).mul(f.f()),
        v.scalar_component(2).mul(f.f()),
    ]
}

/// Inverse of [`phi_coords`]: `W = f φ0 + Σ φk e_k / f`.
pub fn from_phi_coords(phi: &[ScalarField; 4], f: &FactorizingFunction) -> BiquaternionField {
    let w0 = phi[0].mul(f.f());
    let vec = VectorField::from_scalars(
        &phi[1].div_scalar(f.f()),
        &phi[2].div_scalar(f.f()),
        &phi[3].div_scalar(f.f()),
    );
    BiquaternionField::from_parts(&w0, &vec)
}

/// Bers derivative `Ẇ = V̄ W` of a solution of `V W = 0`.
///
/// Both the solution check and the purity check are relative interior
/// residuals compared against `tol`. The (diagnostic) scalar part is dropped.
pub fn bers_derivative(
    w: &BiquaternionField,
    f: &FactorizingFunction,
    tol: f64,
    layer: usize,
) -> Result<VectorField> {
    let residual = v_residual(w, f, layer);
    if !(residual <= tol) {
        return Err(Error::NotAVekuaSolution { residual, tolerance: tol });
    }
    let dw = dirac_right(w);
    let wg = f.conj_times_g(w);
    let wdot = dw.sub(&wg);
    let scalar = first_order_relative(&wdot.sc().to_biquaternion(), &dw, &wg, w, layer);
    if !(scalar <= tol) {
        return Err(Error::ScalarPartNonzero { residual: scalar, tolerance: tol });
    }
    Ok(wdot.vec())
}

/// Relative size of the scalar part of `V̄ W`.
pub fn derivative_scalar_part(w: &BiquaternionField, f: &FactorizingFunction, layer: usize) -> f64 {
    let dw = dirac_right(w);
    let wg = f.conj_times_g(w);
    first_order_relative(&dw.sub(&wg).sc().to_biquaternion(), &dw, &wg, w, layer)
}

/// The second representation `Ẇ = Σ_α F_α · Dφ_α` (full biquaternion).
pub fn bers_derivative_quartet(w: &BiquaternionField, f: &FactorizingFunction) -> BiquaternionField {
    let quartet = GeneratingQuartet::new(f);
    let phi = phi_coords(w, f);
    let mut acc = BiquaternionField::zeros(w.domain());
    for (fa, pa) in quartet.iter().zip(&phi) {
        let dphi = grid::grad(pa).to_biquaternion();
        acc = acc.add(&fa.mul(&dphi));
    }
    acc
}

/// `(-Δ + q) u`.
pub fn schrodinger_operator(u: &ScalarField, q: &ScalarField) -> ScalarField {
    u.mul(q).sub(&grid::laplacian(u))
}

/// Relative interior norm of `(-Δ + q) u` against `‖Δu‖ + ‖qu‖` and the floor of `u`.
pub fn schrodinger_residual(u: &ScalarField, q: &ScalarField, layer: usize) -> f64 {
    let lap = grid::laplacian(u);
    let qu = u.mul(q);
    relative(
        interior_rms(&qu.sub(&lap), layer),
        &[interior_rms(&lap, layer), interior_rms(&qu, layer), magnitude_floor(u, layer, 2)],
    )
}

/// Vector part `Df/f` of `f` as a biquaternion field.
pub fn log_derivative_field(f: &FactorizingFunction) -> BiquaternionField {
    f.df_over_f().to_biquaternion()
}
