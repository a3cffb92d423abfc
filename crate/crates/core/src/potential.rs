//! Reconstruction operators: the conservative potential `𝒜`, the Newton
//! potential `𝐁` and right inverses of `rot` built from them.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{
    self, interior_rms, magnitude_floor, relative, stencil, Field, GridDomain, ScalarField, VectorField,
};
use crate::registry::Registry;

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Base point and additive constant of the axis-path line integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialPath {
    pub base: [f64; 3],
    pub c: Complex64,
}

impl PotentialPath {
    pub fn new(base: [f64; 3]) -> Self {
        PotentialPath { base, c: CZERO }
    }

    pub fn with_constant(self, c: Complex64) -> Self {
        PotentialPath { c, ..self }
    }

    /// Path starting at the grid origin.
    pub fn at_origin(domain: &GridDomain) -> Self {
        PotentialPath::new(domain.origin())
    }

    pub fn base_node(&self, domain: &GridDomain) -> Result<[usize; 3]> {
        domain.node_at(self.base)
    }
}

/// Relative interior size of `rot Ψ` against the partials that build it and the floor of `Ψ`.
pub fn rot_relative(psi: &VectorField, layer: usize) -> f64 {
    let d = |c: usize, axis: usize| interior_rms(&grid::partial(&psi.scalar_component(c), axis), layer);
    let terms = [d(2, 1), d(1, 2), d(0, 2), d(2, 0), d(1, 0), d(0, 1), magnitude_floor(psi, layer, 1)];
    relative(interior_rms(&grid::rot(psi), layer), &terms)
}

/// Integrate each grid line along `axis` from index `from`, writing into `out`.
fn integrate_lines(
    src: &[Complex64],
    out: &mut [Complex64],
    domain: &GridDomain,
    axis: usize,
    from: usize,
    select: impl Fn([usize; 3]) -> bool,
) {
    let res = domain.res();
    let h = domain.spacing()[axis];
    let st = domain.strides();
    let (a, b) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    for ib in 0..res[b] {
        for ia in 0..res[a] {
            let mut ijk = [0usize; 3];
            ijk[a] = ia;
            ijk[b] = ib;
            if !select(ijk) {
                continue;
            }
            let start = ia * st[a] + ib * st[b];
            let line: Vec<Complex64> = (0..res[axis]).map(|i| src[start + i * st[axis]]).collect();
            let cum = stencil::cumulative_trapezoid(&line, from, h);
            for (i, v) in cum.into_iter().enumerate() {
                out[start + i * st[axis]] = v;
            }
        }
    }
}

/// Line integral of `Ψ` along the axis path `base → (x, y0, z0) → (x, y, z0) → (x, y, z)`
/// following `order` (a permutation of the axes), trapezoid rule on every segment.
fn path_integral(psi: &VectorField, base: [usize; 3], order: [usize; 3]) -> Vec<Complex64> {
    let d = *psi.domain();
    let n = d.len();
    let mut total = vec![CZERO; n];
    // fixed[a] = true once axis a has been integrated (then it varies freely)
    let mut free = [false; 3];
    for &axis in &order {
        let mut seg = vec![CZERO; n];
        let free_now = free;
        integrate_lines(psi.component(axis), &mut seg, &d, axis, base[axis], |ijk| {
            (0..3).all(|k| k == axis || free_now[k] || ijk[k] == base[k])
        });
        free[axis] = true;
        // Broadcast the segment value along the axes that are still pinned.
        for idx in 0..n {
            let mut ijk = d.ijk(idx);
            for k in 0..3 {
                if !free[k] {
                    ijk[k] = base[k];
                }
            }
            total[idx] += seg[d.index(ijk)];
        }
    }
    total
}

/// The potential `𝒜[Ψ]`: a scalar `φ` with `∇φ = Ψ` for conservative `Ψ`.
pub fn potential_a(
    psi: &VectorField,
    path: &PotentialPath,
    tol: f64,
    layer: usize,
) -> Result<ScalarField> {
    let residual = rot_relative(psi, layer);
    if !(residual <= tol) {
        return Err(Error::NotConservative { residual, tolerance: tol });
    }
    potential_a_unchecked(psi, path)
}

/// `𝒜[Ψ]` without the conservativity check (x, then y, then z).
pub fn potential_a_unchecked(psi: &VectorField, path: &PotentialPath) -> Result<ScalarField> {
    potential_a_ordered(psi, path, [0, 1, 2])
}

/// `𝒜[Ψ]` with the axis order of the path given explicitly.
pub fn potential_a_ordered(
    psi: &VectorField,
    path: &PotentialPath,
    order: [usize; 3],
) -> Result<ScalarField> {
    let base = path.base_node(psi.domain())?;
    let mut v = path_integral(psi, base, order);
    for x in &mut v {
        *x += path.c;
    }
    Ok(Field::from_raw(*psi.domain(), [v]))
}

/// Quadrature weight of each node: the volume of its dual cell.
pub fn node_weights(domain: &GridDomain) -> Vec<f64> {
    let h = domain.spacing();
    let res = domain.res();
    (0..domain.len())
        .map(|idx| {
            let ijk = domain.ijk(idx);
            (0..3)
                .map(|k| if ijk[k] == 0 || ijk[k] == res[k] - 1 { 0.5 * h[k] } else { h[k] })
                .product()
        })
        .collect()
}

/// Component-wise Newton potential `(1/4π) ∫ Q(y)/|x-y| dy` over the box.
///
/// Node-centred midpoint quadrature. The self cell is replaced by the ball of
/// equal volume, which contributes `Q(x) r_eq² / 2`.
fn newton_planes(domain: &GridDomain, planes: &[&[Complex64]]) -> Vec<Vec<Complex64>> {
    let res = domain.res();
    let h = domain.spacing();
    let weights = node_weights(domain);
    // kernel table over absolute index offsets
    let (n1, n2, n3) = (res[0], res[1], res[2]);
    let mut kernel = vec![0.0f64; n1 * n2 * n3];
    for dk in 0..n3 {
        for dj in 0..n2 {
            for di in 0..n1 {
                let r2 = (di as f64 * h[0]).powi(2) + (dj as f64 * h[1]).powi(2) + (dk as f64 * h[2]).powi(2);
                if r2 > 0.0 {
                    kernel[di + n1 * (dj + n2 * dk)] = 1.0 / (4.0 * PI * r2.sqrt());
                }
            }
        }
    }
    let weighted: Vec<Vec<Complex64>> = planes
        .iter()
        .map(|p| p.iter().zip(&weights).map(|(v, w)| v * w).collect())
        .collect();
    let ncomp = planes.len();
    let results: Vec<Vec<Complex64>> = (0..domain.len())
        .into_par_iter()
        .map(|t| {
            let [ti, tj, tk] = domain.ijk(t);
            let mut acc = vec![CZERO; ncomp];
            for sk in 0..n3 {
                let dk = tk.abs_diff(sk);
                for sj in 0..n2 {
                    let dj = tj.abs_diff(sj);
                    let krow = n1 * (dj + n2 * dk);
                    let srow = n1 * (sj + n2 * sk);
                    for si in 0..n1 {
                        let kv = kernel[krow + ti.abs_diff(si)];
                        let s = srow + si;
                        for c in 0..ncomp {
                            acc[c] += weighted[c][s] * kv;
                        }
                    }
                }
            }
            let r_eq = (3.0 * weights[t] / (4.0 * PI)).cbrt();
            let self_term = 0.5 * r_eq * r_eq;
            for c in 0..ncomp {
                acc[c] += planes[c][t] * self_term;
            }
            acc
        })
        .collect();
    (0..ncomp)
        .map(|c| results.iter().map(|r| r[c]).collect())
        .collect()
}

/// Scalar Newton potential `N[g] = (1/4π) ∫ g(y)/|x-y| dy`; `-Δ N[g] = g` inside.
pub fn newton_potential(g: &ScalarField) -> ScalarField {
    let mut planes = newton_planes(g.domain(), &[g.values()]);
    Field::from_raw(*g.domain(), [planes.remove(0)])
}

/// Vector Newton potential `𝐁[Q]`, applied per component.
pub fn newton_potential_b(q: &VectorField) -> VectorField {
    let planes = newton_planes(q.domain(), &[q.component(0), q.component(1), q.component(2)]);
    let [a, b, c]: [Vec<Complex64>; 3] = planes.try_into().expect("three components");
    Field::from_raw(*q.domain(), [a, b, c])
}

/// Axis-path vector potential of a divergence-free `G`:
/// `Φ = (0, ∫ G3 dx, -∫ G2 dx + ∫ G1(x_b, ·, z) dy)` with `rot Φ = G`.
pub fn axis_vector_potential(g: &VectorField, base: [usize; 3]) -> VectorField {
    let d = *g.domain();
    let n = d.len();
    let mut g3x = vec![CZERO; n];
    let mut g2x = vec![CZERO; n];
    integrate_lines(g.component(2), &mut g3x, &d, 0, base[0], |_| true);
    integrate_lines(g.component(1), &mut g2x, &d, 0, base[0], |_| true);
    let mut g1y = vec![CZERO; n];
    integrate_lines(g.component(0), &mut g1y, &d, 1, base[1], |ijk| ijk[0] == base[0]);
    let phi3: Vec<Complex64> = (0..n)
        .map(|idx| {
            let mut ijk = d.ijk(idx);
            ijk[0] = base[0];
            -g2x[idx] + g1y[d.index(ijk)]
        })
        .collect();
    Field::from_raw(d, [vec![CZERO; n], g3x, phi3])
}

/// A right inverse of `rot` on divergence-free fields: `Φ` with `rot Φ = Q`
/// and `div Φ = 0`.
pub trait CurlInverse: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn apply(&self, q: &VectorField) -> VectorField;
}

/// `Φ = rot 𝐁[Q]`, exact when `Q` has no flux through the box boundary.
pub struct NewtonCurl;

impl CurlInverse for NewtonCurl {
    fn name(&self) -> &'static str {
        "newton"
    }

    fn description(&self) -> &'static str {
        "rot B[Q] over the box; exact only when Q has no boundary flux"
    }

    fn apply(&self, q: &VectorField) -> VectorField {
        grid::rot(&newton_potential_b(q))
    }
}

/// Divergence-free `Ψ` with `rot Ψ = G` for divergence-free `G`, from the
/// axis-path potential plus a Newton-potential gradient.
fn solenoidal_axis_potential(g: &VectorField) -> VectorField {
    let base = g.domain().center_node();
    let p = axis_vector_potential(g, base);
    let chi = newton_potential(&grid::div(&p));
    p.add(&grid::grad(&chi))
}

/// `Φ = rot 𝐁[Q] - Ψ` where `rot Ψ = ∇ div 𝐁[Q]`.
///
/// On a bounded box `rot rot 𝐁[Q] = Q + ∇ div 𝐁[Q]` and `div 𝐁[Q]` is the
/// single-layer potential of the boundary flux of `Q`, harmonic inside. The
/// correction removes that gradient while keeping `div Φ = 0`.
pub struct FluxCorrectedNewtonCurl;

impl CurlInverse for FluxCorrectedNewtonCurl {
    fn name(&self) -> &'static str {
        "newton-corrected"
    }

    fn description(&self) -> &'static str {
        "rot B[Q] minus a solenoidal field whose rot cancels the boundary-flux term grad div B[Q]"
    }

    fn apply(&self, q: &VectorField) -> VectorField {
        let b = newton_potential_b(q);
        let sigma = grid::div(&b);
        let psi = solenoidal_axis_potential(&grid::grad(&sigma));
        grid::rot(&b).sub(&psi)
    }
}

/// `Φ = P[Q] + ∇N[div P[Q]]` with the axis-path potential `P`.
pub struct AxisPathCurl;

impl CurlInverse for AxisPathCurl {
    fn name(&self) -> &'static str {
        "axis-path"
    }

    fn description(&self) -> &'static str {
        "axis-path vector potential made solenoidal with a scalar Newton potential"
    }

    fn apply(&self, q: &VectorField) -> VectorField {
        solenoidal_axis_potential(q)
    }
}

/// Name used when no curl inverse is requested explicitly.
///
/// `rot 𝐁[Q]` over a finite box misses the boundary-flux term, which the
/// conjugate and antiderivative inputs generally carry, so the default is the
/// axis-path construction.
pub const DEFAULT_CURL_INVERSE: &str = "axis-path";

pub fn curl_inverses() -> &'static Registry<dyn CurlInverse> {
    static REGISTRY: OnceLock<Registry<dyn CurlInverse>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut r: Registry<dyn CurlInverse> = Registry::new("curl inverse");
        let items: [Arc<dyn CurlInverse>; 3] =
            [Arc::new(NewtonCurl), Arc::new(FluxCorrectedNewtonCurl), Arc::new(AxisPathCurl)];
        for item in items {
            r.register(item.name(), item);
        }
        r
    })
}

pub fn curl_inverse(name: &str) -> Result<Arc<dyn CurlInverse>> {
    curl_inverses().get(name)
}
