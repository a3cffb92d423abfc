//! Exact solutions from symmetry: fields built from a harmonic `ρ` related to
//! `f`, the cylindrical generating triplet and the Schrödinger-solution
//! factory `ψ = f 𝒜[Dρ/f²]`.

use crate::antiderivative::laplace_relative;
use crate::error::{Error, Result};
use crate::grid::{
    self, interior_rms, magnitude_floor, relative, BiquaternionField, GridDomain, ScalarField,
    VectorField,
};
use crate::potential::{potential_a_unchecked, PotentialPath};
use crate::vekua_ops::{d_minus_m_residual, v1bar_residual, FactorizingFunction};
use crate::Complex64;

/// Radius below which a node counts as lying on the axis (or at the origin).
const SINGULAR_RADIUS: f64 = 1e-12;

/// A harmonic function `ρ`, either in closed form or sampled.
#[derive(Clone, Debug)]
pub enum HarmonicFunctionSpec {
    /// `log r` with `r` the distance to the `x3` axis.
    LogRCyl,
    /// The polar angle `atan2(x2, x1)`.
    ThetaCyl,
    ZCoord,
    /// `1/|x|`.
    InvRSph,
    /// `a x1 + b x2 + c x3`.
    Linear(f64, f64, f64),
    Custom(ScalarField),
}

impl HarmonicFunctionSpec {
    pub fn name(&self) -> String {
        match self {
            HarmonicFunctionSpec::LogRCyl => "log-r".into(),
            HarmonicFunctionSpec::ThetaCyl => "theta".into(),
            HarmonicFunctionSpec::ZCoord => "z".into(),
            HarmonicFunctionSpec::InvRSph => "inv-r".into(),
            HarmonicFunctionSpec::Linear(a, b, c) => format!("linear:{a},{b},{c}"),
            HarmonicFunctionSpec::Custom(_) => "custom".into(),
        }
    }

    /// Parse the closed-form names used in scenario files.
    pub fn parse(s: &str) -> Result<Self> {
        let spec = match s {
            "log-r" => HarmonicFunctionSpec::LogRCyl,
            "theta" => HarmonicFunctionSpec::ThetaCyl,
            "z" => HarmonicFunctionSpec::ZCoord,
            "inv-r" => HarmonicFunctionSpec::InvRSph,
            other => {
                let coeffs = other
                    .strip_prefix("linear:")
                    .map(|rest| rest.split(',').map(|t| t.trim().parse::<f64>()).collect::<Vec<_>>());
                match coeffs.as_deref() {
                    Some([Ok(a), Ok(b), Ok(c)]) => HarmonicFunctionSpec::Linear(*a, *b, *c),
                    _ => {
                        return Err(Error::Unknown { kind: "harmonic function", name: other.to_owned() })
                    }
                }
            }
        };
        Ok(spec)
    }

    fn value_at(&self, p: [f64; 3]) -> f64 {
        let r2 = p[0] * p[0] + p[1] * p[1];
        match self {
            HarmonicFunctionSpec::LogRCyl => 0.5 * r2.ln(),
            HarmonicFunctionSpec::ThetaCyl => p[1].atan2(p[0]),
            HarmonicFunctionSpec::ZCoord => p[2],
            HarmonicFunctionSpec::InvRSph => 1.0 / (r2 + p[2] * p[2]).sqrt(),
            HarmonicFunctionSpec::Linear(a, b, c) => a * p[0] + b * p[1] + c * p[2],
            HarmonicFunctionSpec::Custom(_) => unreachable!("sampled spec has no closed form"),
        }
    }

    fn gradient_at(&self, p: [f64; 3]) -> [f64; 3] {
        let r2 = p[0] * p[0] + p[1] * p[1];
        match self {
            HarmonicFunctionSpec::LogRCyl => [p[0] / r2, p[1] / r2, 0.0],
            HarmonicFunctionSpec::ThetaCyl => [-p[1] / r2, p[0] / r2, 0.0],
            HarmonicFunctionSpec::ZCoord => [0.0, 0.0, 1.0],
            HarmonicFunctionSpec::InvRSph => {
                let s3 = (r2 + p[2] * p[2]).powf(1.5);
                [-p[0] / s3, -p[1] / s3, -p[2] / s3]
            }
            HarmonicFunctionSpec::Linear(a, b, c) => [*a, *b, *c],
            HarmonicFunctionSpec::Custom(_) => unreachable!("sampled spec has no closed form"),
        }
    }

    /// Reject domains containing the singular set of the closed form.
    pub fn check_domain(&self, domain: &GridDomain) -> Result<()> {
        match self {
            HarmonicFunctionSpec::LogRCyl | HarmonicFunctionSpec::ThetaCyl => check_axis_free(domain),
            HarmonicFunctionSpec::InvRSph => check_origin_free(domain),
            HarmonicFunctionSpec::Custom(rho) if !rho.domain().same_grid(domain) => {
                Err(Error::InvalidGrid("custom harmonic function lives on another grid".into()))
            }
            _ => Ok(()),
        }
    }

    /// Sample `ρ`; a custom field must pass the Laplacian check.
    pub fn values(&self, domain: &GridDomain, tol: f64, layer: usize) -> Result<ScalarField> {
        self.check_domain(domain)?;
        match self {
            HarmonicFunctionSpec::Custom(rho) => {
                let residual = laplace_relative(rho, layer);
                if !(residual <= tol) {
                    return Err(Error::NotHarmonic { residual, tolerance: tol });
                }
                Ok(rho.clone())
            }
            _ => ScalarField::from_real_fn(domain, |p| self.value_at(p)),
        }
    }

    /// `Dρ = ∇ρ`: analytic for closed forms, stencil gradient for custom fields.
    pub fn gradient(&self, domain: &GridDomain, tol: f64, layer: usize) -> Result<VectorField> {
        match self {
            HarmonicFunctionSpec::Custom(_) => Ok(grid::grad(&self.values(domain, tol, layer)?)),
            _ => {
                self.check_domain(domain)?;
                VectorField::from_real_fn(domain, |p| self.gradient_at(p))
            }
        }
    }
}

pub fn check_axis_free(domain: &GridDomain) -> Result<()> {
    for i in 0..domain.len() {
        let p = domain.node_coords(i);
        if (p[0] * p[0] + p[1] * p[1]).sqrt() < SINGULAR_RADIUS {
            return Err(Error::AxisInDomain { node: i });
        }
    }
    Ok(())
}

pub fn check_origin_free(domain: &GridDomain) -> Result<()> {
    for i in 0..domain.len() {
        let p = domain.node_coords(i);
        if p.iter().map(|x| x * x).sum::<f64>().sqrt() < SINGULAR_RADIUS {
            return Err(Error::OriginInDomain { node: i });
        }
    }
    Ok(())
}

/// The axis-free box `[1,2] × [1,2] × [0,1]`.
pub fn cylindrical_shell_box(n: usize) -> Result<GridDomain> {
    GridDomain::from_bounds([1.0, 1.0, 0.0], [2.0, 2.0, 1.0], n)
}

/// The origin-free box `[1,2]³`.
pub fn spherical_shell_box(n: usize) -> Result<GridDomain> {
    GridDomain::cube(1.0, 2.0, n)
}

/// `(rms |g × ∇ρ|, rms |g| |∇ρ|)` and `(rms <g, ∇ρ>, ...)` with `g = ∇f/f`.
fn alignment(f: &FactorizingFunction, grad_rho: &VectorField, layer: usize) -> (f64, f64, f64) {
    let g = f.df_over_f();
    let cross = interior_rms(&g.cross(grad_rho), layer);
    let dot = interior_rms(&g.dot(grad_rho), layer);
    let lengths = ScalarField::from_raw_values(
        g.domain(),
        (0..g.len())
            .map(|i| {
                let a: f64 = g.at(i).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                let b: f64 = grad_rho.at(i).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                Complex64::new(a * b, 0.0)
            })
            .collect(),
    );
    (cross, dot, interior_rms(&lengths, layer))
}

/// Relative size of `∇f × ∇ρ`.
pub fn parallel_residual(f: &FactorizingFunction, grad_rho: &VectorField, layer: usize) -> f64 {
    let (cross, _, scale) = alignment(f, grad_rho, layer);
    relative(cross, &[scale])
}

/// Relative size of `<∇f, ∇ρ>`.
pub fn orthogonal_residual(f: &FactorizingFunction, grad_rho: &VectorField, layer: usize) -> f64 {
    let (_, dot, scale) = alignment(f, grad_rho, layer);
    relative(dot, &[scale])
}

/// Solutions from a harmonic `ρ`, as `(F, G)` with `(D + M)F = 0` and `(D - M)G = 0`.
#[derive(Clone, Debug)]
pub struct SymmetricPair {
    pub f_sol: VectorField,
    pub g_sol: VectorField,
}

/// `F = Dρ/f`, `G = f Dρ` when `∇f × ∇ρ = 0`.
pub fn parallel_solution(
    f: &FactorizingFunction,
    rho: &HarmonicFunctionSpec,
    tol: f64,
    layer: usize,
) -> Result<SymmetricPair> {
    let grad_rho = rho.gradient(f.domain(), tol, layer)?;
    let residual = parallel_residual(f, &grad_rho, layer);
    if !(residual <= tol) {
        return Err(Error::NotParallel { residual, tolerance: tol });
    }
    Ok(SymmetricPair {
        f_sol: grad_rho.div_scalar(f.f()),
        g_sol: grad_rho.mul_scalar(f.f()),
    })
}

/// `F = f Dρ`, `G = Dρ/f` when `<∇f, ∇ρ> = 0`.
pub fn orthogonal_solution(
    f: &FactorizingFunction,
    rho: &HarmonicFunctionSpec,
    tol: f64,
    layer: usize,
) -> Result<SymmetricPair> {
    let grad_rho = rho.gradient(f.domain(), tol, layer)?;
    let residual = orthogonal_residual(f, &grad_rho, layer);
    if !(residual <= tol) {
        return Err(Error::NotOrthogonal { residual, tolerance: tol });
    }
    Ok(SymmetricPair {
        f_sol: grad_rho.mul_scalar(f.f()),
        g_sol: grad_rho.div_scalar(f.f()),
    })
}

/// Residual of `(D + M^(Df/f)) F = 0` for a vector field.
pub fn d_plus_m_residual(w: &VectorField, f: &FactorizingFunction, layer: usize) -> f64 {
    v1bar_residual(&w.to_biquaternion(), f, layer)
}

/// Residual of `(D - M^(Df/f)) G = 0` for a vector field.
pub fn d_minus_m_vector_residual(w: &VectorField, f: &FactorizingFunction, layer: usize) -> f64 {
    d_minus_m_residual(&w.to_biquaternion(), f, layer)
}

/// Three vector solutions of `(D + M^(Df/f)) w = 0`, independent at every node.
#[derive(Clone, Debug)]
pub struct GeneratingTriplet {
    elems: [VectorField; 3],
}

impl GeneratingTriplet {
    pub fn new(elems: [VectorField; 3]) -> Self {
        GeneratingTriplet { elems }
    }

    pub fn get(&self, k: usize) -> &VectorField {
        &self.elems[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &VectorField> {
        self.elems.iter()
    }

    fn matrix(&self, i: usize) -> [[Complex64; 3]; 3] {
        // columns are the triplet elements
        let cols = [self.elems[0].at(i), self.elems[1].at(i), self.elems[2].at(i)];
        std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r]))
    }

    /// Node-wise determinant of the matrix whose columns are `F1, F2, F3`.
    pub fn determinant(&self) -> ScalarField {
        let d = *self.elems[0].domain();
        let vals = (0..d.len()).map(|i| det3(&self.matrix(i))).collect();
        ScalarField::from_raw_values(&d, vals)
    }

    /// Smallest node-wise `|det|`.
    pub fn min_abs_determinant(&self) -> f64 {
        self.determinant().values().iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Scalars `φ_k` with `w = Σ φ_k F_k`, by Cramer's rule at every node.
    pub fn represent(&self, w: &VectorField) -> Result<[ScalarField; 3]> {
        let d = *self.elems[0].domain();
        let mut out: [Vec<Complex64>; 3] = std::array::from_fn(|_| Vec::with_capacity(d.len()));
        for i in 0..d.len() {
            let m = self.matrix(i);
            let det = det3(&m);
            if det.norm() == 0.0 {
                return Err(Error::InvalidGrid(format!("triplet is singular at node {i}")));
            }
            let rhs = w.at(i);
            for (k, slot) in out.iter_mut().enumerate() {
                let mut mk = m;
                for r in 0..3 {
                    mk[r][k] = rhs[r];
                }
                slot.push(det3(&mk) / det);
            }
        }
        Ok(out.map(|v| ScalarField::from_raw_values(&d, v)))
    }

    /// `Σ φ_k F_k`.
    pub fn recompose(&self, phi: &[ScalarField; 3]) -> VectorField {
        let d = *self.elems[0].domain();
        phi.iter()
            .zip(&self.elems)
            .fold(VectorField::zeros(&d), |acc, (p, fk)| acc.add(&fk.mul_scalar(p)))
    }
}

fn det3(m: &[[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// The triplet for `f = f(r)`: `F1 = D(log r)/f`, `F2 = -f Dθ`, `F3 = f e3`.
pub fn cylindrical_triplet(f: &FactorizingFunction, tol: f64, layer: usize) -> Result<GeneratingTriplet> {
    let d = *f.domain();
    check_axis_free(&d)?;
    let f1 = parallel_solution(f, &HarmonicFunctionSpec::LogRCyl, tol, layer)?.f_sol;
    let f2 = orthogonal_solution(f, &HarmonicFunctionSpec::ThetaCyl, tol, layer)?.f_sol.neg();
    let f3 = orthogonal_solution(f, &HarmonicFunctionSpec::ZCoord, tol, layer)?.f_sol;
    Ok(GeneratingTriplet::new([f1, f2, f3]))
}

/// Relative interior size of `Σ (Dφ_k) F_k`.
pub fn triplet_vekua_residual(phi: &[ScalarField; 3], t: &GeneratingTriplet, layer: usize) -> f64 {
    let d = *t.get(0).domain();
    let mut sum = BiquaternionField::zeros(&d);
    let mut terms = Vec::with_capacity(4);
    let mut floor = 0.0;
    for (p, fk) in phi.iter().zip(t.iter()) {
        let term = grid::grad(p).to_biquaternion().mul(&fk.to_biquaternion());
        terms.push(interior_rms(&term, layer));
        floor += magnitude_floor(&fk.mul_scalar(p), layer, 1);
        sum = sum.add(&term);
    }
    terms.push(floor);
    relative(interior_rms(&sum, layer), &terms)
}

/// `ψ = f 𝒜[Dρ/f²]`, a solution of `(-Δ + q) ψ = 0` when `f` is a function of `ρ`.
pub fn schrodinger_from_symmetry(
    f: &FactorizingFunction,
    rho: &HarmonicFunctionSpec,
    path: &PotentialPath,
    tol: f64,
    layer: usize,
) -> Result<ScalarField> {
    let pair = parallel_solution(f, rho, tol, layer)?;
    let a = potential_a_unchecked(&pair.f_sol.div_scalar(f.f()), path)?;
    Ok(a.mul(f.f()))
}
