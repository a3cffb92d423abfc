//! Verification checks run by `verify`, registered by name.

use std::sync::{Arc, OnceLock};

use vekua::antiderivative::{HarmonicGauge, Reconstructor};
use vekua::grid::{self, interior_rms, magnitude_floor, relative, BiquaternionField, GridDomain, ScalarField};
use vekua::potential::{CurlInverse, PotentialPath};
use vekua::registry::Registry;
use vekua::symmetric::{
    cylindrical_triplet, d_minus_m_vector_residual, d_plus_m_residual, parallel_solution, schrodinger_from_symmetry,
    HarmonicFunctionSpec,
};
use vekua::vekua_ops::{
    derivative_scalar_part, op_v, op_v1bar, schrodinger_operator, schrodinger_residual, v_residual, vbar_residual,
    FactorizingFunction, GeneratingQuartet,
};
use vekua::{Error, Result};

use crate::profile::read_scalar;
use crate::scenario::{GaugeSpec, Scenario};

/// Tolerance for preconditions inside a check; the check itself measures
/// the residual that matters.
pub const PRECONDITION_TOL: f64 = 0.1;

/// Smallest admissible node-wise `|det|` of a generating triplet.
pub const MIN_TRIPLET_DET: f64 = 1e-8;

/// How a check's residual is judged across a refinement study.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// `≤ K h²` and successive ratios inside the scenario window.
    Stencil,
    /// `≤` the scenario's quadrature bound and monotone decrease.
    Quadrature,
}

/// Everything a check sees at one resolution.
pub struct CheckContext<'a> {
    pub scenario: &'a Scenario,
    pub domain: GridDomain,
    pub f: &'a FactorizingFunction,
    pub layer: usize,
    pub curl: Arc<dyn CurlInverse>,
}

impl CheckContext<'_> {
    pub fn path(&self) -> PotentialPath {
        match self.scenario.base {
            Some(b) => PotentialPath::new(b),
            None => PotentialPath::at_origin(&self.domain),
        }
    }

    fn rho(&self, check: &str) -> Result<&HarmonicFunctionSpec> {
        self.scenario
            .rho
            .as_ref()
            .ok_or_else(|| Error::Scenario(format!("check `{check}` needs `rho`")))
    }

    fn gauge(&self) -> Result<HarmonicGauge> {
        match &self.scenario.gauge {
            GaugeSpec::Zero => Ok(HarmonicGauge::Zero),
            GaugeSpec::File(p) => {
                let h = read_scalar(p)?;
                if !h.domain().same_grid(&self.domain) {
                    return Err(Error::FieldMismatch(format!("{} is not on the scenario grid", p.display())));
                }
                HarmonicGauge::field(h, PRECONDITION_TOL, self.layer)
            }
        }
    }
}

pub trait VerificationCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn kind(&self) -> CheckKind {
        CheckKind::Stencil
    }
    /// Uses the O(N²) Newton potential.
    fn newton_dependent(&self) -> bool {
        false
    }
    fn residual(&self, ctx: &CheckContext) -> Result<f64>;
}

/// Smooth real test function shared by the operator checks.
fn manufactured(d: &GridDomain) -> Result<ScalarField> {
    ScalarField::from_real_fn(d, |p| p[0].sin() * p[1].cos() * p[2].exp() + 0.3 * p[0] * p[1] * p[2])
}

struct DSquared;

impl VerificationCheck for DSquared {
    fn name(&self) -> &'static str {
        "d-squared"
    }

    fn description(&self) -> &'static str {
        "D(Dφ) against -Δφ on a smooth scalar"
    }

    fn residual(&self, ctx: &CheckContext) -> Result<f64> {
        let phi = manufactured(&ctx.domain)?.to_biquaternion();
        let dd = grid::dirac_left(&grid::dirac_left(&phi));
        let lap = grid::laplacian(&phi);
        let l = ctx.layer;
        Ok(relative(
            interior_rms(&dd.add(&lap), l),
            &[interior_rms(&dd, l), interior_rms(&lap, l), magnitude_floor(&phi, l, 2)],
        ))
    }
}

struct Factorization;

impl VerificationCheck for Factorization {
    fn name(&self) -> &'static str {
        "factorization"
    }

    fn description(&self) -> &'static str {
        "(D + M)(D - g C_H)φ against (-Δ + q)φ"
    }

    fn residual(&self, ctx: &CheckContext) -> Result<f64> {
        let phi = manufactured(&ctx.domain)?;
        let lhs = op_v1bar(&op_v(&phi.to_biquaternion(), ctx.f), ctx.f);
        let rhs = schrodinger_operator(&phi, ctx.f.q()).to_biquaternion();
        let l = ctx.layer;
        Ok(relative(
            interior_rms(&lhs.sub(&rhs), l),
            &[interior_rms(&lhs, l), interior_rms(&rhs, l), magnitude_floor(&phi, l, 2)],
        ))
    }
}

struct Quartet;

impl VerificationCheck for Quartet {
    fn name(&self) -> &'static str {
        "quartet"
    }

    fn description(&self) -> &'static str {
        "V F_α and V̄ F_α for the generating quartet"
    }

    fn residual(&self, ctx: &CheckContext) -> Result<f64> {
        let q = GeneratingQuartet::new(ctx.f);
        Ok(q.iter()
            .map(|fa| v_residual(fa, ctx.f, ctx.layer).max(vbar_residual(fa, ctx.f, ctx.layer)))
            .fold(0.0, f64::max))
    }
}

struct Parallel;

impl VerificationCheck for Parallel {
    fn name(&self) -> &'static str {
        "parallel"
    }

    fn description(&self) -> &'static str {
        "(D + M)F and (D - M)G for F = Dρ/f, G = f Dρ"
    }

    fn residual(&self, ctx: &CheckContext) -> Result<f64> {
        let pair = parallel_solution(ctx.f, ctx.rho(self.name())?, PRECONDITION_TOL, ctx.layer)?;
        Ok(d_plus_m_residual(&pair.f_sol, ctx.f, ctx.layer).max(d_minus_m_vector_residual(
            &pair.g_sol,
            ctx.f,
            ctx.layer,
        )))
    }
}

struct SymmetryFactory;

impl VerificationCheck for SymmetryFactory {
    fn name(&self) -> &'static str {
        "symmetry-factory"
    }

    fn description(&self) -> &'static str {
        "Schrödinger residual of ψ = f 𝒜[Dρ/f²]"
    }

    fn residual(&self, ctx: &CheckContext) -> Result<f64> {
        let psi = schrodinger_from_symmetry(ctx.f, ctx.rho(self.name())?, &ctx.path(), PRECONDITION_TOL, ctx.layer)?;
        Ok(schrodinger_residual(&psi, ctx.f.q(), ctx.layer))
    }
}

struct Triplet;

impl VerificationCheck for Triplet {
    fn name(&self) -> &'static str {
        "triplet"
    }

    fn description(&self) -> &'static str {
        "(D + M)F_k for the cylindrical triplet, with |det| bounded away from zero"
    }

    fn residual(&self, ctx: &CheckContext) -> Result<f64> {
        let t = cylindrical_triplet(ctx.f, PRECONDITION_TOL, ctx.layer)?;
        let det = t.min_abs_determinant();
        if !(det >= MIN_TRIPLET_DET) {
            return Err(Error::Scenario(format!("triplet determinant {det:.3e} is below {MIN_TRIPLET_DET:e}")));
        }
        Ok(t.iter().map(|fk| d_plus_m_residual(fk, ctx.f, ctx.layer)).fold(0.0, f64::max))
    }
}

struct DerivativePipeline;

impl VerificationCheck for DerivativePipeline {
    fn name(&self) -> &'static str {
        "derivative-pipeline"
    }

    fn description(&self) -> &'static str {
        "W = W0 + conjugate vector solves V W = 0 and V̄ W is purely vectorial"
    }

    fn kind(&self) -> CheckKind {
        CheckKind::Quadrature
    }

    fn newton_dependent(&self) -> bool {
        true
    }

    fn residual(&self, ctx: &CheckContext) -> Result<f64> {
        let w0 = match &ctx.scenario.rho {
            Some(rho) => schrodinger_from_symmetry(ctx.f, rho, &ctx.path(), PRECONDITION_TOL, ctx.layer)?,
            None => ctx.f.f().clone(),
        };
        let r = Reconstructor::new(ctx.curl.clone(), PRECONDITION_TOL, ctx.layer);
        let vec = r.conjugate_vector(&w0, ctx.f, &ctx.gauge()?)?;
        let w = BiquaternionField::from_parts(&w0, &vec);
        Ok(v_residual(&w, ctx.f, ctx.layer).max(derivative_scalar_part(&w, ctx.f, ctx.layer)))
    }
}

pub fn checks() -> &'static Registry<dyn VerificationCheck> {
    static REGISTRY: OnceLock<Registry<dyn VerificationCheck>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut r: Registry<dyn VerificationCheck> = Registry::new("check");
        let items: [Arc<dyn VerificationCheck>; 7] = [
            Arc::new(DSquared),
            Arc::new(Factorization),
            Arc::new(Quartet),
            Arc::new(Parallel),
            Arc::new(SymmetryFactory),
            Arc::new(Triplet),
            Arc::new(DerivativePipeline),
        ];
        for item in items {
            r.register(item.name(), item);
        }
        r
    })
}

pub fn check(name: &str) -> Result<Arc<dyn VerificationCheck>> {
    checks().get(name)
}
