use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("non-finite value at node {node}")]
    NonFinite { node: usize },

    #[error("factorizing function nearly vanishes: min |f| = {min_abs:.3e} at node {node} (threshold {threshold:.3e})")]
    NonvanishingViolation { min_abs: f64, node: usize, threshold: f64 },

    #[error("field is not a solution of the main Vekua equation: relative residual {residual:.3e} > {tolerance:.3e}")]
    NotAVekuaSolution { residual: f64, tolerance: f64 },

    #[error("derivative has a scalar part: relative size {residual:.3e} > {tolerance:.3e}")]
    ScalarPartNonzero { residual: f64, tolerance: f64 },

    #[error("field is not a solution of (D + M^(Df/f)) w = 0: relative residual {residual:.3e} > {tolerance:.3e}")]
    NotAV1Solution { residual: f64, tolerance: f64 },

    #[error("field is not a solution of the Schrödinger equation: relative residual {residual:.3e} > {tolerance:.3e}")]
    NotASchrodingerSolution { residual: f64, tolerance: f64 },

    #[error("vector field does not satisfy rot(f^-2 rot Phi) = 0, div Phi = 0: relative residual {residual:.3e} > {tolerance:.3e}")]
    NotAPhiSolution { residual: f64, tolerance: f64 },

    #[error("vector field is not conservative: relative |rot| = {residual:.3e} > {tolerance:.3e}")]
    NotConservative { residual: f64, tolerance: f64 },

    #[error("compatibility condition violated: relative residual {residual:.3e} > {tolerance:.3e}")]
    CompatibilityViolated { residual: f64, tolerance: f64 },

    #[error("function is not harmonic: relative Laplacian {residual:.3e} > {tolerance:.3e}")]
    NotHarmonic { residual: f64, tolerance: f64 },

    #[error("gradients are not parallel: relative |grad f x grad rho| = {residual:.3e} > {tolerance:.3e}")]
    NotParallel { residual: f64, tolerance: f64 },

    #[error("gradients are not orthogonal: relative <grad f, grad rho> = {residual:.3e} > {tolerance:.3e}")]
    NotOrthogonal { residual: f64, tolerance: f64 },

    #[error("domain contains the axis r = 0 (node {node})")]
    AxisInDomain { node: usize },

    #[error("domain contains the origin (node {node})")]
    OriginInDomain { node: usize },

    #[error("generating pair degenerates: Im(conj(F) G) = {value:.3e} at node {node}")]
    DegeneratePair { value: f64, node: usize },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("malformed VFLD file {path}: {msg}", path = .path.display())]
    Format { path: PathBuf, msg: String },

    #[error("I/O error on {path}: {source}", path = .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
