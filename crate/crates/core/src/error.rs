//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the geometry kernel.
///
/// Numerical routines distinguish between caller mistakes (`Usage`,
/// `DimensionMismatch`), geometric degeneracies of the input data
/// (`DegenerateInput`, `DegenerateConfiguration`, …) and situations where a
/// computation leaves its domain of validity (`InfinityBoundary`, `Domain`,
/// `Divergence`, `SingularNet`).
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition stated in the function contract was violated.
    #[error("usage error: {0}")]
    Usage(String),

    /// Two vectors of different ambient dimension were combined.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Input is rank-deficient, has the wrong signature, or is otherwise
    /// too degenerate to produce a well-defined result.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A point is asymptotic to the target quadric: ⟨p, nk⟩ is too close to
    /// zero for a stable rescaling, or a parameter reached 1 + k·t² ≤ 0.
    #[error("infinity boundary: {0}")]
    InfinityBoundary(String),

    /// A circle parametrization with g′ = 0 was requested.
    #[error("singular parametrization: g' = 0")]
    SingularParametrization,

    /// A cross-ratio denominator vanished (two of the points coincide as
    /// light rays, or the configuration degenerates).
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    /// The cross-ratio radicand is negative; the four points are not in a
    /// real configuration (complex cross ratio).
    #[error("complex configuration: cross-ratio radicand {radicand:.3e} < 0")]
    ComplexConfiguration { radicand: f64 },

    /// Finite-difference tangents lost rank at a grid node.
    #[error("immersion failure at node {node:?}: {detail}")]
    ImmersionFailure { node: Vec<usize>, detail: String },

    /// Coordinate tangents are not pairwise orthogonal within tolerance.
    #[error("not triply orthogonal at node {node:?}: |<di f, dj f>| = {value:.3e} exceeds tolerance")]
    NotTriplyOrthogonal { node: [usize; 3], value: f64 },

    /// A parameter left the valid domain of a closed-form expression.
    #[error("domain error: {0}")]
    Domain(String),

    /// An ODE solution exceeded the overflow guard.
    #[error("divergence at node {node:?}: |t| = {value:.3e}")]
    Divergence { node: Vec<usize>, value: f64 },

    /// Frame integration exhibits a path-dependence defect above tolerance;
    /// the supplied profile does not solve its compatibility equation.
    #[error("inconsistent ansatz: frame loop defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    InconsistentAnsatz { defect: f64, tol: f64 },

    /// Net synthesis crossed a singularity (root of c_K or the infinity
    /// boundary).
    #[error("singular net: {0}")]
    SingularNet(String),

    /// The elliptic integrator was started exactly on a branch point.
    #[error("branch ambiguity: t_init = {t:.6} is a root of the quartic; offset the start value")]
    BranchAmbiguity { t: f64 },

    /// The quartic governing the elliptic reparametrization has a double
    /// root within tolerance.
    #[error("degenerate quartic: roots closer than tolerance")]
    DegenerateQuartic,

    /// Parameters fall in an excluded degenerate family (a₂ ≤ 0: all
    /// parallel surfaces totally umbilic).
    #[error("excluded case: {0}")]
    ExcludedCase(String),

    /// Lamé data is incompatible with the requested gauge, e.g. |l₁| > 1
    /// where l₁ = cos(w) is required.
    #[error("inconsistent gauge: {0}")]
    InconsistentGauge(String),
}
