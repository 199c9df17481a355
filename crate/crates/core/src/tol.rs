//! Centralized tolerance constants.
//!
//! Thresholds fall into two families: *rounding* tolerances guard algebraic
//! identities that hold exactly in real arithmetic and only accumulate
//! machine epsilon (these sit a few orders above 2⁻⁵²), and *stencil*
//! tolerances guard finite-difference residuals whose truncation error is
//! O(h²) and must therefore be supplied by the caller or scaled with the
//! observed grid spacing.

/// Default tolerance for algebraic invariants (gram residuals, incidence,
/// lightlike checks). A few hundred ulps at unit scale: loose enough for
/// chained products over dimension ≤ 8, tight enough to catch any real
/// defect.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative threshold below which ⟨p, nk⟩ counts as zero and a rescaling
/// p ↦ p/⟨p, nk⟩ is refused. Dividing by anything smaller than 1e−8·|p|
/// would amplify rounding noise in p by more than 1e8, destroying the
/// light-cone constraint downstream.
pub const INFINITY_BOUNDARY_REL: f64 = 1e-8;

/// Gram-matrix residual accepted by pseudo-orthonormalization for
/// well-conditioned input. Gram–Schmidt over ≤ 8 dimensions loses at most
/// a couple of digits to cancellation.
pub const GRAM_TOL: f64 = 1e-12;

/// Condition-number guard for spanning sets: beyond this the Gram process
/// cannot deliver `GRAM_TOL` and the input is reported degenerate.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative denominator threshold for cross ratios. Below this the two
/// light rays involved coincide to working precision.
pub const CROSS_RATIO_DEGENERATE: f64 = 1e-13;

/// Orthogonality gate for coordinate tangents in `triorth`, relative to
/// the product of the Lamé functions. The tangents are finite-difference
/// samples, so even an exactly orthogonal analytic net shows the stencil
/// truncation error here — measured up to ≈1e−4 at 17 nodes per axis on
/// nets with steep derivatives near the domain ends — while a genuinely
/// skewed net shows its shear angle, ≈1e−1 or more. 1e−3 separates the
/// two regimes with an order of magnitude to spare on each side.
pub const ORTHOGONALITY_REL: f64 = 1e-3;

/// Relative floor for squared Lamé functions: a coordinate tangent whose
/// Lorentz norm² falls below this fraction of its Euclidean norm² is a
/// collapsed or causally degenerate direction and is reported as a failed
/// immersion instead of being fed to downstream divisions.
pub const IMMERSION_FLOOR: f64 = 1e-12;

/// Loop-defect tolerance for moving-frame integration over one grid cell.
/// A profile that genuinely solves its compatibility ODE leaves only the
/// O(h⁵) local error of the classical stepper, far below this; a wrong
/// profile shows up at O(h³) per cell which crosses this threshold on any
/// grid coarser than h ≈ 1e−2.
pub const LOOP_DEFECT_TOL: f64 = 1e-6;

/// Energy-residual bound for the elliptic reparametrization: samples must
/// satisfy t′² = (1+kt²)c_K(t) to this accuracy.
pub const ELLIPTIC_ODE_TOL: f64 = 1e-8;

/// Maximum |ν| component accepted as "parallel frame" when generating
/// orthogonal families.
pub const PARALLEL_NU_TOL: f64 = 1e-8;

/// Overflow guard for the orthogonal-surface parameter t; beyond this the
/// integration is reported divergent rather than allowed to overflow.
pub const T_OVERFLOW_GUARD: f64 = 1e12;

/// Frame-gram gate for connection extraction. Deliberately lenient: the
/// job of the structure residuals is to *flag* inconsistent frame data,
/// so only structurally broken frames (gram off by more than a percent)
/// are refused outright.
pub const FRAME_GRAM_GATE: f64 = 1e-2;

/// Umbilic threshold for principal framings: a node counts as umbilic
/// when the traceless part of the symmetrized shape operator is this
/// small relative to its norm. Genuine umbilics produced by exact or
/// symmetric data cancel to rounding; finite-difference noise on
/// non-umbilic data sits many orders above.
pub const UMBILIC_TOL: f64 = 1e-9;

/// Relative gap below which two branch points of the elliptic quartic
/// (1 + kt²)·c_K(t) count as a double root, degenerating the elliptic
/// reparametrization to an elementary one.
pub const DOUBLE_ROOT_TOL: f64 = 1e-8;

/// Relative floor on (1 + kt²)·c_K(t) at the start value of the elliptic
/// reparametrization; below it the velocity branch ±√ cannot be resolved.
pub const BRANCH_START_REL: f64 = 1e-10;

/// Acceptance band for the Guichard gauge identities (l₁/l₃)² ± (l₂/l₃)²
/// = 1 when extracting the w-potential. Width-7 Lamé extraction leaves
/// truncation well below this on resolvable grids; data in the wrong
/// gauge or with swapped axis roles misses by order one.
pub const GUICHARD_GAUGE_TOL: f64 = 5e-2;

/// Floor on |cos εw|, |sin εw| (and their hyperbolic counterparts) before
/// the cot/tan factors of the reduced Lamé system are formed; a w-potential
/// touching 0 or π/2 makes those factors meaningless.
pub const W_FLOOR: f64 = 1e-3;

/// Relative floor on |c_K(t)| and on 1 + kt² along a synthesized sweep;
/// below it the parallel surface is at a constant-mean-curvature slice or
/// the infinity boundary and the net is reported singular.
pub const SWEEP_COLLAPSE_REL: f64 = 1e-9;
