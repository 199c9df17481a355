//! Parallel linear Weingarten families in Q_k³ and the synthesis of the
//! cyclic Guichard nets they sweep out.
//!
//! The base surface carries principal curvatures of the special shape
//! k₁ = a₁ − a₂ tan u, k₂ = a₁ + a₂ cot u (trigonometric flavor) or
//! k₁ = a₁ + a₂ tanh u, k₂ = a₁ + a₂ coth u (hyperbolic flavor), with a
//! potential u depending on the first curvature direction only. Writing
//! ε² = +1 for the trigonometric and ε² = −1 for the hyperbolic flavor,
//! every parallel surface f_t of such a base satisfies one affine
//! curvature relation
//!
//! ```text
//!   c_K(t)·K + 2 c_H(t)·H + c(t) = 0,
//! ```
//!
//! with three quadratics in t ([`WeingartenFamily`]) obeying
//! c_K c − c_H² = ε² a₂² (1 + kt²)² — elliptic case for ε² = −1,
//! hyperbolic for ε² = +1 ([`case_invariant`]).
//!
//! The t-curves of the family are circles. Reparametrizing t by the arc
//! length r of those circles via t′² = (1 + kt²)·c_K(t)
//! ([`elliptic_reparam`]) turns the family into a triply orthogonal,
//! conformally flat net whose Lamé functions are
//!
//! ```text
//!   l₁ = cos ε(u+v),   l₂ = (1/ε) sin ε(u+v),   l₃ = 1,
//! ```
//!
//! up to a common conformal factor, where the w-potential w = u(t₁) + v(t₃)
//! splits into a sine-Gordon-type profile u ([`reduction_profile`]) and a
//! pendulum-type schedule v tied to the reparametrization. The module
//! provides the closed-form layer, both ordinary reductions, a
//! moving-frame synthesizer producing [`NetGrid`]s ([`synthesize_net`]),
//! and residual suites measuring how well sampled data satisfies the
//! reductions ([`sine_gordon_residual`], [`pendulum_residual`],
//! [`reduced_lame`]).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Field2, Field3, ParamGrid2, ParamGrid3, line_stencil, uniform_axis};
use crate::lorentz::{MinkVec, PseudoFrame, inner};
use crate::spaceform::{LightPoint, canonical_space_form};
use crate::sphere::{CircleFrame, SphereVec};
use crate::strip::{FrameGrid, StripGrid};
use crate::tol;
use crate::triorth::{LameData, NetGrid, lame_from_grid};

/// cos εx for ε² = `eps2`: ordinary cosine in the trigonometric flavor,
/// hyperbolic cosine in the hyperbolic one.
fn cs(eps2: f64, x: f64) -> f64 {
    if eps2 > 0.0 { x.cos() } else { x.cosh() }
}

/// (1/ε) sin εx for ε² = `eps2`; satisfies cs² + eps2·sn² = 1.
fn sn(eps2: f64, x: f64) -> f64 {
    if eps2 > 0.0 { x.sin() } else { x.sinh() }
}

/// A real quadratic q₂t² + q₁t + q₀ with Möbius-style roots: a vanishing
/// leading coefficient sends one root (or both) to infinity instead of
/// failing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub q2: f64,
    pub q1: f64,
    pub q0: f64,
}

impl Quadratic {
    pub fn eval(&self, t: f64) -> f64 {
        (self.q2 * t + self.q1) * t + self.q0
    }

    /// Both roots as complex numbers. Degenerate leading coefficients
    /// produce infinite roots: a linear polynomial has one root at
    /// infinity, a constant one has both there.
    pub fn roots(&self) -> [Complex64; 2] {
        let inf = Complex64::new(f64::INFINITY, 0.0);
        if self.q2 == 0.0 {
            if self.q1 == 0.0 {
                return [inf, inf];
            }
            return [Complex64::new(-self.q0 / self.q1, 0.0), inf];
        }
        let disc = self.q1 * self.q1 - 4.0 * self.q2 * self.q0;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Stable pairing: compute the larger-magnitude root first and
            // recover the other from the product q0/q2.
            let q = -0.5 * (self.q1 + self.q1.signum() * sq);
            if q == 0.0 {
                return [Complex64::ZERO, Complex64::ZERO];
            }
            [
                Complex64::new(q / self.q2, 0.0),
                Complex64::new(self.q0 / q, 0.0),
            ]
        } else {
            let re = -self.q1 / (2.0 * self.q2);
            let im = (-disc).sqrt() / (2.0 * self.q2);
            [Complex64::new(re, im), Complex64::new(re, -im)]
        }
    }
}

/// The three quadratics of a parallel linear Weingarten family together
/// with its defining data: ambient curvature k, curvature offsets a₁, a₂
/// and the flavor sign ε² = ±1.
///
/// With A = a₁² + ε²a₂² the coefficients are
///
/// ```text
///   c_K(t) = A t² + 2a₁ t + 1,
///   c_H(t) = a₁k t² + (k − A) t − a₁,
///   c(t)   = k² t² − 2a₁k t + A,
/// ```
///
/// so that every member f_t satisfies c_K(t)K + 2c_H(t)H + c(t) = 0.
#[derive(Debug, Clone)]
pub struct WeingartenFamily {
    pub k: f64,
    pub a1: f64,
    pub a2: f64,
    /// ε²: +1 trigonometric flavor, −1 hyperbolic flavor.
    pub eps2: f64,
    pub ck: Quadratic,
    pub ch: Quadratic,
    pub c: Quadratic,
}

impl WeingartenFamily {
    /// Coefficients (p, q) of the one-variable reduction
    /// u″ + p·(1/ε)sin 2εu + q·cos 2εu = 0 in the curvature-direction
    /// gauge (b₁, b₂) = (k/2, 0): p = (a₁² − ε²a₂² + k)/2, q = a₁a₂.
    pub fn reduction_coefficients(&self) -> (f64, f64) {
        (
            0.5 * (self.a1 * self.a1 - self.eps2 * self.a2 * self.a2 + self.k),
            self.a1 * self.a2,
        )
    }

    /// Closed-form pendulum data (c, r₀, v₀) of the schedule v(t₃):
    /// c + ε²v′² = r₀ cos 2ε(v − v₀), with
    ///
    /// ```text
    ///   c            = −(k + a₁² + ε²a₂²)/2,
    ///   r₀ cos 2εv₀  = −(k + a₁² − ε²a₂²)/2,
    ///   r₀ (1/ε) sin 2εv₀ = −a₁a₂.
    /// ```
    ///
    /// In the hyperbolic flavor the (r₀, v₀) pair exists only when the
    /// right-hand column above satisfies α² − β² > 0; otherwise both are
    /// NaN and the amplitude pair (α, β) itself is the usable form.
    pub fn pendulum_constants(&self) -> (f64, f64, f64) {
        let c = -0.5 * (self.k + self.a1 * self.a1 + self.eps2 * self.a2 * self.a2);
        let alpha = -0.5 * (self.k + self.a1 * self.a1 - self.eps2 * self.a2 * self.a2);
        let beta = -self.a1 * self.a2;
        let (r0, v0) = pendulum_polar(self.eps2, alpha, beta);
        (c, r0, v0)
    }
}

/// Convert the amplitude pair (α, β) = (r₀ cos 2εv₀, r₀ (1/ε) sin 2εv₀)
/// into (r₀, v₀). Trigonometric flavor: r₀ ≥ 0 with v₀ from atan2.
/// Hyperbolic flavor: requires α² − β² > 0 (returns NaNs otherwise);
/// r₀ carries the sign of α since cosh is positive.
fn pendulum_polar(eps2: f64, alpha: f64, beta: f64) -> (f64, f64) {
    if eps2 > 0.0 {
        let r0 = alpha.hypot(beta);
        (r0, 0.5 * beta.atan2(alpha))
    } else {
        let d = alpha * alpha - beta * beta;
        if d <= 0.0 {
            return (f64::NAN, f64::NAN);
        }
        (alpha.signum() * d.sqrt(), 0.5 * (beta / alpha).atanh())
    }
}

/// Build the quadratic coefficients of a family from its defining data.
///
/// Requires a₂ > 0: with a₂ = 0 both principal curvatures collapse to a₁,
/// every member is totally umbilic and none of the constructions below
/// apply. The flavor must be exactly ±1.
pub fn family_coeffs(k: f64, a1: f64, a2: f64, eps2: f64) -> Result<WeingartenFamily> {
    if !(k.is_finite() && a1.is_finite() && a2.is_finite()) {
        return Err(Error::Usage("family data must be finite".into()));
    }
    if eps2 != 1.0 && eps2 != -1.0 {
        return Err(Error::Usage(format!(
            "flavor sign ε² must be +1 or −1, got {eps2}"
        )));
    }
    if a2 <= 0.0 {
        return Err(Error::ExcludedCase(format!(
            "a2 = {a2} makes all surfaces of the family totally umbilic"
        )));
    }
    let aa = a1 * a1 + eps2 * a2 * a2;
    Ok(WeingartenFamily {
        k,
        a1,
        a2,
        eps2,
        ck: Quadratic {
            q2: aa,
            q1: 2.0 * a1,
            q0: 1.0,
        },
        ch: Quadratic {
            q2: a1 * k,
            q1: k - aa,
            q0: -a1,
        },
        c: Quadratic {
            q2: k * k,
            q1: -2.0 * a1 * k,
            q0: aa,
        },
    })
}

/// c_K(t)c(t) − c_H(t)² − ε²a₂²(1 + kt²)²; identically zero for the
/// coefficients of [`family_coeffs`], so its size measures how far a
/// perturbed coefficient triple is from any linear Weingarten family of
/// the given flavor.
pub fn case_invariant(wf: &WeingartenFamily, t: f64) -> f64 {
    let g = 1.0 + wf.k * t * t;
    wf.ck.eval(t) * wf.c.eval(t) - wf.ch.eval(t).powi(2) - wf.eps2 * wf.a2 * wf.a2 * g * g
}

/// Transport a circle frame (s, f, f̂) to the parallel member at t:
///
/// ```text
///   s_t = (s + t((k/2)f + f̂)) / √(1+kt²),
///   f_t = (f − t(s + c₁ n_k)) / √(1+kt²),      c₁ = t/(1 + √(1+kt²)),
///   f̂_t = (f̂ − (kt/2)(s − c₁ n_k)) / √(1+kt²),
/// ```
///
/// where n_k = −(k/2)f + f̂ is the space-form vector of the circle plane;
/// the transport fixes n_k exactly, so every member lies in the same Q_k.
/// Fails with [`Error::InfinityBoundary`] when 1 + kt² ≤ 0 (for k < 0 the
/// member has crossed the infinity boundary of hyperbolic space).
pub fn parallel_frame_at(wf: &WeingartenFamily, base: &CircleFrame, t: f64) -> Result<CircleFrame> {
    let g2 = 1.0 + wf.k * t * t;
    if g2 <= 0.0 {
        return Err(Error::InfinityBoundary(format!(
            "1 + kt² = {g2:.3e} at t = {t}; the parallel member leaves the space form"
        )));
    }
    let g = g2.sqrt();
    let k = wf.k;
    let s = &base.s.s;
    let f = &base.p.v;
    let fh = &base.phat.v;
    let nk = fh - f * (0.5 * k);
    let c1 = t / (1.0 + g);
    let st = (s + (f * (0.5 * k) + fh) * t) / g;
    let ft = (f - (s + &nk * c1) * t) / g;
    let fht = (fh - (s - &nk * c1) * (0.5 * k * t)) / g;
    CircleFrame::new(
        SphereVec::new(st)?,
        LightPoint::new(ft)?,
        LightPoint::new(fht)?,
    )
}

/// Principal curvatures (k₁, k₂) of the member at t over a point with
/// potential value u, derived from the Rodrigues equations ds_t + kᵢ df_t
/// = 0 of the moving frame:
///
/// ```text
///   k₁ = ((a₁−kt)·cos εu − ε²a₂·(1/ε)sin εu) / ((1+a₁t)·cos εu − ε²a₂t·(1/ε)sin εu),
///   k₂ = ((a₁−kt)·(1/ε)sin εu + a₂·cos εu) / ((1+a₁t)·(1/ε)sin εu + a₂t·cos εu),
/// ```
///
/// At t = 0 these reduce to (a₁ − a₂ tan u, a₁ + a₂ cot u) in the
/// trigonometric flavor and (a₁ + a₂ tanh u, a₁ + a₂ coth u) in the
/// hyperbolic one. Vanishing denominators produce IEEE infinities (the
/// curvature sphere degenerates to a point sphere); no error is raised.
pub fn principal_curvatures_at(wf: &WeingartenFamily, u: f64, t: f64) -> (f64, f64) {
    let (c, s) = (cs(wf.eps2, u), sn(wf.eps2, u));
    let (k, a1, a2, e2) = (wf.k, wf.a1, wf.a2, wf.eps2);
    let k1 = ((a1 - k * t) * c - e2 * a2 * s) / ((1.0 + a1 * t) * c - e2 * a2 * t * s);
    let k2 = ((a1 - k * t) * s + a2 * c) / ((1.0 + a1 * t) * s + a2 * t * c);
    (k1, k2)
}

/// Cross ratio (z₁−z₃)(z₂−z₄) / ((z₁−z₄)(z₂−z₃)) on the Riemann sphere.
/// Each argument appears in exactly one numerator and one denominator
/// factor, so an infinite entry cancels: both factors containing it are
/// dropped. With three or more infinite entries the configuration carries
/// no cross ratio and NaN is returned.
fn mobius_cross_ratio(z: [Complex64; 4]) -> Complex64 {
    let finite = |w: Complex64| w.re.is_finite() && w.im.is_finite();
    if z.iter().filter(|w| !finite(**w)).count() >= 3 {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    let factor = |a: Complex64, b: Complex64| {
        if finite(a) && finite(b) {
            a - b
        } else {
            Complex64::ONE
        }
    };
    (factor(z[0], z[2]) * factor(z[1], z[3])) / (factor(z[0], z[3]) * factor(z[1], z[2]))
}

/// Arc-length reparametrization t(r) of the family parameter, solving
/// t′² = P(t) := (1 + kt²)·c_K(t), together with the branch points of the
/// elliptic curve y² = P(t) and their cross ratio.
#[derive(Debug, Clone)]
pub struct EllipticReparam {
    /// Uniform r-grid the trajectory is sampled on.
    pub rs: Vec<f64>,
    /// t(rᵢ) per node.
    pub ts: Vec<f64>,
    /// t′(rᵢ) per node; sign changes mark branch-point reflections.
    pub dts: Vec<f64>,
    /// Roots of P: the two c_K roots first, then the two roots of 1 + kt²
    /// (infinite for k = 0, imaginary for k > 0, real for k < 0).
    pub branch_points: [Complex64; 4],
    /// Cross ratio of the branch points in the pairing above. Real for
    /// ε²k > 0 (rectangular period lattice), unit modulus for ε²k < 0
    /// (rhombic), exactly 1 for k = 0 (the lattice degenerates, cylinder
    /// case).
    pub branch_cross_ratio: Complex64,
    /// max |t′² − P(t)| / (1 + max |P(t)|) over the samples; the measured
    /// quality of the quadrature.
    pub ode_residual: f64,
}

/// Quartic coefficients of P(t) = (1 + kt²)(At² + 2a₁t + 1), constant
/// first.
fn sweep_quartic(wf: &WeingartenFamily) -> [f64; 5] {
    let aa = wf.ck.q2;
    [1.0, 2.0 * wf.a1, aa + wf.k, 2.0 * wf.a1 * wf.k, aa * wf.k]
}

fn poly_eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ci| acc * t + ci)
}

/// Branch points of the elliptic curve y² = (1 + kt²)·c_K(t) in the fixed
/// pairing [c_K root, c_K root, geodesic root, geodesic root], together
/// with their cross ratio. A c_K root meeting a root of 1 + kt² within
/// tolerance degenerates the curve.
pub(crate) fn branch_configuration(wf: &WeingartenFamily) -> Result<([Complex64; 4], Complex64)> {
    let ck_roots = wf.ck.roots();
    let geo_roots = Quadratic {
        q2: wf.k,
        q1: 0.0,
        q0: 1.0,
    }
    .roots();
    let root_scale = ck_roots
        .iter()
        .chain(geo_roots.iter())
        .filter(|z| z.norm().is_finite())
        .fold(1.0_f64, |m, z| m.max(z.norm()));
    for a in &ck_roots {
        for b in &geo_roots {
            if a.norm().is_finite()
                && b.norm().is_finite()
                && (a - b).norm() <= tol::DOUBLE_ROOT_TOL * root_scale
            {
                return Err(Error::DegenerateQuartic);
            }
        }
    }
    let branch_points = [ck_roots[0], ck_roots[1], geo_roots[0], geo_roots[1]];
    Ok((branch_points, mobius_cross_ratio(branch_points)))
}

/// Integrate y′ = rhs(r, y) from the anchor r = 0 and record the state at
/// every node of the uniform axis `rs` (which need not contain 0 or even
/// straddle it). Node-to-node legs use classical fourth-order
/// Runge–Kutta with substeps capped at 0.01 in r, at least 16 per leg.
fn integrate_from_zero<const D: usize>(
    rs: &[f64],
    y0: [f64; D],
    rhs: impl Fn(f64, [f64; D]) -> [f64; D],
) -> Vec<[f64; D]> {
    let leg = |mut r: f64, mut y: [f64; D], r_to: f64| -> [f64; D] {
        let len = r_to - r;
        if len == 0.0 {
            return y;
        }
        let m = ((len.abs() / 0.01).ceil() as usize).max(16);
        let h = len / m as f64;
        for _ in 0..m {
            let k1 = rhs(r, y);
            let mut y2 = y;
            for d in 0..D {
                y2[d] = y[d] + 0.5 * h * k1[d];
            }
            let k2 = rhs(r + 0.5 * h, y2);
            for d in 0..D {
                y2[d] = y[d] + 0.5 * h * k2[d];
            }
            let k3 = rhs(r + 0.5 * h, y2);
            for d in 0..D {
                y2[d] = y[d] + h * k3[d];
            }
            let k4 = rhs(r + h, y2);
            for d in 0..D {
                y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            }
            r += h;
        }
        y
    };
    let mut out = vec![y0; rs.len()];
    // Right-going pass over nodes ≥ 0, left-going pass over nodes < 0.
    let mut r = 0.0;
    let mut y = y0;
    for (i, &node) in rs.iter().enumerate() {
        if node >= 0.0 {
            y = leg(r, y, node);
            r = node;
            out[i] = y;
        }
    }
    r = 0.0;
    y = y0;
    for (i, &node) in rs.iter().enumerate().rev() {
        if node < 0.0 {
            y = leg(r, y, node);
            r = node;
            out[i] = y;
        }
    }
    out
}

/// Solve the arc-length equation t′² = (1 + kt²)·c_K(t) with t(0) =
/// `t_init` and t′(0) the positive branch, sampling n nodes over `r_span`.
///
/// The quadrature is run in the second-order energy form t″ = P′(t)/2,
/// which passes smoothly through branch points (where t′ changes sign and
/// a first-order square-root stepper would stall); the recorded
/// velocities expose any reflection, and `ode_residual` reports the
/// conserved-energy defect against [`tol::ELLIPTIC_ODE_TOL`]-level
/// expectations.
///
/// Errors: [`Error::BranchAmbiguity`] when t_init is a root of P (the
/// velocity branch cannot be resolved), [`Error::Domain`] when P(t_init)
/// < 0, and [`Error::DegenerateQuartic`] when a c_K root collides with a
/// root of 1 + kt² within [`tol::DOUBLE_ROOT_TOL`] (the elliptic curve
/// degenerates).
pub fn elliptic_reparam(
    wf: &WeingartenFamily,
    t_init: f64,
    r_span: (f64, f64),
    n: usize,
) -> Result<EllipticReparam> {
    let (lo, hi) = r_span;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
        return Err(Error::Usage(format!(
            "need a finite span with lo < hi and n ≥ 2, got ({lo}, {hi}) with n = {n}"
        )));
    }
    let p = sweep_quartic(wf);
    let scale = p
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs() * t_init.abs().powi(i as i32))
        .sum::<f64>()
        .max(1.0);
    let p0 = poly_eval(&p, t_init);
    if p0.abs() <= tol::BRANCH_START_REL * scale {
        return Err(Error::BranchAmbiguity { t: t_init });
    }
    if p0 < 0.0 {
        return Err(Error::Domain(format!(
            "(1 + kt²)c_K(t) = {p0:.3e} < 0 at t = {t_init}; no real arc-length branch"
        )));
    }

    let (branch_points, branch_cross_ratio) = branch_configuration(wf)?;

    let dp = [p[1], 2.0 * p[2], 3.0 * p[3], 4.0 * p[4]];
    let rs = uniform_axis(lo, hi, n);
    let states = integrate_from_zero(&rs, [t_init, p0.sqrt()], |_, [t, v]| {
        [v, 0.5 * poly_eval(&dp, t)]
    });
    let ts: Vec<f64> = states.iter().map(|s| s[0]).collect();
    let dts: Vec<f64> = states.iter().map(|s| s[1]).collect();
    let pmax = ts
        .iter()
        .fold(0.0_f64, |m, &t| m.max(poly_eval(&p, t).abs()));
    let ode_residual = ts.iter().zip(&dts).fold(0.0_f64, |m, (&t, &v)| {
        m.max((v * v - poly_eval(&p, t)).abs())
    }) / (1.0 + pmax);
    Ok(EllipticReparam {
        rs,
        ts,
        dts,
        branch_points,
        branch_cross_ratio,
        ode_residual,
    })
}

/// A sampled solution u(t₁) of the one-variable reduction
/// u″ + p·(1/ε)sin 2εu + q·cos 2εu = 0 (coefficients from
/// [`WeingartenFamily::reduction_coefficients`]), stored with its
/// derivative so it can be interpolated to Runge–Kutta stage points.
#[derive(Debug, Clone)]
pub struct ReductionProfile {
    /// Uniform t₁-grid; must straddle the anchor t₁ = 0.
    pub t1s: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
}

impl ReductionProfile {
    /// Cubic Hermite interpolation of u between the stored nodes,
    /// clamped to the profile span.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.t1s.len();
        let lo = self.t1s[0];
        let h = self.t1s[1] - lo;
        let x = ((t - lo) / h).clamp(0.0, (n - 1) as f64);
        let c = (x.floor() as usize).min(n - 2);
        let s = x - c as f64;
        let (u0, m0) = (self.u[c], self.du[c] * h);
        let (u1, m1) = (self.u[c + 1], self.du[c + 1] * h);
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * u0
            + (s3 - 2.0 * s2 + s) * m0
            + (3.0 * s2 - 2.0 * s3) * u1
            + (s3 - s2) * m1
    }
}

/// Integrate the one-variable reduction from u(0) = u0, u′(0) = du0 and
/// sample n nodes over `span` (which must contain the anchor t₁ = 0).
pub fn reduction_profile(
    wf: &WeingartenFamily,
    u0: f64,
    du0: f64,
    span: (f64, f64),
    n: usize,
) -> Result<ReductionProfile> {
    let (lo, hi) = span;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
        return Err(Error::Usage(format!(
            "need a finite span with lo < hi and n ≥ 2, got ({lo}, {hi}) with n = {n}"
        )));
    }
    if lo > 0.0 || hi < 0.0 {
        return Err(Error::Usage(format!(
            "profile span ({lo}, {hi}) must contain the anchor t₁ = 0"
        )));
    }
    let (pc, qc) = wf.reduction_coefficients();
    let e2 = wf.eps2;
    let t1s = uniform_axis(lo, hi, n);
    let states = integrate_from_zero(&t1s, [u0, du0], |_, [u, v]| {
        [v, -pc * sn(e2, 2.0 * u) - qc * cs(e2, 2.0 * u)]
    });
    Ok(ReductionProfile {
        t1s,
        u: states.iter().map(|s| s[0]).collect(),
        du: states.iter().map(|s| s[1]).collect(),
    })
}

/// Connection matrix along t₁ in the frame order (s₁, s₂, s, f, f̂), for a
/// potential u depending on t₁ only and curvature-direction coefficients
/// (b₁, b₂) = (k/2, 0): dF = F·Φ₁ dt₁ with
/// α₁ = a₁cos εu − ε²a₂(1/ε)sin εu, β₁ = (k/2)cos εu.
fn connection_t1(wf: &WeingartenFamily, u: f64) -> DMatrix<f64> {
    let (c, s) = (cs(wf.eps2, u), sn(wf.eps2, u));
    let alpha = wf.a1 * c - wf.eps2 * wf.a2 * s;
    let beta = 0.5 * wf.k * c;
    let mut m = DMatrix::zeros(5, 5);
    m[(2, 0)] = alpha;
    m[(3, 0)] = -beta;
    m[(4, 0)] = -c;
    m[(0, 2)] = -alpha;
    m[(0, 3)] = c;
    m[(0, 4)] = beta;
    m
}

/// Connection matrix along t₂, same conventions:
/// α₂ = a₁(1/ε)sin εu + a₂cos εu, β₂ = (k/2)(1/ε)sin εu, ω₂ = ∂₁u.
fn connection_t2(wf: &WeingartenFamily, u: f64, du: f64) -> DMatrix<f64> {
    let (c, s) = (cs(wf.eps2, u), sn(wf.eps2, u));
    let alpha = wf.a1 * s + wf.a2 * c;
    let beta = 0.5 * wf.k * s;
    let mut m = DMatrix::zeros(5, 5);
    m[(1, 0)] = du;
    m[(0, 1)] = -du;
    m[(2, 1)] = alpha;
    m[(3, 1)] = -beta;
    m[(4, 1)] = -s;
    m[(1, 2)] = -alpha;
    m[(1, 3)] = s;
    m[(1, 4)] = beta;
    m
}

/// Transfer matrix of dT/dt = T·Φ(t) from `t_from` to `t_to`, T = id at
/// the start; fourth-order Runge–Kutta with substeps capped at 0.01.
fn transfer_along(phi: &impl Fn(f64) -> DMatrix<f64>, t_from: f64, t_to: f64) -> DMatrix<f64> {
    let mut t = t_from;
    let mut m = DMatrix::identity(5, 5);
    let len = t_to - t_from;
    if len == 0.0 {
        return m;
    }
    let steps = ((len.abs() / 0.01).ceil() as usize).max(8);
    let h = len / steps as f64;
    for _ in 0..steps {
        let k1 = &m * phi(t);
        let k2 = (&m + &k1 * (0.5 * h)) * phi(t + 0.5 * h);
        let k3 = (&m + &k2 * (0.5 * h)) * phi(t + 0.5 * h);
        let k4 = (&m + &k3 * h) * phi(t + h);
        m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        t += h;
    }
    m
}

/// Frame field F(t₁, t₂) of the strip of base surfaces, integrated from
/// the canonical frame (e₁, e₂, e₃, p₀, n₀) at the origin. The t₁ legs
/// are swept by Runge–Kutta with the profile interpolated to stage
/// points; the t₂ legs use exact matrix exponentials, which is possible
/// because the t₂ connection is constant along t₂ for a t₁-only
/// potential.
///
/// Every t₁-cell is audited: the transfer matrix along t₁ must commute
/// with the neighboring t₂ exponentials up to [`tol::LOOP_DEFECT_TOL`],
/// which is exactly the discrete flatness of the connection. A profile
/// that does not solve the reduction leaves a defect of order h² per
/// cell and is rejected with [`Error::InconsistentAnsatz`].
pub fn base_frames(
    wf: &WeingartenFamily,
    prof: &ReductionProfile,
    t2_span: (f64, f64),
    n2: usize,
) -> Result<FrameGrid> {
    let n1 = prof.t1s.len();
    if n1 < 2 || prof.u.len() != n1 || prof.du.len() != n1 {
        return Err(Error::Usage(
            "profile must carry matching t1/u/du samples, at least two".into(),
        ));
    }
    if prof.t1s[0] > 0.0 || prof.t1s[n1 - 1] < 0.0 {
        return Err(Error::Usage(
            "profile span must contain the frame anchor t₁ = 0".into(),
        ));
    }
    let (lo2, hi2) = t2_span;
    if !(lo2.is_finite() && hi2.is_finite() && lo2 < hi2) || n2 < 2 {
        return Err(Error::Usage(format!(
            "need a finite t₂ span with lo < hi and n₂ ≥ 2, got ({lo2}, {hi2}) with n₂ = {n2}"
        )));
    }

    let phi1 = |t: f64| connection_t1(wf, prof.eval(t));
    // Sweep along t₁ from the anchor, like the scalar integrators.
    let mut sweep: Vec<DMatrix<f64>> = vec![DMatrix::identity(5, 5); n1];
    let mut transfers: Vec<DMatrix<f64>> = Vec::with_capacity(n1 - 1);
    {
        let mut acc = DMatrix::identity(5, 5);
        let mut t = 0.0;
        for (i, &node) in prof.t1s.iter().enumerate() {
            if node >= 0.0 {
                acc = &acc * transfer_along(&phi1, t, node);
                t = node;
                sweep[i] = acc.clone();
            }
        }
        acc = DMatrix::identity(5, 5);
        t = 0.0;
        for (i, &node) in prof.t1s.iter().enumerate().rev() {
            if node < 0.0 {
                acc = &acc * transfer_along(&phi1, t, node);
                t = node;
                sweep[i] = acc.clone();
            }
        }
        for i in 0..n1 - 1 {
            transfers.push(transfer_along(&phi1, prof.t1s[i], prof.t1s[i + 1]));
        }
    }

    let t2s = uniform_axis(lo2, hi2, n2);
    let h2 = t2s[1] - t2s[0];
    let phi2: Vec<DMatrix<f64>> = (0..n1)
        .map(|i| connection_t2(wf, prof.u[i], prof.du[i]))
        .collect();
    let steps: Vec<DMatrix<f64>> = phi2.iter().map(|p| (p * h2).exp()).collect();

    // Discrete flatness audit, cell (i, i+1) × (j, j+1). The defect is
    // independent of j because Φ₂ is constant along t₂, so one row of
    // cells covers the whole grid.
    let mut defect = 0.0_f64;
    for i in 0..n1 - 1 {
        let forward = &transfers[i] * &steps[i + 1];
        let back = &steps[i] * &transfers[i];
        let num = (&forward - &back).abs().max();
        let den = back.abs().max().max(1.0);
        defect = defect.max(num / den);
    }
    if defect > tol::LOOP_DEFECT_TOL {
        return Err(Error::InconsistentAnsatz {
            defect,
            tol: tol::LOOP_DEFECT_TOL,
        });
    }

    // Base frame: canonical Q_k gauge. Its f-column is p₀ ∈ Q_k and its
    // f̂-column is n₀, so n_k = −(k/2)f + f̂ equals the canonical n_k.
    let mut f0 = DMatrix::zeros(5, 5);
    f0[(0, 0)] = 1.0;
    f0[(1, 1)] = 1.0;
    f0[(2, 2)] = 1.0;
    f0[(3, 3)] = 1.0;
    f0[(4, 3)] = 1.0;
    f0[(3, 4)] = 0.5;
    f0[(4, 4)] = -0.5;

    let mut cols: Vec<PseudoFrame> = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let mut m = &f0 * &sweep[i] * (&phi2[i] * t2s[0]).exp();
        for _ in 0..n2 {
            cols.push(PseudoFrame { columns: m.clone() });
            m = &m * &steps[i];
        }
    }
    let mut it = cols.into_iter();
    let frames = Field2::from_fn(n1, n2, |_, _| it.next().expect("sized above"));
    FrameGrid::new(frames, ParamGrid2::new(prof.t1s.clone(), t2s)?)
}

/// The strip (s_t, f_t) of family member t over a base frame field,
/// built node-wise with [`parallel_frame_at`].
pub fn family_member(wf: &WeingartenFamily, frames: &FrameGrid, t: f64) -> Result<StripGrid> {
    let n1 = frames.frames.n1;
    let n2 = frames.frames.n2;
    let mut s = Vec::with_capacity(n1 * n2);
    let mut f = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            let cols = &frames.frames.at(i, j).columns;
            let cf = CircleFrame::new(
                SphereVec::new(cols.column(2).into_owned())?,
                LightPoint::new(cols.column(3).into_owned())?,
                LightPoint::new(cols.column(4).into_owned())?,
            )?;
            let pf = parallel_frame_at(wf, &cf, t)?;
            s.push(pf.s);
            f.push(pf.p);
        }
    }
    let mut si = s.into_iter();
    let mut fi = f.into_iter();
    let s = Field2::from_fn(n1, n2, |_, _| si.next().expect("sized above"));
    let f = Field2::from_fn(n1, n2, |_, _| fi.next().expect("sized above"));
    StripGrid::new(s, f, frames.grid.clone())
}

/// Synthesize the cyclic Guichard net swept by the family: axes
/// (t₁, t₂, t₃) = (profile direction, conjugate direction, circle arc
/// length), nodes f_{t(r)}(t₁, t₂) with t(r) from the elliptic
/// reparametrization. The result is gauged to the canonical Q_k.
///
/// Fails with [`Error::SingularNet`] when the sweep reflects at a branch
/// point (the member there is a constant-mean-curvature surface and the
/// net degenerates: l₃ → 0), crosses a c_K root, or reaches the infinity
/// boundary 1 + kt² = 0; and with [`Error::InconsistentAnsatz`] when the
/// profile does not solve its reduction (see [`base_frames`]).
pub fn synthesize_net(
    wf: &WeingartenFamily,
    prof: &ReductionProfile,
    t2_span: (f64, f64),
    n2: usize,
    rep: &EllipticReparam,
) -> Result<NetGrid> {
    let nr = rep.rs.len();
    if rep.ts.len() != nr || rep.dts.len() != nr || nr < 2 {
        return Err(Error::Usage(
            "reparametrization must carry matching r/t/t′ samples, at least two".into(),
        ));
    }
    let ck_scale = rep
        .ts
        .iter()
        .fold(1.0_f64, |m, &t| m.max(wf.ck.eval(t).abs()));
    for w in rep.dts.windows(2) {
        if w[0] * w[1] <= 0.0 {
            return Err(Error::SingularNet(format!(
                "t′ changes sign between consecutive samples ({:.3e} → {:.3e}): \
                 the sweep reflects at a branch point and l₃ vanishes",
                w[0], w[1]
            )));
        }
    }
    for &t in &rep.ts {
        let g2 = 1.0 + wf.k * t * t;
        if g2 <= tol::SWEEP_COLLAPSE_REL {
            return Err(Error::SingularNet(format!(
                "1 + kt² = {g2:.3e} at t = {t:.6}: the sweep reaches the infinity boundary"
            )));
        }
        let ckv = wf.ck.eval(t);
        if ckv.abs() <= tol::SWEEP_COLLAPSE_REL * ck_scale {
            return Err(Error::SingularNet(format!(
                "c_K(t) = {ckv:.3e} at t = {t:.6}: the member is a \
                 constant-mean-curvature slice and the net degenerates"
            )));
        }
    }

    let frames = base_frames(wf, prof, t2_span, n2)?;
    let n1 = frames.frames.n1;
    let k = wf.k;

    // Per-r scalars of the parallel transport of the f-column.
    let coeffs: Vec<(f64, f64, f64)> = rep
        .ts
        .iter()
        .map(|&t| {
            let g = (1.0 + k * t * t).sqrt();
            (t, t * t / (1.0 + g), g)
        })
        .collect();

    let columns: Vec<Vec<MinkVec>> = frames
        .frames
        .indices()
        .into_par_iter()
        .map(|(i, j)| {
            let cols = &frames.frames.at(i, j).columns;
            let s = cols.column(2).into_owned();
            let f = cols.column(3).into_owned();
            let fh = cols.column(4).into_owned();
            let nk = &fh - &f * (0.5 * k);
            coeffs
                .iter()
                .map(|&(t, tc1, g)| (&f - (&s * t + &nk * tc1)) / g)
                .collect()
        })
        .collect();

    let field = Field3::from_fn(n1, n2, nr, |i, j, r| {
        LightPoint::new_unchecked(columns[i * n2 + j][r].clone())
    });
    let grid = ParamGrid3::new(
        frames.grid.t1s.clone(),
        frames.grid.t2s.clone(),
        rep.rs.clone(),
    )?;
    NetGrid::new(field, grid, Some(canonical_space_form(k, 3)))
}

/// Residual of the printed two-variable reduction on a sampled potential
/// u(t₁, t₂), curvature-direction gauge (b₁, b₂) = (k/2, 0):
///
/// ```text
///   ∂₁₁u − ε²∂₂₂u + ½[(a₁² − ε²a₂² + k)(1/ε)sin 2εu + a₁a₂ cos 2εu],
/// ```
///
/// maximum absolute value over the margin-1 interior (central width-3
/// second differences). A solution sampled on a grid of spacing h leaves
/// O(h²); unrelated data leaves order one.
pub fn sine_gordon_residual(u: &Field2<f64>, grid: &ParamGrid2, wf: &WeingartenFamily) -> f64 {
    let st1 = line_stencil(grid.n1(), grid.h1(), 3, 2);
    let st2 = line_stencil(grid.n2(), grid.h2(), 3, 2);
    let e2 = wf.eps2;
    let half_p = 0.5 * (wf.a1 * wf.a1 - e2 * wf.a2 * wf.a2 + wf.k);
    let half_q = 0.5 * wf.a1 * wf.a2;
    u.interior_indices(1)
        .into_par_iter()
        .map(|(i, j)| {
            let u11 = u.deriv(0, &st1, i, j);
            let u22 = u.deriv(1, &st2, i, j);
            let uv = *u.at(i, j);
            (u11 - e2 * u22 + half_p * sn(e2, 2.0 * uv) + half_q * cs(e2, 2.0 * uv)).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// Residual of the pendulum form c + ε²v′² = r₀ cos 2ε(v − v₀) on a
/// sampled schedule v over a uniform grid of spacing h: maximum absolute
/// defect over interior nodes, central first differences.
pub fn pendulum_residual(v: &[f64], h: f64, eps2: f64, c: f64, r0: f64, v0: f64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 1..v.len().saturating_sub(1) {
        let vp = (v[i + 1] - v[i - 1]) / (2.0 * h);
        let res = c + eps2 * vp * vp - r0 * cs(eps2, 2.0 * (v[i] - v0));
        worst = worst.max(res.abs());
    }
    worst
}

/// The w-potential of a Guichard net in the gauge l₁ = cos εw,
/// l₂ = (1/ε) sin εw, l₃ = 1, together with the four first-order fields
/// of its curvature system and the split w = u(t₁, t₂) + v(t₃) with the
/// fitted pendulum constants of v.
#[derive(Debug, Clone)]
pub struct ReducedLame {
    pub grid: ParamGrid3,
    /// Detected flavor sign ε².
    pub eps2: f64,
    /// The potential per node, recovered from l₁/l₃ (and consistent with
    /// l₂/l₃ through the Guichard identity that selected the flavor).
    pub w: Field3<f64>,
    /// w₀ = (∂₁w)² + ε²(∂₂w)² + (∂₃w)².
    pub w0: Field3<f64>,
    /// w₁ = −∂₁∂₃w · cos εw / ((1/ε) sin εw).
    pub w1: Field3<f64>,
    /// w₂ = ε²·∂₂∂₃w · (1/ε) sin εw / cos εw.
    pub w2: Field3<f64>,
    /// w₃ = [(∂₁₁ − ε²∂₂₂)w − ∂₃₃w·cos 2εw] / ((1/ε) sin 2εw).
    pub w3: Field3<f64>,
    /// w on the t₃-slice nearest t₃ = 0; equals the profile u when the
    /// potential splits.
    pub u: Field2<f64>,
    /// w along the t₃-axis through the grid center, offset to vanish at
    /// the node nearest t₃ = 0; the schedule v when the potential splits.
    pub v: Vec<f64>,
    /// Fitted pendulum constants of v: c + ε²v′² = α cos 2εv + ε²β(1/ε)sin 2εv.
    pub c_red: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Polar form of (α, β): r₀ cos 2ε(v−v₀); NaN when the hyperbolic
    /// flavor has α² − β² ≤ 0 (see [`WeingartenFamily::pendulum_constants`]).
    pub r0: f64,
    pub v0: f64,
}

impl ReducedLame {
    /// The four first-order compatibility residuals of the curvature
    /// system: max |∂₂w₁ − ∂₁w₂|, |∂₃w₁ − ∂₁w₃|, |∂₃w₂ − ∂₂w₃| and
    /// |∂₁w₁ + ε²∂₂w₂ + ∂₃w₃ − ε²∂₃w₀|, over the margin-3 interior
    /// (margin 2 on axes shorter than nine nodes). Data from a genuine
    /// Guichard net of this class leaves O(h²); anything else order one.
    pub fn residuals(&self) -> [f64; 4] {
        let grid = &self.grid;
        let margin = if (0..3).all(|a| grid.n(a) >= 9) { 3 } else { 2 };
        let st: Vec<_> = (0..3)
            .map(|a| line_stencil(grid.n(a), grid.h(a), 3, 1))
            .collect();
        let e2 = self.eps2;
        let idx = self.w.interior_indices(margin);
        let max_over = |f: &(dyn Fn(usize, usize, usize) -> f64 + Sync)| {
            idx.par_iter()
                .map(|&(i, j, k)| f(i, j, k).abs())
                .reduce(|| 0.0, f64::max)
        };
        [
            max_over(&|i, j, k| {
                self.w1.deriv(1, &st[1], i, j, k) - self.w2.deriv(0, &st[0], i, j, k)
            }),
            max_over(&|i, j, k| {
                self.w1.deriv(2, &st[2], i, j, k) - self.w3.deriv(0, &st[0], i, j, k)
            }),
            max_over(&|i, j, k| {
                self.w2.deriv(2, &st[2], i, j, k) - self.w3.deriv(1, &st[1], i, j, k)
            }),
            max_over(&|i, j, k| {
                self.w1.deriv(0, &st[0], i, j, k)
                    + e2 * self.w2.deriv(1, &st[1], i, j, k)
                    + self.w3.deriv(2, &st[2], i, j, k)
                    - e2 * self.w0.deriv(2, &st[2], i, j, k)
            }),
        ]
    }

    /// Mixed-partial defect of the split w = u(t₁,t₂) + v(t₃):
    /// (max |∂₁∂₃w|, max |∂₂∂₃w|) over the margin-2 interior. Both vanish
    /// to O(h²) exactly when the potential splits.
    pub fn split_defect(&self) -> [f64; 2] {
        let grid = &self.grid;
        let st: Vec<_> = (0..3)
            .map(|a| line_stencil(grid.n(a), grid.h(a), 3, 1))
            .collect();
        let d3 = derive_field(&self.w, 2, &st[2]);
        let idx = self.w.interior_indices(2);
        let mut out = [0.0_f64; 2];
        for (slot, axis) in [(0usize, 0usize), (1, 1)] {
            out[slot] = idx
                .par_iter()
                .map(|&(i, j, k)| d3.deriv(axis, &st[axis], i, j, k).abs())
                .reduce(|| 0.0, f64::max);
        }
        out
    }
}

/// Apply one stencil table along `axis` to a whole field.
fn derive_field(f: &Field3<f64>, axis: usize, st: &[(usize, Vec<f64>)]) -> Field3<f64> {
    Field3::from_fn(f.n1, f.n2, f.n3, |i, j, k| f.deriv(axis, st, i, j, k))
}

/// Recover the reduced description from Lamé data: detect the flavor
/// from the Guichard identity (l₁/l₃)² + ε²(l₂/l₃)² = 1, extract the
/// w-potential, form the four curvature-system fields and fit the
/// pendulum constants of the t₃-schedule by least squares.
///
/// Fails with [`Error::InconsistentGauge`] when neither flavor satisfies
/// the identity within [`tol::GUICHARD_GAUGE_TOL`] (data not in this
/// gauge, or axis roles permuted) or when the potential degenerates
/// (cos εw or (1/ε)sin εw below [`tol::W_FLOOR`], making the cot/tan
/// factors of the curvature system meaningless).
pub fn reduced_lame_data(ld: &LameData) -> Result<ReducedLame> {
    let grid = ld.grid.clone();
    let (n1, n2, n3) = (grid.n(0), grid.n(1), grid.n(2));
    let x1 = Field3::from_fn(n1, n2, n3, |i, j, k| {
        ld.l(0).at(i, j, k) / ld.l(2).at(i, j, k)
    });
    let x2 = Field3::from_fn(n1, n2, n3, |i, j, k| {
        ld.l(1).at(i, j, k) / ld.l(2).at(i, j, k)
    });

    let fit = |e2: f64| {
        x1.indices().iter().fold(0.0_f64, |m, &(i, j, k)| {
            let (a, b) = (*x1.at(i, j, k), *x2.at(i, j, k));
            m.max((a * a + e2 * b * b - 1.0).abs())
        })
    };
    let (fit_trig, fit_hyp) = (fit(1.0), fit(-1.0));
    let eps2 = if fit_trig <= fit_hyp { 1.0 } else { -1.0 };
    let best = fit_trig.min(fit_hyp);
    if best > tol::GUICHARD_GAUGE_TOL {
        return Err(Error::InconsistentGauge(format!(
            "Lamé ratios satisfy neither Guichard identity: \
             trigonometric defect {fit_trig:.3e}, hyperbolic defect {fit_hyp:.3e}"
        )));
    }
    for (i, j, k) in x1.indices() {
        let (a, b) = (*x1.at(i, j, k), *x2.at(i, j, k));
        let floor = if eps2 > 0.0 { a.min(b) } else { b };
        if floor < tol::W_FLOOR {
            return Err(Error::InconsistentGauge(format!(
                "w-potential degenerates at node ({i},{j},{k}): \
                 trigonometric factor {floor:.3e} below {:.1e}",
                tol::W_FLOOR
            )));
        }
        if eps2 < 0.0 && a < 1.0 - tol::GUICHARD_GAUGE_TOL {
            return Err(Error::InconsistentGauge(format!(
                "hyperbolic flavor needs l₁/l₃ ≥ 1, got {a:.6} at node ({i},{j},{k})"
            )));
        }
    }

    // With both trigonometric factors positive the branch is unique:
    // w ∈ (0, π/2) for the trigonometric flavor, w > 0 for the
    // hyperbolic one.
    let w = Field3::from_fn(n1, n2, n3, |i, j, k| {
        let a = *x1.at(i, j, k);
        if eps2 > 0.0 {
            a.clamp(-1.0, 1.0).acos()
        } else {
            a.max(1.0).acosh()
        }
    });

    let st: Vec<_> = (0..3)
        .map(|a| line_stencil(grid.n(a), grid.h(a), 3, 1))
        .collect();
    let st2: Vec<_> = (0..3)
        .map(|a| line_stencil(grid.n(a), grid.h(a), 3, 2))
        .collect();
    let d1 = derive_field(&w, 0, &st[0]);
    let d2 = derive_field(&w, 1, &st[1]);
    let d3 = derive_field(&w, 2, &st[2]);
    let w0 = Field3::from_fn(n1, n2, n3, |i, j, k| {
        let (a, b, c) = (*d1.at(i, j, k), *d2.at(i, j, k), *d3.at(i, j, k));
        a * a + eps2 * b * b + c * c
    });
    let w1 = Field3::from_fn(n1, n2, n3, |i, j, k| {
        let wv = *w.at(i, j, k);
        -d3.deriv(0, &st[0], i, j, k) * cs(eps2, wv) / sn(eps2, wv)
    });
    let w2 = Field3::from_fn(n1, n2, n3, |i, j, k| {
        let wv = *w.at(i, j, k);
        eps2 * d3.deriv(1, &st[1], i, j, k) * sn(eps2, wv) / cs(eps2, wv)
    });
    let w3 = Field3::from_fn(n1, n2, n3, |i, j, k| {
        let wv = *w.at(i, j, k);
        let w11 = w.deriv(0, &st2[0], i, j, k);
        let w22 = w.deriv(1, &st2[1], i, j, k);
        let w33 = w.deriv(2, &st2[2], i, j, k);
        (w11 - eps2 * w22 - w33 * cs(eps2, 2.0 * wv)) / sn(eps2, 2.0 * wv)
    });

    // Split along the t₃-axis through the grid center, offset anchored
    // at the node nearest t₃ = 0.
    let (ic, jc) = (n1 / 2, n2 / 2);
    let k0 = (0..n3)
        .min_by(|&a, &b| {
            grid.t3s[a]
                .abs()
                .partial_cmp(&grid.t3s[b].abs())
                .expect("finite axis")
        })
        .expect("nonempty axis");
    let u = Field2::from_fn(n1, n2, |i, j| *w.at(i, j, k0));
    let v: Vec<f64> = (0..n3)
        .map(|k| w.at(ic, jc, k) - w.at(ic, jc, k0))
        .collect();

    // Least-squares fit of −c + α cos 2εv + ε²β (1/ε)sin 2εv = ε²v′²
    // over interior nodes of the schedule.
    let h3 = grid.h(2);
    let rows = n3 - 2;
    let mut design = DMatrix::zeros(rows, 3);
    let mut rhs = DVector::zeros(rows);
    for i in 1..n3 - 1 {
        let vp = (v[i + 1] - v[i - 1]) / (2.0 * h3);
        design[(i - 1, 0)] = -1.0;
        design[(i - 1, 1)] = cs(eps2, 2.0 * v[i]);
        design[(i - 1, 2)] = eps2 * sn(eps2, 2.0 * v[i]);
        rhs[i - 1] = eps2 * vp * vp;
    }
    let sol = design
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Usage(format!("pendulum fit failed: {e}")))?;
    let (c_red, alpha, beta) = (sol[0], sol[1], sol[2]);
    let (r0, v0) = pendulum_polar(eps2, alpha, beta);

    Ok(ReducedLame {
        grid,
        eps2,
        w,
        w0,
        w1,
        w2,
        w3,
        u,
        v,
        c_red,
        alpha,
        beta,
        r0,
        v0,
    })
}

/// [`reduced_lame_data`] on the Lamé data extracted from a sampled net.
pub fn reduced_lame(net: &NetGrid) -> Result<ReducedLame> {
    reduced_lame_data(&lame_from_grid(net)?)
}

/// Convenience: just the four compatibility residuals of a net.
pub fn reduced_lame_residuals(net: &NetGrid) -> Result<[f64; 4]> {
    Ok(reduced_lame(net)?.residuals())
}

/// Gauss and mean curvature fields (K, H) of one t₃ = const slice of a
/// net, by finite differences: the slice normal sphere s is recovered
/// per node as the unit spacelike vector Lorentz-orthogonal to
/// {∂₁f, ∂₂f, f, n_k} (sign fixed by `anchor_normal` at the grid origin
/// and propagated by continuity), and the shape operator is
/// S = −I⁻¹·[⟨∂ᵢs, ∂ⱼf⟩] for the Rodrigues convention ds + k·df = 0 used
/// by [`principal_curvatures_at`]. Central differences inside, one-sided
/// at the boundary, so boundary values carry first-order error only.
///
/// Requires the net to carry its space-form gauge.
pub fn slice_curvatures(
    net: &NetGrid,
    r_index: usize,
    anchor_normal: &MinkVec,
) -> Result<(Field2<f64>, Field2<f64>)> {
    let gauge = net.gauge.as_ref().ok_or_else(|| {
        Error::Usage("slice curvature extraction needs the net's space-form gauge".into())
    })?;
    let (n1, n2) = (net.f.n(0), net.f.n(1));
    if r_index >= net.f.n(2) {
        return Err(Error::Usage(format!(
            "slice index {r_index} out of range 0..{}",
            net.f.n(2)
        )));
    }
    let f = Field2::from_fn(n1, n2, |i, j| net.f.at(i, j, r_index).v.clone());
    let st1 = line_stencil(n1, net.grid.h(0), 3, 1);
    let st2 = line_stencil(n2, net.grid.h(1), 3, 1);
    let d1f = Field2::from_fn(n1, n2, |i, j| f.deriv(0, &st1, i, j));
    let d2f = Field2::from_fn(n1, n2, |i, j| f.deriv(1, &st2, i, j));

    let metric = crate::lorentz::metric(5);
    let mut s = Field2::from_fn(n1, n2, |_, _| MinkVec::zeros(5));
    for i in 0..n1 {
        for j in 0..n2 {
            let mut b = DMatrix::zeros(4, 5);
            for (row, vec) in [d1f.at(i, j), d2f.at(i, j), f.at(i, j), &gauge.nk]
                .into_iter()
                .enumerate()
            {
                b.set_row(row, &(&metric * vec).transpose());
            }
            let sym = b.transpose() * &b;
            let eig = sym.symmetric_eigen();
            let mut best = 0;
            for m in 1..5 {
                if eig.eigenvalues[m] < eig.eigenvalues[best] {
                    best = m;
                }
            }
            let v = eig.eigenvectors.column(best).into_owned();
            let norm2 = inner(&v, &v);
            if norm2 <= 0.0 {
                return Err(Error::DegenerateInput(format!(
                    "slice normal at node ({i},{j}) is not spacelike (⟨v,v⟩ = {norm2:.3e})"
                )));
            }
            let mut v = v / norm2.sqrt();
            let reference = if (i, j) == (0, 0) {
                anchor_normal.clone()
            } else if j > 0 {
                s.at(i, j - 1).clone()
            } else {
                s.at(i - 1, j).clone()
            };
            if inner(&v, &reference) < 0.0 {
                v = -v;
            }
            *s.at_mut(i, j) = v;
        }
    }

    let d1s = Field2::from_fn(n1, n2, |i, j| s.deriv(0, &st1, i, j));
    let d2s = Field2::from_fn(n1, n2, |i, j| s.deriv(1, &st2, i, j));
    let mut kf = Field2::from_fn(n1, n2, |_, _| 0.0);
    let mut hf = Field2::from_fn(n1, n2, |_, _| 0.0);
    for i in 0..n1 {
        for j in 0..n2 {
            let (e, ff, g) = (
                inner(d1f.at(i, j), d1f.at(i, j)),
                inner(d1f.at(i, j), d2f.at(i, j)),
                inner(d2f.at(i, j), d2f.at(i, j)),
            );
            let l = inner(d1s.at(i, j), d1f.at(i, j));
            let m = 0.5 * (inner(d1s.at(i, j), d2f.at(i, j)) + inner(d2s.at(i, j), d1f.at(i, j)));
            let n = inner(d2s.at(i, j), d2f.at(i, j));
            let det_i = e * g - ff * ff;
            if det_i.abs() <= tol::IMMERSION_FLOOR {
                return Err(Error::ImmersionFailure {
                    node: vec![i, j, r_index],
                    detail: format!("slice first fundamental form degenerate, det = {det_i:.3e}"),
                });
            }
            // S = −I⁻¹·[[l, m], [m, n]].
            *kf.at_mut(i, j) = (l * n - m * m) / det_i;
            *hf.at_mut(i, j) = -0.5 * (g * l - 2.0 * ff * m + e * n) / det_i;
        }
    }
    Ok((kf, hf))
}
