//! Quadric models of constant-curvature space forms inside the light cone.
//!
//! A space form of curvature k is realized as the quadric
//! Q_k^n = {v ∈ R^{n+2} : ⟨v,v⟩ = 0, ⟨v,n_k⟩ = 1}, the section of the light
//! cone by an affine hyperplane. The defining vector satisfies
//! ⟨n_k,n_k⟩ = −k; in the canonical gauge n_k = n₀ − (k/2)p₀ with
//! p₀ = e_{n+1} + e_{n+2} and n₀ = ½(e_{n+1} − e_{n+2}). All gauges share
//! one ambient basis, so passing between space forms is the central
//! rescaling p ↦ p/⟨p,n_k⟩ (a generalized stereographic projection).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lorentz::{self, inner, MinkVec};
use crate::tol;

/// The canonical base point p₀ = e_{n+1} + e_{n+2} ∈ R^{n+2}.
pub fn p0(n: usize) -> MinkVec {
    let mut v = DVector::zeros(n + 2);
    v[n] = 1.0;
    v[n + 1] = 1.0;
    v
}

/// The canonical flat gauge vector n₀ = ½(e_{n+1} − e_{n+2}) ∈ R^{n+2}.
pub fn n0(n: usize) -> MinkVec {
    let mut v = DVector::zeros(n + 2);
    v[n] = 0.5;
    v[n + 1] = -0.5;
    v
}

/// A point of the projective light cone, stored as a representative vector.
///
/// The invariant ⟨v,v⟩ = 0 holds within relative tolerance; whether v is
/// normalized in a particular gauge (⟨v,n_k⟩ = 1) is checked per operation.
#[derive(Debug, Clone, PartialEq)]
pub struct LightPoint {
    pub v: MinkVec,
}

impl LightPoint {
    /// Wrap a vector after checking it is lightlike relative to its
    /// Euclidean size.
    pub fn new(v: MinkVec) -> Result<Self> {
        let q = lorentz::norm2(&v);
        let scale = v.norm_squared();
        if scale == 0.0 {
            return Err(Error::DegenerateInput("zero vector is not a light ray".into()));
        }
        if q.abs() > tol::DEFAULT_TOL * scale {
            return Err(Error::DegenerateInput(format!(
                "vector is not lightlike: ⟨v,v⟩ = {q:.3e} at Euclidean scale {scale:.3e}"
            )));
        }
        Ok(Self { v })
    }

    /// Wrap a vector that is lightlike by construction (closed formulas on
    /// the cone); skips the runtime check.
    pub fn new_unchecked(v: MinkVec) -> Self {
        Self { v }
    }
}

/// A constant-curvature space form Q_k^n given by its defining vector.
#[derive(Debug, Clone)]
pub struct SpaceForm {
    /// Defining vector n_k of the affine section.
    pub nk: MinkVec,
    /// Sectional curvature k = −⟨n_k,n_k⟩.
    pub curvature: f64,
    /// Dimension n of the space form (ambient dimension is n+2).
    pub dim: usize,
}

impl SpaceForm {
    /// Build a space form from an explicit defining vector, validating
    /// k = −⟨nk,nk⟩ within 1e−12 and nk ≠ 0.
    pub fn new(nk: MinkVec, curvature: f64, dim: usize) -> Result<Self> {
        if nk.len() != dim + 2 {
            return Err(Error::DimensionMismatch {
                left: nk.len(),
                right: dim + 2,
            });
        }
        if nk.norm_squared() == 0.0 {
            return Err(Error::DegenerateInput("defining vector nk must be nonzero".into()));
        }
        let k = -lorentz::norm2(&nk);
        if (k - curvature).abs() > 1e-12 * (1.0 + curvature.abs()) {
            return Err(Error::DegenerateInput(format!(
                "curvature mismatch: −⟨nk,nk⟩ = {k} but {curvature} was claimed"
            )));
        }
        Ok(Self { nk, curvature, dim })
    }

    /// The completing vector p̂ = n_k + (k/2)p of a normalized point p,
    /// the second lightlike leg of the pencil through p.
    pub fn p_hat(&self, p: &MinkVec) -> MinkVec {
        &self.nk + (self.curvature / 2.0) * p
    }
}

/// The space form of curvature k in the canonical gauge
/// n_k = n₀ − (k/2)p₀. Requires n ≥ 2.
pub fn canonical_space_form(k: f64, n: usize) -> SpaceForm {
    assert!(n >= 2, "space form dimension must be at least 2");
    let nk = n0(n) - (k / 2.0) * p0(n);
    SpaceForm {
        nk,
        curvature: k,
        dim: n,
    }
}

/// Isometric embedding of Euclidean R^n into the flat quadric Q₀^n:
/// x ↦ x + p₀ − ½|x|²n₀, i.e. (x, 1 − ¼|x|², 1 + ¼|x|²).
///
/// `q0` must be the canonical flat gauge of matching dimension.
pub fn embed_flat(x: &DVector<f64>, q0: &SpaceForm) -> LightPoint {
    assert_eq!(q0.curvature, 0.0, "embed_flat needs the flat gauge k = 0");
    assert_eq!(x.len(), q0.dim, "point dimension must match the space form");
    let n = q0.dim;
    let r2 = x.norm_squared();
    let mut v = DVector::zeros(n + 2);
    for i in 0..n {
        v[i] = x[i];
    }
    v[n] = 1.0 - 0.25 * r2;
    v[n + 1] = 1.0 + 0.25 * r2;
    LightPoint::new_unchecked(v)
}

/// Generalized stereographic projection: rescale p to the gauge of
/// `target`, p ↦ p/⟨p,n_k⟩. The same light ray, normalized in the target.
///
/// Near the infinity boundary (|⟨p,n_k⟩| < 1e−8·|p|) the rescaling is
/// numerically meaningless and an error is returned: the ray is an
/// asymptotic direction of the target space form.
pub fn stereographic(p: &LightPoint, target: &SpaceForm) -> Result<LightPoint> {
    let denom = lorentz::try_inner(&p.v, &target.nk)?;
    if denom.abs() < tol::INFINITY_BOUNDARY_REL * p.v.norm() {
        return Err(Error::InfinityBoundary(format!(
            "asymptotic direction: ⟨p,nk⟩ = {denom:.3e} at scale |p| = {:.3e}",
            p.v.norm()
        )));
    }
    Ok(LightPoint::new_unchecked(&p.v / denom))
}

/// Arc-length parametrization of the geodesic of Q_k^n through the
/// normalized point p with unit tangent s.
///
/// With p̂ = n_k + (k/2)p the three cases are
///   k = 0:  p_t = t·s + p − ½t²·p̂,
///   k > 0:  p_t = −n_k/k + [sin(√k t)·s + cos(√k t)·((√k/2)p + p̂/√k)]/√k,
///   k < 0:  p_t = −n_k/k + [sinh(κt)·s + cosh(κt)·((κ/2)p − p̂/κ)]/κ,  κ = √−k.
///
/// All cases satisfy ⟨p_t, n_k⟩ ≡ 1 (geodesics never reach the infinity
/// boundary of their own gauge) and are unit-speed.
pub fn geodesic_point(q: &SpaceForm, p: &LightPoint, s: &MinkVec, t: f64) -> Result<LightPoint> {
    let nk = &q.nk;
    let pv = &p.v;
    if pv.len() != nk.len() || s.len() != nk.len() {
        return Err(Error::DimensionMismatch {
            left: pv.len().max(s.len()),
            right: nk.len(),
        });
    }
    let rel = tol::ORTHOGONALITY_REL;
    let p_scale = 1.0 + pv.norm_squared();
    if lorentz::norm2(pv).abs() > rel * p_scale {
        return Err(Error::Usage(format!(
            "geodesic base point is not lightlike: ⟨p,p⟩ = {:.3e}",
            lorentz::norm2(pv)
        )));
    }
    if (inner(pv, nk) - 1.0).abs() > rel * p_scale {
        return Err(Error::Usage(format!(
            "geodesic base point is not normalized: ⟨p,nk⟩ = {}",
            inner(pv, nk)
        )));
    }
    if (lorentz::norm2(s) - 1.0).abs() > rel {
        return Err(Error::Usage(format!(
            "geodesic direction is not a unit spacelike vector: ⟨s,s⟩ = {}",
            lorentz::norm2(s)
        )));
    }
    if inner(s, pv).abs() > rel * p_scale || inner(s, nk).abs() > rel {
        return Err(Error::Usage(
            "geodesic direction must be orthogonal to both p and nk".into(),
        ));
    }

    let k = q.curvature;
    let phat = q.p_hat(pv);
    let v = if k == 0.0 {
        t * s + pv - (0.5 * t * t) * &phat
    } else if k > 0.0 {
        let rk = k.sqrt();
        -(nk / k)
            + ((rk * t).sin() * s + (rk * t).cos() * ((rk / 2.0) * pv + &phat / rk)) / rk
    } else {
        let kap = (-k).sqrt();
        if (kap * t).abs() > 350.0 {
            return Err(Error::Domain(format!(
                "geodesic parameter κ·t = {} too large: cosh would overflow",
                kap * t
            )));
        }
        -(nk / k)
            + ((kap * t).sinh() * s + (kap * t).cosh() * ((kap / 2.0) * pv - &phat / kap)) / kap
    };
    Ok(LightPoint::new_unchecked(v))
}

/// True iff F is a Lorentz transformation fixing the gauge vector:
/// FᵀJF = J and F·n_k = n_k, both within `tol` in the max norm.
/// Such maps are exactly the isometries of Q_k^n in this model.
pub fn is_proper_isometry(f: &DMatrix<f64>, q: &SpaceForm, tol: f64) -> bool {
    let d = q.nk.len();
    if f.nrows() != d || f.ncols() != d {
        return false;
    }
    let j = lorentz::metric(d);
    let lorentz_defect = (f.transpose() * &j * f - &j)
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs()));
    let fix_defect = (f * &q.nk - &q.nk)
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs()));
    lorentz_defect <= tol && fix_defect <= tol
}
