//! Oriented hyperspheres as unit spacelike vectors of R^{n+2}.
//!
//! A point p lies on the sphere s exactly when ⟨p,s⟩ = 0; the pair ±s
//! carries the two orientations. In the gauge of Q_k^n the quantity
//! ⟨s,n_k⟩ is the mean curvature of the sphere, so hyperplanes are the
//! spheres with ⟨s,n_k⟩ = 0. Codimension-(n−m) spheres are spacelike
//! (n−m)-planes of sphere vectors: the m-sphere is the set of light rays
//! orthogonal to the whole plane. Circles (m = 1) get an explicit
//! parametrization whose parameter is recovered by the cross ratio.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lorentz::{inner, norm2, MinkVec};
use crate::spaceform::{geodesic_point, LightPoint, SpaceForm};
use crate::tol;

/// An oriented hypersphere: a unit spacelike vector, ⟨s,s⟩ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereVec {
    pub s: MinkVec,
}

impl SphereVec {
    /// Wrap a vector after checking ⟨s,s⟩ = 1 within 1e−10.
    pub fn new(s: MinkVec) -> Result<Self> {
        let q = norm2(&s);
        if (q - 1.0).abs() > 1e-10 {
            return Err(Error::DegenerateInput(format!(
                "sphere vector must be unit spacelike: ⟨s,s⟩ = {q}"
            )));
        }
        Ok(Self { s })
    }

    /// Wrap a vector that is unit by construction.
    pub fn new_unchecked(s: MinkVec) -> Self {
        Self { s }
    }

    /// The oppositely oriented sphere.
    pub fn reversed(&self) -> Self {
        Self { s: -&self.s }
    }

    /// Mean curvature of the sphere in the gauge of `q`: ⟨s,n_k⟩.
    pub fn mean_curvature(&self, q: &SpaceForm) -> f64 {
        inner(&self.s, &q.nk)
    }
}

/// A spacelike (n−m)-plane of sphere vectors, i.e. an m-sphere.
///
/// The basis is orthonormal (Lorentz-Gram = identity within 1e−10) and its
/// span contains only spacelike vectors. The represented m-sphere is
/// {p lightlike : ⟨p,sᵢ⟩ = 0 for all i}.
#[derive(Debug, Clone)]
pub struct SpacelikePlane {
    pub basis: Vec<MinkVec>,
    /// Dimension m of the represented sphere: m = n − basis.len().
    pub m: usize,
}

impl SpacelikePlane {
    /// Lorentz-orthogonal projector onto the plane, P = Σ sᵢ·(J sᵢ)ᵀ.
    /// Basis-independent: two spanning sets of the same plane give the
    /// same matrix.
    pub fn projector(&self) -> DMatrix<f64> {
        let d = self.basis[0].len();
        let mut p = DMatrix::zeros(d, d);
        for s in &self.basis {
            let mut js = s.clone();
            js[d - 1] = -js[d - 1];
            p += s * js.transpose();
        }
        p
    }
}

/// A pseudo-orthonormal circle frame (s, p, p̂): unit spacelike s and a
/// lightlike pair with ⟨p,p̂⟩ = 1, all mutually orthogonal otherwise.
/// The lightlike vectors of span(s,p,p̂) form a circle through p.
#[derive(Debug, Clone)]
pub struct CircleFrame {
    pub s: SphereVec,
    pub p: LightPoint,
    pub phat: LightPoint,
}

impl CircleFrame {
    /// Build a frame, validating ⟨s,p⟩ = ⟨s,p̂⟩ = 0 and ⟨p,p̂⟩ = 1
    /// within 1e−10 (relative to the vectors' size).
    pub fn new(s: SphereVec, p: LightPoint, phat: LightPoint) -> Result<Self> {
        let scale = 1.0 + p.v.norm() * phat.v.norm();
        if inner(&s.s, &p.v).abs() > 1e-10 * scale
            || inner(&s.s, &phat.v).abs() > 1e-10 * scale
        {
            return Err(Error::DegenerateInput(
                "circle frame requires ⟨s,p⟩ = ⟨s,p̂⟩ = 0".into(),
            ));
        }
        if (inner(&p.v, &phat.v) - 1.0).abs() > 1e-10 * scale {
            return Err(Error::DegenerateInput(format!(
                "circle frame requires ⟨p,p̂⟩ = 1, got {}",
                inner(&p.v, &phat.v)
            )));
        }
        Ok(Self { s, p, phat })
    }
}

/// The sphere through p with tangent hyperplane normal `tangent_normal`
/// and mean curvature h: s = tangent_normal + h·p.
///
/// `tangent_normal` must be unit spacelike and orthogonal to p; then
/// ⟨s,s⟩ = 1 and ⟨p,s⟩ = 0 hold identically, and when p is normalized in
/// a gauge with tangent_normal ⊥ n_k, the mean curvature there is
/// ⟨s,n_k⟩ = h.
pub fn sphere_from_contact(p: &LightPoint, tangent_normal: &MinkVec, h: f64) -> Result<SphereVec> {
    let rel = tol::ORTHOGONALITY_REL;
    if (norm2(tangent_normal) - 1.0).abs() > rel {
        return Err(Error::Usage(format!(
            "tangent normal must be unit spacelike: ⟨n,n⟩ = {}",
            norm2(tangent_normal)
        )));
    }
    if inner(tangent_normal, &p.v).abs() > rel * (1.0 + p.v.norm()) {
        return Err(Error::Usage(
            "tangent normal must be orthogonal to the contact point".into(),
        ));
    }
    Ok(SphereVec::new_unchecked(tangent_normal + h * &p.v))
}

/// Incidence pairing ⟨p,s⟩: zero (relative to |p|) iff p lies on s.
/// Linear in p, so the zero set is scale-invariant.
pub fn incidence(p: &LightPoint, s: &SphereVec) -> f64 {
    inner(&p.v, &s.s)
}

/// Intersection-angle cosine of two spheres: ⟨s₁,s₂⟩. Equal oriented
/// spheres give 1, orientation reversal −1, orthogonal intersection 0.
pub fn angle(s1: &SphereVec, s2: &SphereVec) -> f64 {
    inner(&s1.s, &s2.s)
}

/// The geodesic sphere of Q_k^n around a normalized center.
///
/// There is no closed center/radius formula in this gauge-agnostic
/// setting, so the sphere vector is recovered as the (one-dimensional)
/// common annihilator of sampled geodesic endpoints at distance `radius`
/// from the center, via SVD. The orientation is fixed by ⟨s,center⟩ > 0,
/// which reproduces the outward convention: in the flat gauge the mean
/// curvature is ⟨s,n₀⟩ = +1/radius.
///
/// Domain: radius > 0, and radius < π/√k for k > 0 (injectivity).
pub fn sphere_from_center(center: &LightPoint, radius: f64, q: &SpaceForm) -> Result<SphereVec> {
    let k = q.curvature;
    if radius <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    if k > 0.0 && radius >= std::f64::consts::PI / k.sqrt() - 1e-15 {
        return Err(Error::Domain(format!(
            "radius {radius} is not below the injectivity bound π/√k = {}",
            std::f64::consts::PI / k.sqrt()
        )));
    }
    let c = &center.v;
    let d = q.nk.len();
    if (inner(c, &q.nk) - 1.0).abs() > tol::ORTHOGONALITY_REL * (1.0 + c.norm_squared()) {
        return Err(Error::Usage("center must be normalized in the given gauge".into()));
    }
    let chat = q.p_hat(c);

    // Orthonormal basis of the spacelike complement {c, ĉ}^⊥.
    let mut basis: Vec<MinkVec> = Vec::with_capacity(d - 2);
    for i in 0..d {
        if basis.len() == d - 2 {
            break;
        }
        let mut v: MinkVec = DVector::zeros(d);
        v[i] = 1.0;
        v -= inner(&v, &chat) * c + inner(&v, c) * &chat;
        for b in &basis {
            let coef = inner(&v, b);
            v.axpy(-coef, b, 1.0);
        }
        let qv = norm2(&v);
        if qv > 1e-8 {
            v /= qv.sqrt();
            basis.push(v);
        }
    }
    if basis.len() != d - 2 {
        return Err(Error::DegenerateInput(
            "could not span the tangent directions at the center".into(),
        ));
    }

    // Sample directions: the basis, pair bisectors, and one reversal.
    let mut dirs: Vec<MinkVec> = basis.clone();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            dirs.push((&basis[i] + &basis[j]) / 2.0_f64.sqrt());
        }
    }
    dirs.push(-&basis[0]);

    // Rows ⟨E_j, ·⟩ of the incidence system, one per endpoint.
    let mut rows = DMatrix::zeros(dirs.len(), d);
    for (j, u) in dirs.iter().enumerate() {
        let e = geodesic_point(q, center, u, radius)?;
        for i in 0..d {
            let sign = if i == d - 1 { -1.0 } else { 1.0 };
            rows[(j, i)] = sign * e.v[i];
        }
    }

    let svd = rows.clone().svd(false, true);
    let vt = svd.v_t.as_ref().expect("svd of incidence system");
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sv.len() >= 2 && sv[1] <= 1e-8 * smax {
        return Err(Error::DegenerateInput(
            "sampled endpoints do not determine a unique sphere".into(),
        ));
    }
    let idx = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let mut s: MinkVec = vt.row(idx).transpose();

    let qs = norm2(&s);
    if qs <= 0.0 {
        return Err(Error::DegenerateInput(
            "annihilator of the sampled endpoints is not spacelike".into(),
        ));
    }
    s /= qs.sqrt();
    if inner(&s, c) < 0.0 {
        s = -s;
    }
    Ok(SphereVec::new_unchecked(s))
}

/// Whether `candidate` belongs to the parabolic pencil s + R·p of spheres
/// touching s at p: candidate must pass through p and differ from
/// ⟨candidate,s⟩·s by a multiple of p only, within `tol`.
pub fn pencil_contains(s: &SphereVec, p: &LightPoint, candidate: &SphereVec, tol: f64) -> bool {
    let pscale = p.v.norm();
    if incidence(p, candidate).abs() > tol * pscale {
        return false;
    }
    let mut r = &candidate.s - inner(&candidate.s, &s.s) * &s.s;
    // Remove the best Euclidean multiple of p; for a pencil member the
    // remainder is exactly zero.
    let lam = r.dot(&p.v) / p.v.norm_squared();
    r.axpy(-lam, &p.v, 1.0);
    r.norm() <= tol
}

/// Orthonormalize a spanning set of sphere vectors into the spacelike
/// plane (the m-sphere) they intersect in.
///
/// Fails when the span is not positive definite: the given hyperspheres
/// have no common m-sphere (tangency gives a lightlike span direction).
pub fn msphere_span(spheres: &[SphereVec]) -> Result<SpacelikePlane> {
    if spheres.is_empty() {
        return Err(Error::DegenerateInput("empty spanning set".into()));
    }
    let d = spheres[0].s.len();
    let n = d - 2;
    if spheres.len() > n {
        return Err(Error::DegenerateInput(format!(
            "at most {n} independent hyperspheres can intersect in a sphere"
        )));
    }
    let mut basis: Vec<MinkVec> = Vec::with_capacity(spheres.len());
    for sv in spheres {
        let mut v = sv.s.clone();
        for b in &basis {
            let coef = inner(&v, b);
            v.axpy(-coef, b, 1.0);
        }
        let qv = norm2(&v);
        // The span must stay uniformly spacelike; a tangency or a
        // dependent sphere collapses the residual square to ≤ 0.
        if qv <= 1e-10 {
            return Err(Error::DegenerateInput(
                "spheres do not intersect in a sphere: span is not spacelike".into(),
            ));
        }
        v /= qv.sqrt();
        basis.push(v);
    }
    let m = n - basis.len();
    Ok(SpacelikePlane { basis, m })
}

/// Arc-length-style circle parametrization
/// p_g = (1/g′)·(g·s + p − ½g²·p̂) in the frame (s,p,p̂).
///
/// The image is lightlike identically (the quadratic terms cancel) and
/// orthogonal to every sphere containing the circle. g′ scales the
/// representative only, but must be nonzero.
pub fn circle_point(cf: &CircleFrame, g: f64, gprime: f64) -> Result<LightPoint> {
    if gprime == 0.0 {
        return Err(Error::SingularParametrization);
    }
    let v = (g * &cf.s.s + &cf.p.v - (0.5 * g * g) * &cf.phat.v) / gprime;
    Ok(LightPoint::new_unchecked(v))
}

/// Cross ratio of four light rays:
/// sqrt( (⟨a,b⟩⟨c,d⟩) / (⟨b,c⟩⟨d,a⟩) ), the principal nonnegative root.
///
/// Scale-invariant in each argument. For points on one circle in the
/// order (p, p_t, p̂, unit point) it recovers the circle parameter g(t).
/// The sign of the classical cross ratio is lost by the square root and
/// is not recovered.
pub fn cross_ratio(a: &LightPoint, b: &LightPoint, c: &LightPoint, d: &LightPoint) -> Result<f64> {
    let num = inner(&a.v, &b.v) * inner(&c.v, &d.v);
    let den = inner(&b.v, &c.v) * inner(&d.v, &a.v);
    let scale = a.v.norm() * b.v.norm() * c.v.norm() * d.v.norm();
    if den.abs() <= tol::CROSS_RATIO_DEGENERATE * scale {
        return Err(Error::DegenerateConfiguration(format!(
            "cross-ratio denominator {den:.3e} vanishes at scale {scale:.3e}"
        )));
    }
    let radicand = num / den;
    if radicand < 0.0 {
        return Err(Error::ComplexConfiguration { radicand });
    }
    Ok(radicand.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::{canonical_space_form, embed_flat, n0, p0};
    use nalgebra::DVector;

    const TOL: f64 = 1e-12;

    fn ev(dim: usize, i: usize) -> MinkVec {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    /// Closed-form Euclidean sphere vector: center m, radius r in the
    /// flat gauge, s = (1/r)(m + p₀ − ½(|m|²−r²)n₀). Independent oracle
    /// for sphere_from_center at k = 0.
    fn euclidean_sphere(m: &DVector<f64>, r: f64) -> SphereVec {
        let n = m.len();
        let mut v = DVector::zeros(n + 2);
        for i in 0..n {
            v[i] = m[i];
        }
        let v = (v + p0(n) - 0.5 * (m.norm_squared() - r * r) * n0(n)) / r;
        SphereVec::new(v).expect("closed-form sphere is unit")
    }

    #[test]
    fn contact_sphere_basics() {
        let p = LightPoint::new(p0(3)).unwrap();
        let tn = ev(5, 0);
        let q0 = canonical_space_form(0.0, 3);

        let plane = sphere_from_contact(&p, &tn, 0.0).unwrap();
        assert_eq!(plane.s, tn, "h = 0 must return the tangent hyperplane");
        assert_eq!(plane.mean_curvature(&q0), 0.0);

        let s1 = sphere_from_contact(&p, &tn, 1.0).unwrap();
        assert!((s1.mean_curvature(&q0) - 1.0).abs() < TOL, "⟨n+p, n₀⟩ = ⟨p,n₀⟩ = 1");
        assert!(incidence(&p, &s1).abs() < TOL, "contact point lies on the sphere");
        assert!((norm2(&s1.s) - 1.0).abs() < TOL);
    }

    #[test]
    fn contact_sphere_rejects_bad_normals() {
        let p = LightPoint::new(p0(3)).unwrap();
        assert!(matches!(
            sphere_from_contact(&p, &(2.0 * ev(5, 0)), 1.0),
            Err(Error::Usage(_))
        ));
        // e₄ is unit spacelike but not orthogonal to p₀.
        assert!(matches!(
            sphere_from_contact(&p, &ev(5, 3), 1.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn incidence_scales_linearly() {
        let q0 = canonical_space_form(0.0, 3);
        let p = embed_flat(&DVector::from_vec(vec![2.0, 0.0, 0.0]), &q0);
        let s = euclidean_sphere(&DVector::zeros(3), 1.0);
        let base = incidence(&p, &s);
        let scaled = incidence(&LightPoint::new_unchecked(3.0 * &p.v), &s);
        assert!((scaled - 3.0 * base).abs() < TOL);
    }

    #[test]
    fn center_sphere_matches_flat_closed_form() {
        let q0 = canonical_space_form(0.0, 3);
        let origin = LightPoint::new(p0(3)).unwrap();
        let got = sphere_from_center(&origin, 1.0, &q0).unwrap();
        let expected = euclidean_sphere(&DVector::zeros(3), 1.0);
        assert!(
            (&got.s - &expected.s).norm() < 1e-9,
            "unit sphere about the origin: defect {:.3e}",
            (&got.s - &expected.s).norm()
        );

        let m = DVector::from_vec(vec![0.5, -0.3, 1.1]);
        let r = 0.8;
        let c = embed_flat(&m, &q0);
        let got = sphere_from_center(&c, r, &q0).unwrap();
        let expected = euclidean_sphere(&m, r);
        assert!(
            (&got.s - &expected.s).norm() < 1e-9,
            "generic Euclidean sphere: defect {:.3e}",
            (&got.s - &expected.s).norm()
        );
        assert!(
            (got.mean_curvature(&q0) - 1.0 / r).abs() < 1e-9,
            "flat mean curvature must be +1/radius"
        );
    }

    #[test]
    fn center_sphere_annihilates_the_distance_sphere() {
        // incidence(embed_flat(u), s) = 0 for all unit u, not only the
        // sampled directions.
        let q0 = canonical_space_form(0.0, 3);
        let origin = LightPoint::new(p0(3)).unwrap();
        let s = sphere_from_center(&origin, 1.0, &q0).unwrap();
        for u in [
            DVector::<f64>::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.6, 0.8, 0.0]),
            DVector::from_vec(vec![-0.48, 0.6, 0.64]),
        ] {
            assert!((u.norm() - 1.0).abs() < 1e-12, "test directions must be unit");
            let p = embed_flat(&u, &q0);
            assert!(
                incidence(&p, &s).abs() < 1e-10,
                "point at distance 1 must lie on the sphere"
            );
        }
    }

    #[test]
    fn center_sphere_curved_mean_curvature() {
        // Geodesic spheres: h = √k·cot(√k·ρ) for k > 0 and
        // h = √−k·coth(√−k·ρ) for k < 0, both with outward orientation.
        let origin = LightPoint::new(p0(3)).unwrap();
        let rho = 0.7;

        let q1 = canonical_space_form(1.0, 3);
        let s = sphere_from_center(&origin, rho, &q1).unwrap();
        assert!(
            (s.mean_curvature(&q1) - 1.0 / rho.tan()).abs() < 1e-9,
            "spherical gauge: h = cot ρ, got {}",
            s.mean_curvature(&q1)
        );

        let qm = canonical_space_form(-1.0, 3);
        let s = sphere_from_center(&origin, rho, &qm).unwrap();
        assert!(
            (s.mean_curvature(&qm) - 1.0 / rho.tanh()).abs() < 1e-9,
            "hyperbolic gauge: h = coth ρ, got {}",
            s.mean_curvature(&qm)
        );

        // Past the equator the outward sphere has negative mean curvature.
        let s = sphere_from_center(&origin, 2.0, &q1).unwrap();
        assert!(
            (s.mean_curvature(&q1) - 1.0 / 2.0_f64.tan()).abs() < 1e-9,
            "h = cot 2 < 0 past the equator"
        );
    }

    #[test]
    fn center_sphere_incidence_residual_curved() {
        let origin = LightPoint::new(p0(3)).unwrap();
        for k in [1.0, -1.0, 0.35] {
            let q = canonical_space_form(k, 3);
            let rho = 0.9;
            let s = sphere_from_center(&origin, rho, &q).unwrap();
            let u = DVector::from_vec(vec![0.6, 0.8, 0.0, 0.0, 0.0]);
            let e = geodesic_point(&q, &origin, &u, rho).unwrap();
            assert!(
                incidence(&e, &s).abs() < 1e-10,
                "k = {k}: unsampled endpoint off the sphere by {:.3e}",
                incidence(&e, &s)
            );
        }
    }

    #[test]
    fn center_sphere_domain_errors() {
        let origin = LightPoint::new(p0(3)).unwrap();
        let q4 = canonical_space_form(4.0, 3);
        assert!(matches!(
            sphere_from_center(&origin, std::f64::consts::PI / 2.0, &q4),
            Err(Error::Domain(_))
        ));
        let q0 = canonical_space_form(0.0, 3);
        assert!(matches!(
            sphere_from_center(&origin, 0.0, &q0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            sphere_from_center(&origin, -1.0, &q0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn angle_basic_values() {
        let s = euclidean_sphere(&DVector::zeros(3), 1.0);
        assert!((angle(&s, &s) - 1.0).abs() < TOL);
        assert!((angle(&s, &s.reversed()) + 1.0).abs() < TOL);

        // Unit spheres with centers √2 apart intersect orthogonally.
        let m2 = DVector::from_vec(vec![2.0_f64.sqrt(), 0.0, 0.0]);
        let s2 = euclidean_sphere(&m2, 1.0);
        assert!(
            angle(&s, &s2).abs() < TOL,
            "⟨s₁,s₂⟩ = {} for orthogonal spheres",
            angle(&s, &s2)
        );
    }

    #[test]
    fn angle_is_isometry_invariant() {
        use crate::spaceform::is_proper_isometry;
        let s1 = euclidean_sphere(&DVector::from_vec(vec![0.2, 0.0, -0.1]), 1.3);
        let s2 = euclidean_sphere(&DVector::from_vec(vec![1.0, 0.5, 0.0]), 0.7);
        let mut rot = DMatrix::<f64>::identity(5, 5);
        let (c, sn) = (1.1_f64.cos(), 1.1_f64.sin());
        rot[(0, 0)] = c;
        rot[(0, 2)] = -sn;
        rot[(2, 0)] = sn;
        rot[(2, 2)] = c;
        let q0 = canonical_space_form(0.0, 3);
        assert!(is_proper_isometry(&rot, &q0, 1e-12));
        let r1 = SphereVec::new(&rot * &s1.s).unwrap();
        let r2 = SphereVec::new(&rot * &s2.s).unwrap();
        assert!((angle(&r1, &r2) - angle(&s1, &s2)).abs() < TOL);
    }

    #[test]
    fn pencil_membership() {
        let p = LightPoint::new(p0(3)).unwrap();
        let s = sphere_from_contact(&p, &ev(5, 0), 0.5).unwrap();

        assert!(pencil_contains(&s, &p, &s, 1e-10), "s is in its own pencil");

        let shifted = SphereVec::new(&s.s + 3.0 * &p.v).unwrap();
        assert!(
            pencil_contains(&s, &p, &shifted, 1e-10),
            "s + 3p is the same contact element with shifted curvature"
        );

        // A sphere through p with a rotated tangent plane is not tangent to s.
        let rotated_normal = (ev(5, 0) + ev(5, 1)) / 2.0_f64.sqrt();
        let other = sphere_from_contact(&p, &rotated_normal, 0.5).unwrap();
        assert!(!pencil_contains(&s, &p, &other, 1e-10));

        // A sphere missing p entirely fails the incidence gate.
        let q0 = canonical_space_form(0.0, 3);
        let far = sphere_from_center(
            &embed_flat(&DVector::from_vec(vec![5.0, 0.0, 0.0]), &q0),
            1.0,
            &q0,
        )
        .unwrap();
        assert!(!pencil_contains(&s, &p, &far, 1e-10));
    }

    #[test]
    fn msphere_span_orthogonal_pair() {
        let s1 = SphereVec::new(ev(5, 0)).unwrap();
        let s2 = SphereVec::new(ev(5, 1)).unwrap();
        let plane = msphere_span(&[s1, s2]).unwrap();
        assert_eq!(plane.m, 1, "two hyperspheres in n = 3 meet in a circle");
        assert_eq!(plane.basis.len(), 2);
        let g01 = inner(&plane.basis[0], &plane.basis[1]);
        assert!(g01.abs() < TOL, "basis must be orthonormal");
    }

    #[test]
    fn msphere_span_is_basis_independent() {
        let s1 = SphereVec::new(ev(5, 0)).unwrap();
        let s2 = SphereVec::new(ev(5, 1)).unwrap();
        let a = msphere_span(&[s1.clone(), s2.clone()]).unwrap();
        // The same plane spanned by a rotated pair.
        let (c, sn) = (0.9_f64.cos(), 0.9_f64.sin());
        let r1 = SphereVec::new(c * &s1.s + sn * &s2.s).unwrap();
        let r2 = SphereVec::new(-sn * &s1.s + c * &s2.s).unwrap();
        let b = msphere_span(&[r1, r2]).unwrap();
        let defect = (a.projector() - b.projector())
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        assert!(defect < 1e-10, "projectors differ by {defect:.3e}");
    }

    #[test]
    fn msphere_span_rejects_tangent_spheres() {
        let p = LightPoint::new(p0(3)).unwrap();
        let s1 = sphere_from_contact(&p, &ev(5, 0), 0.0).unwrap();
        let s2 = sphere_from_contact(&p, &ev(5, 0), 1.0).unwrap();
        assert!((angle(&s1, &s2) - 1.0).abs() < TOL, "tangent spheres have ⟨s₁,s₂⟩ = 1");
        assert!(matches!(
            msphere_span(&[s1, s2]),
            Err(Error::DegenerateInput(_))
        ));
    }

    fn canonical_circle_frame() -> CircleFrame {
        CircleFrame::new(
            SphereVec::new(ev(5, 0)).unwrap(),
            LightPoint::new(p0(3)).unwrap(),
            LightPoint::new(n0(3)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn circle_frame_validates() {
        assert!(CircleFrame::new(
            SphereVec::new(ev(5, 0)).unwrap(),
            LightPoint::new(p0(3)).unwrap(),
            LightPoint::new(2.0 * n0(3)).unwrap(),
        )
        .is_err(), "⟨p,p̂⟩ = 2 must be rejected");
        // s with a component along the lightlike pair fails orthogonality.
        assert!(CircleFrame::new(
            SphereVec::new(ev(5, 0) + p0(3)).unwrap(),
            LightPoint::new(p0(3)).unwrap(),
            LightPoint::new(n0(3)).unwrap(),
        )
        .is_err());
    }

    #[test]
    fn circle_point_base_and_unit() {
        let cf = canonical_circle_frame();
        let base = circle_point(&cf, 0.0, 1.0).unwrap();
        assert_eq!(base.v, cf.p.v, "g = 0, g′ = 1 is the base point");

        let unit = circle_point(&cf, 1.0, 1.0).unwrap();
        let expected = &cf.s.s + &cf.p.v - 0.5 * &cf.phat.v;
        assert!((&unit.v - &expected).norm() < TOL, "g = 1 unit point formula");
    }

    #[test]
    fn circle_point_is_lightlike_and_on_the_circle() {
        let cf = canonical_circle_frame();
        for (g, gp) in [(0.3, 1.0), (-2.0, 0.5), (7.0, -1.0), (1.0, 3.0)] {
            let pt = circle_point(&cf, g, gp).unwrap();
            assert!(
                norm2(&pt.v).abs() < TOL,
                "⟨v,v⟩ = {:.3e} at g = {g}",
                norm2(&pt.v)
            );
            // The circle lies on every sphere orthogonal to its frame.
            for i in [1, 2] {
                assert!(
                    inner(&pt.v, &ev(5, i)).abs() < TOL,
                    "left the circle at g = {g}"
                );
            }
        }
        assert!(matches!(
            circle_point(&cf, 1.0, 0.0),
            Err(Error::SingularParametrization)
        ));
    }

    #[test]
    fn cross_ratio_recovers_circle_parameter() {
        // R(p, p_g, p̂, p_{g=1}) = g: the defining property of the
        // parametrization. The infinity member of the circle is p̂ itself
        // (the g → ∞ limit up to scale, and the result is scale-free).
        let cf = canonical_circle_frame();
        let a = circle_point(&cf, 0.0, 1.0).unwrap();
        let c = cf.phat.clone();
        let d = circle_point(&cf, 1.0, 1.0).unwrap();
        for g0 in [0.25, 0.5, 2.0, 9.0] {
            let b = circle_point(&cf, g0, 1.0).unwrap();
            let r = cross_ratio(&a, &b, &c, &d).unwrap();
            assert!(
                (r - g0).abs() < 1e-12 * (1.0 + g0),
                "recovered {r} instead of {g0}"
            );
        }
        let b = circle_point(&cf, 1.0, 1.0).unwrap();
        let r = cross_ratio(&a, &b, &c, &d).unwrap();
        assert!((r - 1.0).abs() < TOL, "unit point must give cross ratio 1");
    }

    #[test]
    fn cross_ratio_matches_rational_oracle() {
        // For four circle points the value equals the absolute classical
        // cross ratio of the parameters: |(g₁−g₂)(g₃−g₄)/((g₂−g₃)(g₄−g₁))|.
        let cf = canonical_circle_frame();
        let cases = [
            [0.2, 1.7, -0.9, 3.0],
            [-1.0, 2.0, 5.0, -3.5],
            [0.0, 0.4, 1.1, 2.2],
        ];
        for gs in cases {
            let pts: Vec<LightPoint> = gs
                .iter()
                .map(|&g| circle_point(&cf, g, 1.0).unwrap())
                .collect();
            let got = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let oracle = ((gs[0] - gs[1]) * (gs[2] - gs[3]) / ((gs[1] - gs[2]) * (gs[3] - gs[0])))
                .abs();
            assert!(
                (got - oracle).abs() < 1e-12 * (1.0 + oracle),
                "params {gs:?}: got {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn cross_ratio_is_scale_invariant() {
        let cf = canonical_circle_frame();
        let pts: Vec<LightPoint> = [0.2, 1.7, -0.9, 3.0]
            .iter()
            .map(|&g| circle_point(&cf, g, 1.0).unwrap())
            .collect();
        let base = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let scales = [3.0, 0.25, 11.0, 0.6];
        let scaled: Vec<LightPoint> = pts
            .iter()
            .zip(scales)
            .map(|(p, lam)| LightPoint::new_unchecked(lam * &p.v))
            .collect();
        let got = cross_ratio(&scaled[0], &scaled[1], &scaled[2], &scaled[3]).unwrap();
        assert!((got - base).abs() < TOL);
    }

    #[test]
    fn cross_ratio_degenerate_and_complex_errors() {
        let cf = canonical_circle_frame();
        let a = circle_point(&cf, 0.0, 1.0).unwrap();
        let b = circle_point(&cf, 1.0, 1.0).unwrap();
        let d = circle_point(&cf, 2.0, 1.0).unwrap();
        // c = b makes ⟨b,c⟩ = 0 exactly.
        assert!(matches!(
            cross_ratio(&a, &b, &b, &d),
            Err(Error::DegenerateConfiguration(_))
        ));

        // A negative radicand cannot arise from light rays (same-sheet
        // products are all negative) but must be reported, not NaN'd,
        // for off-cone input vectors.
        let sp = |v: MinkVec| LightPoint::new_unchecked(v);
        let r = cross_ratio(
            &sp(ev(5, 0)),
            &sp(ev(5, 0) + ev(5, 1)),
            &sp(ev(5, 1)),
            &sp(ev(5, 0) - ev(5, 1)),
        );
        match r {
            Err(Error::ComplexConfiguration { radicand }) => {
                assert!((radicand + 1.0).abs() < TOL, "radicand should be −1")
            }
            other => panic!("expected complex-configuration error, got {other:?}"),
        }
    }
}
