//! Minkowski linear algebra on R^{n+2} with signature (+,…,+,−).
//!
//! Conventions, fixed once for the whole crate: coordinates are
//! (x₁,…,x_{n+1}, x_{n+2}) with the timelike slot *last*, and the Lorentz
//! product is ⟨u,v⟩ = Σ_{i<n+2} uᵢvᵢ − u_{n+2}v_{n+2}.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol;

/// A vector of R^{n+2}; the ambient dimension is `len() = n + 2`.
pub type MinkVec = DVector<f64>;

/// Causal type of a vector with respect to the light cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    Spacelike,
    Lightlike,
    Timelike,
}

/// Lorentz scalar product: Σ_{i<d−1} uᵢvᵢ − u_{d−1}v_{d−1}.
///
/// Panics on dimension mismatch; use [`try_inner`] for a checked variant.
pub fn inner(u: &MinkVec, v: &MinkVec) -> f64 {
    assert_eq!(
        u.len(),
        v.len(),
        "Lorentz product of vectors with different dimensions"
    );
    let d = u.len();
    let mut acc = 0.0;
    for i in 0..d - 1 {
        acc += u[i] * v[i];
    }
    acc - u[d - 1] * v[d - 1]
}

/// Checked Lorentz scalar product.
pub fn try_inner(u: &MinkVec, v: &MinkVec) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(inner(u, v))
}

/// Lorentz square ⟨v,v⟩.
pub fn norm2(v: &MinkVec) -> f64 {
    inner(v, v)
}

/// The diagonal signature matrix J = diag(1,…,1,−1) of dimension `dim`.
pub fn metric(dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(dim, dim);
    j[(dim - 1, dim - 1)] = -1.0;
    j
}

/// Classify a vector by the sign of ⟨v,v⟩.
///
/// The lightlike band is *relative*: |⟨v,v⟩| ≤ tol·|v|²_eucl, so the class
/// is invariant under rescaling — vectors stand for rays.
pub fn classify(v: &MinkVec, tol: f64) -> Result<CausalClass> {
    let eucl2 = v.norm_squared();
    if eucl2 == 0.0 {
        return Err(Error::DegenerateInput(
            "cannot classify the zero vector".into(),
        ));
    }
    let q = norm2(v);
    if q.abs() <= tol * eucl2 {
        Ok(CausalClass::Lightlike)
    } else if q > 0.0 {
        Ok(CausalClass::Spacelike)
    } else {
        Ok(CausalClass::Timelike)
    }
}

/// Whether v is lightlike under the default relative tolerance.
pub fn is_lightlike(v: &MinkVec) -> bool {
    matches!(
        classify(v, tol::DEFAULT_TOL),
        Ok(CausalClass::Lightlike)
    )
}

/// A pseudo-orthonormal frame (s₁,…,s_{n−1}, s, f, f̂) stored column-wise.
///
/// The first n columns are unit spacelike and mutually orthogonal; the last
/// two are lightlike with ⟨f,f̂⟩ = 1 and orthogonal to all spacelike
/// columns. Equivalently FᵀJF = G with G = diag(1,…,1) ⊕ [[0,1],[1,0]] in
/// the (f,f̂) corner.
#[derive(Debug, Clone)]
pub struct PseudoFrame {
    pub columns: DMatrix<f64>,
}

impl PseudoFrame {
    /// Ambient dimension n+2.
    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    /// Column `i` as an owned vector.
    pub fn col(&self, i: usize) -> MinkVec {
        self.columns.column(i).into_owned()
    }

    /// The target gram matrix G for this dimension.
    pub fn target_gram(dim: usize) -> DMatrix<f64> {
        let mut g = DMatrix::identity(dim, dim);
        g[(dim - 2, dim - 2)] = 0.0;
        g[(dim - 1, dim - 1)] = 0.0;
        g[(dim - 2, dim - 1)] = 1.0;
        g[(dim - 1, dim - 2)] = 1.0;
        g
    }

    /// Gram matrix FᵀJF of the columns.
    pub fn gram(&self) -> DMatrix<f64> {
        let j = metric(self.dim());
        self.columns.transpose() * j * &self.columns
    }

    /// Max-norm deviation of the gram matrix from its target.
    pub fn gram_residual(&self) -> f64 {
        let g = self.gram() - Self::target_gram(self.dim());
        g.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Frame inverse, exact for pseudo-orthonormal columns: F⁻¹ = G·FᵀJ
    /// (G is involutive, G⁻¹ = G).
    pub fn inverse(&self) -> DMatrix<f64> {
        let d = self.dim();
        Self::target_gram(d) * self.columns.transpose() * metric(d)
    }
}

/// Project out the Lorentz-orthogonal components of `basis` from `v`.
/// Every basis vector must be unit spacelike.
fn project_out(v: &mut MinkVec, basis: &[MinkVec]) {
    for b in basis {
        let c = inner(v, b);
        v.axpy(-c, b, 1.0);
    }
}

/// Build a pseudo-orthonormal frame from a spanning set of n+2 vectors,
/// sphere part first.
///
/// The first n−1 inputs are Gram–Schmidt-orthonormalized into the
/// spacelike columns s₁,…,s_{n−1} (spanning the same subspace), the next
/// input becomes the sphere column s, and the remaining two are reduced to
/// a lightlike pair (f, f̂) with ⟨f,f̂⟩ = 1. Inputs whose tail pair is
/// already a normalized null pair are reproduced exactly.
pub fn pseudo_orthonormalize(spanning: &[MinkVec]) -> Result<PseudoFrame> {
    let dim = match spanning.first() {
        Some(v) => v.len(),
        None => return Err(Error::DegenerateInput("empty spanning set".into())),
    };
    if spanning.len() != dim {
        return Err(Error::DegenerateInput(format!(
            "need exactly {dim} spanning vectors for ambient dimension {dim}, got {}",
            spanning.len()
        )));
    }
    if spanning.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: spanning.iter().map(|v| v.len()).find(|&l| l != dim).unwrap(),
        });
    }

    let mut cols: Vec<MinkVec> = Vec::with_capacity(dim);

    // Spacelike part: first n−1 inputs, then the sphere vector s.
    for (idx, v) in spanning.iter().take(dim - 2).enumerate() {
        let mut w = v.clone();
        project_out(&mut w, &cols);
        let q = norm2(&w);
        // Relative rank test: the projected residual must keep a spacelike
        // square bounded away from zero compared to the input's scale.
        if q <= v.norm_squared() / tol::CONDITION_LIMIT {
            return Err(Error::DegenerateInput(format!(
                "spanning vector {idx} is (numerically) dependent on its predecessors \
                 or its projection is not spacelike"
            )));
        }
        w /= q.sqrt();
        cols.push(w);
    }

    // Lightlike tail: reduce the last two inputs to a null pair.
    let mut a = spanning[dim - 2].clone();
    let mut b = spanning[dim - 1].clone();
    project_out(&mut a, &cols);
    project_out(&mut b, &cols);

    let aa = norm2(&a);
    let ab = inner(&a, &b);
    let bb = norm2(&b);
    // The plane span{a,b} must be Lorentzian: its gram determinant
    // aa·bb − ab² must be negative.
    let disc = ab * ab - aa * bb;
    let scale = a.norm_squared().max(b.norm_squared());
    if disc <= scale * scale / tol::CONDITION_LIMIT {
        return Err(Error::DegenerateInput(
            "the tail pair does not span a Lorentzian plane (wrong signature or dependent)"
                .into(),
        ));
    }

    let rel_null = |q: f64, v: &MinkVec| q.abs() <= tol::DEFAULT_TOL * v.norm_squared();
    let (f, fh_raw) = if rel_null(aa, &a) {
        // a already lightlike: keep it exactly; drive b to the other null
        // direction. ab ≠ 0 since the plane is Lorentzian.
        let fh = &b - &a * (bb / (2.0 * ab));
        (a, fh)
    } else {
        // Null directions of the pencil a + λb.
        let sq = disc.sqrt();
        let (lp, lm) = if bb.abs() > scale / tol::CONDITION_LIMIT {
            ((-ab + sq) / bb, (-ab - sq) / bb)
        } else {
            // b itself is (near-)null: a + λb null at λ = −aa/(2ab), the
            // second direction is b.
            (-aa / (2.0 * ab), f64::INFINITY)
        };
        if lp.is_finite() && lm.is_finite() {
            (&a + &b * lp, &a + &b * lm)
        } else {
            (&a + &b * lp, b)
        }
    };

    let pairing = inner(&f, &fh_raw);
    if pairing.abs() <= scale / tol::CONDITION_LIMIT {
        return Err(Error::DegenerateInput(
            "lightlike tail directions are numerically parallel".into(),
        ));
    }
    let fh = fh_raw / pairing;

    cols.push(f);
    cols.push(fh);

    let columns = DMatrix::from_columns(&cols);
    let frame = PseudoFrame { columns };
    if frame.gram_residual() > 1e-8 {
        return Err(Error::DegenerateInput(format!(
            "gram residual {:.3e} after orthonormalization; input too ill-conditioned",
            frame.gram_residual()
        )));
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn ev(dim: usize, i: usize) -> MinkVec {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        v
    }

    #[test]
    fn inner_spacelike_basis_vector() {
        let e1 = ev(5, 0);
        assert_eq!(inner(&e1, &e1), 1.0);
    }

    #[test]
    fn inner_timelike_slot_is_negative() {
        let e5 = ev(5, 4);
        assert_eq!(inner(&e5, &e5), -1.0);
    }

    #[test]
    fn inner_lightlike_combination() {
        let p = ev(5, 3) + ev(5, 4);
        assert_eq!(inner(&p, &p), 0.0);
    }

    #[test]
    fn try_inner_rejects_dimension_mismatch() {
        let u = ev(5, 0);
        let v = ev(4, 0);
        assert!(matches!(
            try_inner(&u, &v),
            Err(Error::DimensionMismatch { left: 5, right: 4 })
        ));
    }

    #[test]
    fn inner_is_symmetric_and_bilinear() {
        // Deterministic pseudo-random values are enough to exercise all slots.
        let u = DVector::from_fn(6, |i, _| ((i * 7 + 3) % 11) as f64 - 5.0);
        let v = DVector::from_fn(6, |i, _| ((i * 5 + 1) % 13) as f64 - 6.0);
        let w = DVector::from_fn(6, |i, _| ((i * 3 + 2) % 7) as f64 - 3.0);
        assert!((inner(&u, &v) - inner(&v, &u)).abs() < TOL);
        let lhs = inner(&(2.5 * &u + 1.5 * &w), &v);
        let rhs = 2.5 * inner(&u, &v) + 1.5 * inner(&w, &v);
        assert!((lhs - rhs).abs() < 1e-10, "bilinearity: {lhs} vs {rhs}");
    }

    #[test]
    fn classify_basic_vectors() {
        assert_eq!(classify(&ev(5, 0), 1e-10).unwrap(), CausalClass::Spacelike);
        assert_eq!(classify(&ev(5, 4), 1e-10).unwrap(), CausalClass::Timelike);
        let p = ev(5, 3) + ev(5, 4);
        assert_eq!(classify(&p, 1e-10).unwrap(), CausalClass::Lightlike);
    }

    #[test]
    fn classify_rejects_zero_vector() {
        let z: MinkVec = DVector::zeros(5);
        assert!(matches!(classify(&z, 1e-10), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn classify_is_scale_invariant() {
        let v = DVector::from_vec(vec![0.3, -0.2, 0.9, 1.0, 1.0]);
        let c = classify(&v, 1e-10).unwrap();
        for lam in [1e-7, 0.5, 3.0, 1e9, -2.0] {
            assert_eq!(classify(&(lam * &v), 1e-10).unwrap(), c, "lambda = {lam}");
        }
    }

    #[test]
    fn pseudo_orthonormalize_reproduces_canonical_null_pair() {
        // (e1, e2, e3, e4+e5, (e4−e5)/2): the tail is already a normalized
        // null pair and must be kept exactly.
        let dim = 5;
        let p0 = ev(dim, 3) + ev(dim, 4);
        let n0 = 0.5 * (ev(dim, 3) - ev(dim, 4));
        let frame =
            pseudo_orthonormalize(&[ev(dim, 0), ev(dim, 1), ev(dim, 2), p0.clone(), n0.clone()])
                .unwrap();
        assert_eq!(frame.gram_residual(), 0.0, "gram must hold exactly here");
        assert_eq!(frame.col(3), p0);
        assert_eq!(frame.col(4), n0);
    }

    #[test]
    fn pseudo_orthonormalize_random_spanning_set() {
        // A skewed but well-conditioned spanning set with generic tail.
        let dim = 5;
        let cols: Vec<MinkVec> = vec![
            DVector::from_vec(vec![1.0, 0.2, -0.1, 0.05, 0.01]),
            DVector::from_vec(vec![0.3, 1.1, 0.2, -0.02, 0.1]),
            DVector::from_vec(vec![-0.2, 0.4, 0.9, 0.1, -0.05]),
            DVector::from_vec(vec![0.1, -0.3, 0.2, 1.0, 0.8]),
            DVector::from_vec(vec![0.05, 0.1, -0.4, 0.2, 1.2]),
        ];
        let frame = pseudo_orthonormalize(&cols).unwrap();
        assert!(
            frame.gram_residual() < tol::GRAM_TOL,
            "gram residual {:.3e} too large",
            frame.gram_residual()
        );
        assert_eq!(frame.dim(), dim);
        // Spacelike part spans the same subspace as the first n−1 inputs:
        // each s_i must be a combination of the inputs, checked via the
        // orthogonal complement of their span.
        let s1 = frame.col(0);
        let span = DMatrix::from_columns(&[cols[0].clone(), cols[1].clone(), cols[2].clone()]);
        let svd = span.svd(true, false);
        let u = svd.u.unwrap();
        let mut residual = s1.clone();
        for c in 0..3 {
            let uc: MinkVec = u.column(c).into_owned();
            let coef = s1.dot(&uc); // Euclidean projection onto the span
            residual -= coef * uc;
        }
        assert!(residual.norm() < 1e-10, "s1 left the requested span");
    }

    #[test]
    fn frame_inverse_matches_lu_inverse() {
        let dim = 5;
        let cols: Vec<MinkVec> = vec![
            DVector::from_vec(vec![1.0, 0.2, -0.1, 0.05, 0.01]),
            DVector::from_vec(vec![0.3, 1.1, 0.2, -0.02, 0.1]),
            DVector::from_vec(vec![-0.2, 0.4, 0.9, 0.1, -0.05]),
            DVector::from_vec(vec![0.1, -0.3, 0.2, 1.0, 0.8]),
            DVector::from_vec(vec![0.05, 0.1, -0.4, 0.2, 1.2]),
        ];
        let frame = pseudo_orthonormalize(&cols).unwrap();
        let inv = frame.inverse();
        let id = &inv * &frame.columns;
        let err = (&id - DMatrix::<f64>::identity(dim, dim))
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        assert!(err < 1e-11, "pseudo-orthonormal inverse formula off by {err:.3e}");
    }

    #[test]
    fn pseudo_orthonormalize_rejects_rank_deficiency() {
        let dim = 5;
        let v = DVector::from_vec(vec![1.0, 0.2, -0.1, 0.05, 0.01]);
        let cols = vec![v.clone(), 2.0 * &v, ev(dim, 2), ev(dim, 3), ev(dim, 4)];
        assert!(matches!(
            pseudo_orthonormalize(&cols),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn pseudo_orthonormalize_rejects_timelike_in_spacelike_slot() {
        let dim = 5;
        let cols = vec![ev(dim, 0), ev(dim, 1), ev(dim, 4), ev(dim, 2), ev(dim, 3)];
        assert!(matches!(
            pseudo_orthonormalize(&cols),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn pseudo_orthonormalize_rejects_non_lorentzian_tail() {
        // Tail pair collapsing to a single spacelike direction after
        // projection: gram determinant of the plane is not negative.
        let dim = 5;
        let cols = vec![
            ev(dim, 0),
            ev(dim, 1),
            ev(dim, 2),
            ev(dim, 3),
            ev(dim, 3) + ev(dim, 0),
        ];
        assert!(matches!(
            pseudo_orthonormalize(&cols),
            Err(Error::DegenerateInput(_))
        ));
    }
}
