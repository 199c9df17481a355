//! Shared analytic fixtures for unit tests: classical surfaces and sphere
//! congruences with closed-form envelopes, plus exponential frame fields
//! with connection forms known exactly.
//!
//! Everything here is test-only plumbing; tolerances and convergence
//! assertions live with the tests that use them.

use nalgebra::{DMatrix, DVector};

use crate::grid::{line_stencil, Field2, ParamGrid2};
use crate::lorentz::{norm2, pseudo_orthonormalize, PseudoFrame};
use crate::spaceform::{canonical_space_form, embed_flat, n0, p0, LightPoint};
use crate::sphere::SphereVec;
use crate::strip::StripGrid;

/// Hyperplane {y·m = dist} of Euclidean 3-space as a sphere vector.
pub(crate) fn plane_sphere(m: &DVector<f64>, dist: f64) -> SphereVec {
    let mut v = DVector::zeros(5);
    for i in 0..3 {
        v[i] = m[i];
    }
    SphereVec::new(v - dist * n0(3)).unwrap()
}

/// Euclidean sphere with center c and radius r as a sphere vector.
pub(crate) fn round_sphere(c: &DVector<f64>, r: f64) -> SphereVec {
    let mut v = DVector::zeros(5);
    for i in 0..3 {
        v[i] = c[i];
    }
    let v = (v + p0(3) - 0.5 * (c.norm_squared() - r * r) * n0(3)) / r;
    SphereVec::new(v).unwrap()
}

/// Ellipsoid point, outward unit normal and support value at (t1,t2).
pub(crate) fn ellipsoid_xmd(t1: f64, t2: f64) -> (DVector<f64>, DVector<f64>, f64) {
    let (a, b, c) = (1.0, 1.35, 0.75);
    let x = DVector::from_vec(vec![
        a * t1.cos() * t2.cos(),
        b * t1.sin() * t2.cos(),
        c * t2.sin(),
    ]);
    let nr = DVector::from_vec(vec![x[0] / (a * a), x[1] / (b * b), x[2] / (c * c)]);
    let m = &nr / nr.norm();
    let d = x.dot(&m);
    (x, m, d)
}

/// Tangent-plane strip of the ellipsoid over the given patch.
pub(crate) fn ellipsoid_strip(
    n1: usize,
    n2: usize,
    dom1: (f64, f64),
    dom2: (f64, f64),
) -> StripGrid {
    let grid = ParamGrid2::uniform(dom1.0, dom1.1, n1, dom2.0, dom2.1, n2);
    let q0 = canonical_space_form(0.0, 3);
    let s = Field2::from_fn(n1, n2, |i, j| {
        let (_, m, d) = ellipsoid_xmd(grid.t1s[i], grid.t2s[j]);
        plane_sphere(&m, d)
    });
    let f = Field2::from_fn(n1, n2, |i, j| {
        let (x, _, _) = ellipsoid_xmd(grid.t1s[i], grid.t2s[j]);
        embed_flat(&x, &q0)
    });
    StripGrid::new(s, f, grid).unwrap()
}

/// Unit spheres tangent to the plane z = 0, with the plane given in
/// curvilinear coordinates ψ (an affine parametrization would make
/// the contact function an exact FD quadratic and hide the stencil
/// order). `offset` shifts the sphere centers laterally, breaking
/// tangency by a known amount.
pub(crate) fn spheres_on_plane_strip(n: usize, offset: f64) -> StripGrid {
    let grid = ParamGrid2::uniform(0.0, 0.6, n, 0.0, 0.6, n);
    let q0 = canonical_space_form(0.0, 3);
    let psi = |u1: f64, u2: f64| {
        DVector::from_vec(vec![u1 + 0.01 * u2.sin(), u2 + 0.01 * u1.cos(), 0.0])
    };
    let s = Field2::from_fn(n, n, |i, j| {
        let mut c = psi(grid.t1s[i], grid.t2s[j]);
        c[0] += offset;
        c[2] = 1.0;
        round_sphere(&c, 1.0)
    });
    let f = Field2::from_fn(n, n, |i, j| embed_flat(&psi(grid.t1s[i], grid.t2s[j]), &q0));
    StripGrid::new(s, f, grid).unwrap()
}

/// Tangent planes of the unit cylinder x² + y² = 1, oriented inward
/// so the circular direction carries the larger shape eigenvalue.
pub(crate) fn cylinder_strip(n: usize) -> StripGrid {
    let grid = ParamGrid2::uniform(0.2, 1.2, n, -0.5, 0.5, n);
    let q0 = canonical_space_form(0.0, 3);
    let s = Field2::from_fn(n, n, |i, _| {
        let t1 = grid.t1s[i];
        plane_sphere(&DVector::from_vec(vec![t1.cos(), t1.sin(), 0.0]), 1.0).reversed()
    });
    let f = Field2::from_fn(n, n, |i, j| {
        let (t1, t2) = (grid.t1s[i], grid.t2s[j]);
        embed_flat(&DVector::from_vec(vec![t1.cos(), t1.sin(), t2]), &q0)
    });
    StripGrid::new(s, f, grid).unwrap()
}

/// Tangent planes of the unit sphere (totally umbilic strip).
pub(crate) fn unit_sphere_strip(n: usize) -> StripGrid {
    let grid = ParamGrid2::uniform(0.3, 0.9, n, -0.2, 0.4, n);
    let q0 = canonical_space_form(0.0, 3);
    let point = |t1: f64, t2: f64| {
        DVector::from_vec(vec![t1.cos() * t2.cos(), t1.sin() * t2.cos(), t2.sin()])
    };
    let s = Field2::from_fn(n, n, |i, j| {
        plane_sphere(&point(grid.t1s[i], grid.t2s[j]), 1.0)
    });
    let f = Field2::from_fn(n, n, |i, j| embed_flat(&point(grid.t1s[i], grid.t2s[j]), &q0));
    StripGrid::new(s, f, grid).unwrap()
}

/// Ellipsoid tangent-plane strip traversed at a tenth of the angular
/// rate, so third derivatives are small enough to expose the O(h²)
/// pairing defect well below coarse stencil noise.
pub(crate) fn slow_ellipsoid_strip(n: usize) -> StripGrid {
    let grid = ParamGrid2::uniform(0.0, 0.064, n, 0.0, 0.064, n);
    let q0 = canonical_space_form(0.0, 3);
    let s = Field2::from_fn(n, n, |i, j| {
        let (_, m, d) = ellipsoid_xmd(0.4 + 0.1 * grid.t1s[i], -0.1 + 0.1 * grid.t2s[j]);
        plane_sphere(&m, d)
    });
    let f = Field2::from_fn(n, n, |i, j| {
        let (x, _, _) = ellipsoid_xmd(0.4 + 0.1 * grid.t1s[i], -0.1 + 0.1 * grid.t2s[j]);
        embed_flat(&x, &q0)
    });
    StripGrid::new(s, f, grid).unwrap()
}

/// Generic sphere congruence with its envelope computed per node:
/// the lightlike direction orthogonal to the FD tangent plane of s.
pub(crate) fn generic_congruence_strip(n: usize) -> StripGrid {
    let grid = ParamGrid2::uniform(0.3, 0.9, n, 0.3, 0.9, n);
    let raw = Field2::from_fn(n, n, |i, j| {
        let (t1, t2) = (grid.t1s[i], grid.t2s[j]);
        let v = DVector::from_vec(vec![
            t1.cos(),
            t1.sin() * t2.cos(),
            t1.sin() * t2.sin(),
            0.2 * (t1 + 2.0 * t2).sin(),
            0.1 * (2.0 * t1 - t2).cos(),
        ]);
        let q = norm2(&v);
        v / q.sqrt()
    });
    let st1 = line_stencil(n, grid.h1(), 3, 1);
    let st2 = line_stencil(n, grid.h2(), 3, 1);
    let f = Field2::from_fn(n, n, |i, j| {
        let t1 = raw.deriv(0, &st1, i, j);
        let t2 = raw.deriv(1, &st2, i, j);
        let fr = pseudo_orthonormalize(&[raw.at(i, j).clone(), t1, t2, p0(3), n0(3)]).unwrap();
        LightPoint::new_unchecked(fr.col(3))
    });
    let s = Field2::from_fn(n, n, |i, j| SphereVec::new_unchecked(raw.at(i, j).clone()));
    StripGrid::new(s, f, grid).unwrap()
}

/// Plain scaled-and-squared Taylor series; inputs here have small norm.
pub(crate) fn mat_exp(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let b = a / 2.0_f64.powi(s);
    let d = a.nrows();
    let mut term = DMatrix::<f64>::identity(d, d);
    let mut sum = DMatrix::<f64>::identity(d, d);
    for k in 1..=25 {
        term = &term * &b / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// A fixed element of the Lie algebra of the frame pairing G:
/// X = G·A with A antisymmetric, so XᵀG + GX = 0.
pub(crate) fn lie_algebra_element() -> DMatrix<f64> {
    let g = PseudoFrame::target_gram(5);
    let mut a = DMatrix::zeros(5, 5);
    let vals = [0.31, -0.22, 0.14, 0.27, -0.19, 0.08, 0.23, -0.11, 0.17, 0.05];
    let mut it = vals.iter();
    for r in 0..5 {
        for c in (r + 1)..5 {
            let v = *it.next().unwrap();
            a[(r, c)] = v;
            a[(c, r)] = -v;
        }
    }
    g * a
}

/// The constant frame (e₁, e₂, e₃, p₀, n₀): pseudo-orthonormal with the
/// standard pairing, s-columns the spatial axes.
pub(crate) fn base_frame5() -> DMatrix<f64> {
    DMatrix::from_columns(&[
        DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0, 0.0]),
        DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0, 0.0]),
        DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0, 0.0]),
        p0(3),
        n0(3),
    ])
}
