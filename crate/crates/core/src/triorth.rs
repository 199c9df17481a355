//! Triply orthogonal systems of surfaces sampled on 3D parameter grids.
//!
//! A light-cone immersion f(t₁,t₂,t₃) whose coordinate surfaces tᵢ = const
//! meet pairwise at right angles carries Lamé functions lᵢ = |∂f/∂tᵢ| and
//! rotation coefficients k_ij = −(1/(lᵢlⱼ)) ∂lⱼ/∂tᵢ. Two residual systems
//! sit on top of these. The classical one asks when the induced metric
//! Σ lᵢ² dtᵢ² has constant curvature k: three second-order curvature
//! equations plus mixed equations whose left-hand sides are exactly the
//! off-diagonal coefficients b_ij of the second system. The weaker system
//! asks only that the metric be conformally flat — nine third-order
//! equations in the lᵢ — and characterizes which Lamé functions arise from
//! light-cone-valued nets at all. The coefficients b_ij are determined
//! algebraically from the k_ij and their first derivatives; they are
//! symmetric for every valid net.
//!
//! Two pointwise companions complete the toolbox: the Dupin residual
//! (coordinate surfaces of a genuine triply orthogonal system intersect
//! along their curvature lines, so every off-diagonal second-fundamental
//! entry taken in coordinate directions vanishes) and the Guichard
//! residual |Σ (εᵢlᵢ)²| for a sign assignment εᵢ ∈ {1, i}, the defining
//! condition of the nets synthesized elsewhere in this crate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{line_stencil, Field3, ParamGrid3};
use crate::lorentz::{inner, MinkVec};
use crate::spaceform::{LightPoint, SpaceForm};
use crate::tol;

/// Coordinate tangent fields ∂f/∂tᵢ of a sampled net, one per axis.
type TangentFields = [Field3<MinkVec>; 3];

/// A light-cone-valued map sampled on a uniform 3D parameter grid,
/// optionally tagged with the space form whose gauge the samples satisfy.
#[derive(Debug, Clone)]
pub struct NetGrid {
    /// Per-node light-cone points f(t₁,t₂,t₃); lightlikeness is carried
    /// by the element type.
    pub f: Field3<LightPoint>,
    /// Parameter axes; uniform spacing per axis.
    pub grid: ParamGrid3,
    /// Space form Q_k the samples are normalized into, if any. Purely
    /// informational here: the residual maps below are gauge-agnostic.
    pub gauge: Option<SpaceForm>,
}

impl NetGrid {
    /// Wrap a per-node field after checking its dimensions match the grid.
    pub fn new(f: Field3<LightPoint>, grid: ParamGrid3, gauge: Option<SpaceForm>) -> Result<Self> {
        if f.n1 != grid.n(0) || f.n2 != grid.n(1) || f.n3 != grid.n(2) {
            return Err(Error::Usage(format!(
                "field dimensions {}×{}×{} do not match the grid {}×{}×{}",
                f.n1,
                f.n2,
                f.n3,
                grid.n(0),
                grid.n(1),
                grid.n(2)
            )));
        }
        Ok(Self { f, grid, gauge })
    }

    /// Sample a closed-form net over the grid nodes.
    pub fn from_fn(
        grid: ParamGrid3,
        gauge: Option<SpaceForm>,
        mut map: impl FnMut(f64, f64, f64) -> LightPoint,
    ) -> Self {
        let f = Field3::from_fn(grid.n(0), grid.n(1), grid.n(2), |i, j, k| {
            map(grid.t1s[i], grid.t2s[j], grid.t3s[k])
        });
        Self { f, grid, gauge }
    }
}

/// Lamé functions lᵢ, rotation coefficients k_ij and conformal-flatness
/// coefficients b_ij of a triply orthogonal net, sampled per node.
///
/// The diagonal b_ii are recovered from the three pairwise sums
/// b_ii + b_jj (the right-hand sides of the curvature equations with
/// k = 0 moved over); the off-diagonal b_ij equal the mixed-equation
/// left-hand sides eⱼk_im + k_jm(k_ij − k_im) with m the third index.
/// All derivative fields are produced by width-3 central stencils
/// (one-sided at the boundary), so boundary-adjacent nodes carry larger
/// truncation error — the residual maps below exclude them.
#[derive(Debug, Clone)]
pub struct LameData {
    /// Parameter axes shared with the originating net.
    pub grid: ParamGrid3,
    l: [Field3<f64>; 3],
    k: [[Field3<f64>; 3]; 3],
    b: [[Field3<f64>; 3]; 3],
}

impl LameData {
    /// Build rotation and conformal-flatness coefficients from explicitly
    /// given Lamé functions (no net required). Requires ≥ 5 nodes per
    /// axis, matching field dimensions, and lᵢ > 0 everywhere.
    pub fn from_lame_functions(grid: &ParamGrid3, l: [Field3<f64>; 3]) -> Result<Self> {
        for axis in 0..3 {
            if grid.n(axis) < 5 {
                return Err(Error::Usage(format!(
                    "axis {} has {} nodes; Lamé analysis needs at least five",
                    axis + 1,
                    grid.n(axis)
                )));
            }
        }
        let (n1, n2, n3) = (grid.n(0), grid.n(1), grid.n(2));
        for (axis, field) in l.iter().enumerate() {
            if field.n1 != n1 || field.n2 != n2 || field.n3 != n3 {
                return Err(Error::Usage(format!(
                    "Lamé field l{} has dimensions {}×{}×{}, grid is {}×{}×{}",
                    axis + 1,
                    field.n1,
                    field.n2,
                    field.n3,
                    n1,
                    n2,
                    n3
                )));
            }
            for (i, j, k) in field.indices() {
                let v = *field.at(i, j, k);
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::ImmersionFailure {
                        node: vec![i, j, k],
                        detail: format!("Lamé function l{} = {v:.3e} is not positive", axis + 1),
                    });
                }
            }
        }

        let st3: [Vec<(usize, Vec<f64>)>; 3] =
            std::array::from_fn(|a| line_stencil(grid.n(a), grid.h(a), 3, 1));

        // k_ij = −(1/(lᵢlⱼ)) ∂lⱼ/∂tᵢ; the unused diagonal stays zero.
        let kf: [[Field3<f64>; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                Field3::from_fn(n1, n2, n3, |a, b, c| {
                    if i == j {
                        0.0
                    } else {
                        -l[j].deriv(i, &st3[i], a, b, c) / (l[i].at(a, b, c) * l[j].at(a, b, c))
                    }
                })
            })
        });

        let e = |axis: usize, g: &Field3<f64>, a: usize, b: usize, c: usize| {
            g.deriv(axis, &st3[axis], a, b, c) / l[axis].at(a, b, c)
        };

        // Pairwise diagonal sums b_ii + b_jj, the curvature-equation
        // right-hand sides: eᵢk_ij + eⱼk_ji − k_ij² − k_ji² − k_mi·k_mj.
        let s_pair = |i: usize, j: usize| -> Field3<f64> {
            let m = 3 - i - j;
            Field3::from_fn(n1, n2, n3, |a, b, c| {
                e(i, &kf[i][j], a, b, c) + e(j, &kf[j][i], a, b, c)
                    - kf[i][j].at(a, b, c).powi(2)
                    - kf[j][i].at(a, b, c).powi(2)
                    - kf[m][i].at(a, b, c) * kf[m][j].at(a, b, c)
            })
        };
        let s12 = s_pair(0, 1);
        let s23 = s_pair(1, 2);
        let s31 = s_pair(2, 0);

        let bf: [[Field3<f64>; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                Field3::from_fn(n1, n2, n3, |a, b, c| {
                    if i == j {
                        // Solve the three pairwise sums for the diagonal.
                        let (a12, a23, a31) =
                            (*s12.at(a, b, c), *s23.at(a, b, c), *s31.at(a, b, c));
                        match i {
                            0 => (a12 - a23 + a31) / 2.0,
                            1 => (a12 + a23 - a31) / 2.0,
                            _ => (-a12 + a23 + a31) / 2.0,
                        }
                    } else {
                        let m = 3 - i - j;
                        e(j, &kf[i][m], a, b, c)
                            + kf[j][m].at(a, b, c) * (kf[i][j].at(a, b, c) - kf[i][m].at(a, b, c))
                    }
                })
            })
        });

        Ok(Self {
            grid: grid.clone(),
            l,
            k: kf,
            b: bf,
        })
    }

    /// Lamé function lᵢ as a per-node field (axis 0, 1 or 2).
    pub fn l(&self, i: usize) -> &Field3<f64> {
        &self.l[i]
    }

    /// Rotation coefficient k_ij for distinct axes i ≠ j.
    pub fn k(&self, i: usize, j: usize) -> &Field3<f64> {
        assert!(
            i < 3 && j < 3 && i != j,
            "rotation coefficients are indexed by distinct axes"
        );
        &self.k[i][j]
    }

    /// Conformal-flatness coefficient b_ij.
    pub fn b(&self, i: usize, j: usize) -> &Field3<f64> {
        assert!(i < 3 && j < 3, "b-coefficients are indexed by axes 0..3");
        &self.b[i][j]
    }

    /// max |b_ij − b_ji| over the margin-2 interior: zero for every valid
    /// net up to stencil error, so a direct O(h²) health check.
    pub fn max_b_asymmetry(&self) -> f64 {
        self.l[0]
            .interior_indices(2)
            .into_par_iter()
            .map(|(a, b, c)| {
                let mut w = 0.0_f64;
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    w = w.max((self.b[i][j].at(a, b, c) - self.b[j][i].at(a, b, c)).abs());
                }
                w
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// First derivatives ∂f/∂tᵢ and Lamé functions of a net, with the
/// immersion and orthogonality gates shared by the Lamé extraction and
/// the Dupin residual.
///
/// Position derivatives use width-7 windows (width-5 when an axis has
/// fewer than seven nodes): the Lamé functions feed nested stencil
/// chains up to third order downstream, and spending accuracy on the
/// first layer keeps those chains at O(h²) overall.
fn first_derivatives(net: &NetGrid) -> Result<(TangentFields, [Field3<f64>; 3])> {
    let g = &net.grid;
    for axis in 0..3 {
        if g.n(axis) < 5 {
            return Err(Error::Usage(format!(
                "axis {} has {} nodes; Lamé analysis needs at least five",
                axis + 1,
                g.n(axis)
            )));
        }
    }
    let (n1, n2, n3) = (g.n(0), g.n(1), g.n(2));
    let fvec = Field3::from_fn(n1, n2, n3, |i, j, k| net.f.at(i, j, k).v.clone());
    let width = if n1.min(n2).min(n3) >= 7 { 7 } else { 5 };
    let st: [Vec<(usize, Vec<f64>)>; 3] =
        std::array::from_fn(|a| line_stencil(g.n(a), g.h(a), width, 1));
    let df: [Field3<MinkVec>; 3] = std::array::from_fn(|a| {
        Field3::from_fn(n1, n2, n3, |i, j, k| fvec.deriv(a, &st[a], i, j, k))
    });

    for (axis, dfa) in df.iter().enumerate() {
        for (i, j, k) in dfa.indices() {
            let d = dfa.at(i, j, k);
            let q = inner(d, d);
            if q.is_nan() || q <= tol::IMMERSION_FLOOR * d.norm_squared() {
                return Err(Error::ImmersionFailure {
                    node: vec![i, j, k],
                    detail: format!(
                        "tangent along t{} has Lorentz norm² {q:.3e} at Euclidean scale {:.3e}",
                        axis + 1,
                        d.norm_squared()
                    ),
                });
            }
        }
    }
    let l: [Field3<f64>; 3] = std::array::from_fn(|a| {
        Field3::from_fn(n1, n2, n3, |i, j, k| {
            let d = df[a].at(i, j, k);
            inner(d, d).sqrt()
        })
    });

    let mut worst = 0.0_f64;
    let mut worst_node = [0_usize; 3];
    for (i, j, k) in df[0].indices() {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let rel = inner(df[a].at(i, j, k), df[b].at(i, j, k)).abs()
                / (l[a].at(i, j, k) * l[b].at(i, j, k));
            if rel > worst {
                worst = rel;
                worst_node = [i, j, k];
            }
        }
    }
    if worst > tol::ORTHOGONALITY_REL {
        return Err(Error::NotTriplyOrthogonal {
            node: worst_node,
            value: worst,
        });
    }
    Ok((df, l))
}

/// Extract Lamé functions, rotation coefficients and b-coefficients from
/// a sampled net: lᵢ = |∂f/∂tᵢ|, k_ij = −(1/(lᵢlⱼ)) ∂lⱼ/∂tᵢ, b_ij as in
/// [`LameData`]. Rejects nets that fail to immerse along an axis and
/// nets whose coordinate tangents are not pairwise orthogonal (relative
/// to lᵢlⱼ), reporting the worst node. The orthogonality check measures
/// finite-difference tangents, so a severely under-resolved net can fail
/// it even when the underlying system is orthogonal; the reported value
/// (stencil noise vs. an actual shear angle) tells the two apart.
pub fn lame_from_grid(net: &NetGrid) -> Result<LameData> {
    let (_, l) = first_derivatives(net)?;
    LameData::from_lame_functions(&net.grid, l)
}

fn max_each<const N: usize>(x: [f64; N], y: [f64; N]) -> [f64; N] {
    std::array::from_fn(|i| x[i].max(y[i]))
}

/// Residuals of the constant-curvature equations against a claimed
/// ambient curvature k, max over the margin-2 interior.
///
/// Slots 0–2: the three curvature equations |b_ii + b_jj − k| for the
/// axis pairs (1,2), (2,3), (3,1) — the pairwise diagonal sums are the
/// curvature-equation right-hand sides by construction. Slots 3–5: the
/// mixed equations 0 = e₁k₂₃ + k₁₃(k₂₁−k₂₃) and cyclic, i.e. |b₂₁|,
/// |b₃₂|, |b₁₃|; their transposes are covered by b-symmetry.
pub fn lame_residuals(ld: &LameData, k: f64) -> [f64; 6] {
    ld.l[0]
        .interior_indices(2)
        .into_par_iter()
        .map(|(a, b, c)| {
            let bb = |i: usize, j: usize| *ld.b[i][j].at(a, b, c);
            [
                (bb(0, 0) + bb(1, 1) - k).abs(),
                (bb(1, 1) + bb(2, 2) - k).abs(),
                (bb(2, 2) + bb(0, 0) - k).abs(),
                bb(1, 0).abs(),
                bb(2, 1).abs(),
                bb(0, 2).abs(),
            ]
        })
        .reduce(|| [0.0; 6], max_each)
}

/// Residuals of the nine third-order conformal-flatness equations, max
/// over the interior (margin 3, or 2 when an axis is shorter than seven
/// nodes). No space-form gauge is required; the system is invariant
/// under rescalings f ↦ eᵘf.
///
/// Slots 0–2 are the equality-type equations
/// eᵢb_jm − k_jm b_mi − k_im b_jm = e_m b_ji − k_ji b_im − k_mi b_ji for
/// cyclic (i,j,m), as left-minus-right. Slots 3–8 are the divergence-type
/// equations 0 = eᵢb_jj − eⱼb_ji + k_ij(b_ii−b_jj) + k_ji(b_ij+b_ji) +
/// k_mj b_mi over the ordered pairs (1,2), (2,3), (3,1), (2,1), (3,2),
/// (1,3). Third-order content enters by differentiating the stored b
/// fields once more with the same width-3 stencils.
pub fn genlame_residuals(ld: &LameData) -> [f64; 9] {
    let g = &ld.grid;
    let st3: [Vec<(usize, Vec<f64>)>; 3] =
        std::array::from_fn(|a| line_stencil(g.n(a), g.h(a), 3, 1));
    let margin = if g.n(0).min(g.n(1)).min(g.n(2)) >= 7 { 3 } else { 2 };
    ld.l[0]
        .interior_indices(margin)
        .into_par_iter()
        .map(|(a, b, c)| {
            let kk = |i: usize, j: usize| *ld.k[i][j].at(a, b, c);
            let bb = |i: usize, j: usize| *ld.b[i][j].at(a, b, c);
            let e_b = |axis: usize, i: usize, j: usize| {
                ld.b[i][j].deriv(axis, &st3[axis], a, b, c) / ld.l[axis].at(a, b, c)
            };
            let eq = |i: usize, j: usize, m: usize| {
                e_b(i, j, m) - kk(j, m) * bb(m, i) - kk(i, m) * bb(j, m)
            };
            let div = |i: usize, j: usize| {
                let m = 3 - i - j;
                e_b(i, j, j) - e_b(j, j, i)
                    + kk(i, j) * (bb(i, i) - bb(j, j))
                    + kk(j, i) * (bb(i, j) + bb(j, i))
                    + kk(m, j) * bb(m, i)
            };
            [
                (eq(0, 1, 2) - eq(2, 1, 0)).abs(),
                (eq(1, 2, 0) - eq(0, 2, 1)).abs(),
                (eq(2, 0, 1) - eq(1, 0, 2)).abs(),
                div(0, 1).abs(),
                div(1, 2).abs(),
                div(2, 0).abs(),
                div(1, 0).abs(),
                div(2, 1).abs(),
                div(0, 2).abs(),
            ]
        })
        .reduce(|| [0.0; 9], max_each)
}

/// Dupin residual: the worst off-diagonal second-fundamental-form entry
/// of any coordinate surface, taken in coordinate directions and
/// normalized by lᵢlⱼ, max over the margin-1 interior. The unit normal
/// of the surface t_c = const is the normalized transverse tangent
/// n_c = (1/l_c) ∂f/∂t_c, and the entry tested is ⟨∂ᵢn_c, ∂ⱼf⟩/(lᵢlⱼ)
/// for the two surface directions i ≠ j (both orders). Coordinate lines
/// of a genuine triply orthogonal system are curvature lines, so this is
/// O(h²) on analytic systems and zero on affine ones.
pub fn dupin_residual(net: &NetGrid) -> Result<f64> {
    let (df, l) = first_derivatives(net)?;
    let g = &net.grid;
    let (n1, n2, n3) = (g.n(0), g.n(1), g.n(2));
    let nf: [Field3<MinkVec>; 3] = std::array::from_fn(|cx| {
        Field3::from_fn(n1, n2, n3, |i, j, k| df[cx].at(i, j, k) / *l[cx].at(i, j, k))
    });
    let st3: [Vec<(usize, Vec<f64>)>; 3] =
        std::array::from_fn(|a| line_stencil(g.n(a), g.h(a), 3, 1));
    Ok(nf[0]
        .interior_indices(1)
        .into_par_iter()
        .map(|(a, b, c)| {
            let mut worst = 0.0_f64;
            for (cx, nfc) in nf.iter().enumerate() {
                let (i, j) = match cx {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                for (u, v) in [(i, j), (j, i)] {
                    let dn = nfc.deriv(u, &st3[u], a, b, c);
                    let r = inner(&dn, df[v].at(a, b, c)).abs()
                        / (l[u].at(a, b, c) * l[v].at(a, b, c));
                    worst = worst.max(r);
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max))
}

/// Guichard residual max |Σᵢ (εᵢlᵢ)²| over all nodes, for the sign
/// assignment εᵢ ∈ {1, i} that puts the imaginary unit on `imag_axis`
/// (so that axis contributes −lᵢ²). Which axis is "suitable" is the
/// caller's choice; trying all three and keeping the best is cheap.
pub fn guichard_residual(ld: &LameData, imag_axis: usize) -> f64 {
    assert!(imag_axis < 3, "the imaginary unit sits on axis 0, 1 or 2");
    ld.l[0]
        .indices()
        .into_par_iter()
        .map(|(a, b, c)| {
            let mut s = 0.0;
            for i in 0..3 {
                let li2 = ld.l[i].at(a, b, c).powi(2);
                s += if i == imag_axis { -li2 } else { li2 };
            }
            s.abs()
        })
        .reduce(|| 0.0, f64::max)
}
