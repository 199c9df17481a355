//! Strips, adapted moving frames and their connection forms on 2D grids.
//!
//! A strip is a pair (s, f) of a hypersphere congruence and a lightlike
//! map with ⟨s,f⟩ = 0 and ⟨s,df⟩ = 0: each sphere touches the surface
//! traced by f. Adapted frames are pseudo-orthonormal column systems
//! F = (s₁,…,s_{n−1}, s, f, f̂) whose spacelike columns span the tangent
//! plane of the chosen map. The connection form Φ = F⁻¹dF splits into
//!
//!   Φ = [ ω   η ]      η row i = (−ηᵢ, φᵢ, φ̂ᵢ),   η* = J₃ηᵀ,
//!       [ −η* ν ]      J₃ = the (s,f,f̂) pairing block,
//!
//! so dsᵢ = Σⱼωⱼᵢsⱼ + ηᵢs − φ̂ᵢf − φᵢf̂, ds = −Σηᵢsᵢ + …, df = Σφᵢsᵢ + …,
//! df̂ = Σφ̂ᵢsᵢ + …. Flatness of Φ yields the Gauss equation
//! dω + ω∧ω = η∧η*, the Ricci equation dν + ν∧ν = η*∧η and the Codazzi
//! equation dη + ω∧η + η∧ν = 0, which are checked here as grid residuals.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{line_stencil, Field2, ParamGrid2};
use crate::lorentz::{inner, norm2, MinkVec, PseudoFrame};
use crate::spaceform::LightPoint;
use crate::sphere::SphereVec;
use crate::tol;

/// Which map of the strip supplies the tangent plane of the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdaptMode {
    SAdapted,
    FAdapted,
}

/// A sphere congruence and an enveloping lightlike map sampled over a
/// uniform parameter grid.
///
/// The strip conditions ⟨s,f⟩ = 0 and ⟨s,df⟩ = 0 are *measured*, not
/// enforced: [`envelope_residual`] reports them, so near-strips and
/// deliberately broken data can be diagnosed.
#[derive(Debug, Clone)]
pub struct StripGrid {
    pub s: Field2<SphereVec>,
    pub f: Field2<LightPoint>,
    pub grid: ParamGrid2,
}

impl StripGrid {
    pub fn new(s: Field2<SphereVec>, f: Field2<LightPoint>, grid: ParamGrid2) -> Result<Self> {
        if s.n1 != grid.n1() || s.n2 != grid.n2() || f.n1 != grid.n1() || f.n2 != grid.n2() {
            return Err(Error::DimensionMismatch {
                left: s.n1 * s.n2,
                right: grid.n1() * grid.n2(),
            });
        }
        let d = s.at(0, 0).s.len();
        if f.at(0, 0).v.len() != d {
            return Err(Error::DimensionMismatch {
                left: f.at(0, 0).v.len(),
                right: d,
            });
        }
        Ok(Self { s, f, grid })
    }

    /// Ambient dimension n+2.
    pub fn dim(&self) -> usize {
        self.s.at(0, 0).s.len()
    }
}

/// A pseudo-orthonormal frame per grid node.
#[derive(Debug, Clone)]
pub struct FrameGrid {
    pub frames: Field2<PseudoFrame>,
    pub grid: ParamGrid2,
}

impl FrameGrid {
    pub fn new(frames: Field2<PseudoFrame>, grid: ParamGrid2) -> Result<Self> {
        if frames.n1 != grid.n1() || frames.n2 != grid.n2() {
            return Err(Error::DimensionMismatch {
                left: frames.n1 * frames.n2,
                right: grid.n1() * grid.n2(),
            });
        }
        Ok(Self { frames, grid })
    }

    /// Ambient dimension n+2.
    pub fn dim(&self) -> usize {
        self.frames.at(0, 0).dim()
    }

    /// Largest gram deviation over all nodes.
    pub fn max_gram_residual(&self) -> f64 {
        self.frames
            .iter()
            .map(|f| f.gram_residual())
            .fold(0.0, f64::max)
    }
}

/// Connection-form samples per node and grid direction, split into the
/// Cartan blocks: ω (tangential rotation), the η block stored with rows
/// (η, φ, φ̂), and the ν parameters (ν_s, ν_f, ν̂_s) of the (s,f,f̂) part.
///
/// The full Φ is antisymmetric for the invariant pairing G of the frame
/// columns, ΦᵀG + GΦ = 0; `lie_residual` records how far the extracted
/// samples are from that ideal.
#[derive(Debug, Clone)]
pub struct ConnectionSample {
    /// Per node, per direction: (n−1)×(n−1) antisymmetric ω.
    pub omega: Field2<[DMatrix<f64>; 2]>,
    /// Per node, per direction: 3×(n−1) matrix with rows η, φ, φ̂.
    pub eta: Field2<[DMatrix<f64>; 2]>,
    /// Per node, per direction: [ν_s, ν_f, ν̂_s].
    pub nu: Field2<[[f64; 3]; 2]>,
    pub grid: ParamGrid2,
    pub lie_residual: f64,
}

impl ConnectionSample {
    pub fn nu_s(&self, i: usize, j: usize, dir: usize) -> f64 {
        self.nu.at(i, j)[dir][0]
    }
    pub fn nu_f(&self, i: usize, j: usize, dir: usize) -> f64 {
        self.nu.at(i, j)[dir][1]
    }
    pub fn nu_hat_s(&self, i: usize, j: usize, dir: usize) -> f64 {
        self.nu.at(i, j)[dir][2]
    }

    /// The upper-right block of Φ: (n−1)×3 with row i = (−ηᵢ, φᵢ, φ̂ᵢ).
    pub fn eta_block(&self, i: usize, j: usize, dir: usize) -> DMatrix<f64> {
        let e = &self.eta.at(i, j)[dir];
        let m = e.ncols();
        DMatrix::from_fn(m, 3, |r, c| match c {
            0 => -e[(0, r)],
            1 => e[(1, r)],
            _ => e[(2, r)],
        })
    }

    /// η* = J₃ηᵀ, the pairing-dual of the η block.
    pub fn eta_star(&self, i: usize, j: usize, dir: usize) -> DMatrix<f64> {
        let b = self.eta_block(i, j, dir);
        let m = b.nrows();
        // J₃ swaps the f and f̂ rows of ηᵀ.
        DMatrix::from_fn(3, m, |r, c| match r {
            0 => b[(c, 0)],
            1 => b[(c, 2)],
            _ => b[(c, 1)],
        })
    }

    /// The 3×3 ν block in the (s,f,f̂) basis:
    /// columns (ds, df, df̂) = [[0,−ν̂_s,−ν_s],[ν_s,ν_f,0],[ν̂_s,0,−ν_f]].
    pub fn nu_matrix(&self, i: usize, j: usize, dir: usize) -> DMatrix<f64> {
        let [ns, nf, nhs] = self.nu.at(i, j)[dir];
        DMatrix::from_row_slice(3, 3, &[0.0, -nhs, -ns, ns, nf, 0.0, nhs, 0.0, -nf])
    }
}

/// Max strip residuals (max|⟨s,f⟩|, max|⟨s,∂f⟩|) over interior nodes.
/// Both vanish at stencil order exactly when each sphere touches the
/// f-surface at the corresponding point.
pub fn envelope_residual(sg: &StripGrid) -> (f64, f64) {
    let (n1, n2) = (sg.grid.n1(), sg.grid.n2());
    let st1 = line_stencil(n1, sg.grid.h1(), 3, 1);
    let st2 = line_stencil(n2, sg.grid.h2(), 3, 1);
    let fvecs = Field2::from_fn(n1, n2, |i, j| sg.f.at(i, j).v.clone());
    let idx = fvecs.interior_indices(1);
    idx.par_iter()
        .map(|&(i, j)| {
            let s = &sg.s.at(i, j).s;
            let incid = inner(s, &sg.f.at(i, j).v).abs();
            let d1 = fvecs.deriv(0, &st1, i, j);
            let d2 = fvecs.deriv(1, &st2, i, j);
            let tang = inner(s, &d1).abs().max(inner(s, &d2).abs());
            (incid, tang)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
}

/// Pseudo-orthonormal projection onto the complement of (s, f, f̂):
/// v − ⟨v,s⟩s − ⟨v,f̂⟩f − ⟨v,f⟩f̂. Exact for any valid triple.
fn project_complement(v: &MinkVec, s: &MinkVec, f: &MinkVec, fh: &MinkVec) -> MinkVec {
    v - inner(v, s) * s - inner(v, fh) * f - inner(v, f) * fh
}

/// Build adapted frames (s₁, s₂, s, f, f̂) over the grid: the spacelike
/// columns span the finite-difference tangent plane of the map selected
/// by `mode`, and f̂ is the unique lightlike vector with ⟨f,f̂⟩ = 1
/// orthogonal to the rest. Frames are exactly pseudo-orthonormal per
/// node (the tangent estimates are projected into the exact complement
/// of (s, f, f̂)), so downstream connection forms are cleanly
/// antisymmetric.
pub fn adapt_frame(sg: &StripGrid, mode: AdaptMode) -> Result<FrameGrid> {
    let d = sg.dim();
    if d != 5 {
        return Err(Error::Usage(format!(
            "adapted frames need ambient dimension 5 (two tangent directions), got {d}"
        )));
    }
    let (n1, n2) = (sg.grid.n1(), sg.grid.n2());
    let st1 = line_stencil(n1, sg.grid.h1(), 3, 1);
    let st2 = line_stencil(n2, sg.grid.h2(), 3, 1);
    let map = Field2::from_fn(n1, n2, |i, j| match mode {
        AdaptMode::SAdapted => sg.s.at(i, j).s.clone(),
        AdaptMode::FAdapted => sg.f.at(i, j).v.clone(),
    });

    let mut frames: Vec<PseudoFrame> = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            let t1 = map.deriv(0, &st1, i, j);
            let t2 = map.deriv(1, &st2, i, j);
            let s = &sg.s.at(i, j).s;
            let f = &sg.f.at(i, j).v;

            // f̂₀ ⊥ both tangents and s, paired to f; then the lightlike
            // correction f̂ = f̂₀ − ½⟨f̂₀,f̂₀⟩f keeps those constraints.
            let mut m = DMatrix::zeros(4, d);
            for (r, v) in [&t1, &t2, s, f].into_iter().enumerate() {
                for c in 0..d {
                    let sign = if c == d - 1 { -1.0 } else { 1.0 };
                    m[(r, c)] = sign * v[c];
                }
            }
            let svd = m.svd(true, true);
            let smax = svd.singular_values.max();
            let smin = svd.singular_values.min();
            if smin <= smax / tol::CONDITION_LIMIT {
                return Err(Error::ImmersionFailure {
                    node: vec![i, j],
                    detail: "tangent plane and (s, f) do not span four directions".into(),
                });
            }
            let b = DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]);
            let fh0 = svd.solve(&b, 0.0).map_err(|e| Error::ImmersionFailure {
                node: vec![i, j],
                detail: format!("dual vector solve failed: {e}"),
            })?;
            let fh = &fh0 - (norm2(&fh0) / 2.0) * f;

            let u1 = project_complement(&t1, s, f, &fh);
            let q1 = norm2(&u1);
            if q1 <= t1.norm_squared() / tol::CONDITION_LIMIT || q1 <= 0.0 {
                return Err(Error::ImmersionFailure {
                    node: vec![i, j],
                    detail: "first tangent is not spacelike or vanishes".into(),
                });
            }
            let s1 = u1 / q1.sqrt();
            let mut u2 = project_complement(&t2, s, f, &fh);
            u2.axpy(-inner(&u2, &s1), &s1, 1.0);
            let q2 = norm2(&u2);
            if q2 <= t2.norm_squared() / tol::CONDITION_LIMIT || q2 <= 0.0 {
                return Err(Error::ImmersionFailure {
                    node: vec![i, j],
                    detail: "second tangent is dependent or not spacelike".into(),
                });
            }
            let s2 = u2 / q2.sqrt();

            let columns =
                DMatrix::from_columns(&[s1, s2, s.clone(), f.clone(), fh]);
            frames.push(PseudoFrame { columns });
        }
    }
    let mut it = frames.into_iter();
    let field = Field2::from_fn(n1, n2, |_, _| it.next().unwrap());
    FrameGrid::new(field, sg.grid.clone())
}

/// Extract the connection form Φ = F⁻¹∂F per node and direction by
/// stencil differentiation, split into (ω, η, ν) blocks. Dual copies of
/// each entry (Φ is G-antisymmetric) are averaged.
pub fn connection(fg: &FrameGrid) -> Result<ConnectionSample> {
    let gram = fg.max_gram_residual();
    if gram > tol::FRAME_GRAM_GATE {
        return Err(Error::Usage(format!(
            "frame gram residual {gram:.3e} exceeds the gate {:.0e}; not a frame field",
            tol::FRAME_GRAM_GATE
        )));
    }
    let d = fg.dim();
    let (n1, n2) = (fg.grid.n1(), fg.grid.n2());
    let st1 = line_stencil(n1, fg.grid.h1(), 3, 1);
    let st2 = line_stencil(n2, fg.grid.h2(), 3, 1);
    let mats = Field2::from_fn(n1, n2, |i, j| fg.frames.at(i, j).columns.clone());
    let g = PseudoFrame::target_gram(d);
    let m = d - 3; // spacelike tangent count n−1
    let (is, ifr, ifh) = (d - 3, d - 2, d - 1);

    let mut omega = Field2::from_fn(n1, n2, |_, _| {
        [DMatrix::zeros(m, m), DMatrix::zeros(m, m)]
    });
    let mut eta = Field2::from_fn(n1, n2, |_, _| {
        [DMatrix::zeros(3, m), DMatrix::zeros(3, m)]
    });
    let mut nu = Field2::from_fn(n1, n2, |_, _| [[0.0; 3]; 2]);
    let mut lie = 0.0_f64;

    for i in 0..n1 {
        for j in 0..n2 {
            let finv = mats
                .at(i, j)
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Usage(format!("frame at ({i},{j}) is singular")))?;
            for (dir, st) in [(0usize, &st1), (1usize, &st2)] {
                let df = mats.deriv(dir, st, i, j);
                let phi = &finv * df;

                let anti = phi.transpose() * &g + &g * &phi;
                lie = lie.max(anti.iter().fold(0.0_f64, |a, x| a.max(x.abs())));

                let om = &mut omega.at_mut(i, j)[dir];
                for r in 0..m {
                    for c in 0..m {
                        om[(r, c)] = (phi[(r, c)] - phi[(c, r)]) / 2.0;
                    }
                }
                let e = &mut eta.at_mut(i, j)[dir];
                for cidx in 0..m {
                    e[(0, cidx)] = (phi[(is, cidx)] - phi[(cidx, is)]) / 2.0;
                    e[(1, cidx)] = (phi[(cidx, ifr)] - phi[(ifh, cidx)]) / 2.0;
                    e[(2, cidx)] = (phi[(cidx, ifh)] - phi[(ifr, cidx)]) / 2.0;
                }
                nu.at_mut(i, j)[dir] = [
                    (phi[(ifr, is)] - phi[(is, ifh)]) / 2.0,
                    (phi[(ifr, ifr)] - phi[(ifh, ifh)]) / 2.0,
                    (phi[(ifh, is)] - phi[(is, ifr)]) / 2.0,
                ];
            }
        }
    }

    Ok(ConnectionSample {
        omega,
        eta,
        nu,
        grid: fg.grid.clone(),
        lie_residual: lie,
    })
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

/// Max-norm residuals of the Gauss, Ricci and Codazzi equations over
/// interior nodes:
///   dω + ω∧ω − η∧η*,  dν + ν∧ν − η*∧η,  dη + ω∧η + η∧ν,
/// with (α∧β)(∂₁,∂₂) = α₁β₂ − α₂β₁ and d via stencil differentiation of
/// the direction components. All three are O(h²) for frames sampled from
/// smooth strip data.
pub fn structure_residuals(cs: &ConnectionSample) -> (f64, f64, f64) {
    let (n1, n2) = (cs.grid.n1(), cs.grid.n2());
    let st1 = line_stencil(n1, cs.grid.h1(), 3, 1);
    let st2 = line_stencil(n2, cs.grid.h2(), 3, 1);

    let om = |dir: usize| Field2::from_fn(n1, n2, |i, j| cs.omega.at(i, j)[dir].clone());
    let bb = |dir: usize| Field2::from_fn(n1, n2, |i, j| cs.eta_block(i, j, dir));
    let nn = |dir: usize| Field2::from_fn(n1, n2, |i, j| cs.nu_matrix(i, j, dir));
    let (om1, om2) = (om(0), om(1));
    let (b1, b2) = (bb(0), bb(1));
    let (nu1, nu2) = (nn(0), nn(1));

    let idx = om1.interior_indices(1);
    idx.par_iter()
        .map(|&(i, j)| {
            let es1 = cs.eta_star(i, j, 0);
            let es2 = cs.eta_star(i, j, 1);
            let b1n = &b1.at(i, j).clone();
            let b2n = &b2.at(i, j).clone();
            let om1n = om1.at(i, j);
            let om2n = om2.at(i, j);
            let nu1n = nu1.at(i, j);
            let nu2n = nu2.at(i, j);

            let gauss = om2.deriv(0, &st1, i, j) - om1.deriv(1, &st2, i, j)
                + om1n * om2n
                - om2n * om1n
                - (b1n * &es2 - b2n * &es1);
            let ricci = nu2.deriv(0, &st1, i, j) - nu1.deriv(1, &st2, i, j)
                + nu1n * nu2n
                - nu2n * nu1n
                - (&es1 * b2n - &es2 * b1n);
            let codazzi = b2.deriv(0, &st1, i, j) - b1.deriv(1, &st2, i, j)
                + om1n * b2n
                - om2n * b1n
                + b1n * nu2n
                - b2n * nu1n;
            (max_abs(&gauss), max_abs(&ricci), max_abs(&codazzi))
        })
        .reduce(
            || (0.0, 0.0, 0.0),
            |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2)),
        )
}

/// Max norm of the normal-bundle curvature η*∧η, within stencil error
/// of zero exactly for Ribaucour congruences.
///
/// The maximum excludes the two outermost node layers: frames on the
/// boundary come from one-sided stencils, and connection samples one
/// layer in differentiate across that change of stencil, which costs an
/// order. Grids smaller than 5×5 report 0.
pub fn ribaucour_residual(cs: &ConnectionSample) -> f64 {
    let idx = cs.omega.interior_indices(2);
    idx.par_iter()
        .map(|&(i, j)| {
            let b1 = cs.eta_block(i, j, 0);
            let b2 = cs.eta_block(i, j, 1);
            let es1 = cs.eta_star(i, j, 0);
            let es2 = cs.eta_star(i, j, 1);
            max_abs(&(&es1 * &b2 - &es2 * &b1))
        })
        .reduce(|| 0.0, f64::max)
}

/// Result of rotating a framing into principal position.
#[derive(Debug, Clone)]
pub struct PrincipalFraming {
    pub frames: FrameGrid,
    /// Rotation angle applied to (s₁,s₂) per node.
    pub angle: Field2<f64>,
    /// Nodes where the shape operator was too isotropic to define a
    /// rotation; these carry the propagated angle of their predecessor.
    pub umbilic: Field2<bool>,
}

/// Rotate the tangential columns per node so the mixed component of the
/// second fundamental form vanishes (ηᵢ ∧ φᵢ = 0): the Jacobi angle of
/// the symmetrized shape operator S = H·P⁻¹, where H, P are the 2×2
/// matrices of η- and φ-samples. Umbilic nodes (traceless part below
/// `UMBILIC_TOL` relative to |S|) keep the previous node's angle along
/// the t₁-sweep and are flagged.
pub fn principal_frame(fg: &FrameGrid) -> Result<PrincipalFraming> {
    if fg.dim() != 5 {
        return Err(Error::Usage(
            "principal framings are implemented for the surface case (ambient dimension 5)"
                .into(),
        ));
    }
    let cs = connection(fg)?;
    let (n1, n2) = (fg.grid.n1(), fg.grid.n2());

    let mut angle = Field2::from_fn(n1, n2, |_, _| 0.0);
    let mut umbilic = Field2::from_fn(n1, n2, |_, _| false);
    let mut frames = Field2::from_fn(n1, n2, |i, j| fg.frames.at(i, j).clone());

    for j in 0..n2 {
        for i in 0..n1 {
            let e1 = &cs.eta.at(i, j)[0];
            let e2 = &cs.eta.at(i, j)[1];
            let h = DMatrix::from_row_slice(2, 2, &[e1[(0, 0)], e2[(0, 0)], e1[(0, 1)], e2[(0, 1)]]);
            let p = DMatrix::from_row_slice(2, 2, &[e1[(1, 0)], e2[(1, 0)], e1[(1, 1)], e2[(1, 1)]]);
            let pinv = p.clone().try_inverse().ok_or(Error::ImmersionFailure {
                node: vec![i, j],
                detail: "tangential form is singular; framing not adapted to an immersion"
                    .into(),
            })?;
            let s = &h * pinv;
            let off = (s[(0, 1)] + s[(1, 0)]) / 2.0;
            let diff = s[(0, 0)] - s[(1, 1)];
            let traceless = (2.0 * off).hypot(diff);
            let scale = (s[(0, 0)].powi(2) + s[(1, 1)].powi(2) + s[(0, 1)].powi(2)
                + s[(1, 0)].powi(2))
            .sqrt();

            let th = if traceless <= tol::UMBILIC_TOL * scale || scale == 0.0 {
                *umbilic.at_mut(i, j) = true;
                if i > 0 {
                    *angle.at(i - 1, j)
                } else if j > 0 {
                    *angle.at(0, j - 1)
                } else {
                    0.0
                }
            } else {
                0.5 * (2.0 * off).atan2(diff)
            };
            *angle.at_mut(i, j) = th;

            let (c, sn) = (th.cos(), th.sin());
            let fr = frames.at_mut(i, j);
            let c1 = fr.columns.column(0).into_owned();
            let c2 = fr.columns.column(1).into_owned();
            fr.columns.set_column(0, &(c * &c1 + sn * &c2));
            fr.columns.set_column(1, &(-sn * &c1 + c * &c2));
        }
    }

    Ok(PrincipalFraming {
        frames: FrameGrid::new(frames, fg.grid.clone())?,
        angle,
        umbilic,
    })
}
