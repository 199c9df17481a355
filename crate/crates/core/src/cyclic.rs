//! Circle congruences, orthogonal hypersurfaces and cyclic systems.
//!
//! A circle congruence assigns to every grid node a circle: the lightlike
//! rays of the Lorentzian 3-space spanned by the last three frame columns
//! (s, f, f̂). A hypersurface cuts all circles orthogonally exactly when
//! its circle parameter t solves the Riccati-type system
//!
//!   dt = ½t²·ν_s + t·ν_f + ν̂_s
//!
//! built from the ν components of the frame connection. Cross-derivative
//! compatibility of that system is a quadratic in t whose coefficients
//! are the curvature entries of the (s,f,f̂)-part of the connection:
//!
//!   q₂ = ½(dν_s + ν_f∧ν_s),  q₁ = dν_f + ν̂_s∧ν_s,  q₀ = dν̂_s + ν̂_s∧ν_f.
//!
//! All three vanish iff the congruence is normal: it then admits a full
//! one-parameter family of orthogonal hypersurfaces (a cyclic system)
//! rather than at most two isolated ones. For a parallel frame (ν = 0)
//! the family is explicit, f_g = (1/g′)(g·s + f − ½g²·f̂); four members
//! cut every circle at the same cross ratio, a Möbius function of their
//! parameters, and any two members envelope a common Ribaucour sphere
//! congruence.

use crate::error::{Error, Result};
use crate::grid::{line_stencil, Field2, ParamGrid2};
use crate::spaceform::LightPoint;
use crate::sphere::{cross_ratio, CircleFrame, SphereVec};
use crate::strip::{connection, ConnectionSample, FrameGrid, StripGrid};
use crate::tol;

/// A frame field whose last three columns (s, f, f̂) carry a circle per
/// node; the leading columns span the spacelike complement.
///
/// Construction checks the circle-frame relations ⟨s,s⟩ = 1, ⟨f,f⟩ =
/// ⟨f̂,f̂⟩ = 0, ⟨f,f̂⟩ = 1, ⟨s,f⟩ = ⟨s,f̂⟩ = 0 at every node, plus the
/// pseudo-orthonormality of the whole frame within the connection gate.
#[derive(Debug, Clone)]
pub struct CircleCongruence {
    pub frame: FrameGrid,
}

impl CircleCongruence {
    pub fn new(frame: FrameGrid) -> Result<Self> {
        let gram = frame.max_gram_residual();
        if gram > tol::FRAME_GRAM_GATE {
            return Err(Error::Usage(format!(
                "circle congruence frames must be pseudo-orthonormal: \
                 gram residual {gram:.3e} exceeds {:.1e}",
                tol::FRAME_GRAM_GATE
            )));
        }
        let d = frame.dim();
        for (i, j) in frame.frames.indices() {
            let cols = &frame.frames.at(i, j).columns;
            let node_frame = || -> Result<CircleFrame> {
                let s = SphereVec::new(cols.column(d - 3).into_owned())?;
                let f = LightPoint::new(cols.column(d - 2).into_owned())?;
                let fh = LightPoint::new(cols.column(d - 1).into_owned())?;
                CircleFrame::new(s, f, fh)
            };
            if let Err(e) = node_frame() {
                return Err(Error::Usage(format!(
                    "node ({i},{j}) does not carry a circle frame: {e}"
                )));
            }
        }
        Ok(Self { frame })
    }

    pub fn grid(&self) -> &ParamGrid2 {
        &self.frame.grid
    }

    /// Frame column `col` at node (i, j) as an owned vector.
    fn col(&self, i: usize, j: usize, col: usize) -> nalgebra::DVector<f64> {
        self.frame.frames.at(i, j).columns.column(col).into_owned()
    }
}

/// A scalar circle parameter per node, the discrete solution of the
/// orthogonal-hypersurface system swept out from `base` where it takes
/// the value `t0`.
#[derive(Debug, Clone)]
pub struct TField {
    pub t: Field2<f64>,
    pub base: (usize, usize),
    pub t0: f64,
}

/// Which axis the sweep integrates first from the base node. The two
/// orders traverse different edge paths; their disagreement (the loop
/// defect) measures how far the system is from integrable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    RowFirst,
    ColumnFirst,
}

/// Connection forms of the congruence frame; the ν components feed the
/// orthogonal-hypersurface system.
pub fn nu_forms(cc: &CircleCongruence) -> Result<ConnectionSample> {
    connection(&cc.frame)
}

/// Right side of dt = ½t²·ν_s + t·ν_f + ν̂_s for one direction sample.
fn ode_rhs(t: f64, nu: &[f64; 3]) -> f64 {
    0.5 * t * t * nu[0] + t * nu[1] + nu[2]
}

/// One classical fourth-order step across a grid edge of signed length h,
/// with the midpoint ν re-evaluated by linear interpolation of the two
/// node samples.
fn edge_step(t: f64, nu_a: &[f64; 3], nu_b: &[f64; 3], h: f64) -> f64 {
    let nu_m = [
        0.5 * (nu_a[0] + nu_b[0]),
        0.5 * (nu_a[1] + nu_b[1]),
        0.5 * (nu_a[2] + nu_b[2]),
    ];
    let k1 = ode_rhs(t, nu_a);
    let k2 = ode_rhs(t + 0.5 * h * k1, &nu_m);
    let k3 = ode_rhs(t + 0.5 * h * k2, &nu_m);
    let k4 = ode_rhs(t + h * k3, nu_b);
    t + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Walk t along one grid line through `start` in both directions,
/// assuming t at `start` is already set. Trips the overflow guard into
/// a divergence error at the first offending node.
fn walk_line(
    cs: &ConnectionSample,
    t: &mut Field2<f64>,
    axis: usize,
    start: (usize, usize),
) -> Result<()> {
    let len = if axis == 0 {
        cs.grid.n1()
    } else {
        cs.grid.n2()
    };
    let pos = if axis == 0 { start.0 } else { start.1 };
    let node = |p: usize| -> (usize, usize) {
        if axis == 0 {
            (p, start.1)
        } else {
            (start.0, p)
        }
    };
    let h = cs.grid.h(axis);
    let sides: [(Box<dyn Iterator<Item = usize>>, f64); 2] = [
        (Box::new(pos + 1..len), h),
        (Box::new((0..pos).rev()), -h),
    ];
    for (range, step) in sides {
        let mut cur = *t.at(start.0, start.1);
        let mut prev = node(pos);
        for p in range {
            let next = node(p);
            let nu_a = &cs.nu.at(prev.0, prev.1)[axis];
            let nu_b = &cs.nu.at(next.0, next.1)[axis];
            cur = edge_step(cur, nu_a, nu_b, step);
            if !cur.is_finite() || cur.abs() > tol::T_OVERFLOW_GUARD {
                return Err(Error::Divergence {
                    node: vec![next.0, next.1],
                    value: cur,
                });
            }
            *t.at_mut(next.0, next.1) = cur;
            prev = next;
        }
    }
    Ok(())
}

/// Integrate the orthogonal-hypersurface system from precomputed
/// connection samples, sweeping the grid in the given order.
pub fn integrate_tfield_ordered(
    cs: &ConnectionSample,
    t0: f64,
    base: (usize, usize),
    order: SweepOrder,
) -> Result<TField> {
    let (n1, n2) = (cs.grid.n1(), cs.grid.n2());
    let (bi, bj) = base;
    if bi >= n1 || bj >= n2 {
        return Err(Error::Usage(format!(
            "base node ({bi},{bj}) outside the {n1}×{n2} grid"
        )));
    }
    let mut t = Field2::from_fn(n1, n2, |_, _| f64::NAN);
    *t.at_mut(bi, bj) = t0;
    let (first, second) = match order {
        SweepOrder::RowFirst => (0, 1),
        SweepOrder::ColumnFirst => (1, 0),
    };
    walk_line(cs, &mut t, first, base)?;
    let base_line: Vec<(usize, usize)> = if first == 0 {
        (0..n1).map(|i| (i, bj)).collect()
    } else {
        (0..n2).map(|j| (bi, j)).collect()
    };
    for start in base_line {
        walk_line(cs, &mut t, second, start)?;
    }
    Ok(TField { t, base, t0 })
}

/// Integrate the orthogonal-hypersurface system dt = ½t²ν_s + tν_f + ν̂_s
/// across the grid, row-first from the base node.
pub fn integrate_tfield(cc: &CircleCongruence, t0: f64, base: (usize, usize)) -> Result<TField> {
    let cs = nu_forms(cc)?;
    integrate_tfield_ordered(&cs, t0, base, SweepOrder::RowFirst)
}

/// Coefficients [q₂, q₁, q₀] of the compatibility quadratic per node,
/// evaluated on the coordinate pair (∂₁, ∂₂) with width-3 stencils:
///
///   q₂ = ½(dν_s + ν_f∧ν_s),  q₁ = dν_f + ν̂_s∧ν_s,  q₀ = dν̂_s + ν̂_s∧ν_f.
///
/// A hypersurface parameter value t can propagate consistently through a
/// node only if ½q₂t² + q₁t + q₀ vanishes there; all three coefficients
/// vanish iff the congruence is normal.
pub fn integrability_quadratic_from(cs: &ConnectionSample) -> Field2<[f64; 3]> {
    let (n1, n2) = (cs.grid.n1(), cs.grid.n2());
    let st1 = line_stencil(n1, cs.grid.h1(), 3, 1);
    let st2 = line_stencil(n2, cs.grid.h2(), 3, 1);
    // One scalar field per (component, direction): x ∈ {ν_s, ν_f, ν̂_s}.
    let comp = |x: usize, dir: usize| Field2::from_fn(n1, n2, |i, j| cs.nu.at(i, j)[dir][x]);
    let c = [
        [comp(0, 0), comp(0, 1)],
        [comp(1, 0), comp(1, 1)],
        [comp(2, 0), comp(2, 1)],
    ];
    Field2::from_fn(n1, n2, |i, j| {
        // dα(∂₁,∂₂) = ∂₁α(∂₂) − ∂₂α(∂₁); (α∧β)(∂₁,∂₂) = α₁β₂ − α₂β₁.
        let d = |x: usize| c[x][1].deriv(0, &st1, i, j) - c[x][0].deriv(1, &st2, i, j);
        let w = |x: usize, y: usize| c[x][0].at(i, j) * c[y][1].at(i, j) - c[x][1].at(i, j) * c[y][0].at(i, j);
        let (s, f, hs) = (0, 1, 2);
        [
            0.5 * (d(s) + w(f, s)),
            d(f) + w(hs, s),
            d(hs) + w(hs, f),
        ]
    })
}

/// Compatibility quadratic of the congruence; see
/// [`integrability_quadratic_from`].
pub fn integrability_quadratic(cc: &CircleCongruence) -> Result<Field2<[f64; 3]>> {
    Ok(integrability_quadratic_from(&nu_forms(cc)?))
}

/// Whether the congruence is normal (admits a cyclic system), decided two
/// independent ways that must agree:
///
/// - flatness: every compatibility coefficient stays within `tol`;
/// - solvability: sweeps with three start values t₀ ∈ {−1, 0, 1} are
///   path-independent, max loop defect ≤ tol·(1 + max|t|), and none
///   diverges. Three independent solutions force the quadratic to vanish.
///
/// Genuinely borderline data (one route barely passing, the other barely
/// failing) is reported as an error rather than silently resolved.
pub fn is_normal(cc: &CircleCongruence, tol: f64) -> Result<bool> {
    let cs = nu_forms(cc)?;
    let quad = integrability_quadratic_from(&cs);
    let mut curv = 0.0_f64;
    for (i, j) in quad.indices() {
        for q in quad.at(i, j) {
            curv = curv.max(q.abs());
        }
    }
    let flat = curv <= tol;

    let base = (cs.grid.n1() / 2, cs.grid.n2() / 2);
    let mut defect = 0.0_f64;
    let mut tmax = 0.0_f64;
    let mut solvable = true;
    for t0 in [-1.0, 0.0, 1.0] {
        let row = integrate_tfield_ordered(&cs, t0, base, SweepOrder::RowFirst);
        let col = integrate_tfield_ordered(&cs, t0, base, SweepOrder::ColumnFirst);
        match (row, col) {
            (Ok(a), Ok(b)) => {
                for (i, j) in a.t.indices() {
                    defect = defect.max((a.t.at(i, j) - b.t.at(i, j)).abs());
                    tmax = tmax.max(a.t.at(i, j).abs());
                }
            }
            // A diverging sweep means no global solution at this start
            // value; that alone rules out a cyclic system.
            _ => solvable = false,
        }
    }
    let through = solvable && defect <= tol * (1.0 + tmax);
    if flat != through {
        return Err(Error::DegenerateInput(format!(
            "normality routes disagree at tolerance {tol:.1e}: \
             curvature residual {curv:.3e}, loop defect {defect:.3e}"
        )));
    }
    Ok(flat)
}

/// Largest |ν| sample of the congruence; zero for a parallel frame.
fn max_nu(cs: &ConnectionSample) -> f64 {
    let mut m = 0.0_f64;
    for (i, j) in cs.nu.indices() {
        for dir in 0..2 {
            for v in cs.nu.at(i, j)[dir] {
                m = m.max(v.abs());
            }
        }
    }
    m
}

fn require_parallel(cs: &ConnectionSample, op: &str) -> Result<()> {
    let m = max_nu(cs);
    if m > tol::PARALLEL_NU_TOL {
        return Err(Error::Usage(format!(
            "{op} requires a parallel frame: max |ν| = {m:.3e} exceeds {:.1e}",
            tol::PARALLEL_NU_TOL
        )));
    }
    Ok(())
}

/// Orthogonal hypersurfaces of a parallel-framed congruence, one strip
/// per schedule entry (g, g′):
///
///   f_g = (1/g′)·(g·s + f − ½g²·f̂),
///
/// paired with the congruence sphere field s. An infinite g selects the
/// limit member, stored exactly as f̂ (the ray limit is the same for
/// either sign; g′ is ignored there). Exactly the members g = 0 and
/// g = ∞ are envelopes of s: the incidence ⟨s, f_g⟩·g′ = g vanishes only
/// for them, while the tangency condition holds for every member.
pub fn orthogonal_family(cc: &CircleCongruence, schedule: &[(f64, f64)]) -> Result<Vec<StripGrid>> {
    let cs = nu_forms(cc)?;
    require_parallel(&cs, "orthogonal_family")?;
    let d = cc.frame.dim();
    let (n1, n2) = (cc.grid().n1(), cc.grid().n2());
    let s_field = Field2::from_fn(n1, n2, |i, j| SphereVec::new_unchecked(cc.col(i, j, d - 3)));
    let mut members = Vec::with_capacity(schedule.len());
    for &(g, gp) in schedule {
        if g.is_nan() || gp.is_nan() {
            return Err(Error::Usage("schedule entries must not be NaN".into()));
        }
        let f_field = if g.is_infinite() {
            Field2::from_fn(n1, n2, |i, j| LightPoint::new_unchecked(cc.col(i, j, d - 1)))
        } else {
            if gp == 0.0 {
                return Err(Error::SingularParametrization);
            }
            Field2::from_fn(n1, n2, |i, j| {
                let cols = &cc.frame.frames.at(i, j).columns;
                let v = (cols.column(d - 3) * g + cols.column(d - 2)
                    - cols.column(d - 1) * (0.5 * g * g))
                    / gp;
                LightPoint::new_unchecked(v)
            })
        };
        members.push(StripGrid::new(s_field.clone(), f_field, cc.grid().clone())?);
    }
    Ok(members)
}

/// The sphere congruence enveloped by the two orthogonal hypersurfaces
/// at parameters a ≠ b of a parallel-framed congruence:
///
///   s_ab = ((a+b)·s + 2f − ab·f̂) / (a − b),
///
/// the unit sphere of the circle pencil incident with both member points
/// (limits a·f̂ − s and s − b·f̂ when one parameter is infinite). The
/// result pairs s_ab with the member at a, which it envelopes; by the
/// symmetry of the formula it envelopes the member at b as well, so the
/// congruence is Ribaucour.
pub fn enveloped_congruence(cc: &CircleCongruence, a: f64, b: f64) -> Result<StripGrid> {
    let cs = nu_forms(cc)?;
    require_parallel(&cs, "enveloped_congruence")?;
    if a.is_nan() || b.is_nan() {
        return Err(Error::Usage("member parameters must not be NaN".into()));
    }
    if a == b || (a.is_infinite() && b.is_infinite()) {
        return Err(Error::DegenerateConfiguration(
            "enveloped congruence needs two distinct members".into(),
        ));
    }
    let d = cc.frame.dim();
    let (n1, n2) = (cc.grid().n1(), cc.grid().n2());
    let sphere_at = |i: usize, j: usize| -> SphereVec {
        let s = cc.col(i, j, d - 3);
        let f = cc.col(i, j, d - 2);
        let fh = cc.col(i, j, d - 1);
        let v = if a.is_infinite() {
            s - b * fh
        } else if b.is_infinite() {
            a * fh - s
        } else {
            ((a + b) * s + 2.0 * f - (a * b) * fh) / (a - b)
        };
        SphereVec::new_unchecked(v)
    };
    let s_field = Field2::from_fn(n1, n2, &sphere_at);
    let f_field = if a.is_infinite() {
        Field2::from_fn(n1, n2, |i, j| LightPoint::new_unchecked(cc.col(i, j, d - 1)))
    } else {
        Field2::from_fn(n1, n2, |i, j| {
            let cols = &cc.frame.frames.at(i, j).columns;
            let v = cols.column(d - 3) * a + cols.column(d - 2)
                - cols.column(d - 1) * (0.5 * a * a);
            LightPoint::new_unchecked(v)
        })
    };
    StripGrid::new(s_field, f_field, cc.grid().clone())
}

/// Per-node cross ratio of four family members (their f maps as light
/// rays) and its standard deviation over the grid. For members of one
/// orthogonal family the field is constant: the Möbius function
/// |(g₁−g₂)(g₃−g₄) / ((g₂−g₃)(g₄−g₁))| of the circle parameters.
pub fn family_cross_ratio(members: &[StripGrid]) -> Result<(Field2<f64>, f64)> {
    if members.len() != 4 {
        return Err(Error::Usage(format!(
            "cross ratio needs exactly four members, got {}",
            members.len()
        )));
    }
    let (n1, n2) = (members[0].grid.n1(), members[0].grid.n2());
    for m in &members[1..] {
        if m.grid.n1() != n1 || m.grid.n2() != n2 {
            return Err(Error::Usage(
                "family members live on different grids".into(),
            ));
        }
    }
    let mut field = Field2::from_fn(n1, n2, |_, _| 0.0);
    for i in 0..n1 {
        for j in 0..n2 {
            *field.at_mut(i, j) = cross_ratio(
                members[0].f.at(i, j),
                members[1].f.at(i, j),
                members[2].f.at(i, j),
                members[3].f.at(i, j),
            )?;
        }
    }
    let count = (n1 * n2) as f64;
    let mean = field.iter().sum::<f64>() / count;
    let var = field.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / count;
    Ok((field, var.sqrt()))
}
