//! Uniform parameter grids and finite-difference stencils.
//!
//! All discrete derivatives in this crate go through the helpers here:
//! interpolation-based weights (Fornberg's algorithm) on a sliding window,
//! so interior nodes get central stencils and boundary nodes one-sided
//! ones of the same order. Width-3 windows give the usual second-order
//! formulas; width-7 windows give sixth-order first derivatives where a
//! residual budget demands them.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Finite-difference weights on arbitrary nodes: returns w with
/// f^(m)(x0) ≈ Σⱼ w[j]·f(x[j]), exact for polynomials of degree
/// < x.len(). Fornberg's recursion.
pub fn fd_weights(x: &[f64], x0: f64, m: usize) -> Vec<f64> {
    let n = x.len();
    assert!(m < n, "need more than m+1 nodes for an m-th derivative");
    let mut c = vec![vec![0.0_f64; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Per-index stencil for the m-th derivative along a uniform axis of
/// `n` nodes with spacing `h`, using windows of `width` consecutive
/// nodes (central in the interior, shifted at the boundary).
/// Entry i is (window start, weights).
pub fn line_stencil(n: usize, h: f64, width: usize, m: usize) -> Vec<(usize, Vec<f64>)> {
    assert!(width <= n, "stencil width {width} exceeds axis length {n}");
    (0..n)
        .map(|i| {
            let half = (width - 1) / 2;
            let start = i.saturating_sub(half).min(n - width);
            let xs: Vec<f64> = (0..width)
                .map(|j| ((start + j) as f64 - i as f64) * h)
                .collect();
            (start, fd_weights(&xs, 0.0, m))
        })
        .collect()
}

/// Values a finite-difference stencil can combine: scalars, vectors,
/// matrices.
pub trait Lin: Clone {
    fn lin_zero(like: &Self) -> Self;
    fn lin_axpy(&mut self, a: f64, x: &Self);
}

impl Lin for f64 {
    fn lin_zero(_: &Self) -> Self {
        0.0
    }
    fn lin_axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

impl Lin for DVector<f64> {
    fn lin_zero(like: &Self) -> Self {
        DVector::zeros(like.len())
    }
    fn lin_axpy(&mut self, a: f64, x: &Self) {
        self.axpy(a, x, 1.0);
    }
}

impl Lin for DMatrix<f64> {
    fn lin_zero(like: &Self) -> Self {
        DMatrix::zeros(like.nrows(), like.ncols())
    }
    fn lin_axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

fn check_uniform(ts: &[f64], name: &str) -> Result<f64> {
    if ts.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "axis {name} needs at least two nodes"
        )));
    }
    let h = ts[1] - ts[0];
    if h <= 0.0 {
        return Err(Error::DegenerateInput(format!(
            "axis {name} must be strictly increasing"
        )));
    }
    for w in ts.windows(2) {
        if (w[1] - w[0] - h).abs() > 1e-12 * (1.0 + h.abs()) {
            return Err(Error::DegenerateInput(format!(
                "axis {name} is not uniform: spacing {} vs {h}",
                w[1] - w[0]
            )));
        }
    }
    Ok(h)
}

/// A uniform 2D parameter grid (t₁, t₂).
#[derive(Debug, Clone)]
pub struct ParamGrid2 {
    pub t1s: Vec<f64>,
    pub t2s: Vec<f64>,
}

impl ParamGrid2 {
    /// Validate strictly increasing, uniform axes (within 1e−12).
    pub fn new(t1s: Vec<f64>, t2s: Vec<f64>) -> Result<Self> {
        check_uniform(&t1s, "t1")?;
        check_uniform(&t2s, "t2")?;
        Ok(Self { t1s, t2s })
    }

    /// n₁×n₂ nodes spanning [a₁,b₁]×[a₂,b₂].
    pub fn uniform(a1: f64, b1: f64, n1: usize, a2: f64, b2: f64, n2: usize) -> Self {
        Self {
            t1s: uniform_axis(a1, b1, n1),
            t2s: uniform_axis(a2, b2, n2),
        }
    }

    pub fn n1(&self) -> usize {
        self.t1s.len()
    }
    pub fn n2(&self) -> usize {
        self.t2s.len()
    }
    pub fn h1(&self) -> f64 {
        self.t1s[1] - self.t1s[0]
    }
    pub fn h2(&self) -> f64 {
        self.t2s[1] - self.t2s[0]
    }
    pub fn h(&self, axis: usize) -> f64 {
        match axis {
            0 => self.h1(),
            1 => self.h2(),
            _ => panic!("2D grid has axes 0 and 1"),
        }
    }
}

/// A uniform 3D parameter grid (t₁, t₂, t₃).
#[derive(Debug, Clone)]
pub struct ParamGrid3 {
    pub t1s: Vec<f64>,
    pub t2s: Vec<f64>,
    pub t3s: Vec<f64>,
}

impl ParamGrid3 {
    pub fn new(t1s: Vec<f64>, t2s: Vec<f64>, t3s: Vec<f64>) -> Result<Self> {
        check_uniform(&t1s, "t1")?;
        check_uniform(&t2s, "t2")?;
        check_uniform(&t3s, "t3")?;
        Ok(Self { t1s, t2s, t3s })
    }

    /// One (start, end, node-count) triple per axis; a flat argument list
    /// keeps call sites on a single readable line.
    #[allow(clippy::too_many_arguments)]
    pub fn uniform(
        a1: f64,
        b1: f64,
        n1: usize,
        a2: f64,
        b2: f64,
        n2: usize,
        a3: f64,
        b3: f64,
        n3: usize,
    ) -> Self {
        Self {
            t1s: uniform_axis(a1, b1, n1),
            t2s: uniform_axis(a2, b2, n2),
            t3s: uniform_axis(a3, b3, n3),
        }
    }

    pub fn n(&self, axis: usize) -> usize {
        match axis {
            0 => self.t1s.len(),
            1 => self.t2s.len(),
            2 => self.t3s.len(),
            _ => panic!("3D grid has axes 0, 1, 2"),
        }
    }
    pub fn h(&self, axis: usize) -> f64 {
        match axis {
            0 => self.t1s[1] - self.t1s[0],
            1 => self.t2s[1] - self.t2s[0],
            2 => self.t3s[1] - self.t3s[0],
            _ => panic!("3D grid has axes 0, 1, 2"),
        }
    }
}

/// `n` equally spaced values from a to b inclusive.
pub fn uniform_axis(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "axis needs at least two nodes");
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// Values stored per node of a 2D grid, row-major in (i, j) = (t₁, t₂).
#[derive(Debug, Clone)]
pub struct Field2<T> {
    pub n1: usize,
    pub n2: usize,
    data: Vec<T>,
}

impl<T> Field2<T> {
    pub fn from_fn(n1: usize, n2: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                data.push(f(i, j));
            }
        }
        Self { n1, n2, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n2 + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.n2 + j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// All (i, j) index pairs, row-major.
    pub fn indices(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::with_capacity(self.n1 * self.n2);
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                v.push((i, j));
            }
        }
        v
    }

    /// Index pairs at least `margin` nodes away from every boundary.
    pub fn interior_indices(&self, margin: usize) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in margin..self.n1.saturating_sub(margin) {
            for j in margin..self.n2.saturating_sub(margin) {
                v.push((i, j));
            }
        }
        v
    }
}

impl<T: Lin> Field2<T> {
    /// Derivative along `axis` (0 = t₁, 1 = t₂) at node (i, j) using the
    /// per-axis stencil table from [`line_stencil`].
    pub fn deriv(&self, axis: usize, stencil: &[(usize, Vec<f64>)], i: usize, j: usize) -> T {
        let (start, weights) = match axis {
            0 => &stencil[i],
            1 => &stencil[j],
            _ => panic!("2D field has axes 0 and 1"),
        };
        let mut acc = T::lin_zero(self.at(i, j));
        for (off, w) in weights.iter().enumerate() {
            let v = match axis {
                0 => self.at(start + off, j),
                _ => self.at(i, start + off),
            };
            acc.lin_axpy(*w, v);
        }
        acc
    }
}

/// Values stored per node of a 3D grid, index (i, j, k) = (t₁, t₂, t₃).
#[derive(Debug, Clone)]
pub struct Field3<T> {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    data: Vec<T>,
}

impl<T> Field3<T> {
    pub fn from_fn(
        n1: usize,
        n2: usize,
        n3: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Self {
        let mut data = Vec::with_capacity(n1 * n2 * n3);
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { n1, n2, n3, data }
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> &T {
        &self.data[(i * self.n2 + j) * self.n3 + k]
    }

    pub fn at_mut(&mut self, i: usize, j: usize, k: usize) -> &mut T {
        &mut self.data[(i * self.n2 + j) * self.n3 + k]
    }

    pub fn n(&self, axis: usize) -> usize {
        match axis {
            0 => self.n1,
            1 => self.n2,
            2 => self.n3,
            _ => panic!("3D field has axes 0, 1, 2"),
        }
    }

    pub fn indices(&self) -> Vec<(usize, usize, usize)> {
        let mut v = Vec::with_capacity(self.n1 * self.n2 * self.n3);
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                for k in 0..self.n3 {
                    v.push((i, j, k));
                }
            }
        }
        v
    }

    /// Index triples at least `margin` nodes away from every boundary.
    pub fn interior_indices(&self, margin: usize) -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for i in margin..self.n1.saturating_sub(margin) {
            for j in margin..self.n2.saturating_sub(margin) {
                for k in margin..self.n3.saturating_sub(margin) {
                    v.push((i, j, k));
                }
            }
        }
        v
    }
}

impl<T: Lin> Field3<T> {
    /// Derivative along `axis` (0,1,2) at node (i, j, k) using a per-axis
    /// stencil table.
    pub fn deriv(
        &self,
        axis: usize,
        stencil: &[(usize, Vec<f64>)],
        i: usize,
        j: usize,
        k: usize,
    ) -> T {
        let idx = [i, j, k];
        let (start, weights) = &stencil[idx[axis]];
        let mut acc = T::lin_zero(self.at(i, j, k));
        for (off, w) in weights.iter().enumerate() {
            let mut at = idx;
            at[axis] = start + off;
            acc.lin_axpy(*w, self.at(at[0], at[1], at[2]));
        }
        acc
    }
}
