//! Discrete WSGD fractional-derivative operators and the central advection
//! difference on uniform 1D grids (reused axis-wise in 2D).
//!
//! Interior unknowns are the nodes `j = 1..N-1`; the Dirichlet end values
//! enter through explicit boundary-coupling vectors, so the action of an
//! operator on a full node vector `u_0..u_N` is
//! `M u_interior + b_lo u_0 + b_hi u_N`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, WsgdError};
use crate::weights::{wsgd_weights, WsgdParams};

/// A uniform grid with `n` intervals on `[a, b]`.
#[derive(Clone, Copy, Debug)]
pub struct Grid1D {
    a: f64,
    b: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(WsgdError::InvalidGrid(format!("invalid interval [{a}, {b}]")));
        }
        if n < 2 {
            return Err(WsgdError::InvalidGrid(format!("need at least 2 intervals, got {n}")));
        }
        Ok(Self { a, b, n })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals; nodes are `0..=n`.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.a + j as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.node(j)).collect()
    }

    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..self.n).map(|j| self.node(j)).collect()
    }
}

/// A tensor-product grid.
#[derive(Clone, Copy, Debug)]
pub struct Grid2D {
    pub gx: Grid1D,
    pub gy: Grid1D,
}

impl Grid2D {
    pub fn new(gx: Grid1D, gy: Grid1D) -> Self {
        Self { gx, gy }
    }
}

/// An interior-node linear operator with Dirichlet boundary couplings:
/// `(Au)_j = (M u_int)_j + b_lo_j u_0 + b_hi_j u_N`.
#[derive(Clone, Debug)]
pub struct InteriorOp {
    pub matrix: DMatrix<f64>,
    pub b_lo: DVector<f64>,
    pub b_hi: DVector<f64>,
}

impl InteriorOp {
    fn zeros(m: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(m, m),
            b_lo: DVector::zeros(m),
            b_hi: DVector::zeros(m),
        }
    }

    /// Applies the operator to a full node vector `u_0..u_N`.
    pub fn apply(&self, u: &[f64]) -> DVector<f64> {
        let m = self.matrix.nrows();
        let interior = DVector::from_fn(m, |i, _| u[i + 1]);
        &self.matrix * interior + &self.b_lo * u[0] + &self.b_hi * u[m + 1]
    }

    fn add_scaled(&mut self, other: &InteriorOp, c: f64) {
        self.matrix += c * &other.matrix;
        self.b_lo += c * &other.b_lo;
        self.b_hi += c * &other.b_hi;
    }
}

/// Which Riemann–Liouville derivative an operator approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// A dense WSGD derivative matrix for one direction, with metadata.
#[derive(Clone, Debug)]
pub struct FracOperatorMatrix {
    pub direction: Direction,
    pub params: WsgdParams,
    pub h: f64,
    pub op: InteriorOp,
}

impl FracOperatorMatrix {
    /// Assembles the scaled stencil `h^{-alpha} sum_k g_k u_{j -+ k +- 1}`
    /// over the interior rows of a grid.
    pub fn assemble(direction: Direction, grid: &Grid1D, params: &WsgdParams) -> Self {
        let n = grid.n();
        let h = grid.h();
        let scale = h.powf(-params.alpha().get());
        let g = wsgd_weights(params, n + 2).g;
        let mut op = InteriorOp::zeros(n - 1);
        for j in 1..n {
            // Column index i runs over all nodes 0..=n; k is the stencil
            // offset into the fused weights.
            for i in 0..=n {
                let (k, in_range) = match direction {
                    Direction::Left => {
                        let k = j as isize - i as isize + 1;
                        (k, k >= 0 && k <= j as isize + 1)
                    }
                    Direction::Right => {
                        let k = i as isize - j as isize + 1;
                        (k, k >= 0 && k <= (n - j) as isize + 1)
                    }
                };
                if !in_range {
                    continue;
                }
                let v = scale * g[k as usize];
                if i == 0 {
                    op.b_lo[j - 1] += v;
                } else if i == n {
                    op.b_hi[j - 1] += v;
                } else {
                    op.matrix[(j - 1, i - 1)] += v;
                }
            }
        }
        Self { direction, params: *params, h, op }
    }
}

/// Direct-summation application of the left WSGD operator:
/// `v_j = h^{-alpha} sum_{k=0}^{j+1} g_k u_{j-k+1}`, `j = 1..N-1`.
///
/// Kept independent of the matrix assembly so the two routes cross-check
/// each other.
pub fn apply_left_wsgd(u: &[f64], params: &WsgdParams, h: f64) -> Result<Vec<f64>> {
    let n = checked_intervals(u, h)?;
    let scale = h.powf(-params.alpha().get());
    let g = wsgd_weights(params, n + 2).g;
    let mut v = Vec::with_capacity(n - 1);
    for j in 1..n {
        let mut s = 0.0;
        for k in 0..=(j + 1) {
            s += g[k] * u[j + 1 - k];
        }
        v.push(scale * s);
    }
    Ok(v)
}

/// Direct-summation application of the right WSGD operator:
/// `v_j = h^{-alpha} sum_{k=0}^{N-j+1} g_k u_{j+k-1}`, `j = 1..N-1`.
pub fn apply_right_wsgd(u: &[f64], params: &WsgdParams, h: f64) -> Result<Vec<f64>> {
    let n = checked_intervals(u, h)?;
    let scale = h.powf(-params.alpha().get());
    let g = wsgd_weights(params, n + 2).g;
    let mut v = Vec::with_capacity(n - 1);
    for j in 1..n {
        let mut s = 0.0;
        for k in 0..=(n - j + 1) {
            s += g[k] * u[j + k - 1];
        }
        v.push(scale * s);
    }
    Ok(v)
}

fn checked_intervals(u: &[f64], h: f64) -> Result<usize> {
    if u.len() < 3 {
        return Err(WsgdError::InvalidGrid(format!(
            "node vector needs at least 3 entries, got {}",
            u.len()
        )));
    }
    if !(h > 0.0) {
        return Err(WsgdError::InvalidGrid(format!("grid step must be positive, got {h}")));
    }
    Ok(u.len() - 1)
}

/// Central first-difference at the interior nodes:
/// `v_j = (u_{j+1} - u_{j-1}) / (2h)`.
pub fn central_advection(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len() - 1;
    (1..n).map(|j| (u[j + 1] - u[j - 1]) / (2.0 * h)).collect()
}

/// Matrix form of the central first difference with boundary couplings.
pub fn central_advection_matrix(grid: &Grid1D) -> InteriorOp {
    let n = grid.n();
    let c = 1.0 / (2.0 * grid.h());
    let mut op = InteriorOp::zeros(n - 1);
    for j in 1..n {
        if j + 1 < n {
            op.matrix[(j - 1, j)] = c;
        } else {
            op.b_hi[j - 1] = c;
        }
        if j > 1 {
            op.matrix[(j - 1, j - 2)] = -c;
        } else {
            op.b_lo[j - 1] = -c;
        }
    }
    op
}

/// The combined diffusion operator `D = d (L + R)` with boundary couplings.
pub fn assemble_diffusion_matrix(grid: &Grid1D, params: &WsgdParams, d: f64) -> InteriorOp {
    let left = FracOperatorMatrix::assemble(Direction::Left, grid, params);
    let right = FracOperatorMatrix::assemble(Direction::Right, grid, params);
    let mut op = InteriorOp::zeros(grid.n() - 1);
    op.add_scaled(&left.op, d);
    op.add_scaled(&right.op, d);
    op
}

/// The full spatial axis operator `delta = d (L + R) - v C`, so that the
/// semidiscrete problem reads `du/dt = delta u + f`.
pub fn axis_operator(grid: &Grid1D, params: &WsgdParams, d: f64, v: f64) -> InteriorOp {
    let mut op = assemble_diffusion_matrix(grid, params, d);
    let adv = central_advection_matrix(grid);
    op.add_scaled(&adv, -v);
    op
}
