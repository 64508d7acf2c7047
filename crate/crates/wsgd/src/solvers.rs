//! Time stepping: the 1D implicit and Crank–Nicolson WSGD schemes, and the
//! 2D Crank–Nicolson scheme via three ADI splittings.
//!
//! All schemes share the semidiscrete form `du/dt = delta u + f` with
//! `delta = d (L + R) - v C` per axis (see [`crate::operators`]). The
//! coefficient matrices are time-independent, so each run factors its
//! system matrix once and back-substitutes per step.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::{Result, WsgdError};
use crate::operators::{axis_operator, Grid1D, Grid2D, InteriorOp};
use crate::weights::{FractionalOrder, WsgdParams};

/// Dense LU with partial pivoting, factored once and reused for repeated
/// right-hand sides.
pub struct LuSolver {
    lu: LU<f64, Dyn, Dyn>,
    dim: usize,
}

impl LuSolver {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() {
            return Err(WsgdError::SingularMatrix(format!(
                "matrix is {}x{}, not square",
                dim,
                matrix.ncols()
            )));
        }
        let lu = matrix.lu();
        if !lu.is_invertible() {
            return Err(WsgdError::SingularMatrix(format!("{dim}x{dim} matrix is singular")));
        }
        Ok(Self { lu, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        self.lu
            .solve(rhs)
            .ok_or_else(|| WsgdError::SingularMatrix("back-substitution failed".into()))
    }

    /// Solves one system per column of `rhs`.
    pub fn solve_batch(&self, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.lu
            .solve(rhs)
            .ok_or_else(|| WsgdError::SingularMatrix("back-substitution failed".into()))
    }
}

/// How much of the trajectory a run keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StorePolicy {
    /// Keep only the final time level.
    FinalOnly,
    /// Keep every computed level `n = 1..Nt` (the all-levels error norm
    /// needs them).
    AllLevels,
}

/// The five time-stepping schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme1D {
    Implicit,
    CrankNicolson,
}

/// The three algebraic variants of the 2D ADI splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdiVariant {
    PeacemanRachford,
    Douglas,
    DYakonov,
}

impl std::fmt::Display for AdiVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdiVariant::PeacemanRachford => write!(f, "peaceman-rachford"),
            AdiVariant::Douglas => write!(f, "douglas"),
            AdiVariant::DYakonov => write!(f, "dyakonov"),
        }
    }
}

pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Fn3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// A 1D advection–diffusion problem
/// `u_t + v u_x = d (D_left^alpha + D_right^alpha) u + f` on `(a, b)`.
#[derive(Clone)]
pub struct Problem1D {
    pub v: f64,
    pub d: f64,
    pub alpha: FractionalOrder,
    pub a: f64,
    pub b: f64,
    pub t_final: f64,
    /// Source `f(x, t)`.
    pub f: Fn2,
    /// Initial data `u(x, 0)`.
    pub u0: Fn1,
    /// Dirichlet data at `x = a` and `x = b`.
    pub phi1: Fn1,
    pub phi2: Fn1,
    /// Exact solution `(x, t)`, when known.
    pub exact: Option<Fn2>,
}

/// The 2D analogue on a rectangle, with a single boundary function
/// `phi(x, y, t)` for the whole Dirichlet boundary.
#[derive(Clone)]
pub struct Problem2D {
    pub vx: f64,
    pub vy: f64,
    pub dx: f64,
    pub dy: f64,
    pub alpha: FractionalOrder,
    pub beta: FractionalOrder,
    pub ax: f64,
    pub bx: f64,
    pub ay: f64,
    pub by: f64,
    pub t_final: f64,
    pub f: Fn3,
    pub u0: Fn2,
    pub phi: Fn3,
    pub exact: Option<Fn3>,
}

/// Time levels of a 1D run; each entry is `(t, full node vector)`.
/// The initial level is not stored (its error is identically zero).
pub struct Trajectory1D {
    pub grid: Grid1D,
    pub tau: f64,
    pub levels: Vec<(f64, Vec<f64>)>,
}

/// Time levels of a 2D run; each entry is `(t, full node matrix)` with
/// rows indexed by x and columns by y.
pub struct Trajectory2D {
    pub grid: Grid2D,
    pub tau: f64,
    pub levels: Vec<(f64, DMatrix<f64>)>,
}

fn check_problem_1d(p: &Problem1D, params: &WsgdParams) -> Result<()> {
    if p.v < 0.0 || p.d < 0.0 {
        return Err(WsgdError::InvalidGrid(format!(
            "coefficients must be nonnegative (v = {}, d = {})",
            p.v, p.d
        )));
    }
    if params.alpha().get() != p.alpha.get() {
        return Err(WsgdError::InvalidGrid(format!(
            "operator order {} does not match problem order {}",
            params.alpha().get(),
            p.alpha.get()
        )));
    }
    Ok(())
}

fn initial_state_1d(p: &Problem1D, grid: &Grid1D) -> Vec<f64> {
    let n = grid.n();
    let mut u: Vec<f64> = grid.nodes().iter().map(|&x| (p.u0)(x)).collect();
    u[0] = (p.phi1)(0.0);
    u[n] = (p.phi2)(0.0);
    u
}

fn solve_1d(
    p: &Problem1D,
    params: &WsgdParams,
    scheme: Scheme1D,
    n: usize,
    nt: usize,
    store: StorePolicy,
) -> Result<Trajectory1D> {
    check_problem_1d(p, params)?;
    let grid = Grid1D::new(p.a, p.b, n)?;
    let mut u = initial_state_1d(p, &grid);
    if nt == 0 {
        return Ok(Trajectory1D { grid, tau: 0.0, levels: vec![(0.0, u)] });
    }
    let tau = p.t_final / nt as f64;
    let m = n - 1;
    let delta = axis_operator(&grid, params, p.d, p.v);
    let identity = DMatrix::<f64>::identity(m, m);

    // Implicit: (I - tau delta) u^{n+1} = u^n + tau f^{n+1} + couplings.
    // CN: (I - tau/2 delta) u^{n+1} = (I + tau/2 delta) u^n
    //       + tau/2 (f^n + f^{n+1}) + couplings.
    let (system, explicit): (DMatrix<f64>, Option<DMatrix<f64>>) = match scheme {
        Scheme1D::Implicit => (&identity - tau * &delta.matrix, None),
        Scheme1D::CrankNicolson => (
            &identity - (tau / 2.0) * &delta.matrix,
            Some(&identity + (tau / 2.0) * &delta.matrix),
        ),
    };
    let solver = LuSolver::new(system)?;

    let xs = grid.interior_nodes();
    let mut levels = Vec::with_capacity(match store {
        StorePolicy::FinalOnly => 1,
        StorePolicy::AllLevels => nt,
    });
    for step in 0..nt {
        let t0 = step as f64 * tau;
        let t1 = t0 + tau;
        let u_int = DVector::from_fn(m, |i, _| u[i + 1]);
        let rhs = match scheme {
            Scheme1D::Implicit => {
                let mut r = u_int;
                for (i, &x) in xs.iter().enumerate() {
                    r[i] += tau * (p.f)(x, t1);
                }
                r + tau * (&delta.b_lo * (p.phi1)(t1) + &delta.b_hi * (p.phi2)(t1))
            }
            Scheme1D::CrankNicolson => {
                let mut r = explicit.as_ref().unwrap() * u_int;
                for (i, &x) in xs.iter().enumerate() {
                    r[i] += (tau / 2.0) * ((p.f)(x, t0) + (p.f)(x, t1));
                }
                r + (tau / 2.0)
                    * (&delta.b_lo * ((p.phi1)(t0) + (p.phi1)(t1))
                        + &delta.b_hi * ((p.phi2)(t0) + (p.phi2)(t1)))
            }
        };
        let sol = solver.solve(&rhs)?;
        for i in 0..m {
            u[i + 1] = sol[i];
        }
        u[0] = (p.phi1)(t1);
        u[n] = (p.phi2)(t1);
        if store == StorePolicy::AllLevels || step + 1 == nt {
            levels.push((t1, u.clone()));
        }
    }
    Ok(Trajectory1D { grid, tau, levels })
}

/// Backward-Euler time stepping of the 1D WSGD scheme.
pub fn solve_implicit_1d(
    p: &Problem1D,
    params: &WsgdParams,
    n: usize,
    nt: usize,
    store: StorePolicy,
) -> Result<Trajectory1D> {
    solve_1d(p, params, Scheme1D::Implicit, n, nt, store)
}

/// Crank–Nicolson time stepping of the 1D WSGD scheme.
pub fn solve_cn_1d(
    p: &Problem1D,
    params: &WsgdParams,
    n: usize,
    nt: usize,
    store: StorePolicy,
) -> Result<Trajectory1D> {
    solve_1d(p, params, Scheme1D::CrankNicolson, n, nt, store)
}

/// `delta_x` applied to every column of a full node matrix; result has the
/// interior x rows and all y columns.
fn apply_dx(op: &InteriorOp, u: &DMatrix<f64>) -> DMatrix<f64> {
    let nx = u.nrows() - 1;
    &op.matrix * u.rows(1, nx - 1) + &op.b_lo * u.row(0) + &op.b_hi * u.row(nx)
}

/// `delta_y` applied to every row; result has all x rows and the interior
/// y columns.
fn apply_dy(op: &InteriorOp, u: &DMatrix<f64>) -> DMatrix<f64> {
    let ny = u.ncols() - 1;
    u.columns(1, ny - 1) * op.matrix.transpose()
        + u.column(0) * op.b_lo.transpose()
        + u.column(ny) * op.b_hi.transpose()
}

/// One step of the factored 2D Crank–Nicolson scheme via the chosen ADI
/// splitting. See `solve_adi` for the boundary policy of the intermediate
/// variable.
#[allow(clippy::too_many_arguments)]
fn adi_step(
    p: &Problem2D,
    variant: AdiVariant,
    u: &DMatrix<f64>,
    dx_op: &InteriorOp,
    dy_op: &InteriorOp,
    sx: &LuSolver,
    sy: &LuSolver,
    grids: (&Grid1D, &Grid1D),
    tau: f64,
    t0: f64,
) -> Result<DMatrix<f64>> {
    let (gx, gy) = grids;
    let nx = gx.n();
    let ny = gy.n();
    let th = t0 + tau / 2.0;
    let t1 = t0 + tau;
    let half = tau / 2.0;

    let xs = gx.interior_nodes();
    let ys = gy.interior_nodes();
    let f_mid = DMatrix::from_fn(nx - 1, ny - 1, |j, m, | (p.f)(xs[j], ys[m], th));

    let dy_u = apply_dy(dy_op, u); // (nx+1) x (ny-1)
    let dy_u_int = dy_u.rows(1, nx - 1);
    let u_int = u.view((1, 1), (nx - 1, ny - 1));

    // Intermediate-variable values on the x-boundary lines, interior y:
    // V = (1 - tau/2 delta_y) U^{n+1} there, using the prescribed Dirichlet
    // data; Douglas adds tau/2 delta_y U^n.
    let edge_v = |x_edge: f64, u_edge_dy: nalgebra::RowDVector<f64>| -> nalgebra::RowDVector<f64> {
        let phi_edge =
            nalgebra::RowDVector::from_fn(ny + 1, |_, m| (p.phi)(x_edge, gy.node(m), t1));
        let dy_phi = apply_dy(dy_op, &DMatrix::from_rows(&[phi_edge.clone()]));
        let mut v = phi_edge.columns(1, ny - 1) - half * dy_phi.row(0);
        if variant == AdiVariant::Douglas {
            v += half * u_edge_dy;
        }
        v.into_owned()
    };
    let ve_a = edge_v(gx.a(), dy_u.row(0).into_owned());
    let ve_b = edge_v(gx.b(), dy_u.row(nx).into_owned());

    // First (x-implicit) sweep.
    let rhs1 = match variant {
        AdiVariant::PeacemanRachford => u_int + half * &dy_u_int + half * &f_mid,
        AdiVariant::Douglas => {
            let dx_u = apply_dx(dx_op, u);
            u_int + half * dx_u.columns(1, ny - 1) + tau * &dy_u_int + tau * &f_mid
        }
        AdiVariant::DYakonov => {
            // W = (1 + tau/2 delta_y) U^n at all x lines, then
            // RHS = (1 + tau/2 delta_x) W + tau F at the interior.
            let w = u.columns(1, ny - 1) + half * &dy_u;
            let dx_w = &dx_op.matrix * w.rows(1, nx - 1)
                + &dx_op.b_lo * w.row(0)
                + &dx_op.b_hi * w.row(nx);
            w.rows(1, nx - 1) + half * dx_w + tau * &f_mid
        }
    };
    let rhs1 = rhs1 + half * (&dx_op.b_lo * &ve_a + &dx_op.b_hi * &ve_b);
    let v_int = sx.solve_batch(&rhs1)?;

    // Second (y-implicit) sweep.
    let rhs2 = match variant {
        AdiVariant::PeacemanRachford => {
            let dx_v = &dx_op.matrix * &v_int + &dx_op.b_lo * &ve_a + &dx_op.b_hi * &ve_b;
            &v_int + half * dx_v + half * &f_mid
        }
        AdiVariant::Douglas => &v_int - half * dy_u_int,
        AdiVariant::DYakonov => v_int.clone(),
    };
    // Solve row systems by transposing to column batches.
    let mut rhs2_t = rhs2.transpose();
    let phi_lo = nalgebra::RowDVector::from_fn(nx - 1, |_, j| (p.phi)(xs[j], gy.a(), t1));
    let phi_hi = nalgebra::RowDVector::from_fn(nx - 1, |_, j| (p.phi)(xs[j], gy.b(), t1));
    rhs2_t += half * (&dy_op.b_lo * phi_lo + &dy_op.b_hi * phi_hi);
    let u_new_int = sy.solve_batch(&rhs2_t)?.transpose();

    let mut u_new = DMatrix::from_fn(nx + 1, ny + 1, |j, m| {
        (p.phi)(gx.node(j), gy.node(m), t1)
    });
    u_new.view_mut((1, 1), (nx - 1, ny - 1)).copy_from(&u_new_int);
    Ok(u_new)
}

/// Time-steps the 2D problem with the chosen ADI splitting.
///
/// The source is sampled at the half level `t_n + tau/2`. The intermediate
/// variable's x-boundary values follow the defining relation of the second
/// half-step applied to the Dirichlet data (plus the `tau/2 delta_y U^n`
/// correction for the Douglas form), which preserves the algebraic
/// equivalence of the Douglas and D'Yakonov factorizations with the
/// unsplit scheme.
#[allow(clippy::too_many_arguments)]
pub fn solve_adi(
    p: &Problem2D,
    variant: AdiVariant,
    params_x: &WsgdParams,
    params_y: &WsgdParams,
    nx: usize,
    ny: usize,
    nt: usize,
    store: StorePolicy,
) -> Result<Trajectory2D> {
    if p.vx < 0.0 || p.vy < 0.0 || p.dx < 0.0 || p.dy < 0.0 {
        return Err(WsgdError::InvalidGrid("coefficients must be nonnegative".into()));
    }
    if params_x.alpha().get() != p.alpha.get() || params_y.alpha().get() != p.beta.get() {
        return Err(WsgdError::InvalidGrid(
            "axis operator orders must match the problem orders".into(),
        ));
    }
    let gx = Grid1D::new(p.ax, p.bx, nx)?;
    let gy = Grid1D::new(p.ay, p.by, ny)?;

    let mut u = DMatrix::from_fn(nx + 1, ny + 1, |j, m| (p.u0)(gx.node(j), gy.node(m)));
    for j in 0..=nx {
        u[(j, 0)] = (p.phi)(gx.node(j), gy.a(), 0.0);
        u[(j, ny)] = (p.phi)(gx.node(j), gy.b(), 0.0);
    }
    for m in 0..=ny {
        u[(0, m)] = (p.phi)(gx.a(), gy.node(m), 0.0);
        u[(nx, m)] = (p.phi)(gx.b(), gy.node(m), 0.0);
    }
    if nt == 0 {
        return Ok(Trajectory2D {
            grid: Grid2D::new(gx, gy),
            tau: 0.0,
            levels: vec![(0.0, u)],
        });
    }
    let tau = p.t_final / nt as f64;

    let dx_op = axis_operator(&gx, params_x, p.dx, p.vx);
    let dy_op = axis_operator(&gy, params_y, p.dy, p.vy);
    let sx = LuSolver::new(
        DMatrix::identity(nx - 1, nx - 1) - (tau / 2.0) * &dx_op.matrix,
    )?;
    let sy = LuSolver::new(
        DMatrix::identity(ny - 1, ny - 1) - (tau / 2.0) * &dy_op.matrix,
    )?;

    let mut levels = Vec::with_capacity(match store {
        StorePolicy::FinalOnly => 1,
        StorePolicy::AllLevels => nt,
    });
    for step in 0..nt {
        let t0 = step as f64 * tau;
        u = adi_step(p, variant, &u, &dx_op, &dy_op, &sx, &sy, (&gx, &gy), tau, t0)?;
        if store == StorePolicy::AllLevels || step + 1 == nt {
            levels.push((t0 + tau, u.clone()));
        }
    }
    Ok(Trajectory2D { grid: Grid2D::new(gx, gy), tau, levels })
}
