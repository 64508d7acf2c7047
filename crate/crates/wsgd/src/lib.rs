//! Solvers for one- and two-dimensional space-fractional advection–diffusion
//! equations built on second-order weighted-and-shifted Grünwald difference
//! (WSGD) operators, together with a von Neumann stability analyzer for the
//! schemes' amplification factors.
//!
//! Module map:
//! - [`weights`]: Grünwald weights, the WSGD weight systems (sets S1/S2/S3
//!   and general shifts), and the fused stencil weights.
//! - [`stability`]: the trigonometric symbol `Q`, amplification factors,
//!   max-|Q| tables, and free-parameter region scans.
//! - [`operators`]: dense left/right WSGD derivative matrices and the
//!   central advection difference on uniform grids.
//! - [`solvers`]: 1D implicit and Crank–Nicolson stepping; 2D Crank–Nicolson
//!   via Peaceman–Rachford, Douglas, and D'Yakonov ADI splittings.
//! - [`problems`]: manufactured cases with closed-form solutions.
//! - [`harness`]: error norms, convergence studies, and table emission.

pub mod error;
pub mod harness;
pub mod operators;
pub mod problems;
pub mod solvers;
pub mod stability;
pub mod weights;

pub use error::{Result, WsgdError};
pub use harness::{
    convergence_study_1d, convergence_study_2d, emit_table, max_error_1d, max_error_2d,
    parse_table_csv, ConvergenceRow, ErrorNorm, TableFormat, TauRule,
};
pub use operators::{
    apply_left_wsgd, apply_right_wsgd, assemble_diffusion_matrix, axis_operator,
    central_advection, central_advection_matrix, Direction, FracOperatorMatrix, Grid1D, Grid2D,
    InteriorOp,
};
pub use problems::{example1, example2, rl_monomial, ManufacturedCase1D, ManufacturedCase2D};
pub use solvers::{
    solve_adi, solve_cn_1d, solve_implicit_1d, AdiVariant, LuSolver, Problem1D, Problem2D,
    Scheme1D, StorePolicy, Trajectory1D, Trajectory2D,
};
pub use stability::{
    amp_2d, amp_cn, amp_implicit, emit_q_curves, eval_q, eval_q_raw, max_abs_q, scan_region,
    uniform_grid, CourantNumbers, StabilityReport, ThetaGrid,
};
pub use weights::{
    error_constant, fused_weights, grunwald_weights, params_from_set, params_general,
    wsgd_weights, CanonicalTriple, FractionalOrder, GrunwaldSeq, ParamSet, ShiftSet, WsgdParams,
    WsgdSeq,
};
