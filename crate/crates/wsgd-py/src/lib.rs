//! Python bindings for the fractional advection–diffusion toolkit.
//!
//! Thin wrappers over the core crate: weight construction, the stability
//! symbol and amplification factors, region scans, and the example
//! convergence studies. Parameter sets are passed as the strings
//! "S1"/"S2"/"S3", schemes as "implicit"/"cn"/"pr"/"douglas"/"dyakonov".

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use wsgd::{
    convergence_study_1d, convergence_study_2d, example1, example2, uniform_grid, AdiVariant,
    CanonicalTriple, ErrorNorm, FractionalOrder, ParamSet, Scheme1D, TauRule, ThetaGrid,
    WsgdParams,
};

fn value_err(msg: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

fn order(alpha: f64) -> PyResult<FractionalOrder> {
    FractionalOrder::new(alpha).map_err(value_err)
}

fn set_from(name: &str) -> PyResult<ParamSet> {
    name.parse().map_err(value_err)
}

fn params(set: &str, free: f64, alpha: f64) -> PyResult<WsgdParams> {
    Ok(wsgd::params_from_set(set_from(set)?, free, order(alpha)?))
}

fn triple_from(index: u32) -> PyResult<CanonicalTriple> {
    match index {
        1 => Ok(CanonicalTriple::First),
        2 => Ok(CanonicalTriple::Second),
        3 => Ok(CanonicalTriple::Third),
        other => Err(value_err(format!("canonical triple index must be 1, 2, or 3, got {other}"))),
    }
}

/// Grünwald weights w_0..w_{count-1} for order `alpha`.
#[pyfunction]
fn grunwald_weights(alpha: f64, count: usize) -> PyResult<Vec<f64>> {
    Ok(wsgd::grunwald_weights(order(alpha)?, count).w)
}

/// The (lambda1, lambda2, lambda3) triple of a family member.
#[pyfunction]
fn params_from_set(set: &str, free: f64, alpha: f64) -> PyResult<(f64, f64, f64)> {
    let [l1, l2, l3] = params(set, free, alpha)?.lambda();
    Ok((l1, l2, l3))
}

/// Fused stencil weights g_0..g_{count-1} of a family member.
#[pyfunction]
fn wsgd_weights(set: &str, free: f64, alpha: f64, count: usize) -> PyResult<Vec<f64>> {
    Ok(wsgd::wsgd_weights(&params(set, free, alpha)?, count).g)
}

/// Leading second-order error constant of canonical triple 1, 2, or 3.
#[pyfunction]
fn error_constant(alpha: f64, triple: u32) -> PyResult<f64> {
    Ok(wsgd::error_constant(order(alpha)?, triple_from(triple)?))
}

/// The trigonometric stability symbol Q(theta) of a family member.
#[pyfunction]
fn eval_q(theta: f64, set: &str, free: f64, alpha: f64) -> PyResult<f64> {
    Ok(wsgd::eval_q(theta, &params(set, free, alpha)?))
}

/// Backward-Euler amplification-factor modulus at one Fourier angle.
#[pyfunction]
fn amp_implicit(theta: f64, nu: f64, lam: f64, set: &str, free: f64, alpha: f64) -> PyResult<f64> {
    let c = wsgd::CourantNumbers::new(nu, lam).map_err(value_err)?;
    Ok(wsgd::amp_implicit(theta, c, &params(set, free, alpha)?))
}

/// Crank–Nicolson amplification-factor modulus at one Fourier angle.
#[pyfunction]
fn amp_cn(theta: f64, nu: f64, lam: f64, set: &str, free: f64, alpha: f64) -> PyResult<f64> {
    let c = wsgd::CourantNumbers::new(nu, lam).map_err(value_err)?;
    Ok(wsgd::amp_cn(theta, c, &params(set, free, alpha)?))
}

/// 2D ADI amplification-factor modulus at one Fourier angle pair.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn amp_2d(
    theta_x: f64,
    theta_y: f64,
    nu_x: f64,
    lam_x: f64,
    nu_y: f64,
    lam_y: f64,
    set_x: &str,
    free_x: f64,
    alpha: f64,
    set_y: &str,
    free_y: f64,
    beta: f64,
) -> PyResult<f64> {
    let cx = wsgd::CourantNumbers::new(nu_x, lam_x).map_err(value_err)?;
    let cy = wsgd::CourantNumbers::new(nu_y, lam_y).map_err(value_err)?;
    Ok(wsgd::amp_2d(
        theta_x,
        theta_y,
        cx,
        cy,
        &params(set_x, free_x, alpha)?,
        &params(set_y, free_y, beta)?,
    ))
}

/// max |Q| over a (theta, alpha) product grid for one family member.
#[pyfunction]
#[pyo3(signature = (set, free, theta_count = 2001, alpha_lo = 1.0, alpha_hi = 2.0, alpha_count = 101))]
fn max_abs_q(
    set: &str,
    free: f64,
    theta_count: usize,
    alpha_lo: f64,
    alpha_hi: f64,
    alpha_count: usize,
) -> PyResult<f64> {
    let theta = ThetaGrid::uniform(theta_count).map_err(value_err)?;
    let alphas = uniform_grid(alpha_lo, alpha_hi, alpha_count);
    Ok(wsgd::max_abs_q(set_from(set)?, free, &theta, &alphas))
}

/// Sub-intervals of [lo, hi] on which Q stays nonpositive for every
/// sampled (theta, alpha); returned as (start, end) pairs.
#[pyfunction]
#[pyo3(signature = (set, lo, hi, step, theta_count = 2001, alpha_lo = 1.05, alpha_hi = 1.95, alpha_count = 19))]
#[allow(clippy::too_many_arguments)]
fn scan_region(
    set: &str,
    lo: f64,
    hi: f64,
    step: f64,
    theta_count: usize,
    alpha_lo: f64,
    alpha_hi: f64,
    alpha_count: usize,
) -> PyResult<Vec<(f64, f64)>> {
    let theta = ThetaGrid::uniform(theta_count).map_err(value_err)?;
    let alphas = uniform_grid(alpha_lo, alpha_hi, alpha_count);
    wsgd::scan_region(set_from(set)?, (lo, hi), step, &theta, &alphas).map_err(value_err)
}

fn norm_from(name: &str) -> PyResult<ErrorNorm> {
    name.parse().map_err(value_err)
}

fn tau_rule_from(name: &str) -> PyResult<TauRule> {
    name.parse().map_err(value_err)
}

type Row = (f64, f64, f64, Option<f64>);

fn rows_out(rows: Vec<wsgd::ConvergenceRow>) -> Vec<Row> {
    rows.into_iter().map(|r| (r.h, r.tau, r.error, r.rate)).collect()
}

/// Convergence study of the 1D example; rows are (h, tau, error, rate).
#[pyfunction]
#[pyo3(signature = (scheme, set, free, alpha, n_list, tau_rule = "h", norm = "final"))]
fn converge_1d(
    scheme: &str,
    set: &str,
    free: f64,
    alpha: f64,
    n_list: Vec<usize>,
    tau_rule: &str,
    norm: &str,
) -> PyResult<Vec<Row>> {
    let scheme = match scheme.trim().to_ascii_lowercase().as_str() {
        "implicit" => Scheme1D::Implicit,
        "cn" | "crank-nicolson" => Scheme1D::CrankNicolson,
        other => return Err(value_err(format!("unknown 1D scheme '{other}'"))),
    };
    let p = params(set, free, alpha)?;
    let case = example1(p.alpha()).map_err(value_err)?;
    let rows = convergence_study_1d(
        &case,
        scheme,
        &p,
        &n_list,
        tau_rule_from(tau_rule)?,
        norm_from(norm)?,
    )
    .map_err(value_err)?;
    Ok(rows_out(rows))
}

/// Convergence study of the 2D example; rows are (h, tau, error, rate).
#[pyfunction]
#[pyo3(signature = (variant, set_x, free_x, alpha, set_y, free_y, beta, n_list, tau_rule = "h", norm = "final"))]
#[allow(clippy::too_many_arguments)]
fn converge_2d(
    variant: &str,
    set_x: &str,
    free_x: f64,
    alpha: f64,
    set_y: &str,
    free_y: f64,
    beta: f64,
    n_list: Vec<usize>,
    tau_rule: &str,
    norm: &str,
) -> PyResult<Vec<Row>> {
    let variant = match variant.trim().to_ascii_lowercase().as_str() {
        "pr" | "peaceman-rachford" => AdiVariant::PeacemanRachford,
        "douglas" => AdiVariant::Douglas,
        "dyakonov" => AdiVariant::DYakonov,
        other => return Err(value_err(format!("unknown ADI variant '{other}'"))),
    };
    let px = params(set_x, free_x, alpha)?;
    let py = params(set_y, free_y, beta)?;
    let case = example2(px.alpha(), py.alpha()).map_err(value_err)?;
    let rows = convergence_study_2d(
        &case,
        variant,
        &px,
        &py,
        &n_list,
        tau_rule_from(tau_rule)?,
        norm_from(norm)?,
    )
    .map_err(value_err)?;
    Ok(rows_out(rows))
}

#[pymodule]
fn wsgd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(grunwald_weights, m)?)?;
    m.add_function(wrap_pyfunction!(params_from_set, m)?)?;
    m.add_function(wrap_pyfunction!(wsgd_weights, m)?)?;
    m.add_function(wrap_pyfunction!(error_constant, m)?)?;
    m.add_function(wrap_pyfunction!(eval_q, m)?)?;
    m.add_function(wrap_pyfunction!(amp_implicit, m)?)?;
    m.add_function(wrap_pyfunction!(amp_cn, m)?)?;
    m.add_function(wrap_pyfunction!(amp_2d, m)?)?;
    m.add_function(wrap_pyfunction!(max_abs_q, m)?)?;
    m.add_function(wrap_pyfunction!(scan_region, m)?)?;
    m.add_function(wrap_pyfunction!(converge_1d, m)?)?;
    m.add_function(wrap_pyfunction!(converge_2d, m)?)?;
    Ok(())
}
