//! Convergence studies: error norms, empirical rates, and table emission.

use crate::error::{Result, WsgdError};
use crate::problems::{ManufacturedCase1D, ManufacturedCase2D};
use crate::solvers::{
    solve_adi, solve_cn_1d, solve_implicit_1d, AdiVariant, Scheme1D, StorePolicy, Trajectory1D,
    Trajectory2D,
};
use crate::weights::WsgdParams;

/// Which levels the pointwise maximum norm ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorNorm {
    /// `max_j |u(x_j, T) - U_j^{Nt}|` over interior nodes.
    FinalTimeMax,
    /// Additionally maximizes over the time levels `n = 1..Nt`.
    AllLevelsMax,
}

impl std::str::FromStr for ErrorNorm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "final" | "final_time_max" => Ok(ErrorNorm::FinalTimeMax),
            "all" | "all_levels_max" => Ok(ErrorNorm::AllLevelsMax),
            other => Err(format!("unknown norm '{other}' (expected 'final' or 'all')")),
        }
    }
}

/// How the time step follows the grid step across a refinement study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TauRule {
    /// `tau = h`
    MatchH,
    /// `tau = h^2`
    MatchHSquared,
    /// `tau = c h`
    ScaledH(f64),
    /// A fixed `tau` independent of `h`.
    Fixed(f64),
}

impl TauRule {
    /// Number of time steps for one grid: `tau` is snapped so that
    /// `Nt tau = T` exactly.
    pub fn steps(&self, h: f64, t_final: f64) -> usize {
        let tau = match *self {
            TauRule::MatchH => h,
            TauRule::MatchHSquared => h * h,
            TauRule::ScaledH(c) => c * h,
            TauRule::Fixed(tau) => tau,
        };
        ((t_final / tau).round() as usize).max(1)
    }
}

impl std::str::FromStr for TauRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "h" => return Ok(TauRule::MatchH),
            "h2" | "h^2" => return Ok(TauRule::MatchHSquared),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("h/") {
            let d: f64 = rest
                .parse()
                .map_err(|_| format!("bad tau rule divisor in '{s}'"))?;
            if d <= 0.0 {
                return Err(format!("tau rule divisor must be positive in '{s}'"));
            }
            return Ok(TauRule::ScaledH(1.0 / d));
        }
        if let Some(rest) = s.strip_prefix("fixed=") {
            let tau: f64 = rest.parse().map_err(|_| format!("bad fixed tau in '{s}'"))?;
            if tau <= 0.0 {
                return Err(format!("fixed tau must be positive in '{s}'"));
            }
            return Ok(TauRule::Fixed(tau));
        }
        Err(format!("unknown tau rule '{s}' (expected h, h2, h/<d>, or fixed=<tau>)"))
    }
}

/// Maximum-norm error of a 1D trajectory against the exact solution.
pub fn max_error_1d(
    traj: &Trajectory1D,
    exact: Option<&crate::solvers::Fn2>,
    norm: ErrorNorm,
) -> Result<f64> {
    let exact = exact.ok_or(WsgdError::MissingExact)?;
    let n = traj.grid.n();
    let level_err = |t: f64, u: &[f64]| -> f64 {
        (1..n)
            .map(|j| (u[j] - exact(traj.grid.node(j), t)).abs())
            .fold(0.0, f64::max)
    };
    match norm {
        ErrorNorm::FinalTimeMax => {
            let (t, u) = traj.levels.last().ok_or(WsgdError::MissingExact)?;
            Ok(level_err(*t, u))
        }
        ErrorNorm::AllLevelsMax => Ok(traj
            .levels
            .iter()
            .map(|(t, u)| level_err(*t, u))
            .fold(0.0, f64::max)),
    }
}

/// Maximum-norm error of a 2D trajectory against the exact solution.
pub fn max_error_2d(
    traj: &Trajectory2D,
    exact: Option<&crate::solvers::Fn3>,
    norm: ErrorNorm,
) -> Result<f64> {
    let exact = exact.ok_or(WsgdError::MissingExact)?;
    let nx = traj.grid.gx.n();
    let ny = traj.grid.gy.n();
    let level_err = |t: f64, u: &nalgebra::DMatrix<f64>| -> f64 {
        let mut e: f64 = 0.0;
        for j in 1..nx {
            for m in 1..ny {
                e = e.max((u[(j, m)] - exact(traj.grid.gx.node(j), traj.grid.gy.node(m), t)).abs());
            }
        }
        e
    };
    match norm {
        ErrorNorm::FinalTimeMax => {
            let (t, u) = traj.levels.last().ok_or(WsgdError::MissingExact)?;
            Ok(level_err(*t, u))
        }
        ErrorNorm::AllLevelsMax => Ok(traj
            .levels
            .iter()
            .map(|(t, u)| level_err(*t, u))
            .fold(0.0, f64::max)),
    }
}

/// One refinement level of a convergence study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub tau: f64,
    pub error: f64,
    /// `log2(error_prev / error)`; absent on the first row.
    pub rate: Option<f64>,
}

fn check_refinement(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(WsgdError::InvalidGrid("empty grid list".into()));
    }
    for w in n_list.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(WsgdError::InvalidGrid(format!(
                "grid sizes must double between rows, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn attach_rates(mut rows: Vec<ConvergenceRow>) -> Vec<ConvergenceRow> {
    for i in 1..rows.len() {
        rows[i].rate = Some((rows[i - 1].error / rows[i].error).log2());
    }
    rows
}

fn store_for(norm: ErrorNorm) -> StorePolicy {
    match norm {
        ErrorNorm::FinalTimeMax => StorePolicy::FinalOnly,
        ErrorNorm::AllLevelsMax => StorePolicy::AllLevels,
    }
}

/// Runs a 1D scheme over a doubling sequence of grids and reports errors
/// and empirical rates.
pub fn convergence_study_1d(
    case: &ManufacturedCase1D,
    scheme: Scheme1D,
    params: &WsgdParams,
    n_list: &[usize],
    tau_rule: TauRule,
    norm: ErrorNorm,
) -> Result<Vec<ConvergenceRow>> {
    check_refinement(n_list)?;
    let p = &case.problem;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let h = (p.b - p.a) / n as f64;
        let nt = tau_rule.steps(h, p.t_final);
        let traj = match scheme {
            Scheme1D::Implicit => solve_implicit_1d(p, params, n, nt, store_for(norm))?,
            Scheme1D::CrankNicolson => solve_cn_1d(p, params, n, nt, store_for(norm))?,
        };
        let error = max_error_1d(&traj, p.exact.as_ref(), norm)?;
        rows.push(ConvergenceRow { h, tau: traj.tau, error, rate: None });
    }
    Ok(attach_rates(rows))
}

/// 2D analogue of [`convergence_study_1d`] with square grids `nx = ny = n`.
pub fn convergence_study_2d(
    case: &ManufacturedCase2D,
    variant: AdiVariant,
    params_x: &WsgdParams,
    params_y: &WsgdParams,
    n_list: &[usize],
    tau_rule: TauRule,
    norm: ErrorNorm,
) -> Result<Vec<ConvergenceRow>> {
    check_refinement(n_list)?;
    let p = &case.problem;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let h = (p.bx - p.ax) / n as f64;
        let nt = tau_rule.steps(h, p.t_final);
        let traj = solve_adi(p, variant, params_x, params_y, n, n, nt, store_for(norm))?;
        let error = max_error_2d(&traj, p.exact.as_ref(), norm)?;
        rows.push(ConvergenceRow { h, tau: traj.tau, error, rate: None });
    }
    Ok(attach_rates(rows))
}

/// Output layout for [`emit_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(format!("unknown table format '{other}'")),
        }
    }
}

/// Renders rows with errors in 3-significant-digit scientific notation and
/// rates with two decimals ("-" when absent).
pub fn emit_table(rows: &[ConvergenceRow], format: TableFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(WsgdError::InvalidGrid("no rows to emit".into()));
    }
    let rate_str =
        |r: Option<f64>| r.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("h,tau,error,rate\n");
            for row in rows {
                out.push_str(&format!(
                    "{},{},{:.2e},{}\n",
                    row.h,
                    row.tau,
                    row.error,
                    rate_str(row.rate)
                ));
            }
        }
        TableFormat::Markdown => {
            out.push_str("| h | tau | error | rate |\n|---|---|---|---|\n");
            for row in rows {
                out.push_str(&format!(
                    "| {} | {} | {:.2e} | {} |\n",
                    row.h,
                    row.tau,
                    row.error,
                    rate_str(row.rate)
                ));
            }
        }
    }
    Ok(out)
}

/// Parses CSV produced by [`emit_table`] back into rows (rates included).
pub fn parse_table_csv(text: &str) -> Result<Vec<ConvergenceRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("h,tau,error,rate") => {}
        other => {
            return Err(WsgdError::InvalidGrid(format!(
                "bad table header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(WsgdError::InvalidGrid(format!("bad table row: {line}")));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| WsgdError::InvalidGrid(format!("bad number '{s}' in row: {line}")))
        };
        rows.push(ConvergenceRow {
            h: parse(parts[0])?,
            tau: parse(parts[1])?,
            error: parse(parts[2])?,
            rate: if parts[3] == "-" { None } else { Some(parse(parts[3])?) },
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::example1;
    use crate::weights::{params_from_set, FractionalOrder, ParamSet};

    fn fo(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn error_norm_on_synthetic_trajectories() {
        let case = example1(fo(1.5)).unwrap();
        let p = &case.problem;
        let grid = crate::operators::Grid1D::new(0.0, 1.0, 10).unwrap();
        let exact = p.exact.as_ref().unwrap().clone();
        let sample = |t: f64| -> Vec<f64> {
            grid.nodes().iter().map(|&x| exact(x, t)).collect()
        };
        // Exact samples give zero error.
        let traj = Trajectory1D {
            grid,
            tau: 0.5,
            levels: vec![(0.5, sample(0.5)), (1.0, sample(1.0))],
        };
        assert_eq!(max_error_1d(&traj, p.exact.as_ref(), ErrorNorm::FinalTimeMax).unwrap(), 0.0);
        assert_eq!(max_error_1d(&traj, p.exact.as_ref(), ErrorNorm::AllLevelsMax).unwrap(), 0.0);

        // A constant offset on one interior level is seen only by the
        // all-levels norm.
        let mut off = sample(0.5);
        for v in off.iter_mut().skip(1).take(9) {
            *v += 1e-3;
        }
        let traj = Trajectory1D { grid, tau: 0.5, levels: vec![(0.5, off), (1.0, sample(1.0))] };
        assert_eq!(max_error_1d(&traj, p.exact.as_ref(), ErrorNorm::FinalTimeMax).unwrap(), 0.0);
        let e = max_error_1d(&traj, p.exact.as_ref(), ErrorNorm::AllLevelsMax).unwrap();
        assert!((e - 1e-3).abs() <= 1e-15);

        // Missing exact solution is an error.
        let traj = Trajectory1D { grid, tau: 0.5, levels: vec![(1.0, sample(1.0))] };
        assert!(matches!(
            max_error_1d(&traj, None, ErrorNorm::FinalTimeMax),
            Err(WsgdError::MissingExact)
        ));
    }

    #[test]
    fn zero_steps_returns_zero_error() {
        let case = example1(fo(1.5)).unwrap();
        let params = params_from_set(ParamSet::S1, 1.0, fo(1.5));
        let traj = crate::solvers::solve_implicit_1d(
            &case.problem,
            &params,
            10,
            0,
            StorePolicy::FinalOnly,
        )
        .unwrap();
        let e = max_error_1d(&traj, case.problem.exact.as_ref(), ErrorNorm::FinalTimeMax).unwrap();
        assert!(e <= 1e-15);
    }

    #[test]
    fn refinement_precondition_enforced() {
        let case = example1(fo(1.5)).unwrap();
        let params = params_from_set(ParamSet::S1, 0.75, fo(1.5));
        assert!(convergence_study_1d(
            &case,
            Scheme1D::CrankNicolson,
            &params,
            &[10, 30],
            TauRule::MatchH,
            ErrorNorm::FinalTimeMax,
        )
        .is_err());
    }

    #[test]
    fn cn_halving_factor_in_range() {
        let case = example1(fo(1.7)).unwrap();
        let params = params_from_set(ParamSet::S2, 0.0, fo(1.7));
        let rows = convergence_study_1d(
            &case,
            Scheme1D::CrankNicolson,
            &params,
            &[16, 32, 64],
            TauRule::MatchH,
            ErrorNorm::FinalTimeMax,
        )
        .unwrap();
        for w in rows.windows(2) {
            let factor = w[0].error / w[1].error;
            assert!((3.2..=5.0).contains(&factor), "halving factor {factor}");
        }
        // Rates are recorded and consistent with the factors.
        assert!(rows[0].rate.is_none());
        assert!(rows[1].rate.is_some());
    }

    #[test]
    fn tau_rules() {
        assert_eq!(TauRule::MatchH.steps(0.1, 1.0), 10);
        assert_eq!(TauRule::MatchHSquared.steps(0.1, 1.0), 100);
        assert_eq!(TauRule::ScaledH(0.5).steps(0.1, 1.0), 20);
        assert_eq!(TauRule::Fixed(0.25).steps(0.1, 1.0), 4);
        assert_eq!("h".parse::<TauRule>().unwrap(), TauRule::MatchH);
        assert_eq!("h2".parse::<TauRule>().unwrap(), TauRule::MatchHSquared);
        assert_eq!("h/2".parse::<TauRule>().unwrap(), TauRule::ScaledH(0.5));
        assert_eq!("fixed=0.01".parse::<TauRule>().unwrap(), TauRule::Fixed(0.01));
        assert!("h3".parse::<TauRule>().is_err());
    }

    #[test]
    fn table_emission_and_round_trip() {
        let one = vec![ConvergenceRow { h: 0.1, tau: 0.01, error: 5.63e-4, rate: None }];
        let csv = emit_table(&one, TableFormat::Csv).unwrap();
        assert!(csv.ends_with(",-\n"), "{csv}");

        let rows = vec![
            ConvergenceRow { h: 0.1, tau: 0.1, error: 4.0e-3, rate: None },
            ConvergenceRow { h: 0.05, tau: 0.05, error: 1.0e-3, rate: Some(2.0) },
        ];
        let csv = emit_table(&rows, TableFormat::Csv).unwrap();
        assert!(csv.contains("2.00"));
        let parsed = parse_table_csv(&csv).unwrap();
        assert_eq!(parsed.len(), 2);
        for (a, b) in rows.iter().zip(&parsed) {
            assert_eq!(a.h, b.h);
            assert_eq!(a.tau, b.tau);
            // Errors survive at printed (3 significant digit) precision.
            assert!((a.error - b.error).abs() <= 5e-3 * a.error.abs());
            assert_eq!(a.rate.is_some(), b.rate.is_some());
        }

        let md = emit_table(&rows, TableFormat::Markdown).unwrap();
        assert!(md.starts_with("| h | tau | error | rate |"));
        assert!(emit_table(&[], TableFormat::Csv).is_err());
    }
}
