//! Von Neumann stability analysis of the WSGD schemes.
//!
//! The combined left+right WSGD diffusion stencil has the real trigonometric
//! symbol
//!
//! ```text
//! Q(t, a; l1, l2, l3) = (2 sin(t/2))^a [ l1 cos(a(t-pi)/2 - t)
//!                                      + l2 cos(a(t-pi)/2)
//!                                      + l3 cos(a(t-pi)/2 + t) ]
//! ```
//!
//! Non-positivity of `Q` over `t in [0, pi]` (for every order in the range
//! of interest) makes both the implicit and the Crank–Nicolson schemes
//! unconditionally von Neumann stable. The admissible free-parameter
//! regions of the sets S1/S2/S3 are found by numeric sampling, matching the
//! "by numerical test" methodology the closed forms do not replace.

use crate::error::{Result, WsgdError};
use crate::weights::{ParamSet, WsgdParams};

/// A uniform grid on `[0, pi]` including both endpoints.
#[derive(Clone, Debug)]
pub struct ThetaGrid {
    values: Vec<f64>,
}

impl ThetaGrid {
    pub fn uniform(count: usize) -> Result<Self> {
        if count < 2 {
            return Err(WsgdError::InvalidGrid(format!(
                "theta grid needs at least 2 points, got {count}"
            )));
        }
        let m = count - 1;
        let values =
            (0..=m).map(|i| std::f64::consts::PI * i as f64 / m as f64).collect();
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Uniform grid with `count` points on `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let m = (count - 1) as f64;
    (0..count).map(|i| lo + (hi - lo) * i as f64 / m).collect()
}

/// The dimensionless scheme ratios: `nu = v tau / h` (advection) and
/// `lam = d tau / h^alpha` (diffusion).
#[derive(Clone, Copy, Debug)]
pub struct CourantNumbers {
    pub nu: f64,
    pub lam: f64,
}

impl CourantNumbers {
    pub fn new(nu: f64, lam: f64) -> Result<Self> {
        if lam < 0.0 {
            return Err(WsgdError::InvalidGrid(format!(
                "diffusion number must be nonnegative, got {lam}"
            )));
        }
        Ok(Self { nu, lam })
    }
}

/// The three cosine basis values of `Q` at one `(theta, alpha)` sample, so
/// scans over many weight triples reuse the trigonometric work.
#[inline]
fn q_basis(theta: f64, a: f64) -> [f64; 3] {
    let amp = (2.0 * (theta / 2.0).sin()).powf(a);
    let phase = a * (theta - std::f64::consts::PI) / 2.0;
    [amp * (phase - theta).cos(), amp * phase.cos(), amp * (phase + theta).cos()]
}

#[inline]
fn q_from_basis(basis: &[f64; 3], lambda: &[f64; 3]) -> f64 {
    lambda[0] * basis[0] + lambda[1] * basis[1] + lambda[2] * basis[2]
}

/// The symbol `Q(theta, alpha; lambda)` of the combined diffusion stencil.
pub fn eval_q(theta: f64, params: &WsgdParams) -> f64 {
    let basis = q_basis(theta, params.alpha().get());
    q_from_basis(&basis, &params.lambda())
}

/// `Q` for a raw `(alpha, lambda)` pair, without the constraint checks;
/// used by grid scans where `alpha` varies continuously.
pub fn eval_q_raw(theta: f64, alpha: f64, lambda: &[f64; 3]) -> f64 {
    q_from_basis(&q_basis(theta, alpha), lambda)
}

/// Modulus of the implicit scheme's amplification factor,
/// `1 / sqrt((1 - (lam/2) Q)^2 + (nu sin t)^2)`.
pub fn amp_implicit(theta: f64, c: CourantNumbers, params: &WsgdParams) -> f64 {
    let q = eval_q(theta, params);
    let re = 1.0 - 0.5 * c.lam * q;
    let im = c.nu * theta.sin();
    1.0 / (re * re + im * im).sqrt()
}

/// Modulus of the Crank–Nicolson scheme's amplification factor,
/// `|rho|^2 = ((1 + (lam/2) Q)^2 + (nu sin t)^2) / ((1 - (lam/2) Q)^2 + (nu sin t)^2)`.
pub fn amp_cn(theta: f64, c: CourantNumbers, params: &WsgdParams) -> f64 {
    let q = eval_q(theta, params);
    let half = 0.5 * c.lam * q;
    let im = c.nu * theta.sin();
    let num = (1.0 + half) * (1.0 + half) + im * im;
    let den = (1.0 - half) * (1.0 - half) + im * im;
    (num / den).sqrt()
}

/// Modulus of the 2D ADI amplification factor; the 2D factor is the exact
/// product of the two 1D Crank–Nicolson factors.
pub fn amp_2d(
    theta_x: f64,
    theta_y: f64,
    cx: CourantNumbers,
    cy: CourantNumbers,
    px: &WsgdParams,
    py: &WsgdParams,
) -> f64 {
    amp_cn(theta_x, cx, px) * amp_cn(theta_y, cy, py)
}

/// Tolerance below which a sampled `Q` counts as non-positive, absorbing
/// roundoff at angles where `Q = 0` analytically.
pub const Q_NONPOS_TOL: f64 = 1e-12;

/// Sampled `Q` values for a fixed triple, with summary statistics.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub params: WsgdParams,
    /// `(theta, alpha, Q)` samples.
    pub samples: Vec<(f64, f64, f64)>,
    pub q_max_abs: f64,
    pub q_all_nonpositive: bool,
}

impl StabilityReport {
    pub fn sample(params: &WsgdParams, theta_grid: &ThetaGrid) -> Self {
        let a = params.alpha().get();
        let lambda = params.lambda();
        let mut samples = Vec::with_capacity(theta_grid.len());
        let mut q_max_abs: f64 = 0.0;
        let mut all_nonpos = true;
        for &t in theta_grid.values() {
            let q = eval_q_raw(t, a, &lambda);
            q_max_abs = q_max_abs.max(q.abs());
            all_nonpos &= q <= Q_NONPOS_TOL;
            samples.push((t, a, q));
        }
        Self { params: *params, samples, q_max_abs, q_all_nonpositive: all_nonpos }
    }
}

/// `max |Q|` over a `(theta, alpha)` product grid for one family member.
/// The default resolution is 2001 theta-points by 101
/// alpha-points on `[0, pi] x [1, 2]`.
pub fn max_abs_q(
    set: ParamSet,
    free_value: f64,
    theta_grid: &ThetaGrid,
    alpha_grid: &[f64],
) -> f64 {
    let mut max_abs: f64 = 0.0;
    for &a in alpha_grid {
        let lambda = set_lambda(set, free_value, a);
        for &t in theta_grid.values() {
            max_abs = max_abs.max(eval_q_raw(t, a, &lambda).abs());
        }
    }
    max_abs
}

/// Closed-form triple for a set at a raw alpha (the scan grids include
/// alpha = 1 where `FractionalOrder` would reject construction).
fn set_lambda(set: ParamSet, free: f64, a: f64) -> [f64; 3] {
    match set {
        ParamSet::S1 => [free, (2.0 + a) / 2.0 - 2.0 * free, free - a / 2.0],
        ParamSet::S2 => [(2.0 + a) / 4.0 - free / 2.0, free, (2.0 - a) / 4.0 - free / 2.0],
        ParamSet::S3 => [a / 2.0 + free, (2.0 - a) / 2.0 - 2.0 * free, free],
    }
}

/// Scans a free-parameter interval and returns the maximal closed
/// sub-intervals (at the sampling resolution) on which `Q <= 1e-12` for
/// every sampled `(theta, alpha)`.
pub fn scan_region(
    set: ParamSet,
    interval: (f64, f64),
    step: f64,
    theta_grid: &ThetaGrid,
    alpha_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if step <= 0.0 {
        return Err(WsgdError::InvalidGrid(format!("scan step must be positive, got {step}")));
    }
    let (lo, hi) = interval;
    if hi < lo {
        return Err(WsgdError::InvalidGrid(format!("empty scan interval [{lo}, {hi}]")));
    }
    // Precompute the cosine basis once per (alpha, theta) sample; each free
    // value is then three multiply-adds per sample.
    let basis: Vec<Vec<[f64; 3]>> = alpha_grid
        .iter()
        .map(|&a| theta_grid.values().iter().map(|&t| q_basis(t, a)).collect())
        .collect();

    let count = ((hi - lo) / step).round() as usize + 1;
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut current: Option<(f64, f64)> = None;
    for i in 0..count {
        let free = lo + step * i as f64;
        let mut ok = true;
        'outer: for (ai, &a) in alpha_grid.iter().enumerate() {
            let lambda = set_lambda(set, free, a);
            for b in &basis[ai] {
                if q_from_basis(b, &lambda) > Q_NONPOS_TOL {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            current = Some(match current {
                Some((s, _)) => (s, free),
                None => (free, free),
            });
        } else if let Some(iv) = current.take() {
            intervals.push(iv);
        }
    }
    if let Some(iv) = current {
        intervals.push(iv);
    }
    Ok(intervals)
}

/// Emits plot-ready CSV for the `Q` curves of several family members at
/// several orders: header `theta,alpha,label,Q`, one row per sample,
/// values with 17 significant digits.
pub fn emit_q_curves(
    members: &[(ParamSet, f64)],
    alphas: &[f64],
    theta_grid: &ThetaGrid,
) -> String {
    let mut out = String::from("theta,alpha,label,Q\n");
    for &(set, free) in members {
        for &a in alphas {
            let lambda = set_lambda(set, free, a);
            for &t in theta_grid.values() {
                let q = eval_q_raw(t, a, &lambda);
                out.push_str(&format!("{t:.16e},{a:.16e},{set}({free}),{q:.16e}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{params_from_set, CanonicalTriple, FractionalOrder};
    use approx::assert_relative_eq;

    fn fo(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn q_vanishes_at_zero() {
        for &(set, free) in &[(ParamSet::S1, 1.0), (ParamSet::S2, -2.0), (ParamSet::S3, 0.01)] {
            let p = params_from_set(set, free, fo(1.5));
            assert_eq!(eval_q(0.0, &p), 0.0);
        }
    }

    #[test]
    fn q_closed_forms_at_alpha_one() {
        // At alpha = 1 the second canonical triple gives -2 sin^4(t/2) and
        // the first gives identically zero.
        let grid = ThetaGrid::uniform(1001).unwrap();
        for &t in grid.values() {
            let second = [(2.0 + 1.0) / 4.0, 0.0, (2.0 - 1.0) / 4.0];
            let q = eval_q_raw(t, 1.0, &second);
            let expect = -2.0 * (t / 2.0).sin().powi(4);
            assert!((q - expect).abs() <= 1e-12, "t={t}: {q} vs {expect}");

            let first = [0.5, 0.5, 0.0];
            assert!(eval_q_raw(t, 1.0, &first).abs() <= 1e-12);
        }
    }

    /// Brute-force oracle: Q(t) = Re sum_k g_k e^{i(1-k)t} truncated at K
    /// terms. The tail decays like k^{-alpha-1}, which bounds the achievable
    /// tolerance.
    fn q_series_oracle(theta: f64, params: &WsgdParams, k: usize) -> f64 {
        let g = crate::weights::wsgd_weights(params, k).g;
        let mut sum = 0.0;
        for (j, gk) in g.iter().enumerate() {
            sum += gk * ((1.0 - j as f64) * theta).cos();
        }
        sum
    }

    #[test]
    fn q_matches_truncated_series_oracle() {
        let cases = [
            (ParamSet::S1, 0.75, 1.3, 0.7),
            (ParamSet::S2, -0.3, 1.5, 2.1),
            (ParamSet::S3, 0.02, 1.8, 2.9),
            (ParamSet::S1, 1.5, 1.9, 1.1),
        ];
        for &(set, free, a, theta) in &cases {
            let p = params_from_set(set, free, fo(a));
            let q = eval_q(theta, &p);
            let oracle = q_series_oracle(theta, &p, 100_000);
            assert!((q - oracle).abs() <= 5e-3, "{set}({free}) a={a} t={theta}: {q} vs {oracle}");
            // Evenness: the series at -theta agrees with the closed form too.
            let oracle_neg = q_series_oracle(-theta, &p, 100_000);
            assert!((q - oracle_neg).abs() <= 5e-3);
        }
    }

    #[test]
    fn first_triple_q_nonpositive_everywhere() {
        let grid = ThetaGrid::uniform(501).unwrap();
        for &a in uniform_grid(1.01, 1.99, 50).iter() {
            let lambda = [a / 2.0, (2.0 - a) / 2.0, 0.0];
            for &t in grid.values() {
                assert!(eval_q_raw(t, a, &lambda) <= Q_NONPOS_TOL);
            }
        }
    }

    #[test]
    fn amp_implicit_spot_values() {
        let p = params_from_set(ParamSet::S1, 0.75, fo(1.5));
        let c = CourantNumbers::new(0.0, 0.0).unwrap();
        assert_relative_eq!(amp_implicit(0.0, c, &p), 1.0, epsilon = 1e-15);

        let c = CourantNumbers::new(1.0, 0.0).unwrap();
        assert_relative_eq!(
            amp_implicit(std::f64::consts::FRAC_PI_2, c, &p),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-14
        );

        // Substitute Q(pi) into the closed form independently.
        let c = CourantNumbers::new(0.0, 1.0).unwrap();
        let q = eval_q(std::f64::consts::PI, &p);
        let expect = 1.0 / ((1.0 - 0.5 * q).powi(2)).sqrt();
        let got = amp_implicit(std::f64::consts::PI, c, &p);
        assert_relative_eq!(got, expect, epsilon = 1e-14);
        assert!(got > 0.0 && got <= 1.0);
    }

    #[test]
    fn amp_cn_contracts_for_negative_q() {
        let p = params_from_set(ParamSet::S3, 0.0, fo(1.5));
        let c = CourantNumbers::new(0.0, 2.0).unwrap();
        let theta = 2.0;
        assert!(eval_q(theta, &p) < 0.0);
        assert!(amp_cn(theta, c, &p) < 1.0);
        assert_relative_eq!(amp_cn(0.0, c, &p), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn amp_2d_factors_exactly() {
        let px = params_from_set(ParamSet::S1, 1.0, fo(1.5));
        let py = params_from_set(ParamSet::S2, 0.3, fo(1.8));
        let cx = CourantNumbers::new(0.5, 1.5).unwrap();
        let cy = CourantNumbers::new(1.5, 0.25).unwrap();
        for &(tx, ty) in &[(0.0, 0.0), (0.3, 2.8), (1.1, 0.4), (3.1, 3.1)] {
            let g = amp_2d(tx, ty, cx, cy, &px, &py);
            let prod = amp_cn(tx, cx, &px) * amp_cn(ty, cy, &py);
            assert!((g - prod).abs() <= 1e-14);
        }
    }

    #[test]
    fn stability_report_flags() {
        let grid = ThetaGrid::uniform(401).unwrap();
        let stable = params_from_set(ParamSet::S3, 0.0, fo(1.5));
        let rep = StabilityReport::sample(&stable, &grid);
        assert!(rep.q_all_nonpositive);
        assert!(rep.q_max_abs > 0.0);
        assert_eq!(rep.samples.len(), grid.len());

        // Q(pi) = 2^alpha (2*lambda2 - 1), positive once lambda2 > 1/2.
        let unstable = params_from_set(ParamSet::S2, 2.0, fo(1.5));
        let rep = StabilityReport::sample(&unstable, &grid);
        assert!(!rep.q_all_nonpositive);
    }

    #[test]
    fn emit_q_curves_matches_eval_q() {
        let grid = ThetaGrid::uniform(5).unwrap();
        let csv = emit_q_curves(&[(ParamSet::S2, 0.25)], &[1.0, 1.5], &grid);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "theta,alpha,label,Q");
        let mut n = 0;
        for line in lines {
            let parts: Vec<&str> = line.split(',').collect();
            assert_eq!(parts.len(), 4);
            let t: f64 = parts[0].parse().unwrap();
            let a: f64 = parts[1].parse().unwrap();
            assert_eq!(parts[2], "S2(0.25)");
            let q: f64 = parts[3].parse().unwrap();
            let lambda = [(2.0 + a) / 4.0 - 0.125, 0.25, (2.0 - a) / 4.0 - 0.125];
            assert_eq!(q, eval_q_raw(t, a, &lambda));
            if t == 0.0 {
                assert_eq!(q, 0.0);
            }
            n += 1;
        }
        assert_eq!(n, 10);
    }

    #[test]
    fn scan_region_rejects_bad_input() {
        let grid = ThetaGrid::uniform(3).unwrap();
        assert!(scan_region(ParamSet::S1, (0.0, 1.0), 0.0, &grid, &[1.5]).is_err());
        assert!(scan_region(ParamSet::S1, (1.0, 0.0), 0.1, &grid, &[1.5]).is_err());
    }

    #[test]
    fn canonical_triple_symbol_consistency() {
        // eval_q through WsgdParams agrees with the raw evaluation.
        let alpha = fo(1.7);
        let p = CanonicalTriple::Second.params(alpha);
        for &t in ThetaGrid::uniform(11).unwrap().values() {
            assert_eq!(eval_q(t, &p), eval_q_raw(t, 1.7, &p.lambda()));
        }
    }
}
