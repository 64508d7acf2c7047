//! Manufactured test problems with closed-form solutions, plus the
//! analytic Riemann–Liouville derivative of monomials used to build and
//! verify them.
//!
//! Both cases share the solution profile `e^{-t} x^3 (1-x)^3` (times the
//! same profile in `y` for the 2D case), which vanishes together with its
//! first two derivatives at the boundary.

use std::sync::Arc;

use statrs::function::gamma::ln_gamma;

use crate::error::{Result, WsgdError};
use crate::solvers::{Problem1D, Problem2D};
use crate::weights::FractionalOrder;

/// `Gamma(p+1) / Gamma(p+1-alpha)` via log-Gamma differences, with the
/// reflection formula for the negative-argument case `p = 0`.
fn gamma_ratio(p: f64, a: f64) -> Result<f64> {
    let z = p + 1.0 - a;
    if z > 0.0 {
        Ok((ln_gamma(p + 1.0) - ln_gamma(z)).exp())
    } else if z == z.floor() {
        // Gamma pole: the coefficient is zero in the limit only when the
        // numerator stays finite, which it does for integer p >= 0, so the
        // ratio is genuinely undefined only at the pole itself.
        Err(WsgdError::Domain(format!(
            "Gamma({z}) pole in Gamma({})/Gamma({z})",
            p + 1.0
        )))
    } else {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z)) for non-integer z <= 0.
        let gamma_z = std::f64::consts::PI
            / ((std::f64::consts::PI * z).sin() * ln_gamma(1.0 - z).exp());
        Ok(ln_gamma(p + 1.0).exp() / gamma_z)
    }
}

/// Left Riemann–Liouville derivative (based at 0) of the monomial `x^p`:
/// `Gamma(p+1)/Gamma(p+1-alpha) x^{p-alpha}`.
pub fn rl_monomial(p: u32, alpha: FractionalOrder, x: f64) -> Result<f64> {
    let a = alpha.get();
    let pf = p as f64;
    if x < 0.0 {
        return Err(WsgdError::Domain(format!("monomial derivative needs x >= 0, got {x}")));
    }
    let coeff = gamma_ratio(pf, a)?;
    let expo = pf - a;
    if x == 0.0 {
        return if expo > 0.0 {
            Ok(0.0)
        } else if expo == 0.0 {
            Ok(coeff)
        } else {
            Err(WsgdError::Domain(format!(
                "x^({expo}) diverges at x = 0 for p = {p}, alpha = {a}"
            )))
        };
    }
    Ok(coeff * x.powf(expo))
}

/// The polynomial profile `x^3 (1-x)^3` shared by both manufactured cases.
fn profile(x: f64) -> f64 {
    x.powi(3) * (1.0 - x).powi(3)
}

/// `(D_left^alpha + D_right^alpha)` applied to the profile at `x in [0, 1]`,
/// evaluated semi-analytically term by term. The profile is symmetric
/// under `x -> 1-x`, so the right derivative is the left one at `1-x`.
pub fn frac_poly_derivative_sum(x: f64, a: f64) -> f64 {
    let g = |p: f64| (ln_gamma(p + 1.0) - ln_gamma(p + 1.0 - a)).exp();
    let term = |y: f64| -> f64 {
        g(3.0) * y.powf(3.0 - a) - 3.0 * g(4.0) * y.powf(4.0 - a)
            + 3.0 * g(5.0) * y.powf(5.0 - a)
            - g(6.0) * y.powf(6.0 - a)
    };
    term(x) + term(1.0 - x)
}

/// A problem bundled with its closed-form solution.
pub struct ManufacturedCase1D {
    pub problem: Problem1D,
    pub description: String,
}

/// 2D analogue of [`ManufacturedCase1D`].
pub struct ManufacturedCase2D {
    pub problem: Problem2D,
    pub description: String,
}

/// 1D case on `(0,1) x (0,1]` with `v = d = 1` and exact solution
/// `u = e^{-t} x^3 (1-x)^3`; the source follows by substitution.
pub fn example1(alpha: FractionalOrder) -> Result<ManufacturedCase1D> {
    let a = alpha.get();
    if a >= 2.0 {
        return Err(WsgdError::InvalidOrder(a));
    }
    let f = Arc::new(move |x: f64, t: f64| -> f64 {
        let g = |p: f64| (ln_gamma(p + 1.0) - ln_gamma(p + 1.0 - a)).exp();
        let pair = |p: f64| x.powf(p - a) + (1.0 - x).powf(p - a);
        (-t).exp()
            * (-profile(x) + (3.0 * x.powi(2) * (1.0 - x).powi(3)
                - 3.0 * x.powi(3) * (1.0 - x).powi(2))
                - g(3.0) * pair(3.0)
                + 3.0 * g(4.0) * pair(4.0)
                - 3.0 * g(5.0) * pair(5.0)
                + g(6.0) * pair(6.0))
    });
    Ok(ManufacturedCase1D {
        problem: Problem1D {
            v: 1.0,
            d: 1.0,
            alpha,
            a: 0.0,
            b: 1.0,
            t_final: 1.0,
            f,
            u0: Arc::new(profile),
            phi1: Arc::new(|_| 0.0),
            phi2: Arc::new(|_| 0.0),
            exact: Some(Arc::new(|x, t| (-t).exp() * profile(x))),
        },
        description: format!("1D advection-diffusion, order {a}, exact e^-t x^3(1-x)^3"),
    })
}

/// 2D case on `(0,1)^2 x (0,1]` with unit coefficients and exact solution
/// `u = e^{-t} x^3 (1-x)^3 y^3 (1-y)^3`.
pub fn example2(alpha: FractionalOrder, beta: FractionalOrder) -> Result<ManufacturedCase2D> {
    let a = alpha.get();
    let b = beta.get();
    if a >= 2.0 {
        return Err(WsgdError::InvalidOrder(a));
    }
    if b >= 2.0 {
        return Err(WsgdError::InvalidOrder(b));
    }
    let f = Arc::new(move |x: f64, y: f64, t: f64| -> f64 {
        let grp = |v: f64, ord: f64| -> f64 {
            let g = |p: f64| (ln_gamma(p + 1.0) - ln_gamma(p + 1.0 - ord)).exp();
            let pair = |p: f64| v.powf(p - ord) + (1.0 - v).powf(p - ord);
            g(3.0) * pair(3.0) - 3.0 * g(4.0) * pair(4.0) + 3.0 * g(5.0) * pair(5.0)
                - g(6.0) * pair(6.0)
        };
        -(-t).exp()
            * (profile(x) * profile(y)
                - 3.0 * x.powi(2) * (1.0 - x).powi(3) * profile(y)
                + 3.0 * x.powi(3) * (1.0 - x).powi(2) * profile(y)
                - 3.0 * profile(x) * y.powi(2) * (1.0 - y).powi(3)
                + 3.0 * profile(x) * y.powi(3) * (1.0 - y).powi(2)
                + grp(x, a) * profile(y)
                + grp(y, b) * profile(x))
    });
    Ok(ManufacturedCase2D {
        problem: Problem2D {
            vx: 1.0,
            vy: 1.0,
            dx: 1.0,
            dy: 1.0,
            alpha,
            beta,
            ax: 0.0,
            bx: 1.0,
            ay: 0.0,
            by: 1.0,
            t_final: 1.0,
            f,
            u0: Arc::new(|x, y| profile(x) * profile(y)),
            phi: Arc::new(|_, _, _| 0.0),
            exact: Some(Arc::new(|x, y, t| (-t).exp() * profile(x) * profile(y))),
        },
        description: format!(
            "2D advection-diffusion, orders ({a}, {b}), exact e^-t x^3(1-x)^3 y^3(1-y)^3"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fo(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    /// Monomial coefficients of the profile: `x^3 - 3x^4 + 3x^5 - x^6`.
    const PROFILE_MONOMIALS: [(u32, f64); 4] = [(3, 1.0), (4, -3.0), (5, 3.0), (6, -1.0)];

    #[test]
    fn monomial_derivative_spot_values() {
        // p = 2, alpha = 2: classical second derivative of x^2.
        assert_relative_eq!(rl_monomial(2, fo(2.0), 0.7).unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(rl_monomial(2, fo(2.0), 0.0).unwrap(), 2.0, epsilon = 1e-12);

        // p = 6, alpha = 1.5 at x = 1: Gamma(7)/Gamma(5.5).
        let expect = (ln_gamma(7.0) - ln_gamma(5.5)).exp();
        assert_relative_eq!(rl_monomial(6, fo(1.5), 1.0).unwrap(), expect, max_relative = 1e-12);

        // p = 3: coefficient Gamma(4)/Gamma(4 - alpha), power x^{3-alpha}.
        for &a in &[1.2, 1.7, 1.9] {
            let x: f64 = 0.31;
            let expect = (ln_gamma(4.0) - ln_gamma(4.0 - a)).exp() * x.powf(3.0 - a);
            assert_relative_eq!(rl_monomial(3, fo(a), x).unwrap(), expect, max_relative = 1e-12);
        }

        // Limits at x = 0 and domain errors.
        assert_eq!(rl_monomial(3, fo(1.5), 0.0).unwrap(), 0.0);
        assert!(rl_monomial(0, fo(1.5), 0.0).is_err());
        assert!(rl_monomial(3, fo(1.5), -0.1).is_err());
        // p = 1, alpha = 2 hits the Gamma pole at 0.
        assert!(rl_monomial(1, fo(2.0), 0.5).is_err());
    }

    #[test]
    fn monomial_coefficient_handles_p_zero() {
        // D^alpha of a constant: x^{-alpha} / Gamma(1 - alpha), negative
        // coefficient for alpha in (1, 2).
        let a = 1.5;
        let got = rl_monomial(0, fo(a), 2.0).unwrap();
        // Reference through the reflection formula computed independently.
        let gamma_1ma = std::f64::consts::PI
            / ((std::f64::consts::PI * (1.0 - a)).sin() * ln_gamma(a).exp());
        let expect = 2.0f64.powf(-a) / gamma_1ma;
        assert_relative_eq!(got, expect, max_relative = 1e-12);
        assert!((got > 0.0) == (expect > 0.0));
    }

    #[test]
    fn initial_and_boundary_data_consistent() {
        let case = example1(fo(1.7)).unwrap();
        let exact = case.problem.exact.as_ref().unwrap();
        for j in 0..=20 {
            let x = j as f64 / 20.0;
            assert!((exact(x, 0.0) - (case.problem.u0)(x)).abs() <= 1e-15);
        }
        for &t in &[0.0, 0.3, 1.0] {
            assert_eq!(exact(0.0, t), 0.0);
            assert_eq!(exact(1.0, t), 0.0);
        }

        let case = example2(fo(1.5), fo(1.8)).unwrap();
        let exact = case.problem.exact.as_ref().unwrap();
        for j in 0..=10 {
            for m in 0..=10 {
                let (x, y) = (j as f64 / 10.0, m as f64 / 10.0);
                assert!((exact(x, y, 0.0) - (case.problem.u0)(x, y)).abs() <= 1e-15);
                if j == 0 || j == 10 || m == 0 || m == 10 {
                    assert_eq!(exact(x, y, 0.5), 0.0);
                }
            }
        }
    }

    /// Termwise semi-analytic fractional derivative of the profile through
    /// `rl_monomial`, used as the residual oracle.
    fn oracle_frac_sum(x: f64, alpha: FractionalOrder) -> f64 {
        let left: f64 = PROFILE_MONOMIALS
            .iter()
            .map(|&(p, c)| c * rl_monomial(p, alpha, x).unwrap())
            .sum();
        let right: f64 = PROFILE_MONOMIALS
            .iter()
            .map(|&(p, c)| c * rl_monomial(p, alpha, 1.0 - x).unwrap())
            .sum();
        left + right
    }

    #[test]
    fn example1_pde_residual_vanishes() {
        for &a in &[1.2, 1.5, 1.9] {
            let alpha = fo(a);
            let case = example1(alpha).unwrap();
            let p = &case.problem;
            for &x in &[0.1, 0.25, 0.5, 0.75, 0.9] {
                for &t in &[0.0f64, 0.4, 1.0] {
                    let et = (-t).exp();
                    let u_t = -et * profile(x);
                    let u_x =
                        et * (3.0 * x.powi(2) * (1.0 - x).powi(3)
                            - 3.0 * x.powi(3) * (1.0 - x).powi(2));
                    let frac = et * oracle_frac_sum(x, alpha);
                    let residual = u_t + p.v * u_x - p.d * frac - (p.f)(x, t);
                    assert!(
                        residual.abs() <= 1e-10,
                        "residual {residual} at x={x}, t={t}, alpha={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn example2_pde_residual_vanishes() {
        let (a, b) = (1.5, 1.8);
        let case = example2(fo(a), fo(b)).unwrap();
        let p = &case.problem;
        for &x in &[0.2, 0.5, 0.8] {
            for &y in &[0.1, 0.6, 0.9] {
                for &t in &[0.0f64, 0.7] {
                    let et = (-t).exp();
                    let u_t = -et * profile(x) * profile(y);
                    let u_x = et
                        * (3.0 * x.powi(2) * (1.0 - x).powi(3)
                            - 3.0 * x.powi(3) * (1.0 - x).powi(2))
                        * profile(y);
                    let u_y = et
                        * (3.0 * y.powi(2) * (1.0 - y).powi(3)
                            - 3.0 * y.powi(3) * (1.0 - y).powi(2))
                        * profile(x);
                    let frac = et
                        * (oracle_frac_sum(x, fo(a)) * profile(y)
                            + oracle_frac_sum(y, fo(b)) * profile(x));
                    let residual = u_t + u_x + u_y - frac - (p.f)(x, y, t);
                    assert!(
                        residual.abs() <= 1e-9,
                        "residual {residual} at ({x}, {y}, {t})"
                    );
                }
            }
        }
    }

    #[test]
    fn separable_structure_of_2d_exact() {
        let case2 = example2(fo(1.5), fo(1.8)).unwrap();
        let case1 = example1(fo(1.5)).unwrap();
        let e2 = case2.problem.exact.as_ref().unwrap();
        let e1 = case1.problem.exact.as_ref().unwrap();
        for &(x, y, t) in &[(0.3, 0.7, 0.2), (0.5, 0.5, 1.0), (0.9, 0.1, 0.6)] {
            // exact2(x, y, t) = e^{t} exact1(x, t) exact1(y, t): the decay
            // factor is counted once.
            let lhs = e2(x, y, t);
            let rhs = t.exp() * e1(x, t) * e1(y, t);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13, epsilon = 1e-300);
        }
    }

    #[test]
    fn frac_poly_helper_matches_oracle() {
        for &a in &[1.2, 1.5, 1.9] {
            for &x in &[0.1, 0.5, 0.85] {
                assert_relative_eq!(
                    frac_poly_derivative_sum(x, a),
                    oracle_frac_sum(x, fo(a)),
                    max_relative = 1e-12
                );
            }
        }
    }
}
