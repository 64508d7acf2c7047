//! Randomized property tests for the weight systems, the stability symbol,
//! and the table serialization round trip.

use proptest::prelude::*;
use wsgd::{
    amp_2d, amp_cn, emit_table, eval_q, fused_weights, grunwald_weights, params_from_set,
    params_general, parse_table_csv, wsgd_weights, ConvergenceRow, CourantNumbers,
    FractionalOrder, ParamSet, ShiftSet, TableFormat,
};

fn fo(alpha: f64) -> FractionalOrder {
    FractionalOrder::new(alpha).unwrap()
}

fn alpha_strategy() -> impl Strategy<Value = f64> {
    1.0001f64..2.0
}

fn set_strategy() -> impl Strategy<Value = (ParamSet, f64)> {
    prop_oneof![
        (Just(ParamSet::S1), 0.8f64..2.8),
        (Just(ParamSet::S2), -3.8f64..0.45),
        (Just(ParamSet::S3), 0.0f64..1.9),
    ]
}

proptest! {
    /// w0 = 1, w1 = -alpha, and every later weight is nonnegative and
    /// nonincreasing for orders in (1, 2).
    #[test]
    fn grunwald_weight_signs_and_monotonicity(alpha in alpha_strategy()) {
        let seq = grunwald_weights(fo(alpha), 40);
        prop_assert_eq!(seq.w[0], 1.0);
        prop_assert!((seq.w[1] + alpha).abs() < 1e-14);
        for k in 2..seq.w.len() {
            prop_assert!(seq.w[k] >= 0.0, "w[{}] = {} < 0", k, seq.w[k]);
            if k > 2 {
                prop_assert!(seq.w[k] <= seq.w[k - 1] + 1e-15);
            }
        }
    }

    /// Partial sums of the weights stay nonpositive past the first term and
    /// approach zero from below as the truncation grows.
    #[test]
    fn grunwald_partial_sums_nonpositive(alpha in alpha_strategy()) {
        let seq = grunwald_weights(fo(alpha), 200);
        let mut sum = 0.0;
        for (k, &w) in seq.w.iter().enumerate() {
            sum += w;
            if k >= 1 {
                prop_assert!(sum <= 1e-13, "partial sum through k={} is {}", k, sum);
            }
        }
        prop_assert!(sum > -alpha, "tail sum {} out of range", sum);
    }

    /// Every built-in parameter family satisfies the two linear constraints
    /// that make the operator second-order accurate.
    #[test]
    fn triple_constraints_hold_across_sets(
        (set, free) in set_strategy(),
        alpha in alpha_strategy(),
    ) {
        let params = params_from_set(set, free, fo(alpha));
        let [l1, l2, l3] = params.lambda();
        prop_assert!((l1 + l2 + l3 - 1.0).abs() < 1e-12);
        prop_assert!((l1 - l3 - alpha / 2.0).abs() < 1e-12);
    }

    /// Solving the constraint system for the canonical shifts (1, 0, -1)
    /// reproduces the closed-form triples.
    #[test]
    fn general_solver_matches_closed_forms(
        (set, free) in set_strategy(),
        alpha in alpha_strategy(),
    ) {
        let direct = params_from_set(set, free, fo(alpha));
        let free_index = match set {
            ParamSet::S1 => 0,
            ParamSet::S2 => 1,
            ParamSet::S3 => 2,
        };
        let general =
            params_general(&ShiftSet::canonical(), Some((free_index, free)), fo(alpha)).unwrap();
        for (a, b) in direct.lambda().iter().zip(general.iter()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    /// Fusing with the unshifted unit triple reproduces the plain Grünwald
    /// weights shifted by one slot.
    #[test]
    fn fused_weights_reduce_to_grunwald(alpha in alpha_strategy()) {
        let g = fused_weights(fo(alpha), [1.0, 0.0, 0.0], 20);
        let w = grunwald_weights(fo(alpha), 20).w;
        for k in 0..20 {
            prop_assert_eq!(g[k], w[k]);
        }
    }

    /// The fused sequence is the stated linear combination of three shifted
    /// copies of the Grünwald weights.
    #[test]
    fn fused_weights_match_linear_combination(
        (set, free) in set_strategy(),
        alpha in alpha_strategy(),
    ) {
        let params = params_from_set(set, free, fo(alpha));
        let [l1, l2, l3] = params.lambda();
        let g = wsgd_weights(&params, 20).g;
        let w = grunwald_weights(fo(alpha), 20).w;
        for k in 0..20 {
            let mut expect = l1 * w[k];
            if k >= 1 {
                expect += l2 * w[k - 1];
            }
            if k >= 2 {
                expect += l3 * w[k - 2];
            }
            prop_assert!((g[k] - expect).abs() < 1e-13 * expect.abs().max(1.0));
        }
    }

    /// The symbol vanishes at theta = 0 and takes the closed-form value
    /// 2^alpha (2 l2 - 1) at theta = pi.
    #[test]
    fn symbol_endpoint_values(
        (set, free) in set_strategy(),
        alpha in alpha_strategy(),
    ) {
        let params = params_from_set(set, free, fo(alpha));
        prop_assert!(eval_q(0.0, &params).abs() < 1e-14);
        let l2 = params.lambda()[1];
        let expect = 2f64.powf(alpha) * (2.0 * l2 - 1.0);
        let got = eval_q(std::f64::consts::PI, &params);
        prop_assert!((got - expect).abs() < 1e-11 * expect.abs().max(1.0));
    }

    /// Whenever the symbol is nonpositive at an angle, both time-stepping
    /// amplification factors are bounded by one there.
    #[test]
    fn nonpositive_symbol_gives_bounded_amplification(
        (set, free) in set_strategy(),
        alpha in alpha_strategy(),
        theta in 0.0f64..std::f64::consts::PI,
        nu in 0.0f64..2.0,
        lam in 0.0f64..5.0,
    ) {
        let params = params_from_set(set, free, fo(alpha));
        prop_assume!(eval_q(theta, &params) <= 0.0);
        let c = CourantNumbers::new(nu, lam).unwrap();
        prop_assert!(wsgd::amp_implicit(theta, c, &params) <= 1.0 + 1e-12);
        prop_assert!(amp_cn(theta, c, &params) <= 1.0 + 1e-12);
    }

    /// The 2D amplification factor factors into the product of the two 1D
    /// Crank-Nicolson moduli.
    #[test]
    fn two_dimensional_amplification_factorizes(
        (set_x, free_x) in set_strategy(),
        (set_y, free_y) in set_strategy(),
        alpha in alpha_strategy(),
        beta in alpha_strategy(),
        theta_x in 0.0f64..std::f64::consts::PI,
        theta_y in 0.0f64..std::f64::consts::PI,
    ) {
        let px = params_from_set(set_x, free_x, fo(alpha));
        let py = params_from_set(set_y, free_y, fo(beta));
        let cx = CourantNumbers::new(0.4, 1.2).unwrap();
        let cy = CourantNumbers::new(0.3, 0.9).unwrap();
        let joint = amp_2d(theta_x, theta_y, cx, cy, &px, &py);
        let product = amp_cn(theta_x, cx, &px) * amp_cn(theta_y, cy, &py);
        prop_assert!((joint - product).abs() < 1e-13 * product.max(1.0));
    }

    /// CSV emission followed by parsing preserves every row up to the
    /// printed precision of the error column.
    #[test]
    fn table_csv_round_trips(
        rows in prop::collection::vec(
            (1e-3f64..1.0, 1e-4f64..1.0, 1e-12f64..1.0, prop::option::of(0.0f64..4.0)),
            1..8,
        )
    ) {
        let rows: Vec<ConvergenceRow> = rows
            .into_iter()
            .map(|(h, tau, error, rate)| ConvergenceRow { h, tau, error, rate })
            .collect();
        let text = emit_table(&rows, TableFormat::Csv).unwrap();
        let parsed = parse_table_csv(&text).unwrap();
        prop_assert_eq!(parsed.len(), rows.len());
        for (a, b) in rows.iter().zip(parsed.iter()) {
            prop_assert_eq!(a.h, b.h);
            prop_assert_eq!(a.tau, b.tau);
            // The error column is printed with three significant digits.
            prop_assert!((a.error - b.error).abs() <= 5e-3 * a.error);
            match (a.rate, b.rate) {
                (None, None) => {}
                (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 5e-3),
                other => prop_assert!(false, "rate mismatch: {:?}", other),
            }
        }
    }
}
