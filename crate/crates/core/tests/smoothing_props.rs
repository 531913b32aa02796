//! Property tests for the smoothed objective: finite-difference gradient
//! agreement, the sandwich bracket, monotonicity in the smoothing weight,
//! gradient Lipschitzness, and convexity.

use proptest::prelude::*;
use robustfw_core::smoothing::{eval_f, SmoothedObjective};
use robustfw_core::uncertainty::{BoxSet, BudgetedSet, ScenarioHullSet, UncertaintySet};
use robustfw_core::Point;

const PROJ_TOL: f64 = 1e-9;
const FD_STEP: f64 = 1e-6;

fn budgeted_strategy(max_dim: usize) -> impl Strategy<Value = UncertaintySet> {
    (1..=max_dim).prop_flat_map(|n| {
        (
            prop::collection::vec(-5.0f64..5.0, n),
            prop::collection::vec(0.5f64..5.0, n),
            0.1f64..(n as f64),
        )
            .prop_map(|(c_lower, d, gamma)| {
                UncertaintySet::Budgeted(BudgetedSet::new(c_lower, d, gamma).unwrap())
            })
    })
}

fn box_strategy(max_dim: usize) -> impl Strategy<Value = UncertaintySet> {
    (1..=max_dim).prop_flat_map(|n| {
        (
            prop::collection::vec(-5.0f64..5.0, n),
            prop::collection::vec(0.2f64..5.0, n),
        )
            .prop_map(|(lower, width)| {
                let upper: Vec<f64> =
                    lower.iter().zip(&width).map(|(l, w)| l + w).collect();
                UncertaintySet::Box(BoxSet::new(lower, upper).unwrap())
            })
    })
}

fn scenario_strategy(max_dim: usize) -> impl Strategy<Value = UncertaintySet> {
    (1..=max_dim, 1usize..=3).prop_flat_map(|(n, s)| {
        prop::collection::vec(prop::collection::vec(-5.0f64..5.0, n), s).prop_map(|rows| {
            UncertaintySet::ScenarioHull(
                ScenarioHullSet::new(rows.into_iter().map(Point::new).collect()).unwrap(),
            )
        })
    })
}

fn any_set(max_dim: usize) -> impl Strategy<Value = UncertaintySet> {
    prop_oneof![box_strategy(max_dim), budgeted_strategy(max_dim), scenario_strategy(max_dim)]
}

fn set_x_mu(max_dim: usize) -> impl Strategy<Value = (UncertaintySet, Point, f64)> {
    any_set(max_dim).prop_flat_map(|set| {
        let n = set.dimension();
        (
            Just(set),
            prop::collection::vec(-4.0f64..4.0, n).prop_map(Point::new),
            0.05f64..2.0,
        )
    })
}

fn objective(set: &UncertaintySet, mu: f64) -> SmoothedObjective<'_> {
    SmoothedObjective::with_default_anchor(set, mu, PROJ_TOL).unwrap()
}

// Central finite differences of the smoothed value. The smoothed function is
// differentiable everywhere, but the projection's active set can flip between
// x-h and x+h; the error stays O(h) there, so the caller compares two step
// sizes and skips samples where the estimate has not settled.
fn fd_gradient(obj: &SmoothedObjective<'_>, x: &Point, h: f64) -> Vec<f64> {
    let n = x.dim();
    let mut g = vec![0.0; n];
    for (j, gj) in g.iter_mut().enumerate() {
        let mut plus = x.coords().to_vec();
        plus[j] += h;
        let mut minus = x.coords().to_vec();
        minus[j] -= h;
        let (fp, _) = obj.value_and_gradient(&Point::new(plus)).unwrap();
        let (fm, _) = obj.value_and_gradient(&Point::new(minus)).unwrap();
        *gj = (fp - fm) / (2.0 * h);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn gradient_matches_finite_differences((set, x, mu) in set_x_mu(5)) {
        let obj = objective(&set, mu);
        let (_, grad) = obj.value_and_gradient(&x).unwrap();
        let fd = fd_gradient(&obj, &x, FD_STEP);
        let fd_half = fd_gradient(&obj, &x, FD_STEP / 2.0);
        let scale = 1.0 + grad.norm();
        for j in 0..x.dim() {
            // Settled estimate: both step sizes agree, so we are away from
            // any curvature jump of the projection.
            if (fd[j] - fd_half[j]).abs() > 1e-5 * scale {
                continue;
            }
            prop_assert!(
                (grad[j] - fd_half[j]).abs() <= 1e-4 * scale,
                "coordinate {}: analytic {} vs fd {}",
                j,
                grad[j],
                fd_half[j]
            );
        }
    }

    #[test]
    fn sandwich_brackets_the_true_value((set, x, mu) in set_x_mu(6)) {
        let obj = objective(&set, mu);
        let (diameter, _) = set.constants();
        let (lo, hi) = obj.sandwich_bounds(&x, diameter).unwrap();
        let f = eval_f(&set, &x).unwrap();
        let slack = 1e-9 * (1.0 + f.abs());
        prop_assert!(lo <= f + slack, "lo {} > f {}", lo, f);
        prop_assert!(f <= hi + slack, "f {} > hi {}", f, hi);
    }

    #[test]
    fn smoothing_decreases_with_mu((set, x, mu) in set_x_mu(6)) {
        let mu_small = mu * 0.25;
        let f_small = objective(&set, mu_small).value_and_gradient(&x).unwrap().0;
        let f_large = objective(&set, mu).value_and_gradient(&x).unwrap().0;
        let f = eval_f(&set, &x).unwrap();
        let slack = 1e-9 * (1.0 + f.abs());
        prop_assert!(f_large <= f_small + slack);
        prop_assert!(f_small <= f + slack);
    }

    #[test]
    fn gradient_is_lipschitz_with_inverse_mu(
        ((set, x1, mu), shift) in set_x_mu(6).prop_flat_map(|(set, x, mu)| {
            let n = set.dimension();
            (
                Just((set, x, mu)),
                prop::collection::vec(-2.0f64..2.0, n),
            )
        })
    ) {
        let obj = objective(&set, mu);
        let x2 = Point::new(
            x1.coords().iter().zip(&shift).map(|(a, b)| a + b).collect::<Vec<_>>(),
        );
        let (_, g1) = obj.value_and_gradient(&x1).unwrap();
        let (_, g2) = obj.value_and_gradient(&x2).unwrap();
        prop_assert!(g1.dist(&g2) <= x1.dist(&x2) / mu + 1e-6);
    }

    #[test]
    fn smoothed_value_is_midpoint_convex(
        ((set, x1, mu), other) in set_x_mu(6).prop_flat_map(|(set, x, mu)| {
            let n = set.dimension();
            (
                Just((set, x, mu)),
                prop::collection::vec(-4.0f64..4.0, n).prop_map(Point::new),
            )
        })
    ) {
        let obj = objective(&set, mu);
        let mid = x1.lerp(&other, 0.5);
        let f1 = obj.value_and_gradient(&x1).unwrap().0;
        let f2 = obj.value_and_gradient(&other).unwrap().0;
        let fm = obj.value_and_gradient(&mid).unwrap().0;
        prop_assert!(fm <= 0.5 * (f1 + f2) + 1e-9 * (1.0 + f1.abs() + f2.abs()));
    }
}
