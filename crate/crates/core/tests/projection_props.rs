//! Property tests for the uncertainty-set oracles: projections must be
//! feasible, optimal, idempotent, and nonexpansive, and the greedy support
//! maximizer must agree with exhaustive vertex enumeration.

use proptest::prelude::*;
use robustfw_core::uncertainty::{BoxSet, BudgetedSet, ScenarioHullSet, UncertaintySet};
use robustfw_core::Point;

const PROJ_TOL: f64 = 1e-9;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn budgeted_strategy(max_dim: usize) -> impl Strategy<Value = BudgetedSet> {
    (1..=max_dim).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0f64..10.0, n),
            prop::collection::vec(0.1f64..10.0, n),
            0.0f64..(n as f64 + 1.0),
        )
            .prop_map(|(c_lower, d, gamma)| BudgetedSet::new(c_lower, d, gamma).unwrap())
    })
}

fn box_strategy(max_dim: usize) -> impl Strategy<Value = BoxSet> {
    (1..=max_dim).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0f64..10.0, n),
            prop::collection::vec(0.0f64..8.0, n),
        )
            .prop_map(|(lower, width)| {
                let upper: Vec<f64> =
                    lower.iter().zip(&width).map(|(l, w)| l + w).collect();
                BoxSet::new(lower, upper).unwrap()
            })
    })
}

fn scenario_strategy(max_dim: usize) -> impl Strategy<Value = ScenarioHullSet> {
    (1..=max_dim, 1usize..=4).prop_flat_map(|(n, s)| {
        prop::collection::vec(prop::collection::vec(-10.0f64..10.0, n), s).prop_map(
            |rows| {
                ScenarioHullSet::new(rows.into_iter().map(Point::new).collect()).unwrap()
            },
        )
    })
}

fn any_set(max_dim: usize) -> impl Strategy<Value = UncertaintySet> {
    prop_oneof![
        box_strategy(max_dim).prop_map(UncertaintySet::Box),
        budgeted_strategy(max_dim).prop_map(UncertaintySet::Budgeted),
        scenario_strategy(max_dim).prop_map(UncertaintySet::ScenarioHull),
    ]
}

fn random_point(n: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-25.0f64..25.0, n).prop_map(Point::new)
}

// A random member of the set, built from interior sampling parameters so it
// is feasible by construction.
fn member_of(set: &UncertaintySet, mix: &[f64]) -> Point {
    let n = set.dimension();
    match set {
        UncertaintySet::Box(b) => {
            let coords = (0..n)
                .map(|j| {
                    let t = mix[j % mix.len()].clamp(0.0, 1.0);
                    b.lower()[j] + t * (b.upper()[j] - b.lower()[j])
                })
                .collect();
            Point::new(coords)
        }
        UncertaintySet::Budgeted(b) => {
            let mut theta: Vec<f64> =
                (0..n).map(|j| mix[j % mix.len()].clamp(0.0, 1.0)).collect();
            let total: f64 = theta.iter().sum();
            if total > b.gamma() && total > 0.0 {
                let scale = b.gamma() / total;
                for t in &mut theta {
                    *t *= scale;
                }
            }
            let coords = (0..n)
                .map(|j| b.c_lower()[j] + b.deviations()[j] * theta[j])
                .collect();
            Point::new(coords)
        }
        UncertaintySet::ScenarioHull(s) => {
            let k = s.scenarios().len();
            let mut w: Vec<f64> =
                (0..k).map(|i| mix[i % mix.len()].clamp(0.0, 1.0) + 1e-9).collect();
            let total: f64 = w.iter().sum();
            for wi in &mut w {
                *wi /= total;
            }
            let mut coords = vec![0.0; n];
            for (wi, sc) in w.iter().zip(s.scenarios()) {
                for j in 0..n {
                    coords[j] += wi * sc[j];
                }
            }
            Point::new(coords)
        }
    }
}

// Every vertex of {theta in [0,1]^n, sum theta <= gamma}: 0/1 patterns with
// at most floor(gamma) ones, optionally topped up by one fractional
// coordinate that spends the rest of the budget.
fn budgeted_vertices(b: &BudgetedSet) -> Vec<Vec<f64>> {
    let n = b.c_lower().len();
    let gamma = b.gamma();
    let full = gamma.floor() as usize;
    let frac = gamma - gamma.floor();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let ones = mask.count_ones() as usize;
        if ones > full.min(n) {
            continue;
        }
        let mut theta = vec![0.0; n];
        for (j, t) in theta.iter_mut().enumerate() {
            if mask >> j & 1 == 1 {
                *t = 1.0;
            }
        }
        out.push(theta.clone());
        if ones == full && frac > 0.0 {
            for j in 0..n {
                if mask >> j & 1 == 0 {
                    let mut extra = theta.clone();
                    extra[j] = frac;
                    out.push(extra);
                }
            }
        }
    }
    out.into_iter()
        .map(|theta| {
            (0..n)
                .map(|j| b.c_lower()[j] + b.deviations()[j] * theta[j])
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projection_is_feasible_and_idempotent(
        (set, z_raw, mix) in any_set(6).prop_flat_map(|set| {
            let n = set.dimension();
            (Just(set), random_point(n), prop::collection::vec(0.0f64..1.0, 8))
        })
    ) {
        let tol = match set {
            UncertaintySet::ScenarioHull(_) => 1e-6,
            _ => PROJ_TOL,
        };
        let p = set.project(&z_raw, tol).unwrap();
        prop_assert!(set.contains(&p, 1e-6).unwrap());

        let again = set.project(&p, tol).unwrap();
        prop_assert!(p.dist(&again) <= 10.0 * tol.max(1e-8) * (1.0 + z_raw.norm()));

        // Variational inequality against a random feasible direction.
        let c = member_of(&set, &mix);
        let lhs: f64 = (0..set.dimension())
            .map(|j| (z_raw[j] - p[j]) * (c[j] - p[j]))
            .sum();
        prop_assert!(lhs <= 1e-5 * (1.0 + z_raw.norm()) * (1.0 + c.norm()));
    }

    #[test]
    fn projection_is_nonexpansive(
        (set, z1, z2) in any_set(6).prop_flat_map(|set| {
            let n = set.dimension();
            (Just(set), random_point(n), random_point(n))
        })
    ) {
        let tol = match set {
            UncertaintySet::ScenarioHull(_) => 1e-6,
            _ => PROJ_TOL,
        };
        let p1 = set.project(&z1, tol).unwrap();
        let p2 = set.project(&z2, tol).unwrap();
        prop_assert!(p1.dist(&p2) <= z1.dist(&z2) + 1e-5 * (1.0 + z1.norm() + z2.norm()));
    }

    #[test]
    fn box_support_matches_sign_enumeration(
        (set, x) in box_strategy(8).prop_flat_map(|b| {
            let n = b.lower().len();
            (Just(b), random_point(n))
        })
    ) {
        let n = set.lower().len();
        let wrapped = UncertaintySet::Box(set.clone());
        let (val, arg) = wrapped.support_max(&x).unwrap();
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1u32 << n) {
            let cand: f64 = (0..n)
                .map(|j| {
                    let c = if mask >> j & 1 == 1 { set.upper()[j] } else { set.lower()[j] };
                    c * x[j]
                })
                .sum();
            best = best.max(cand);
        }
        prop_assert!((val - best).abs() <= 1e-9 * (1.0 + best.abs()));
        prop_assert!(wrapped.contains(&arg, 1e-9).unwrap());
        let arg_val: f64 = (0..n).map(|j| arg[j] * x[j]).sum();
        prop_assert!((arg_val - val).abs() <= 1e-9 * (1.0 + val.abs()));
    }

    #[test]
    fn budgeted_support_matches_vertex_enumeration(
        (set, x) in budgeted_strategy(7).prop_flat_map(|b| {
            let n = b.c_lower().len();
            (Just(b), random_point(n))
        })
    ) {
        let wrapped = UncertaintySet::Budgeted(set.clone());
        let (val, arg) = wrapped.support_max(&x).unwrap();
        let n = set.c_lower().len();
        let mut best = f64::NEG_INFINITY;
        for c in budgeted_vertices(&set) {
            let cand: f64 = (0..n).map(|j| c[j] * x[j]).sum();
            best = best.max(cand);
        }
        prop_assert!((val - best).abs() <= 1e-8 * (1.0 + best.abs()));
        prop_assert!(wrapped.contains(&arg, 1e-9).unwrap());
    }

    #[test]
    fn scenario_support_matches_scan(
        (set, x) in scenario_strategy(6).prop_flat_map(|s| {
            let n = s.scenarios()[0].dim();
            (Just(s), random_point(n))
        })
    ) {
        let wrapped = UncertaintySet::ScenarioHull(set.clone());
        let (val, _) = wrapped.support_max(&x).unwrap();
        let best = set
            .scenarios()
            .iter()
            .map(|c| c.dot(&x))
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((val - best).abs() <= 1e-9 * (1.0 + best.abs()));
    }

    #[test]
    fn constants_bound_member_geometry(
        (set, mix1, mix2) in any_set(6).prop_flat_map(|set| {
            (
                Just(set),
                prop::collection::vec(0.0f64..1.0, 8),
                prop::collection::vec(0.0f64..1.0, 8),
            )
        })
    ) {
        let (diameter, max_norm) = set.constants();
        let a = member_of(&set, &mix1);
        let b = member_of(&set, &mix2);
        prop_assert!(a.dist(&b) <= diameter + 1e-9 * (1.0 + diameter));
        prop_assert!(a.norm() <= max_norm + 1e-9 * (1.0 + max_norm));
        prop_assert!(norm(set.center().coords()) <= max_norm + 1e-9 * (1.0 + max_norm));
    }

    #[test]
    fn box_agrees_with_budgeted_encoding(
        (lower, width, z) in (1usize..=6).prop_flat_map(|n| {
            (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(0.1f64..6.0, n),
                prop::collection::vec(-20.0f64..20.0, n),
            )
        })
    ) {
        let n = lower.len();
        let upper: Vec<f64> = lower.iter().zip(&width).map(|(l, w)| l + w).collect();
        let as_box = UncertaintySet::Box(BoxSet::new(lower.clone(), upper).unwrap());
        let as_budget = UncertaintySet::Budgeted(
            BudgetedSet::new(lower, width, n as f64).unwrap(),
        );
        let z = Point::new(z);
        let pb = as_box.project(&z, PROJ_TOL).unwrap();
        let pq = as_budget.project(&z, PROJ_TOL).unwrap();
        prop_assert!(pb.dist(&pq) <= 1e-7 * (1.0 + z.norm()));

        let (vb, _) = as_box.support_max(&z).unwrap();
        let (vq, _) = as_budget.support_max(&z).unwrap();
        prop_assert!((vb - vq).abs() <= 1e-8 * (1.0 + vb.abs()));
    }
}
