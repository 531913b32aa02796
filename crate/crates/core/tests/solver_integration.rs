//! End-to-end solver checks on instances whose optimum is known in closed
//! form, plus cross-method consistency on a small spanning-tree problem.

use robustfw_core::lp::epigraph_lp;
use robustfw_core::oracles::{GraphInstance, MstOracle, VertexListOracle};
use robustfw_core::smoothing::eval_f;
use robustfw_core::solvers::{
    solve_afw, solve_consgen, solve_fw, solve_fw_convhull, solve_untimed,
};
use robustfw_core::trace::NullClock;
use robustfw_core::uncertainty::{BoxSet, BudgetedSet, ScenarioHullSet, UncertaintySet};
use robustfw_core::{Method, Point, ProblemInstance, SolverConfig};

// X = [-1, 1] spanned by two vertices, U = [-1, 1], so f(x) = |x| with
// optimum 0 at the midpoint. D = 2, M = 2, M_max = 1.
fn abs_instance() -> ProblemInstance {
    let oracle =
        VertexListOracle::new(vec![Point::new(vec![-1.0]), Point::new(vec![1.0])]).unwrap();
    let set = UncertaintySet::Box(BoxSet::new(vec![-1.0], vec![1.0]).unwrap());
    ProblemInstance::new("interval-abs".into(), Box::new(oracle), set).unwrap()
}

// Spanning trees of the triangle graph: any two of the three edges.
fn triangle_mst_instance() -> ProblemInstance {
    let oracle = MstOracle::new(GraphInstance::complete(3).unwrap());
    let set = UncertaintySet::Budgeted(
        BudgetedSet::new(vec![1.0, 2.0, 3.0], vec![2.0, 1.0, 1.0], 1.5).unwrap(),
    );
    ProblemInstance::new("triangle-mst".into(), Box::new(oracle), set).unwrap()
}

fn triangle_tree_vertices() -> Vec<Point> {
    vec![
        Point::new(vec![1.0, 1.0, 0.0]),
        Point::new(vec![1.0, 0.0, 1.0]),
        Point::new(vec![0.0, 1.0, 1.0]),
    ]
}

#[test]
fn fixed_smoothing_meets_the_accuracy_target() {
    let instance = abs_instance();
    for epsilon in [0.5, 0.1] {
        let mut config = SolverConfig::new(Method::Fw);
        config.epsilon = epsilon;
        config.max_iters = 1_000_000;
        config.max_lmo_calls = 2_000_000;
        let result = solve_fw(&instance, &config, &NullClock).unwrap();
        assert!(
            result.f_best <= epsilon + 1e-12,
            "epsilon {}: f_best {}",
            epsilon,
            result.f_best
        );
        assert!(result.f_best >= -1e-12);
    }
}

#[test]
fn adaptive_schedule_tracks_the_proposition_bound() {
    let instance = abs_instance();
    let mut config = SolverConfig::new(Method::Afw);
    config.epsilon = 0.05;
    config.max_iters = 400;
    config.max_lmo_calls = 10_000;
    let result = solve_afw(&instance, &config, &NullClock).unwrap();
    // D = 2, M_max = 1: the gap after t steps is at most 1/sqrt(t).
    for record in result.trace.records() {
        if record.iteration < 2 {
            continue;
        }
        let steps = (record.iteration - 1) as f64;
        let bound = 2.0 * 1.0 / (2.0 * steps.sqrt());
        assert!(
            record.f_value <= bound + 1e-9,
            "iteration {}: f {} > bound {}",
            record.iteration,
            record.f_value,
            bound
        );
    }
    let last = result.trace.last().unwrap();
    assert!(last.iteration >= 400);
    assert!(result.f_best <= 0.05 + 1e-9);
}

#[test]
fn constraint_generation_finds_the_midpoint() {
    let instance = abs_instance();
    let config = SolverConfig::new(Method::ConsGen);
    let result = solve_consgen(&instance, &config, &NullClock).unwrap();
    assert!(result.f_best.abs() < 1e-7);
    assert!(result.x_best[0].abs() < 1e-7);
    assert!(result.dual_bound.unwrap().abs() < 1e-7);
}

#[test]
fn singleton_uncertainty_reduces_to_one_oracle_call() {
    let set = UncertaintySet::ScenarioHull(
        ScenarioHullSet::new(vec![Point::new(vec![3.0, -1.0])]).unwrap(),
    );
    let oracle = VertexListOracle::new(vec![
        Point::new(vec![1.0, 0.0]),
        Point::new(vec![0.0, 1.0]),
    ])
    .unwrap();
    let instance = ProblemInstance::new("singleton".into(), Box::new(oracle), set).unwrap();
    let config = SolverConfig::new(Method::Fw);
    let result = solve_fw(&instance, &config, &NullClock).unwrap();
    // The cost is deterministic, so the answer is the vertex minimizing it.
    assert!((result.f_best - (-1.0)).abs() < 1e-12);
    assert_eq!(result.iterations, 1);
}

#[test]
fn hull_augmented_run_matches_the_exhaustive_dual() {
    let instance = triangle_mst_instance();
    let vertices = triangle_tree_vertices();
    let (_, tau_star) = epigraph_lp(&vertices, instance.uncertainty(), 1e-9).unwrap();

    let mut config = SolverConfig::new(Method::FwConvhull);
    config.epsilon = 1e-7;
    config.conv_hull_period = 1;
    config.max_iters = 2_000;
    config.max_lmo_calls = 10_000;
    let result = solve_fw_convhull(&instance, &config, &NullClock).unwrap();
    assert_eq!(result.termination, robustfw_core::solvers::Termination::GapClosed);
    assert!(
        (result.f_best - tau_star).abs() < 1e-6,
        "fw-convhull {} vs exhaustive {}",
        result.f_best,
        tau_star
    );
}

#[test]
fn methods_agree_and_respect_weak_duality() {
    let instance = triangle_mst_instance();
    let vertices = triangle_tree_vertices();
    let (_, f_star) = epigraph_lp(&vertices, instance.uncertainty(), 1e-9).unwrap();

    let consgen = solve_consgen(
        &instance,
        &SolverConfig::new(Method::ConsGen),
        &NullClock,
    )
    .unwrap();
    assert!((consgen.f_best - f_star).abs() < 1e-6);

    let mut hull_cfg = SolverConfig::new(Method::FwConvhull);
    hull_cfg.epsilon = 1e-7;
    hull_cfg.conv_hull_period = 1;
    hull_cfg.max_iters = 2_000;
    let hull = solve_fw_convhull(&instance, &hull_cfg, &NullClock).unwrap();
    assert!((hull.f_best - consgen.f_best).abs() < 1e-6);

    for result in [&consgen, &hull] {
        for record in result.trace.records() {
            if let Some(db) = record.dual_bound {
                assert!(db <= f_star + 1e-6, "dual bound {} above optimum {}", db, f_star);
            }
        }
    }
}

#[test]
fn iterates_stay_in_the_unit_box_for_combinatorial_oracles() {
    let instance = triangle_mst_instance();
    let mut config = SolverConfig::new(Method::Fw);
    config.epsilon = 0.3;
    let result = solve_fw(&instance, &config, &NullClock).unwrap();
    for j in 0..3 {
        assert!(result.x_best[j] >= -1e-12 && result.x_best[j] <= 1.0 + 1e-12);
    }
}

#[test]
fn reported_value_matches_reported_point() {
    let fw_cfg = SolverConfig::new(Method::Fw);
    let mut hull_cfg = SolverConfig::new(Method::FwConvhull);
    hull_cfg.conv_hull_period = 2;
    let afw_cfg = SolverConfig::new(Method::Afw);
    let cg_cfg = SolverConfig::new(Method::ConsGen);
    for config in [fw_cfg, afw_cfg, hull_cfg, cg_cfg] {
        let instance = triangle_mst_instance();
        let result = solve_untimed(&instance, &config).unwrap();
        let f_at_best = eval_f(instance.uncertainty(), &result.x_best).unwrap();
        assert!(
            (result.f_best - f_at_best).abs() <= 1e-9 * (1.0 + f_at_best.abs()),
            "{:?} mismatch: {} vs {}",
            config.method,
            result.f_best,
            f_at_best
        );
        if let Some(db) = result.dual_bound {
            assert!(db <= result.f_best + 1e-9);
        }
    }
}

#[test]
fn replays_are_bitwise_identical() {
    let instance = triangle_mst_instance();
    for method in [Method::Fw, Method::Afw, Method::FwConvhull, Method::ConsGen] {
        let mut config = SolverConfig::new(method);
        config.epsilon = 0.2;
        config.max_iters = 300;
        let a = solve_untimed(&instance, &config).unwrap();
        let b = solve_untimed(&instance, &config).unwrap();
        assert_eq!(a.f_best.to_bits(), b.f_best.to_bits());
        assert_eq!(a.lmo_calls, b.lmo_calls);
        assert_eq!(a.trace.len(), b.trace.len());
        for (ra, rb) in a.trace.records().iter().zip(b.trace.records()) {
            assert_eq!(ra.f_value.to_bits(), rb.f_value.to_bits());
            assert_eq!(ra.lmo_calls, rb.lmo_calls);
            assert_eq!(ra.f_mu_value.map(f64::to_bits), rb.f_mu_value.map(f64::to_bits));
            assert_eq!(ra.dual_bound.map(f64::to_bits), rb.dual_bound.map(f64::to_bits));
        }
    }
}
