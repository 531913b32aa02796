//! Smoothed Frank-Wolfe in three flavors: fixed smoothing, decreasing
//! smoothing, and fixed smoothing augmented with convex-hull restricted
//! solves that certify dual bounds.

use super::{check_diameter, require_method, ActiveVertexSet, RunResult, Termination};
use crate::config::{Method, SolverConfig};
use crate::error::{Error, Result};
use crate::lp::{convhull_minmax, epigraph_lp};
use crate::math;
use crate::point::Point;
use crate::problem::{default_mu, iteration_bound, ProblemInstance};
use crate::smoothing::{eval_f, smoothed_value_gradient, MuSchedule};
use crate::trace::{SolverTrace, TraceRecord, WallClock};

/// Smoothed Frank-Wolfe with the fixed parameter `mu = epsilon / M^2` (or
/// the configured override) run for `ceil(4 D^2 M^2 / epsilon^2)` iterations,
/// which guarantees an `epsilon`-accurate answer.
pub fn solve_fw(
    instance: &ProblemInstance,
    config: &SolverConfig,
    clock: &dyn WallClock,
) -> Result<RunResult> {
    require_method(config, Method::Fw)?;
    run_smoothed(instance, config, clock, Flavor::Fixed)
}

/// Smoothed Frank-Wolfe with the decreasing schedule
/// `mu_t = 2 D / (M_max sqrt(t + 1))`, which needs no accuracy target up
/// front; after `T` iterations the error is at most `D M_max / (2 sqrt(T))`.
pub fn solve_afw(
    instance: &ProblemInstance,
    config: &SolverConfig,
    clock: &dyn WallClock,
) -> Result<RunResult> {
    require_method(config, Method::Afw)?;
    run_smoothed(instance, config, clock, Flavor::Adaptive)
}

/// Fixed-smoothing Frank-Wolfe that periodically solves the restricted
/// problem over the convex hull of all oracle outputs so far. Each hull
/// solve yields a candidate iterate, and one extra oracle call turns it into
/// a certified lower bound; the run closes early once best value and best
/// bound meet within epsilon.
pub fn solve_fw_convhull(
    instance: &ProblemInstance,
    config: &SolverConfig,
    clock: &dyn WallClock,
) -> Result<RunResult> {
    require_method(config, Method::FwConvhull)?;
    run_smoothed(instance, config, clock, Flavor::ConvHull)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flavor {
    Fixed,
    Adaptive,
    ConvHull,
}

fn run_smoothed(
    instance: &ProblemInstance,
    config: &SolverConfig,
    clock: &dyn WallClock,
    flavor: Flavor,
) -> Result<RunResult> {
    config.validate()?;
    let set = instance.uncertainty();
    let consts = instance.constants();
    let diam_x = consts.feasible_diameter;
    let diam_u = consts.uncertainty_diameter;
    let max_norm_u = consts.uncertainty_max_norm;
    let anchor = set.center();

    let schedule = match flavor {
        Flavor::Fixed | Flavor::ConvHull => {
            let mu = match config.mu_override {
                Some(mu) => mu,
                None if diam_u > 0.0 => default_mu(config.epsilon, diam_u)?,
                None => 1.0,
            };
            MuSchedule::Fixed(mu)
        }
        Flavor::Adaptive => match config.mu_override {
            Some(mu) => MuSchedule::Fixed(mu),
            None if diam_x > 0.0 && max_norm_u > 0.0 => MuSchedule::Adaptive {
                feasible_diameter: diam_x,
                uncertainty_max_norm: max_norm_u,
            },
            None => MuSchedule::Fixed(1.0),
        },
    };

    // Iterations that certify epsilon accuracy for this flavor.
    let certified: u64 = match flavor {
        Flavor::Fixed | Flavor::ConvHull => iteration_bound(config.epsilon, diam_x, diam_u)?,
        Flavor::Adaptive => {
            let root = diam_x * max_norm_u / (2.0 * config.epsilon);
            math::ceil(root * root) as u64
        }
    };
    let certified = certified.max(1);
    let planned = certified.min(config.max_iters as u64) as usize;
    let exhausted_term = if (planned as u64) == certified {
        Termination::EpsilonReached
    } else {
        Termination::IterBudget
    };

    let mut lmo_calls = 0usize;
    let mut x = instance.lmo().minimize(anchor.coords())?;
    lmo_calls += 1;
    let x_first = x.clone();

    let mut f_best = eval_f(set, &x)?;
    let mut x_best = x.clone();
    let mut dual_best: Option<f64> = None;
    let mut hull = ActiveVertexSet::new();
    if flavor == Flavor::ConvHull {
        hull.push(x.clone());
    }

    let mut trace = SolverTrace::new();
    let mut termination = exhausted_term;
    let mut iterations = 0usize;

    for t in 1..=planned {
        iterations = t;
        let mu_t = schedule.mu_at(t - 1);
        let (f_mu, grad) =
            smoothed_value_gradient(set, &anchor, mu_t, &x, config.projection_tolerance)?;
        let f_x = eval_f(set, &x)?;
        if f_x < f_best {
            f_best = f_x;
            x_best = x.clone();
        }

        let mut gap_closed = false;
        if flavor == Flavor::ConvHull && t % config.conv_hull_period == 0 {
            if lmo_calls >= config.max_lmo_calls {
                trace_row(&mut trace, clock, t, f_x, Some(f_mu), dual_best, lmo_calls);
                termination = Termination::LmoBudget;
                return Ok(finish(x_best, f_best, dual_best, termination, trace, t, lmo_calls));
            }
            let (x_hull, _, val) = convhull_minmax(hull.points(), set, config.lp_tolerance)?;
            let (c_star, tau) = epigraph_lp(hull.points(), set, config.lp_tolerance)?;
            if (tau - val).abs() > 1e-5 * (1.0 + val.abs()) {
                return Err(Error::Internal("hull primal and dual values disagree"));
            }
            if val < f_best {
                f_best = val;
                x_best = x_hull.clone();
            }
            let v_star = instance.lmo().minimize(c_star.coords())?;
            lmo_calls += 1;
            check_diameter(&x_first, &v_star, diam_x)?;
            let gap = c_star.dot(&x_hull) - c_star.dot(&v_star);
            let lower = val - gap.max(0.0);
            if dual_best.map_or(true, |cur| lower > cur) {
                dual_best = Some(lower);
            }
            hull.push(v_star);
            if let Some(lb) = dual_best {
                if f_best - lb <= config.epsilon {
                    gap_closed = true;
                }
            }
        }

        trace_row(&mut trace, clock, t, f_x, Some(f_mu), dual_best, lmo_calls);
        if gap_closed {
            termination = Termination::GapClosed;
            return Ok(finish(x_best, f_best, dual_best, termination, trace, t, lmo_calls));
        }

        if lmo_calls >= config.max_lmo_calls {
            termination = Termination::LmoBudget;
            return Ok(finish(x_best, f_best, dual_best, termination, trace, t, lmo_calls));
        }
        let v = instance.lmo().minimize(grad.coords())?;
        lmo_calls += 1;
        check_diameter(&x_first, &v, diam_x)?;
        if flavor == Flavor::ConvHull {
            hull.push(v.clone());
        }
        let step = 2.0 / (t as f64 + 1.0);
        x = x.lerp(&v, step);
    }

    // Evaluate the final iterate produced by the last step.
    let final_iter = planned + 1;
    let mu_final = schedule.mu_at(planned);
    let (f_mu, _) =
        smoothed_value_gradient(set, &anchor, mu_final, &x, config.projection_tolerance)?;
    let f_x = eval_f(set, &x)?;
    if f_x < f_best {
        f_best = f_x;
        x_best = x.clone();
    }
    trace_row(&mut trace, clock, final_iter, f_x, Some(f_mu), dual_best, lmo_calls);

    Ok(finish(x_best, f_best, dual_best, termination, trace, iterations.max(1), lmo_calls))
}

fn trace_row(
    trace: &mut SolverTrace,
    clock: &dyn WallClock,
    iteration: usize,
    f_value: f64,
    f_mu_value: Option<f64>,
    dual_bound: Option<f64>,
    lmo_calls: usize,
) {
    trace.push(TraceRecord {
        iteration,
        f_value,
        f_mu_value,
        dual_bound,
        lmo_calls,
        elapsed_seconds: clock.elapsed_seconds(),
    });
}

fn finish(
    x_best: Point,
    f_best: f64,
    dual_bound: Option<f64>,
    termination: Termination,
    trace: SolverTrace,
    iterations: usize,
    lmo_calls: usize,
) -> RunResult {
    RunResult { x_best, f_best, dual_bound, termination, trace, iterations, lmo_calls }
}
