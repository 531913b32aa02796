//! Constraint generation: cutting-plane rounds on the dual problem
//! max_{c in U} min over collected vertices, each round asking the oracle
//! for a vertex that cuts off the current dual optimum.

use super::{require_method, ActiveVertexSet, RunResult, Termination};
use crate::config::{Method, SolverConfig};
use crate::error::Result;
use crate::lp::{convhull_minmax, epigraph_lp};
use crate::problem::ProblemInstance;
use crate::smoothing::eval_f;
use crate::trace::{SolverTrace, TraceRecord, WallClock};

/// Epigraph LP rows stay below the dense solver's comfortable size.
const VERTEX_ROW_CAP: usize = 1900;

/// Constraint generation. Each round solves the restricted dual
/// max_{c in U} min_i cᵀv_i over the vertices collected so far, then asks the
/// oracle for the best response x_new to the maximizing cost c*. The value
/// c*ᵀx_new is a certified lower bound on the optimum; once it rises to the
/// restricted dual value the vertex set is complete and one final hull solve
/// recovers the primal answer.
pub fn solve_consgen(
    instance: &ProblemInstance,
    config: &SolverConfig,
    clock: &dyn WallClock,
) -> Result<RunResult> {
    require_method(config, Method::ConsGen)?;
    config.validate()?;
    let set = instance.uncertainty();
    let center = set.center();
    let cut_slack = config.epsilon * 1e-2;

    let mut lmo_calls = 0usize;
    let first = instance.lmo().minimize(center.coords())?;
    lmo_calls += 1;

    let mut f_best = eval_f(set, &first)?;
    let mut x_best = first.clone();
    let mut dual_best: Option<f64> = None;
    let mut hull = ActiveVertexSet::new();
    hull.push(first);

    let mut trace = SolverTrace::new();
    let mut termination = Termination::IterBudget;
    let mut round = 0usize;

    while round < config.max_iters {
        round += 1;
        let (c_star, tau) = epigraph_lp(hull.points(), set, config.lp_tolerance)?;
        if lmo_calls >= config.max_lmo_calls {
            termination = Termination::LmoBudget;
            round -= 1;
            break;
        }
        let x_new = instance.lmo().minimize(c_star.coords())?;
        lmo_calls += 1;
        let lower = c_star.dot(&x_new);
        if dual_best.map_or(true, |cur| lower > cur) {
            dual_best = Some(lower);
        }
        let f_new = eval_f(set, &x_new)?;
        if f_new < f_best {
            f_best = f_new;
            x_best = x_new.clone();
        }
        trace.push(TraceRecord {
            iteration: round,
            f_value: f_best,
            f_mu_value: None,
            dual_bound: dual_best,
            lmo_calls,
            elapsed_seconds: clock.elapsed_seconds(),
        });

        if lower >= tau - cut_slack {
            termination = Termination::GapClosed;
            break;
        }
        if !hull.push(x_new) {
            // The oracle repeated a vertex without satisfying the cut test;
            // the bounds cannot improve further, so stop with what we have.
            termination = Termination::GapClosed;
            break;
        }
        if hull.len() >= VERTEX_ROW_CAP {
            termination = Termination::IterBudget;
            break;
        }
    }

    let (x_conv, _, value) = convhull_minmax(hull.points(), set, config.lp_tolerance)?;
    if value < f_best {
        f_best = value;
        x_best = x_conv;
    }
    if termination == Termination::GapClosed {
        if let Some(lb) = dual_best {
            if f_best - lb > config.epsilon {
                termination = Termination::IterBudget;
            }
        }
    }
    trace.push(TraceRecord {
        iteration: round + 1,
        f_value: f_best,
        f_mu_value: None,
        dual_bound: dual_best,
        lmo_calls,
        elapsed_seconds: clock.elapsed_seconds(),
    });

    Ok(RunResult {
        x_best,
        f_best,
        dual_bound: dual_best,
        termination,
        trace,
        iterations: round.max(1),
        lmo_calls,
    })
}
