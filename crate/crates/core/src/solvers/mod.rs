//! The four solvers and their shared plumbing.

mod consgen;
mod fw;

pub use consgen::solve_consgen;
pub use fw::{solve_afw, solve_fw, solve_fw_convhull};

use alloc::vec::Vec;

use crate::config::{Method, SolverConfig};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::problem::ProblemInstance;
use crate::trace::{NullClock, SolverTrace, WallClock};

/// Vertices returned by the oracle so far, deduplicated.
#[derive(Clone, Debug, Default)]
pub struct ActiveVertexSet {
    vertices: Vec<Point>,
}

/// Two vertices closer than this are considered the same point.
pub const VERTEX_DEDUP_TOL: f64 = 1e-12;

impl ActiveVertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex unless an equal one (within [`VERTEX_DEDUP_TOL`]) is
    /// already stored. Returns whether the vertex was added.
    pub fn push(&mut self, v: Point) -> bool {
        if self.vertices.iter().any(|u| u.dist(&v) <= VERTEX_DEDUP_TOL) {
            return false;
        }
        self.vertices.push(v);
        true
    }

    pub fn points(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The method completed the iteration count that certifies the target
    /// accuracy.
    EpsilonReached,
    /// The iteration cap cut the run short of its theoretical budget.
    IterBudget,
    /// The oracle-call cap cut the run short.
    LmoBudget,
    /// A certified optimality gap at most epsilon closed the run early.
    GapClosed,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::EpsilonReached => "epsilon_reached",
            Termination::IterBudget => "iter_budget",
            Termination::LmoBudget => "lmo_budget",
            Termination::GapClosed => "gap_closed",
        }
    }
}

/// Outcome of a solver run.
#[derive(Clone, Debug)]
pub struct RunResult {
    /// Best iterate seen, measured by the true objective.
    pub x_best: Point,
    /// True objective value at `x_best`.
    pub f_best: f64,
    /// Best certified lower bound on the optimal value, if the method
    /// produces one.
    pub dual_bound: Option<f64>,
    pub termination: Termination,
    pub trace: SolverTrace,
    pub iterations: usize,
    pub lmo_calls: usize,
}

/// Runs the solver selected by `config.method` with timestamps from the
/// standard clock.
#[cfg(feature = "std")]
pub fn solve(instance: &ProblemInstance, config: &SolverConfig) -> Result<RunResult> {
    solve_with_clock(instance, config, &crate::trace::StdClock::start())
}

/// Runs the solver selected by `config.method` without timing. Trace rows
/// report zero elapsed seconds.
pub fn solve_untimed(instance: &ProblemInstance, config: &SolverConfig) -> Result<RunResult> {
    solve_with_clock(instance, config, &NullClock)
}

/// Runs the solver selected by `config.method` against a caller-supplied
/// clock.
pub fn solve_with_clock(
    instance: &ProblemInstance,
    config: &SolverConfig,
    clock: &dyn WallClock,
) -> Result<RunResult> {
    match config.method {
        Method::Fw => solve_fw(instance, config, clock),
        Method::Afw => solve_afw(instance, config, clock),
        Method::FwConvhull => solve_fw_convhull(instance, config, clock),
        Method::ConsGen => solve_consgen(instance, config, clock),
    }
}

pub(crate) fn require_method(config: &SolverConfig, expected: Method) -> Result<()> {
    if config.method != expected {
        return Err(Error::Invalid("config.method does not match the called solver"));
    }
    Ok(())
}

/// Spot check of the instance's declared feasible diameter against a pair of
/// oracle outputs.
pub(crate) fn check_diameter(reference: &Point, v: &Point, bound: f64) -> Result<()> {
    if v.dist(reference) > bound + 1e-7 * (1.0 + bound) {
        return Err(Error::Invalid("oracle outputs exceed the declared feasible diameter"));
    }
    Ok(())
}
