//! Dense linear programming: a small two-phase simplex solver plus the two
//! robust-optimization formulations built on it.
//!
//! The solver returns primal values and row duals, and every `Optimal`
//! answer is re-verified against the original data: primal feasibility,
//! dual feasibility, complementary slackness, and the duality gap. Nothing
//! is trusted from the pivot path alone.

mod robust;
mod simplex;

pub use robust::{convhull_minmax, epigraph_lp};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::dot;

/// Constraint sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One linear constraint `coeffs' x (rel) rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize objective' x` subject to constraints and per-variable bounds.
/// Bounds may be infinite on either side.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::Invalid("lp needs at least one variable"));
        }
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.bounds.len() });
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("lp objective"));
        }
        for (lo, hi) in &self.bounds {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::Invalid("inconsistent variable bounds"));
            }
        }
        for row in &self.constraints {
            if row.coeffs.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.coeffs.len() });
            }
            if row.coeffs.iter().any(|v| !v.is_finite()) || !row.rhs.is_finite() {
                return Err(Error::NonFinite("lp constraint"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. For non-optimal statuses `x` and `duals` are empty and the
/// objective value is NaN.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    /// One dual per original constraint, in input order, for the maximization
    /// convention: `>= 0` for `Le` rows, `<= 0` for `Ge` rows, free for `Eq`.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

/// Solves the program with a dense two-phase simplex method and verifies the
/// result to tolerance `tol` before returning it.
pub fn solve_lp(lp: &LinearProgram, tol: f64) -> Result<LpSolution> {
    lp.validate()?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Invalid("lp tolerance must be finite and positive"));
    }
    let solution = simplex::solve(lp, tol)?;
    if solution.status == LpStatus::Optimal {
        verify_optimal(lp, &solution, tol)?;
    }
    Ok(solution)
}

/// Checks an allegedly optimal solution against the original data.
fn verify_optimal(lp: &LinearProgram, sol: &LpSolution, tol: f64) -> Result<()> {
    let n = lp.num_vars();
    if sol.x.len() != n || sol.duals.len() != lp.constraints.len() {
        return Err(Error::Lp("solution shape mismatch"));
    }
    if sol.x.iter().any(|v| !v.is_finite()) || sol.duals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Lp("non-finite solution"));
    }

    // Duals come out of one linear solve against the final basis, so their
    // rounding error scales with the largest magnitudes in that solve, not
    // with the individual dual value.
    let mut dual_scale = 1.0f64;
    for v in &lp.objective {
        dual_scale = dual_scale.max(v.abs());
    }
    for y in &sol.duals {
        dual_scale = dual_scale.max(y.abs());
    }

    // Primal feasibility: rows.
    for (row, y) in lp.constraints.iter().zip(&sol.duals) {
        let ax = dot(&row.coeffs, &sol.x);
        let scale = 1.0 + ax.abs() + row.rhs.abs();
        let violation = match row.relation {
            Relation::Le => ax - row.rhs,
            Relation::Ge => row.rhs - ax,
            Relation::Eq => (ax - row.rhs).abs(),
        };
        if violation > tol * scale {
            return Err(Error::Lp("primal row infeasibility"));
        }
        // Dual sign.
        let sign_ok = match row.relation {
            Relation::Le => *y >= -tol * dual_scale,
            Relation::Ge => *y <= tol * dual_scale,
            Relation::Eq => true,
        };
        if !sign_ok {
            return Err(Error::Lp("dual sign violation"));
        }
        // Complementary slackness on rows.
        let slack = ax - row.rhs;
        if (y * slack).abs() > tol * scale * (1.0 + y.abs()) {
            return Err(Error::Lp("row complementary slackness violation"));
        }
    }

    // Primal feasibility: bounds.
    for (xj, (lo, hi)) in sol.x.iter().zip(&lp.bounds) {
        if *xj < lo - tol * (1.0 + lo.abs()) || *xj > hi + tol * (1.0 + hi.abs()) {
            return Err(Error::Lp("bound violation"));
        }
    }

    // Reduced costs; bound multipliers are folded into them.
    let mut dual_objective = 0.0;
    for (row, y) in lp.constraints.iter().zip(&sol.duals) {
        dual_objective += y * row.rhs;
    }
    for j in 0..n {
        let mut r = lp.objective[j];
        let mut r_scale = 1.0 + lp.objective[j].abs();
        for (row, y) in lp.constraints.iter().zip(&sol.duals) {
            r -= y * row.coeffs[j];
            r_scale += (y * row.coeffs[j]).abs();
        }
        let scale = r_scale;
        let (lo, hi) = lp.bounds[j];
        if r > tol * scale {
            if hi.is_infinite() {
                return Err(Error::Lp("dual infeasibility at unbounded-above variable"));
            }
            // Positive reduced cost must sit at the upper bound.
            if (hi - sol.x[j]).abs() * r > tol * scale * (1.0 + hi.abs()) {
                return Err(Error::Lp("complementary slackness violation at upper bound"));
            }
            dual_objective += r * hi;
        } else if r < -tol * scale {
            if lo.is_infinite() {
                return Err(Error::Lp("dual infeasibility at unbounded-below variable"));
            }
            if (sol.x[j] - lo).abs() * (-r) > tol * scale * (1.0 + lo.abs()) {
                return Err(Error::Lp("complementary slackness violation at lower bound"));
            }
            dual_objective += r * lo;
        }
    }

    let primal_objective = dot(&lp.objective, &sol.x);
    if (primal_objective - sol.objective_value).abs()
        > tol * (1.0 + primal_objective.abs()) * 10.0
    {
        return Err(Error::Lp("reported objective disagrees with the solution"));
    }
    if (primal_objective - dual_objective).abs()
        > tol * (1.0 + primal_objective.abs() + dual_objective.abs())
    {
        return Err(Error::Lp("duality gap exceeds tolerance"));
    }
    Ok(())
}
