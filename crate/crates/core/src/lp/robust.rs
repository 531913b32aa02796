//! LP formulations of the restricted robust problem over a finite vertex
//! set: the epigraph (dual) side and the convex-hull (primal) side. At their
//! optima the two values coincide, which callers use as a cross-check.

use alloc::vec;
use alloc::vec::Vec;

use super::{solve_lp, Constraint, LinearProgram, LpStatus, Relation};
use crate::error::{Error, Result};
use crate::point::{dot, Point};
use crate::uncertainty::UncertaintySet;

/// Solves `max_{c in U} min_{i} c' v_i` over the listed vertices.
///
/// Returns `(c_star, tau)`: a worst-case cost vector that is guaranteed to
/// be a member of the set, and the optimal value
/// `tau = min_i c_star' v_i`.
pub fn epigraph_lp(
    vertices: &[Point],
    set: &UncertaintySet,
    tol: f64,
) -> Result<(Point, f64)> {
    check_vertices(vertices, set)?;
    let n = set.dimension();
    let k = vertices.len();

    match set {
        UncertaintySet::Box(_) | UncertaintySet::Budgeted(_) => {
            let (lower, widths, gamma) = deviation_form(set);
            let active: Vec<usize> = (0..n).filter(|&j| widths[j] > 0.0).collect();
            let na = active.len();

            // Variables: tau (free), then one deviation share per active
            // coordinate.
            let mut objective = vec![0.0; 1 + na];
            objective[0] = 1.0;
            let mut bounds = vec![(0.0, 1.0); 1 + na];
            bounds[0] = (f64::NEG_INFINITY, f64::INFINITY);

            let mut constraints = Vec::with_capacity(k + 1);
            for v in vertices {
                let mut coeffs = vec![0.0; 1 + na];
                coeffs[0] = 1.0;
                for (col, &j) in active.iter().enumerate() {
                    coeffs[1 + col] = -widths[j] * v[j];
                }
                constraints.push(Constraint {
                    coeffs,
                    relation: Relation::Le,
                    rhs: dot(&lower, v.coords()),
                });
            }
            if let Some(gamma) = gamma {
                let mut coeffs = vec![0.0; 1 + na];
                for col in 0..na {
                    coeffs[1 + col] = 1.0;
                }
                constraints.push(Constraint { coeffs, relation: Relation::Le, rhs: gamma });
            }

            let lp = LinearProgram { objective, constraints, bounds };
            let sol = solve_lp(&lp, tol)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Lp("epigraph lp did not reach optimality"));
            }

            let mut theta = vec![0.0; n];
            for (col, &j) in active.iter().enumerate() {
                theta[j] = sol.x[1 + col].max(0.0).min(1.0);
            }
            if let Some(gamma) = gamma {
                let spent: f64 = theta.iter().sum();
                if spent > gamma && spent > 0.0 {
                    let shrink = gamma / spent;
                    for t in theta.iter_mut() {
                        *t *= shrink;
                    }
                }
            }
            let c_star = Point::new(
                (0..n).map(|j| lower[j] + widths[j] * theta[j]).collect(),
            );
            Ok((c_star, sol.objective_value))
        }
        UncertaintySet::ScenarioHull(hull) => {
            let scenarios = hull.scenarios();
            let s_count = scenarios.len();

            // Variables: tau (free), then hull weights.
            let mut objective = vec![0.0; 1 + s_count];
            objective[0] = 1.0;
            let mut bounds = vec![(0.0, f64::INFINITY); 1 + s_count];
            bounds[0] = (f64::NEG_INFINITY, f64::INFINITY);

            let mut constraints = Vec::with_capacity(k + 1);
            for v in vertices {
                let mut coeffs = vec![0.0; 1 + s_count];
                coeffs[0] = 1.0;
                for (s, c) in scenarios.iter().enumerate() {
                    coeffs[1 + s] = -c.dot(v);
                }
                constraints.push(Constraint { coeffs, relation: Relation::Le, rhs: 0.0 });
            }
            let mut coeffs = vec![0.0; 1 + s_count];
            for s in 0..s_count {
                coeffs[1 + s] = 1.0;
            }
            constraints.push(Constraint { coeffs, relation: Relation::Eq, rhs: 1.0 });

            let lp = LinearProgram { objective, constraints, bounds };
            let sol = solve_lp(&lp, tol)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Lp("epigraph lp did not reach optimality"));
            }

            let mut weights: Vec<f64> = sol.x[1..].iter().map(|w| w.max(0.0)).collect();
            let total: f64 = weights.iter().sum();
            if total <= 0.0 {
                return Err(Error::Lp("epigraph lp returned empty hull weights"));
            }
            for w in weights.iter_mut() {
                *w /= total;
            }
            let mut c_star = vec![0.0; n];
            for (w, c) in weights.iter().zip(scenarios) {
                for (acc, cc) in c_star.iter_mut().zip(c.coords()) {
                    *acc += w * cc;
                }
            }
            Ok((Point::new(c_star), sol.objective_value))
        }
    }
}

/// Solves `min_{x in conv(V)} max_{c in U} c' x` over the listed vertices.
///
/// Returns `(x, weights, value)`: the minimizer as a convex combination of
/// the vertices (weights in vertex order, summing to one) and the optimal
/// worst-case value.
pub fn convhull_minmax(
    vertices: &[Point],
    set: &UncertaintySet,
    tol: f64,
) -> Result<(Point, Vec<f64>, f64)> {
    check_vertices(vertices, set)?;
    let n = set.dimension();
    let k = vertices.len();

    let sol_weights: Vec<f64>;
    let value: f64;
    match set {
        UncertaintySet::Box(_) | UncertaintySet::Budgeted(_) => {
            let (lower, widths, gamma) = deviation_form(set);
            let active: Vec<usize> = (0..n).filter(|&j| widths[j] > 0.0).collect();
            let na = active.len();
            let has_budget = gamma.is_some();

            // Variables: weights alpha, then (for a budgeted set) the budget
            // price eta, then one deviation price per active coordinate. The
            // inner maximization is replaced by its LP dual, so the whole
            // problem minimizes
            //   lower' V alpha + gamma * eta + sum_j pi_j.
            let nvars = k + usize::from(has_budget) + na;
            let eta_col = k;
            let pi0 = k + usize::from(has_budget);

            let mut objective = vec![0.0; nvars];
            for (i, v) in vertices.iter().enumerate() {
                objective[i] = -dot(&lower, v.coords());
            }
            if let Some(gamma) = gamma {
                objective[eta_col] = -gamma;
            }
            for col in 0..na {
                objective[pi0 + col] = -1.0;
            }

            let bounds = vec![(0.0, f64::INFINITY); nvars];

            let mut constraints = Vec::with_capacity(1 + na);
            let mut ones = vec![0.0; nvars];
            ones[..k].fill(1.0);
            constraints.push(Constraint { coeffs: ones, relation: Relation::Eq, rhs: 1.0 });
            for (col, &j) in active.iter().enumerate() {
                let mut coeffs = vec![0.0; nvars];
                for (i, v) in vertices.iter().enumerate() {
                    coeffs[i] = widths[j] * v[j];
                }
                if has_budget {
                    coeffs[eta_col] = -1.0;
                }
                coeffs[pi0 + col] = -1.0;
                constraints.push(Constraint { coeffs, relation: Relation::Le, rhs: 0.0 });
            }

            let lp = LinearProgram { objective, constraints, bounds };
            let sol = solve_lp(&lp, tol)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Lp("convex hull lp did not reach optimality"));
            }
            sol_weights = sol.x[..k].to_vec();
            value = -sol.objective_value;
        }
        UncertaintySet::ScenarioHull(hull) => {
            let scenarios = hull.scenarios();

            // Variables: weights alpha, then the epigraph value t (free).
            let nvars = k + 1;
            let mut objective = vec![0.0; nvars];
            objective[k] = -1.0;
            let mut bounds = vec![(0.0, f64::INFINITY); nvars];
            bounds[k] = (f64::NEG_INFINITY, f64::INFINITY);

            let mut constraints = Vec::with_capacity(1 + scenarios.len());
            let mut ones = vec![0.0; nvars];
            ones[..k].fill(1.0);
            constraints.push(Constraint { coeffs: ones, relation: Relation::Eq, rhs: 1.0 });
            for c in scenarios {
                let mut coeffs = vec![0.0; nvars];
                for (i, v) in vertices.iter().enumerate() {
                    coeffs[i] = c.dot(v);
                }
                coeffs[k] = -1.0;
                constraints.push(Constraint { coeffs, relation: Relation::Le, rhs: 0.0 });
            }

            let lp = LinearProgram { objective, constraints, bounds };
            let sol = solve_lp(&lp, tol)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Lp("convex hull lp did not reach optimality"));
            }
            sol_weights = sol.x[..k].to_vec();
            value = -sol.objective_value;
        }
    }

    let mut weights: Vec<f64> = sol_weights.iter().map(|w| w.max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Lp("convex hull lp returned empty weights"));
    }
    for w in weights.iter_mut() {
        *w /= total;
    }
    let mut x = vec![0.0; n];
    for (w, v) in weights.iter().zip(vertices) {
        if *w > 0.0 {
            for (acc, vc) in x.iter_mut().zip(v.coords()) {
                *acc += w * vc;
            }
        }
    }
    Ok((Point::new(x), weights, value))
}

/// `(lower, widths, budget)` description shared by box and budgeted sets.
fn deviation_form(set: &UncertaintySet) -> (Vec<f64>, Vec<f64>, Option<f64>) {
    match set {
        UncertaintySet::Box(b) => (
            b.lower().to_vec(),
            b.lower().iter().zip(b.upper()).map(|(l, u)| u - l).collect(),
            None,
        ),
        UncertaintySet::Budgeted(b) => {
            (b.c_lower().to_vec(), b.deviations().to_vec(), Some(b.gamma()))
        }
        UncertaintySet::ScenarioHull(_) => unreachable!("scenario sets take the hull path"),
    }
}

fn check_vertices(vertices: &[Point], set: &UncertaintySet) -> Result<()> {
    if vertices.is_empty() {
        return Err(Error::Invalid("vertex list must be nonempty"));
    }
    let n = set.dimension();
    for v in vertices {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
        if !v.is_finite() {
            return Err(Error::NonFinite("vertex coordinates"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::eval_f;
    use crate::uncertainty::{BoxSet, BudgetedSet, ScenarioHullSet};

    fn pts(rows: &[&[f64]]) -> Vec<Point> {
        rows.iter().map(|r| Point::new(r.to_vec())).collect()
    }

    fn budgeted(c_lower: &[f64], d: &[f64], gamma: f64) -> UncertaintySet {
        UncertaintySet::Budgeted(BudgetedSet::new(c_lower.to_vec(), d.to_vec(), gamma).unwrap())
    }

    #[test]
    fn single_vertex_reduces_to_support() {
        let set = budgeted(&[1.0, 1.0], &[1.0, 2.0], 1.0);
        let verts = pts(&[&[1.0, 1.0]]);

        let (c_star, tau) = epigraph_lp(&verts, &set, 1e-9).unwrap();
        let (sup, _) = set.support_max(&verts[0]).unwrap();
        assert!((tau - sup).abs() < 1e-9);
        assert!(set.contains(&c_star, 1e-9).unwrap());

        let (x, w, val) = convhull_minmax(&verts, &set, 1e-9).unwrap();
        assert!((val - sup).abs() < 1e-9);
        assert_eq!(w.len(), 1);
        assert!((w[0] - 1.0).abs() < 1e-12);
        assert!(x.dist(&verts[0]) < 1e-9);
    }

    #[test]
    fn two_vertex_budgeted_saddle() {
        // Vertices e1 and e2 with a symmetric budgeted set: by symmetry the
        // saddle point mixes both equally and the value is the midpoint's
        // worst case.
        let set = budgeted(&[0.0, 0.0], &[1.0, 1.0], 1.0);
        let verts = pts(&[&[1.0, 0.0], &[0.0, 1.0]]);

        let (x, w, val) = convhull_minmax(&verts, &set, 1e-9).unwrap();
        let (c_star, tau) = epigraph_lp(&verts, &set, 1e-9).unwrap();

        assert!((tau - val).abs() < 1e-9, "strong duality: {tau} vs {val}");
        assert!((val - 0.5).abs() < 1e-9);
        assert!((w[0] - 0.5).abs() < 1e-9);
        assert!((w[1] - 0.5).abs() < 1e-9);
        let f_at_x = eval_f(&set, &x).unwrap();
        assert!((f_at_x - val).abs() < 1e-9);
        assert!(set.contains(&c_star, 1e-9).unwrap());
    }

    #[test]
    fn hull_value_dominates_no_vertex(){
        // With vertices (1,0) and (0,1) and asymmetric deviations the mix
        // shifts toward the coordinate with the smaller deviation.
        let set = budgeted(&[0.0, 0.0], &[2.0, 1.0], 1.0);
        let verts = pts(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let (x, _, val) = convhull_minmax(&verts, &set, 1e-9).unwrap();
        for v in &verts {
            let fv = eval_f(&set, v).unwrap();
            assert!(val <= fv + 1e-9);
        }
        let f_at_x = eval_f(&set, &x).unwrap();
        assert!((f_at_x - val).abs() < 1e-9);
    }

    #[test]
    fn scenario_saddle_matches_both_sides() {
        let set = UncertaintySet::ScenarioHull(
            ScenarioHullSet::new(pts(&[&[2.0, 0.0], &[0.0, 2.0]])).unwrap(),
        );
        let verts = pts(&[&[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.5]]);

        let (x, w, val) = convhull_minmax(&verts, &set, 1e-9).unwrap();
        let (c_star, tau) = epigraph_lp(&verts, &set, 1e-9).unwrap();

        assert!((tau - val).abs() < 1e-9);
        assert!((val - 1.0).abs() < 1e-9);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(set.contains(&c_star, 1e-7).unwrap());
        let f_at_x = eval_f(&set, &x).unwrap();
        assert!((f_at_x - val).abs() < 1e-9);
    }

    #[test]
    fn box_set_works_in_both_lps() {
        let set = UncertaintySet::Box(BoxSet::new(vec![0.0, 1.0], vec![2.0, 1.0]).unwrap());
        let verts = pts(&[&[1.0, 0.0], &[0.0, 1.0]]);

        let (x, _, val) = convhull_minmax(&verts, &set, 1e-9).unwrap();
        let (c_star, tau) = epigraph_lp(&verts, &set, 1e-9).unwrap();
        assert!((tau - val).abs() < 1e-9);
        assert!(set.contains(&c_star, 1e-9).unwrap());
        let f_at_x = eval_f(&set, &x).unwrap();
        assert!((f_at_x - val).abs() < 1e-9);
    }

    #[test]
    fn rejects_empty_vertex_list() {
        let set = budgeted(&[0.0], &[1.0], 1.0);
        assert!(epigraph_lp(&[], &set, 1e-9).is_err());
        assert!(convhull_minmax(&[], &set, 1e-9).is_err());
    }
}
