//! Two-phase dense tableau simplex with Dantzig pricing, a Bland fallback
//! against cycling, and a final refactorization of the optimal basis against
//! pristine data so accumulated pivot error does not leak into the answer.

use alloc::vec;
use alloc::vec::Vec;

use super::{LinearProgram, LpSolution, LpStatus, Relation};
use crate::error::{Error, Result};
use crate::point::dot;

const PIVOT_EPS: f64 = 1e-10;
const ENTER_EPS: f64 = 1e-9;

#[derive(Clone, Copy)]
enum VarMap {
    /// `x = lo + y`, `y >= 0`.
    Shifted { col: usize, lo: f64 },
    /// `x = hi - y`, `y >= 0`.
    Flipped { col: usize, hi: f64 },
    /// `x = y_pos - y_neg`.
    Split { pos: usize, neg: usize },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RowOrigin {
    Constraint(usize),
    Bound,
}

enum PhaseEnd {
    Converged,
    Unbounded,
    /// The objective has not moved for a long stretch of pivots; the caller
    /// should refactorize, clean the tableau, and decide from exact data.
    Stalled,
}

pub(super) fn solve(lp: &LinearProgram, tol: f64) -> Result<LpSolution> {
    let n = lp.num_vars();

    // Variables become nonnegative via shift, reflection, or splitting.
    let mut var_map = Vec::with_capacity(n);
    let mut ncols = 0usize;
    for j in 0..n {
        let (lo, hi) = lp.bounds[j];
        if lo.is_finite() {
            var_map.push(VarMap::Shifted { col: ncols, lo });
            ncols += 1;
        } else if hi.is_finite() {
            var_map.push(VarMap::Flipped { col: ncols, hi });
            ncols += 1;
        } else {
            var_map.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
            ncols += 2;
        }
    }

    let mut std_obj = vec![0.0; ncols];
    for j in 0..n {
        let c = lp.objective[j];
        match var_map[j] {
            VarMap::Shifted { col, .. } => std_obj[col] += c,
            VarMap::Flipped { col, .. } => std_obj[col] -= c,
            VarMap::Split { pos, neg } => {
                std_obj[pos] += c;
                std_obj[neg] -= c;
            }
        }
    }

    // Transformed constraint rows, then upper-bound rows for doubly bounded
    // variables.
    let mut rows: Vec<(Vec<f64>, Relation, f64, RowOrigin)> = Vec::new();
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut coeffs = vec![0.0; ncols];
        let mut rhs = con.rhs;
        for j in 0..n {
            let a = con.coeffs[j];
            if a == 0.0 {
                continue;
            }
            match var_map[j] {
                VarMap::Shifted { col, lo } => {
                    coeffs[col] += a;
                    rhs -= a * lo;
                }
                VarMap::Flipped { col, hi } => {
                    coeffs[col] -= a;
                    rhs -= a * hi;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        rows.push((coeffs, con.relation, rhs, RowOrigin::Constraint(i)));
    }
    for j in 0..n {
        let (lo, hi) = lp.bounds[j];
        if lo.is_finite() && hi.is_finite() {
            if let VarMap::Shifted { col, .. } = var_map[j] {
                let mut coeffs = vec![0.0; ncols];
                coeffs[col] = 1.0;
                rows.push((coeffs, Relation::Le, hi - lo, RowOrigin::Bound));
            }
        }
    }

    // Normalize to nonnegative right-hand sides; remember flips for duals.
    let m = rows.len();
    let mut flipped = vec![false; m];
    for (i, row) in rows.iter_mut().enumerate() {
        if row.2 < 0.0 {
            for a in row.0.iter_mut() {
                *a = -*a;
            }
            row.2 = -row.2;
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            flipped[i] = true;
        }
    }

    // Column layout: structural, one aux per inequality row, artificials.
    let mut aux_col = vec![usize::MAX; m];
    let mut next = ncols;
    for (i, row) in rows.iter().enumerate() {
        if row.1 != Relation::Eq {
            aux_col[i] = next;
            next += 1;
        }
    }
    let mut art_col = vec![usize::MAX; m];
    for (i, row) in rows.iter().enumerate() {
        if row.1 != Relation::Le {
            art_col[i] = next;
            next += 1;
        }
    }
    let total = next;
    let mut artificial = vec![false; total];
    let has_artificials = art_col.iter().any(|c| *c != usize::MAX);

    let mut tableau: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    for (i, row) in rows.iter().enumerate() {
        let mut t = vec![0.0; total + 1];
        t[..ncols].copy_from_slice(&row.0);
        match row.1 {
            Relation::Le => {
                t[aux_col[i]] = 1.0;
                basis[i] = aux_col[i];
            }
            Relation::Ge => {
                t[aux_col[i]] = -1.0;
                t[art_col[i]] = 1.0;
                basis[i] = art_col[i];
                artificial[art_col[i]] = true;
            }
            Relation::Eq => {
                t[art_col[i]] = 1.0;
                basis[i] = art_col[i];
                artificial[art_col[i]] = true;
            }
        }
        t[total] = row.2;
        tableau.push(t);
    }
    let pristine = tableau.clone();

    // Reduced-cost rows, with the negated objective value in the last cell.
    let mut obj_rows: [Vec<f64>; 2] = [vec![0.0; total + 1], vec![0.0; total + 1]];
    for (j, c) in std_obj.iter().enumerate() {
        obj_rows[1][j] = *c;
    }
    if has_artificials {
        for j in 0..total {
            if artificial[j] {
                obj_rows[0][j] = -1.0;
            }
        }
        // Price out the artificial basis.
        for i in 0..m {
            if artificial[basis[i]] {
                let row = tableau[i].clone();
                for (o, r) in obj_rows[0].iter_mut().zip(&row) {
                    *o += r;
                }
            }
        }
    }

    let mut pivots = 0usize;
    let rhs_scale = rows.iter().map(|r| r.2.abs()).fold(0.0f64, f64::max);

    // Full-length cost vectors over every tableau column, one per phase.
    let mut phase_costs: [Vec<f64>; 2] = [vec![0.0; total], vec![0.0; total]];
    for j in 0..total {
        if artificial[j] {
            phase_costs[0][j] = -1.0;
        }
    }
    phase_costs[1][..ncols].copy_from_slice(&std_obj);

    let numerics = Numerics {
        // Path-only slack for the ratio test; violations it admits are
        // washed out by the next refactorization.
        ratio_slack: 1e-9 * (1.0 + rhs_scale),
        // Exact basic values must clear this before a basis is accepted, so
        // the answer survives re-verification against the original data.
        accept_floor: 0.5 * tol.min(1e-9),
        // Beyond this, drift has corrupted the pivot path outright.
        corruption_floor: 1e-7 * (1.0 + rhs_scale),
        pivot_cap: 1000 + 60 * (m + total),
        pause_every: 2 * (m + total).max(64),
    };

    // Every row owns a unit column (its slack, or its artificial for
    // equality rows); these rebuild a factorizable basis if pivoting ever
    // drives it singular.
    let row_unit_col: Vec<usize> = (0..m)
        .map(|i| if aux_col[i] != usize::MAX { aux_col[i] } else { art_col[i] })
        .collect();

    if has_artificials {
        let infeasibility = match optimize_phase(
            &mut tableau, &mut obj_rows, 0, &mut basis, &artificial, &pristine, &phase_costs, &row_unit_col, &numerics, &mut pivots,
        )? {
            PhaseResult::Optimal(fac) => {
                // The tableau continues into the drive-out and phase two, so
                // leave it rebuilt from exact data.
                rebuild_tableau(&pristine, &fac, &basis, &phase_costs, &mut tableau, &mut obj_rows);
                basis
                    .iter()
                    .zip(&fac.basic_values)
                    .filter(|(col, _)| artificial[**col])
                    .map(|(_, v)| v.max(0.0))
                    .sum()
            }
            PhaseResult::Unbounded => return Err(Error::Internal("phase one cannot be unbounded")),
            PhaseResult::Singular => obj_rows[0][total],
        };
        if infeasibility > (1e-7f64).max(10.0 * tol) * (1.0 + rhs_scale) {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective_value: f64::NAN,
                duals: Vec::new(),
                pivots,
            });
        }
        // Drive leftover artificials out of the basis where possible.
        for i in 0..m {
            if !artificial[basis[i]] {
                continue;
            }
            let mut enter = None;
            let mut best = 1e-7;
            for j in 0..total {
                if !artificial[j] && tableau[i][j].abs() > best {
                    best = tableau[i][j].abs();
                    enter = Some(j);
                }
            }
            if let Some(e) = enter {
                pivot(&mut tableau, &mut obj_rows, i, e);
                basis[i] = e;
                pivots += 1;
            }
        }
    }

    let (x_std, duals_std) = match optimize_phase(
        &mut tableau, &mut obj_rows, 1, &mut basis, &artificial, &pristine, &phase_costs, &row_unit_col, &numerics, &mut pivots,
    )? {
        PhaseResult::Optimal(fac) => {
            let duals = basis_duals(&fac, &basis, &phase_costs[1]);
            (fac.x_std, duals)
        }
        PhaseResult::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: Vec::new(),
                objective_value: f64::NAN,
                duals: Vec::new(),
                pivots,
            });
        }
        PhaseResult::Singular => {
            fallback_solution(&tableau, &obj_rows[1], &basis, &rows, aux_col.as_slice(), &art_col, total)
        }
    };

    let mut x = vec![0.0; n];
    for j in 0..n {
        x[j] = match var_map[j] {
            VarMap::Shifted { col, lo } => lo + x_std[col],
            VarMap::Flipped { col, hi } => hi - x_std[col],
            VarMap::Split { pos, neg } => x_std[pos] - x_std[neg],
        };
    }
    let mut duals = vec![0.0; lp.constraints.len()];
    for (i, row) in rows.iter().enumerate() {
        if let RowOrigin::Constraint(k) = row.3 {
            duals[k] = if flipped[i] { -duals_std[i] } else { duals_std[i] };
        }
    }
    let objective_value = dot(&lp.objective, &x);

    Ok(LpSolution { status: LpStatus::Optimal, x, objective_value, duals, pivots })
}

/// Numerical policy shared by the pivot loops of one solve.
struct Numerics {
    /// Path-only slack in the ratio test; the small violations it admits
    /// are washed out by the next refactorization.
    ratio_slack: f64,
    /// Exact basic values must clear this before a basis is accepted, so
    /// the answer survives re-verification against the original data.
    accept_floor: f64,
    /// An exact basic value below this means the pivot path is corrupted.
    corruption_floor: f64,
    pivot_cap: usize,
    /// Pivots between refactorization pauses.
    pause_every: usize,
}

enum PhaseResult {
    Optimal(Refactored),
    Unbounded,
    /// The final basis was singular under refactorization; the caller falls
    /// back to reading the tableau.
    Singular,
}

/// Pivots one phase to exact optimality. Pivoting pauses regularly and on
/// stalls for a refactorization against pristine data; phantom reduced
/// costs and lost primal feasibility are judged on the exact basis only,
/// and the tableau is rebuilt or repaired until the exact basis is both
/// primal feasible and priced out.
#[allow(clippy::too_many_arguments)]
fn optimize_phase(
    tableau: &mut [Vec<f64>],
    obj_rows: &mut [Vec<f64>; 2],
    which: usize,
    basis: &mut [usize],
    artificial: &[bool],
    pristine: &[Vec<f64>],
    phase_costs: &[Vec<f64>; 2],
    row_unit_col: &[usize],
    numerics: &Numerics,
    pivots: &mut usize,
) -> Result<PhaseResult> {
    let m = tableau.len();
    let total = obj_rows[0].len() - 1;
    let mut refreshes = 0usize;
    let mut best_exact = f64::NEG_INFINITY;
    let mut pivots_at_rebuild = usize::MAX;

    loop {
        let end = run_phase(tableau, obj_rows, which, basis, artificial, numerics, pivots)?;
        let fac = match refactor_basis(pristine, basis, total) {
            Some(fac) => fac,
            None => {
                if !repair_singular_basis(pristine, basis, row_unit_col) {
                    return Ok(PhaseResult::Singular);
                }
                refreshes += 1;
                if refreshes > MAX_REFRESHES {
                    return Err(Error::Lp("optimality could not be stabilized"));
                }
                let Some(fac) = refactor_basis(pristine, basis, total) else {
                    return Ok(PhaseResult::Singular);
                };
                rebuild_tableau(pristine, &fac, basis, phase_costs, tableau, obj_rows);
                pivots_at_rebuild = *pivots;
                continue;
            }
        };
        if m == 0 {
            return Ok(PhaseResult::Optimal(fac));
        }
        let duals = basis_duals(&fac, basis, &phase_costs[which]);
        let improving = has_improving_column(pristine, &duals, &phase_costs[which], artificial);
        let worst = fac.basic_values.iter().fold(0.0f64, |acc, v| acc.min(*v));
        let feasible = worst >= -numerics.accept_floor;

        if !improving && feasible {
            return Ok(PhaseResult::Optimal(fac));
        }
        if matches!(end, PhaseEnd::Unbounded) && improving && feasible && *pivots == pivots_at_rebuild {
            // The missing leaving row was judged on freshly rebuilt exact
            // data, so the improving ray is real.
            return Ok(PhaseResult::Unbounded);
        }
        if worst < -numerics.corruption_floor {
            return Err(Error::Lp("pivot path corrupted beyond repair"));
        }

        let exact_obj: f64 =
            basis.iter().zip(&fac.basic_values).map(|(&col, v)| phase_costs[which][col] * v).sum();
        if !best_exact.is_finite() || exact_obj > best_exact + 1e-9 * (1.0 + best_exact.abs()) {
            best_exact = exact_obj;
            refreshes = 0;
        }
        refreshes += 1;
        if refreshes > MAX_REFRESHES {
            return Err(Error::Lp("optimality could not be stabilized"));
        }

        rebuild_tableau(pristine, &fac, basis, phase_costs, tableau, obj_rows);
        pivots_at_rebuild = *pivots;
        if !feasible {
            if improving {
                // Not priced out yet; shift the slightly violated basics to
                // their bounds and let primal pivoting continue.
                for row in tableau.iter_mut() {
                    if row[total] < 0.0 {
                        row[total] = 0.0;
                    }
                }
            } else {
                dual_repair(tableau, obj_rows, which, basis, artificial, numerics, pivots)?;
            }
        }
    }
}

/// Replaces linearly dependent basis columns with the unit columns of the
/// rows left without a pivot, making the basis factorizable again. Returns
/// false when nothing needed replacing.
fn repair_singular_basis(pristine: &[Vec<f64>], basis: &mut [usize], row_unit_col: &[usize]) -> bool {
    let m = pristine.len();
    let mut work: Vec<Vec<f64>> = (0..m)
        .map(|i| basis.iter().map(|&col| pristine[i][col]).collect())
        .collect();
    let mut row_used = vec![false; m];
    let mut dependent: Vec<usize> = Vec::new();
    for j in 0..m {
        let mut pivot_row = None;
        let mut best = 0.0f64;
        let mut col_scale = 0.0f64;
        for (i, row) in work.iter().enumerate() {
            col_scale = col_scale.max(row[j].abs());
            if !row_used[i] && row[j].abs() > best {
                best = row[j].abs();
                pivot_row = Some(i);
            }
        }
        let Some(p) = pivot_row.filter(|_| best > 1e-10 * (1.0 + col_scale)) else {
            dependent.push(j);
            continue;
        };
        row_used[p] = true;
        let pivot_val = work[p][j];
        let pivot_tail: Vec<f64> = work[p][j + 1..].to_vec();
        for (i, row) in work.iter_mut().enumerate() {
            if !row_used[i] && row[j] != 0.0 {
                let f = row[j] / pivot_val;
                for (v, pv) in row[j + 1..].iter_mut().zip(&pivot_tail) {
                    *v -= f * pv;
                }
                row[j] = 0.0;
            }
        }
    }
    if dependent.is_empty() {
        return false;
    }
    let free_rows = (0..m).filter(|i| !row_used[*i]);
    for (&slot, row) in dependent.iter().zip(free_rows) {
        basis[slot] = row_unit_col[row];
    }
    true
}

/// Dual simplex pivots restoring primal feasibility of a priced-out basis:
/// the most negative basic value leaves, and the entering column is chosen
/// to keep every reduced cost nonpositive.
fn dual_repair(
    tableau: &mut [Vec<f64>],
    obj_rows: &mut [Vec<f64>; 2],
    which: usize,
    basis: &mut [usize],
    artificial: &[bool],
    numerics: &Numerics,
    pivots: &mut usize,
) -> Result<()> {
    let m = tableau.len();
    let total = obj_rows[0].len() - 1;
    for _ in 0..numerics.pause_every {
        if *pivots > numerics.pivot_cap {
            return Err(Error::Lp("pivot limit exceeded"));
        }
        let mut leave = None;
        let mut worst = -numerics.accept_floor;
        for i in 0..m {
            if tableau[i][total] < worst {
                worst = tableau[i][total];
                leave = Some(i);
            }
        }
        let Some(l) = leave else { return Ok(()) };

        let score = &obj_rows[which];
        let mut best_ratio = f64::INFINITY;
        for j in 0..total {
            if !artificial[j] {
                let a = tableau[l][j];
                if a < -PIVOT_EPS {
                    let ratio = score[j].min(0.0) / a;
                    if ratio < best_ratio {
                        best_ratio = ratio;
                    }
                }
            }
        }
        if best_ratio.is_infinite() {
            return Err(Error::Lp("primal feasibility could not be repaired"));
        }
        let cutoff = best_ratio + 1e-9 * (1.0 + best_ratio.abs());
        let mut enter: Option<usize> = None;
        for j in 0..total {
            if !artificial[j] {
                let a = tableau[l][j];
                if a < -PIVOT_EPS && score[j].min(0.0) / a <= cutoff {
                    if enter.is_none_or(|e| a < tableau[l][e]) {
                        enter = Some(j);
                    }
                }
            }
        }
        let e = enter.ok_or(Error::Internal("dual ratio test lost its minimizer"))?;
        pivot(tableau, obj_rows, l, e);
        basis[l] = e;
        *pivots += 1;
    }
    Ok(())
}

/// Runs primal simplex pivots until no reduced cost of the selected
/// objective row is positive, handing control back every `pause_every`
/// pivots so the caller can refactorize. Dantzig pricing with a stability
/// tie-break in the ratio test; if the objective stalls the phase switches
/// to Bland's rule until real progress resumes.
fn run_phase(
    tableau: &mut [Vec<f64>],
    obj_rows: &mut [Vec<f64>; 2],
    which: usize,
    basis: &mut [usize],
    artificial: &[bool],
    numerics: &Numerics,
    pivots: &mut usize,
) -> Result<PhaseEnd> {
    let m = tableau.len();
    let total = obj_rows[0].len() - 1;
    let bland_after = (m + total).max(64);
    let mut stall_run = 0usize;
    let mut bland_mode = false;
    let mut best_obj = -obj_rows[which][total];
    let mut local = 0usize;

    loop {
        if *pivots > numerics.pivot_cap {
            return Err(Error::Lp("pivot limit exceeded"));
        }
        if local >= numerics.pause_every || stall_run > 2 * bland_after {
            return Ok(PhaseEnd::Stalled);
        }
        let score = &obj_rows[which];
        let mut enter = None;
        if bland_mode {
            for j in 0..total {
                if !artificial[j] && score[j] > ENTER_EPS {
                    enter = Some(j);
                    break;
                }
            }
        } else {
            let mut best = ENTER_EPS;
            for j in 0..total {
                if !artificial[j] && score[j] > best {
                    best = score[j];
                    enter = Some(j);
                }
            }
        }
        let Some(e) = enter else { return Ok(PhaseEnd::Converged) };

        // Ratio test in two passes: the shortest step under a small
        // feasibility slack, then the most stable pivot element (smallest
        // basis index under Bland's rule) among rows within that step.
        let mut theta = f64::INFINITY;
        for i in 0..m {
            let a = tableau[i][e];
            if a > PIVOT_EPS {
                theta = theta.min((tableau[i][total] + numerics.ratio_slack) / a);
            }
        }
        if theta.is_infinite() {
            return Ok(PhaseEnd::Unbounded);
        }
        let theta = theta.max(0.0);
        let mut leave: Option<usize> = None;
        for i in 0..m {
            let a = tableau[i][e];
            if a > PIVOT_EPS && tableau[i][total] / a <= theta {
                match leave {
                    None => leave = Some(i),
                    Some(l) => {
                        let better = if bland_mode {
                            basis[i] < basis[l]
                        } else {
                            a > tableau[l][e]
                        };
                        if better {
                            leave = Some(i);
                        }
                    }
                }
            }
        }
        let l = leave.ok_or(Error::Internal("ratio test lost its minimizer"))?;

        pivot(tableau, obj_rows, l, e);
        basis[l] = e;
        *pivots += 1;
        local += 1;

        let obj = -obj_rows[which][total];
        if obj > best_obj + 1e-9 * (1.0 + best_obj.abs()) {
            best_obj = obj;
            stall_run = 0;
            bland_mode = false;
        } else {
            best_obj = best_obj.max(obj);
            stall_run += 1;
            if stall_run > bland_after {
                bland_mode = true;
            }
        }
    }
}

fn pivot(tableau: &mut [Vec<f64>], obj_rows: &mut [Vec<f64>; 2], l: usize, e: usize) {
    let inv = 1.0 / tableau[l][e];
    for v in tableau[l].iter_mut() {
        *v *= inv;
    }
    tableau[l][e] = 1.0;
    let pivot_row = tableau[l].clone();
    for (i, row) in tableau.iter_mut().enumerate() {
        if i == l {
            continue;
        }
        eliminate(row, &pivot_row, e);
    }
    eliminate(&mut obj_rows[0], &pivot_row, e);
    eliminate(&mut obj_rows[1], &pivot_row, e);
}

#[inline]
fn eliminate(row: &mut [f64], pivot_row: &[f64], e: usize) {
    let factor = row[e];
    if factor == 0.0 {
        return;
    }
    for (r, p) in row.iter_mut().zip(pivot_row) {
        *r -= factor * p;
    }
    row[e] = 0.0;
}

const MAX_REFRESHES: usize = 32;

struct Refactored {
    x_std: Vec<f64>,
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
    basic_values: Vec<f64>,
}

/// Solves `B x_B = b` for the current basis against the pristine tableau,
/// washing out pivot drift, and keeps the factorization for pricing and
/// column updates. Returns `None` on a singular basis.
fn refactor_basis(pristine: &[Vec<f64>], basis: &[usize], total: usize) -> Option<Refactored> {
    let m = pristine.len();
    if m == 0 {
        return Some(Refactored {
            x_std: vec![0.0; total],
            lu: Vec::new(),
            perm: Vec::new(),
            basic_values: Vec::new(),
        });
    }
    let mut bmat: Vec<Vec<f64>> = (0..m)
        .map(|i| basis.iter().map(|&col| pristine[i][col]).collect())
        .collect();
    let mut perm: Vec<usize> = (0..m).collect();
    if !lu_factor(&mut bmat, &mut perm) {
        return None;
    }

    let b: Vec<f64> = (0..m).map(|i| pristine[i][total]).collect();
    let xb = lu_solve(&bmat, &perm, &b);
    let mut x_std = vec![0.0; total];
    for (k, &col) in basis.iter().enumerate() {
        x_std[col] = xb[k];
    }
    Some(Refactored { x_std, lu: bmat, perm, basic_values: xb })
}

/// Exact duals of the refactorized basis for the given cost vector, from
/// `B' y = c_B`.
fn basis_duals(fac: &Refactored, basis: &[usize], cost: &[f64]) -> Vec<f64> {
    if fac.lu.is_empty() {
        return Vec::new();
    }
    let cb: Vec<f64> = basis.iter().map(|&col| cost[col]).collect();
    lu_solve_transposed(&fac.lu, &fac.perm, &cb)
}

/// Prices every enterable column against pristine data with a backward
/// error scale; true if some exact reduced cost is meaningfully positive.
fn has_improving_column(pristine: &[Vec<f64>], duals: &[f64], cost: &[f64], artificial: &[bool]) -> bool {
    let m = pristine.len();
    for (j, (&c, &art)) in cost.iter().zip(artificial).enumerate() {
        if art {
            continue;
        }
        let mut r = c;
        let mut scale = 1.0 + c.abs();
        for i in 0..m {
            let term = duals[i] * pristine[i][j];
            r -= term;
            scale += term.abs();
        }
        if r > ENTER_EPS * scale {
            return true;
        }
    }
    false
}

/// Rewrites the working tableau as `B^-1 A` from pristine data for the
/// current basis, with exact unit vectors in the basic columns, the exact
/// basic values on the right-hand side, and freshly priced reduced-cost
/// rows for both phases, discarding all accumulated pivot error.
fn rebuild_tableau(
    pristine: &[Vec<f64>],
    fac: &Refactored,
    basis: &[usize],
    phase_costs: &[Vec<f64>; 2],
    tableau: &mut [Vec<f64>],
    obj_rows: &mut [Vec<f64>; 2],
) {
    let m = tableau.len();
    let total = obj_rows[0].len() - 1;
    let phase_duals = [
        basis_duals(fac, basis, &phase_costs[0]),
        basis_duals(fac, basis, &phase_costs[1]),
    ];
    let mut col = vec![0.0; m];
    for j in 0..total {
        for i in 0..m {
            col[i] = pristine[i][j];
        }
        let u = lu_solve(&fac.lu, &fac.perm, &col);
        for i in 0..m {
            tableau[i][j] = u[i];
        }
        for p in 0..2 {
            let mut r = phase_costs[p][j];
            for i in 0..m {
                r -= phase_duals[p][i] * pristine[i][j];
            }
            obj_rows[p][j] = r;
        }
    }
    let mut objectives = [0.0f64; 2];
    for i in 0..m {
        let v = fac.basic_values[i];
        tableau[i][total] = v;
        for p in 0..2 {
            objectives[p] += phase_costs[p][basis[i]] * v;
        }
    }
    for p in 0..2 {
        obj_rows[p][total] = -objectives[p];
    }
    for (i, &bcol) in basis.iter().enumerate() {
        for (r, row) in tableau.iter_mut().enumerate() {
            row[bcol] = if r == i { 1.0 } else { 0.0 };
        }
        obj_rows[0][bcol] = 0.0;
        obj_rows[1][bcol] = 0.0;
    }
}

/// Reads the basic solution and duals straight off the final tableau; only
/// used if the basis refactorization hits a singular matrix.
fn fallback_solution(
    tableau: &[Vec<f64>],
    obj_row: &[f64],
    basis: &[usize],
    rows: &[(Vec<f64>, Relation, f64, RowOrigin)],
    aux_col: &[usize],
    art_col: &[usize],
    total: usize,
) -> (Vec<f64>, Vec<f64>) {
    let m = tableau.len();
    let mut x_std = vec![0.0; total];
    for i in 0..m {
        x_std[basis[i]] = tableau[i][total];
    }
    let mut duals = vec![0.0; m];
    for i in 0..m {
        duals[i] = match rows[i].1 {
            Relation::Le => -obj_row[aux_col[i]],
            Relation::Ge => obj_row[aux_col[i]],
            Relation::Eq => -obj_row[art_col[i]],
        };
    }
    (x_std, duals)
}

/// In-place LU with partial pivoting; `perm[i]` is the source row of LU row
/// `i`. Returns false on singularity.
fn lu_factor(a: &mut [Vec<f64>], perm: &mut [usize]) -> bool {
    let n = a.len();
    for k in 0..n {
        let mut p = k;
        let mut best = a[k][k].abs();
        for i in k + 1..n {
            if a[i][k].abs() > best {
                best = a[i][k].abs();
                p = i;
            }
        }
        if best < 1e-12 {
            return false;
        }
        if p != k {
            a.swap(p, k);
            perm.swap(p, k);
        }
        let akk = a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / akk;
            a[i][k] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
    }
    true
}

/// Solves `B x = b` given `P B = L U`.
fn lu_solve(lu: &[Vec<f64>], perm: &[usize], b: &[f64]) -> Vec<f64> {
    let n = lu.len();
    let mut x: Vec<f64> = perm.iter().map(|&i| b[i]).collect();
    for i in 1..n {
        let mut acc = x[i];
        for j in 0..i {
            acc -= lu[i][j] * x[j];
        }
        x[i] = acc;
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= lu[i][j] * x[j];
        }
        x[i] = acc / lu[i][i];
    }
    x
}

/// Solves `B' y = c` given `P B = L U`.
fn lu_solve_transposed(lu: &[Vec<f64>], perm: &[usize], c: &[f64]) -> Vec<f64> {
    let n = lu.len();
    // U' w = c (forward), then L' z = w (backward), then y = P' z.
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut acc = c[i];
        for j in 0..i {
            acc -= lu[j][i] * w[j];
        }
        w[i] = acc / lu[i][i];
    }
    let mut z = w;
    for i in (0..n).rev() {
        let mut acc = z[i];
        for j in i + 1..n {
            acc -= lu[j][i] * z[j];
        }
        z[i] = acc;
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[perm[i]] = z[i];
    }
    y
}
