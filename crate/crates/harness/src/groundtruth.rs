//! Independent brute-force oracles used by the test suite: exhaustive vertex
//! enumeration for the combinatorial ground sets, an exact KKT-enumeration
//! projection for budgeted sets, a refining simplex-grid projection for
//! scenario hulls, and a refining grid for the adversary's max-min value.

use robustfw_core::lp::convhull_minmax;
use robustfw_core::Point;

use crate::error::HarnessError;
use crate::instance::{InstanceFile, Kind};

pub const ENUM_MAX_GRAPH_VERTICES: usize = 7;
pub const ENUM_MAX_LIST_VERTICES: usize = 10_000;

/// All vertices of the feasible region: spanning trees, tours, or the list
/// itself, as 0/1 edge-incidence points in the instance's coordinate order.
pub fn enumerate_feasible_vertices(file: &InstanceFile) -> Result<Vec<Point>, HarnessError> {
    match file.kind {
        Kind::Mst => {
            let graph = file
                .graph
                .as_ref()
                .ok_or_else(|| HarnessError::instance("mst instance needs a graph"))?;
            if graph.num_vertices > ENUM_MAX_GRAPH_VERTICES {
                return Err(HarnessError::instance(format!(
                    "exhaustive tree enumeration capped at {ENUM_MAX_GRAPH_VERTICES} vertices"
                )));
            }
            Ok(enumerate_spanning_trees(graph.num_vertices, &graph.edges))
        }
        Kind::Tsp => {
            let graph = file
                .graph
                .as_ref()
                .ok_or_else(|| HarnessError::instance("tsp instance needs a graph"))?;
            if graph.num_vertices > ENUM_MAX_GRAPH_VERTICES {
                return Err(HarnessError::instance(format!(
                    "exhaustive tour enumeration capped at {ENUM_MAX_GRAPH_VERTICES} vertices"
                )));
            }
            enumerate_tours(graph.num_vertices, &graph.edges)
        }
        Kind::VertexList => {
            let raw = file
                .vertices
                .as_ref()
                .ok_or_else(|| HarnessError::instance("vertex_list instance needs vertices"))?;
            if raw.len() > ENUM_MAX_LIST_VERTICES {
                return Err(HarnessError::instance(format!(
                    "vertex enumeration capped at {ENUM_MAX_LIST_VERTICES} vertices"
                )));
            }
            Ok(raw
                .iter()
                .map(|v| Point::new(v.iter().map(|r| r.0).collect()))
                .collect())
        }
    }
}

/// The exact robust optimum: enumerate every vertex of the feasible region,
/// then solve the min-max problem over their convex hull.
pub fn brute_force_optimum(
    file: &InstanceFile,
    lp_tolerance: f64,
) -> Result<(f64, Point), HarnessError> {
    let vertices = enumerate_feasible_vertices(file)?;
    if vertices.is_empty() {
        return Err(HarnessError::instance("instance has no feasible vertices"));
    }
    let set = file.uncertainty_set()?;
    let (x_star, _, value) = convhull_minmax(&vertices, &set, lp_tolerance)?;
    Ok((value, x_star))
}

fn enumerate_spanning_trees(num_vertices: usize, edges: &[[usize; 2]]) -> Vec<Point> {
    let m = edges.len();
    let need = num_vertices - 1;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() as usize != need {
            continue;
        }
        let mut parent: Vec<usize> = (0..num_vertices).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut acyclic = true;
        for (j, e) in edges.iter().enumerate() {
            if mask >> j & 1 == 0 {
                continue;
            }
            let a = find(&mut parent, e[0]);
            let b = find(&mut parent, e[1]);
            if a == b {
                acyclic = false;
                break;
            }
            parent[a] = b;
        }
        if !acyclic {
            continue;
        }
        let mut coords = vec![0.0; m];
        for j in 0..m {
            if mask >> j & 1 == 1 {
                coords[j] = 1.0;
            }
        }
        out.push(Point::new(coords));
    }
    out
}

fn enumerate_tours(num_vertices: usize, edges: &[[usize; 2]]) -> Result<Vec<Point>, HarnessError> {
    let m = edges.len();
    let mut index_of = vec![vec![usize::MAX; num_vertices]; num_vertices];
    for (j, e) in edges.iter().enumerate() {
        index_of[e[0]][e[1]] = j;
        index_of[e[1]][e[0]] = j;
    }
    let mut rest: Vec<usize> = (1..num_vertices).collect();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut |order: &[usize]| {
        // Each undirected tour appears twice; keep one orientation.
        if order[0] > order[order.len() - 1] {
            return Ok(());
        }
        let mut coords = vec![0.0; m];
        let mut prev = 0usize;
        for &v in order {
            let j = index_of[prev][v];
            if j == usize::MAX {
                return Err(HarnessError::instance("tour instance is missing an edge"));
            }
            coords[j] = 1.0;
            prev = v;
        }
        let j = index_of[prev][0];
        if j == usize::MAX {
            return Err(HarnessError::instance("tour instance is missing an edge"));
        }
        coords[j] = 1.0;
        out.push(Point::new(coords));
        Ok(())
    })?;
    Ok(out)
}

fn permute<F>(items: &mut [usize], k: usize, visit: &mut F) -> Result<(), HarnessError>
where
    F: FnMut(&[usize]) -> Result<(), HarnessError>,
{
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit)?;
        items.swap(k, i);
    }
    Ok(())
}

/// Exact budgeted-set projection by KKT pattern enumeration: every coordinate
/// is pinned at 0, pinned at 1, or free, and the budget is slack or tight.
/// The best feasible stationary candidate over all patterns is the optimum.
/// Exponential in the dimension, so gated to small cases.
pub fn kkt_project_budgeted(
    c_lower: &[f64],
    d: &[f64],
    gamma: f64,
    z: &[f64],
) -> Result<Vec<f64>, HarnessError> {
    let n = c_lower.len();
    if n > 8 {
        return Err(HarnessError::instance("kkt enumeration capped at 8 coordinates"));
    }
    let a: Vec<f64> = (0..n).map(|j| (z[j] - c_lower[j]) / d[j]).collect();
    let w: Vec<f64> = d.iter().map(|dj| dj * dj).collect();

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut pattern = vec![0u8; n];
    let feas_tol = 1e-10;
    loop {
        // Pattern digits: 0 pinned at zero, 1 free, 2 pinned at one.
        for budget_tight in [false, true] {
            let mut theta = vec![0.0f64; n];
            let mut free_inv = 0.0f64;
            let mut fixed_sum = 0.0f64;
            let mut free_a_sum = 0.0f64;
            for j in 0..n {
                match pattern[j] {
                    0 => {}
                    2 => fixed_sum += 1.0,
                    _ => {
                        free_inv += 1.0 / (2.0 * w[j]);
                        free_a_sum += a[j];
                    }
                }
            }
            let lambda = if budget_tight {
                if free_inv == 0.0 {
                    continue;
                }
                (free_a_sum + fixed_sum - gamma) / free_inv
            } else {
                0.0
            };
            let mut ok = true;
            let mut total = 0.0f64;
            for j in 0..n {
                let value = match pattern[j] {
                    0 => 0.0,
                    2 => 1.0,
                    _ => a[j] - lambda / (2.0 * w[j]),
                };
                if !(-feas_tol..=1.0 + feas_tol).contains(&value) {
                    ok = false;
                    break;
                }
                theta[j] = value.clamp(0.0, 1.0);
                total += theta[j];
            }
            if !ok || total > gamma + 1e-9 * (1.0 + gamma) {
                continue;
            }
            let objective: f64 =
                (0..n).map(|j| w[j] * (theta[j] - a[j]) * (theta[j] - a[j])).sum();
            if best.as_ref().map_or(true, |(cur, _)| objective < *cur) {
                best = Some((objective, theta.clone()));
            }
        }
        // Advance the base-3 pattern counter.
        let mut carry = 0usize;
        loop {
            if carry == n {
                let (_, theta) = best.ok_or_else(|| {
                    HarnessError::solver("kkt enumeration found no feasible pattern")
                })?;
                return Ok((0..n).map(|j| c_lower[j] + d[j] * theta[j]).collect());
            }
            if pattern[carry] < 2 {
                pattern[carry] += 1;
                break;
            }
            pattern[carry] = 0;
            carry += 1;
        }
    }
}

/// Projection onto a scenario hull by a refining grid over the weight
/// simplex. Each level scans a grid of weight vectors inside the current
/// box, then shrinks the box around the best one. Meant for hulls of at most
/// a few scenarios.
pub fn grid_project_hull(scenarios: &[Point], z: &Point, levels: usize) -> Point {
    let s = scenarios.len();
    let n = z.dim();
    if s == 1 {
        return scenarios[0].clone();
    }
    let point_of = |w: &[f64]| -> Vec<f64> {
        let mut p = vec![0.0f64; n];
        for (wi, sc) in w.iter().zip(scenarios) {
            for (pc, c) in p.iter_mut().zip(sc.coords()) {
                *pc += wi * c;
            }
        }
        p
    };
    let dist_sq = |w: &[f64]| -> f64 {
        point_of(w).iter().zip(z.coords()).map(|(p, zc)| (p - zc) * (p - zc)).sum()
    };

    let steps_per_level = 8usize;
    let mut lo = vec![0.0f64; s];
    let mut hi = vec![1.0f64; s];
    let mut best_w = vec![1.0 / s as f64; s];
    let mut best_val = dist_sq(&best_w);
    for _ in 0..levels {
        let mut grid: Vec<Vec<f64>> = Vec::new();
        let mut current = vec![0.0f64; s];
        build_weight_grid(&lo, &hi, steps_per_level, 0, 0.0, &mut current, &mut grid);
        for w in &grid {
            let v = dist_sq(w);
            if v < best_val {
                best_val = v;
                best_w = w.clone();
            }
        }
        for i in 0..s {
            let radius = (hi[i] - lo[i]) / steps_per_level as f64 * 2.0;
            lo[i] = (best_w[i] - radius).max(0.0);
            hi[i] = (best_w[i] + radius).min(1.0);
        }
    }
    Point::new(point_of(&best_w))
}

fn build_weight_grid(
    lo: &[f64],
    hi: &[f64],
    steps: usize,
    coord: usize,
    used: f64,
    current: &mut Vec<f64>,
    out: &mut Vec<Vec<f64>>,
) {
    let s = lo.len();
    if coord == s - 1 {
        let last = 1.0 - used;
        if last >= lo[s - 1] - 1e-12 && last <= hi[s - 1] + 1e-12 {
            current[s - 1] = last.clamp(0.0, 1.0);
            out.push(current.clone());
        }
        return;
    }
    for k in 0..=steps {
        let w = lo[coord] + (hi[coord] - lo[coord]) * k as f64 / steps as f64;
        if used + w > 1.0 + 1e-12 {
            break;
        }
        current[coord] = w;
        build_weight_grid(lo, hi, steps, coord + 1, used + w, current, out);
    }
}

/// The adversary's best value against a fixed finite set of solutions,
/// `max over the budgeted set of min_v c'v`, found by a refining grid over
/// deviation profiles. Independent of the LP path, so it cross-checks the
/// epigraph machinery on small cases.
pub fn grid_max_min_budgeted(
    c_lower: &[f64],
    d: &[f64],
    gamma: f64,
    vertices: &[Point],
    levels: usize,
) -> f64 {
    let n = c_lower.len();
    let eval = |theta: &[f64]| -> f64 {
        let mut best = f64::INFINITY;
        for v in vertices {
            let mut acc = 0.0;
            for j in 0..n {
                acc += (c_lower[j] + d[j] * theta[j]) * v[j];
            }
            best = best.min(acc);
        }
        best
    };

    let steps = 4usize;
    let mut lo = vec![0.0f64; n];
    let mut hi = vec![1.0f64; n];
    let mut best_theta = vec![0.0f64; n];
    let mut best_val = eval(&best_theta);
    for _ in 0..levels {
        let mut current = vec![0.0f64; n];
        let mut stack_best = (best_val, best_theta.clone());
        grid_scan_budget(
            &lo,
            &hi,
            gamma,
            steps,
            0,
            0.0,
            &mut current,
            &eval,
            &mut stack_best,
        );
        best_val = stack_best.0;
        best_theta = stack_best.1;
        for j in 0..n {
            let radius = (hi[j] - lo[j]) / steps as f64 * 2.0;
            lo[j] = (best_theta[j] - radius).max(0.0);
            hi[j] = (best_theta[j] + radius).min(1.0);
        }
    }
    best_val
}

#[allow(clippy::too_many_arguments)]
fn grid_scan_budget<F: Fn(&[f64]) -> f64>(
    lo: &[f64],
    hi: &[f64],
    gamma: f64,
    steps: usize,
    coord: usize,
    used: f64,
    current: &mut Vec<f64>,
    eval: &F,
    best: &mut (f64, Vec<f64>),
) {
    let n = lo.len();
    if coord == n {
        let v = eval(current);
        if v > best.0 {
            *best = (v, current.clone());
        }
        return;
    }
    for k in 0..=steps {
        let t = lo[coord] + (hi[coord] - lo[coord]) * k as f64 / steps as f64;
        if used + t > gamma + 1e-12 {
            break;
        }
        current[coord] = t;
        grid_scan_budget(lo, hi, gamma, steps, coord + 1, used + t, current, eval, best);
    }
}
