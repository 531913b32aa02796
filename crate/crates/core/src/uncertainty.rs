//! Uncertainty sets: axis-aligned boxes, budgeted deviation sets, and convex
//! hulls of explicit scenarios.
//!
//! Every set supports three exact or accuracy-controlled operations:
//!
//! * `support_max(x)`: a maximizer of `c' x` over the set, with its value,
//! * `project(z, tol)`: the Euclidean projection of `z` onto the set,
//! * `constants()`: the Euclidean diameter and the maximum member norm.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::point::{dot, Point};

/// Axis-aligned box `{ c : lower <= c <= upper }`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSet {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxSet {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::Invalid("box set needs at least one coordinate"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("box bounds"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::Invalid("box lower bound exceeds upper bound"));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }
}

/// Budgeted deviation set
/// `{ c : c = c_lower + diag(d) theta, theta in [0,1]^n, sum theta <= gamma }`.
///
/// Every deviation `d_j` must be strictly positive; degenerate coordinates
/// belong in a [`BoxSet`] or in `c_lower` itself.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetedSet {
    c_lower: Vec<f64>,
    d: Vec<f64>,
    gamma: f64,
}

impl BudgetedSet {
    pub fn new(c_lower: Vec<f64>, d: Vec<f64>, gamma: f64) -> Result<Self> {
        if c_lower.is_empty() {
            return Err(Error::Invalid("budgeted set needs at least one coordinate"));
        }
        if c_lower.len() != d.len() {
            return Err(Error::DimensionMismatch { expected: c_lower.len(), got: d.len() });
        }
        if c_lower.iter().chain(&d).any(|v| !v.is_finite()) || !gamma.is_finite() {
            return Err(Error::NonFinite("budgeted set data"));
        }
        if d.iter().any(|v| *v <= 0.0) {
            return Err(Error::Invalid("deviations must be strictly positive"));
        }
        if gamma < 0.0 {
            return Err(Error::Invalid("budget must be nonnegative"));
        }
        Ok(Self { c_lower, d, gamma })
    }

    pub fn c_lower(&self) -> &[f64] {
        &self.c_lower
    }

    pub fn deviations(&self) -> &[f64] {
        &self.d
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn theta_of(&self, c: &[f64]) -> Vec<f64> {
        c.iter()
            .zip(&self.c_lower)
            .zip(&self.d)
            .map(|((cj, lj), dj)| (cj - lj) / dj)
            .collect()
    }
}

/// Convex hull of an explicit, nonempty list of scenarios.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioHullSet {
    scenarios: Vec<Point>,
}

impl ScenarioHullSet {
    pub fn new(scenarios: Vec<Point>) -> Result<Self> {
        let dim = match scenarios.first() {
            Some(s) => s.dim(),
            None => return Err(Error::Invalid("scenario hull needs at least one scenario")),
        };
        if dim == 0 {
            return Err(Error::Invalid("scenarios need at least one coordinate"));
        }
        for s in &scenarios {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: s.dim() });
            }
            if !s.is_finite() {
                return Err(Error::NonFinite("scenario coordinates"));
            }
        }
        Ok(Self { scenarios })
    }

    pub fn scenarios(&self) -> &[Point] {
        &self.scenarios
    }
}

/// Any of the supported uncertainty sets.
#[derive(Clone, Debug, PartialEq)]
pub enum UncertaintySet {
    Box(BoxSet),
    Budgeted(BudgetedSet),
    ScenarioHull(ScenarioHullSet),
}

impl UncertaintySet {
    pub fn dimension(&self) -> usize {
        match self {
            UncertaintySet::Box(s) => s.lower.len(),
            UncertaintySet::Budgeted(s) => s.c_lower.len(),
            UncertaintySet::ScenarioHull(s) => s.scenarios[0].dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            UncertaintySet::Box(_) => "box",
            UncertaintySet::Budgeted(_) => "budgeted",
            UncertaintySet::ScenarioHull(_) => "scenario_hull",
        }
    }

    /// Maximizes `c' x` over the set. Returns the optimal value together with
    /// a maximizer; ties are broken deterministically (lowest index first).
    pub fn support_max(&self, x: &Point) -> Result<(f64, Point)> {
        self.check_dim(x)?;
        if !x.is_finite() {
            return Err(Error::NonFinite("support direction"));
        }
        let c = match self {
            UncertaintySet::Box(s) => {
                let coords = x
                    .coords()
                    .iter()
                    .zip(s.lower.iter().zip(&s.upper))
                    .map(|(xj, (l, u))| if *xj > 0.0 { *u } else { *l })
                    .collect();
                Point::new(coords)
            }
            UncertaintySet::Budgeted(s) => {
                Point::new(budgeted_support(&s.c_lower, &s.d, s.gamma, x.coords()))
            }
            UncertaintySet::ScenarioHull(s) => {
                let mut best = 0usize;
                let mut best_val = s.scenarios[0].dot(x);
                for (i, c) in s.scenarios.iter().enumerate().skip(1) {
                    let v = c.dot(x);
                    if v > best_val {
                        best_val = v;
                        best = i;
                    }
                }
                s.scenarios[best].clone()
            }
        };
        Ok((c.dot(x), c))
    }

    /// Euclidean projection of `z` onto the set.
    ///
    /// Box and budgeted projections are exact up to floating-point rounding;
    /// the scenario-hull projection is iterative and stops once its duality
    /// gap certifies a distance error below `tol` (or below the floating
    /// point noise floor, whichever is larger).
    pub fn project(&self, z: &Point, tol: f64) -> Result<Point> {
        self.check_dim(z)?;
        if !z.is_finite() {
            return Err(Error::NonFinite("projection argument"));
        }
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::Invalid("projection tolerance must be finite and positive"));
        }
        match self {
            UncertaintySet::Box(s) => {
                let coords = z
                    .coords()
                    .iter()
                    .zip(s.lower.iter().zip(&s.upper))
                    .map(|(zj, (l, u))| zj.max(*l).min(*u))
                    .collect();
                Ok(Point::new(coords))
            }
            UncertaintySet::Budgeted(s) => {
                let theta = project_budget_polytope(&s.c_lower, &s.d, s.gamma, z.coords())?;
                let coords = s
                    .c_lower
                    .iter()
                    .zip(&s.d)
                    .zip(&theta)
                    .map(|((l, d), t)| l + d * t)
                    .collect();
                Ok(Point::new(coords))
            }
            UncertaintySet::ScenarioHull(s) => project_scenario_hull(&s.scenarios, z, tol),
        }
    }

    /// `(diameter, max_norm)`: the Euclidean diameter of the set and the
    /// largest Euclidean norm of a member. Both are exact.
    pub fn constants(&self) -> (f64, f64) {
        match self {
            UncertaintySet::Box(s) => {
                let mut diam2 = 0.0;
                let mut norm2 = 0.0;
                for (l, u) in s.lower.iter().zip(&s.upper) {
                    let w = u - l;
                    diam2 += w * w;
                    norm2 += (l * l).max(u * u);
                }
                (math::sqrt(diam2), math::sqrt(norm2))
            }
            UncertaintySet::Budgeted(s) => (
                budgeted_diameter(&s.d, s.gamma),
                budgeted_max_norm(&s.c_lower, &s.d, s.gamma),
            ),
            UncertaintySet::ScenarioHull(s) => {
                let mut diam = 0.0f64;
                for (i, a) in s.scenarios.iter().enumerate() {
                    for b in &s.scenarios[i + 1..] {
                        diam = diam.max(a.dist(b));
                    }
                }
                let norm = s.scenarios.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
                (diam, norm)
            }
        }
    }

    /// A canonical interior-ish point of the set, used as the default
    /// smoothing anchor.
    pub fn center(&self) -> Point {
        match self {
            UncertaintySet::Box(s) => Point::new(
                s.lower.iter().zip(&s.upper).map(|(l, u)| 0.5 * (l + u)).collect(),
            ),
            UncertaintySet::Budgeted(s) => {
                let n = s.c_lower.len() as f64;
                let t = (s.gamma / n).min(1.0);
                Point::new(s.c_lower.iter().zip(&s.d).map(|(l, d)| l + d * t).collect())
            }
            UncertaintySet::ScenarioHull(s) => {
                let dim = s.scenarios[0].dim();
                let mut acc = vec![0.0; dim];
                for c in &s.scenarios {
                    for (a, v) in acc.iter_mut().zip(c.coords()) {
                        *a += v;
                    }
                }
                let inv = 1.0 / s.scenarios.len() as f64;
                Point::new(acc.into_iter().map(|a| a * inv).collect())
            }
        }
    }

    /// Approximate membership test with absolute tolerance `tol` on the
    /// defining constraints (for scenario hulls, on the distance to the hull).
    pub fn contains(&self, c: &Point, tol: f64) -> Result<bool> {
        self.check_dim(c)?;
        match self {
            UncertaintySet::Box(s) => Ok(c
                .coords()
                .iter()
                .zip(s.lower.iter().zip(&s.upper))
                .all(|(cj, (l, u))| *cj >= l - tol && *cj <= u + tol)),
            UncertaintySet::Budgeted(s) => {
                let theta = s.theta_of(c.coords());
                let in_box = theta.iter().all(|t| *t >= -tol && *t <= 1.0 + tol);
                let budget = theta.iter().sum::<f64>();
                Ok(in_box && budget <= s.gamma + tol * (1.0 + theta.len() as f64))
            }
            UncertaintySet::ScenarioHull(s) => {
                // Exact members that coincide with a stored scenario short-cut
                // the iterative projection.
                if s.scenarios.iter().any(|sc| sc.dist(c) <= tol) {
                    return Ok(true);
                }
                let p = project_scenario_hull(&s.scenarios, c, tol.max(1e-9))?;
                Ok(p.dist(c) <= tol * (1.0 + c.norm()))
            }
        }
    }

    fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: p.dim() });
        }
        Ok(())
    }
}

/// Greedy fractional support maximizer for the budgeted set: spend the budget
/// on coordinates in decreasing order of the deviation gain `d_j * x_j`,
/// skipping nonpositive gains.
fn budgeted_support(c_lower: &[f64], d: &[f64], gamma: f64, x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| {
        let gi = d[i] * x[i];
        let gj = d[j] * x[j];
        gj.partial_cmp(&gi).unwrap().then(i.cmp(&j))
    });
    let mut theta = vec![0.0; x.len()];
    let mut remaining = gamma;
    for j in order {
        if remaining <= 0.0 || d[j] * x[j] <= 0.0 {
            break;
        }
        let take = remaining.min(1.0);
        theta[j] = take;
        remaining -= take;
    }
    c_lower.iter().zip(d).zip(&theta).map(|((l, dj), t)| l + dj * t).collect()
}

/// Exact Euclidean diameter of the budgeted set.
///
/// In deviation space the squared diameter is `max sum_j d_j^2 delta_j^2`
/// over `delta = theta - theta'` with both profiles budget-feasible. Sorting
/// the squared deviations `s_1 >= s_2 >= ...`, the two profiles alternate
/// full units over the top `2*floor(gamma)` coordinates and each spends its
/// fractional remainder on the next best coordinate.
fn budgeted_diameter(d: &[f64], gamma: f64) -> f64 {
    let n = d.len();
    let k = math::floor(gamma) as usize;
    let frac = gamma - math::floor(gamma);
    let mut s: Vec<f64> = d.iter().map(|v| v * v).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let full = (2 * k).min(n);
    let mut total: f64 = s[..full].iter().sum();
    if frac > 0.0 {
        if full < n {
            total += frac * frac * s[full];
        }
        if full + 1 < n {
            total += frac * frac * s[full + 1];
        }
    }
    math::sqrt(total)
}

/// Exact maximum Euclidean norm over the budgeted set.
///
/// The squared norm is convex in the deviation profile, so the maximum sits
/// at a vertex: an integral profile, or an integral profile of size
/// `floor(gamma)` plus one coordinate at the fractional remainder.
fn budgeted_max_norm(c_lower: &[f64], d: &[f64], gamma: f64) -> f64 {
    let n = c_lower.len();
    let base: f64 = c_lower.iter().map(|v| v * v).sum();
    let k = (math::floor(gamma) as usize).min(n);
    let frac = if math::floor(gamma) as usize >= n { 0.0 } else { gamma - math::floor(gamma) };

    // Gain of a full unit on coordinate j.
    let gain = |j: usize| -> f64 {
        let c = c_lower[j] + d[j];
        c * c - c_lower[j] * c_lower[j]
    };
    // Gain of a fractional unit on coordinate j.
    let fgain = |j: usize| -> f64 {
        let c = c_lower[j] + frac * d[j];
        c * c - c_lower[j] * c_lower[j]
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| gain(j).partial_cmp(&gain(i)).unwrap().then(i.cmp(&j)));

    // Integral profiles: the best is the top positive gains, at most k.
    let mut best_extra = 0.0f64;
    let mut acc = 0.0;
    for &j in order.iter().take(k) {
        let g = gain(j);
        if g <= 0.0 {
            break;
        }
        acc += g;
        best_extra = best_extra.max(acc);
    }

    // Profiles with a fractional coordinate require exactly k full units.
    // The split of gains between the fractional coordinate and the full ones
    // interacts (a coordinate can be worth more as the fraction carrier even
    // when its full gain ranks high), so scan every carrier choice j and pair
    // it with the top k full gains among the rest via prefix sums.
    if frac > 0.0 && n > k {
        let mut prefix = vec![0.0f64; n + 1];
        for (i, &j) in order.iter().enumerate() {
            prefix[i + 1] = prefix[i] + gain(j);
        }
        let mut rank_of = vec![0usize; n];
        for (i, &j) in order.iter().enumerate() {
            rank_of[j] = i;
        }
        for j in 0..n {
            let fg = fgain(j);
            if fg <= 0.0 {
                continue;
            }
            let full_sum = if rank_of[j] < k { prefix[k + 1] - gain(j) } else { prefix[k] };
            best_extra = best_extra.max(full_sum + fg);
        }
    }

    math::sqrt(base + best_extra)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Crossing {
    LeaveUpper,
    HitLower,
}

/// Projects `z` onto the budgeted set in deviation space: minimizes
/// `sum_j d_j^2 (theta_j - a_j)^2` over `theta in [0,1]^n`,
/// `sum theta <= gamma`, where `a_j = (z_j - c_lower_j) / d_j`.
///
/// When the budget binds, the optimal profile is
/// `theta_j = clamp(a_j - lambda / (2 d_j^2), 0, 1)` for a multiplier
/// `lambda > 0` fixed by the budget. The map from `lambda` to the spent
/// budget is piecewise linear with at most `2n` breakpoints, so a sorted
/// sweep with running sums finds the exact multiplier in `O(n log n)`.
fn project_budget_polytope(c_lower: &[f64], d: &[f64], gamma: f64, z: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let a: Vec<f64> = z
        .iter()
        .zip(c_lower)
        .zip(d)
        .map(|((zj, lj), dj)| (zj - lj) / dj)
        .collect();
    let w: Vec<f64> = d.iter().map(|v| v * v).collect();

    let clamped: Vec<f64> = a.iter().map(|v| v.max(0.0).min(1.0)).collect();
    if clamped.iter().sum::<f64>() <= gamma {
        return Ok(clamped);
    }

    // Budget binds. Sweep the multiplier over breakpoints where a coordinate
    // leaves its upper peg or reaches its lower peg; ties are processed in
    // coordinate-index order.
    let mut events: Vec<(f64, usize, Crossing)> = Vec::with_capacity(2 * n);
    for j in 0..n {
        if a[j] > 1.0 {
            events.push((2.0 * w[j] * (a[j] - 1.0), j, Crossing::LeaveUpper));
        }
        if a[j] > 0.0 {
            events.push((2.0 * w[j] * a[j], j, Crossing::HitLower));
        }
    }
    events.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap()
            .then(x.1.cmp(&y.1))
            .then((x.2 == Crossing::HitLower).cmp(&(y.2 == Crossing::HitLower)))
    });

    let mut at_upper = a.iter().filter(|v| **v > 1.0).count() as f64;
    let mut free_targets: f64 = a.iter().filter(|v| **v > 0.0 && **v <= 1.0).sum();
    let mut free_slope: f64 = a
        .iter()
        .zip(&w)
        .filter(|(v, _)| **v > 0.0 && **v <= 1.0)
        .map(|(_, wj)| 0.5 / wj)
        .sum();

    let mut prev = 0.0f64;
    let mut lambda = None;
    for &(le, j, kind) in &events {
        let slack = 1e-12 * (1.0 + math::abs(le));
        if free_slope > 0.0 {
            let cand = (at_upper + free_targets - gamma) / free_slope;
            if cand >= prev - slack && cand <= le + slack {
                lambda = Some(cand.max(prev).min(le));
                break;
            }
        } else if math::abs(at_upper - gamma) <= 1e-12 {
            lambda = Some(prev);
            break;
        }
        match kind {
            Crossing::LeaveUpper => {
                at_upper -= 1.0;
                free_targets += a[j];
                free_slope += 0.5 / w[j];
            }
            Crossing::HitLower => {
                free_targets -= a[j];
                free_slope -= 0.5 / w[j];
            }
        }
        prev = le;
    }
    if lambda.is_none() {
        // Past the last breakpoint everything is pegged at zero.
        if gamma <= 1e-12 {
            lambda = Some(prev);
        }
    }
    let lambda = lambda.ok_or(Error::Internal("budget multiplier sweep found no root"))?;

    Ok(a.iter()
        .zip(&w)
        .map(|(aj, wj)| (aj - lambda / (2.0 * wj)).max(0.0).min(1.0))
        .collect())
}

const HULL_PROJECTION_MAX_ITERS: usize = 100_000;

/// Projects `z` onto the convex hull of `scenarios` by a conditional-gradient
/// loop over the simplex of hull weights. Each pass inserts the scenario the
/// gradient points at, then minimizes exactly over the span of the active
/// scenarios, walking weights back to the simplex and dropping any that hit
/// zero; plain Frank-Wolfe steps crawl on thin hulls, whereas the exact
/// restricted solve terminates after finitely many passes.
///
/// Stops when the Frank-Wolfe duality gap drops below `tol^2`, which bounds
/// the distance error by `tol`, or below the floating-point noise floor of
/// the gap computation. Errors if the iteration cap is reached first.
fn project_scenario_hull(scenarios: &[Point], z: &Point, tol: f64) -> Result<Point> {
    let s_count = scenarios.len();
    if s_count == 1 {
        return Ok(scenarios[0].clone());
    }

    let mut start = 0usize;
    let mut start_dist = scenarios[0].dist(z);
    for (i, c) in scenarios.iter().enumerate().skip(1) {
        let dcur = c.dist(z);
        if dcur < start_dist {
            start_dist = dcur;
            start = i;
        }
    }
    let mut active: Vec<usize> = vec![start];
    let mut weights: Vec<f64> = vec![1.0];
    let mut p: Vec<f64> = scenarios[start].coords().to_vec();

    let mut grads = vec![0.0f64; s_count];
    let mut achieved_gap = f64::INFINITY;
    for _ in 0..HULL_PROJECTION_MAX_ITERS {
        let residual: Vec<f64> = p.iter().zip(z.coords()).map(|(pc, zc)| pc - zc).collect();
        let mut grad_scale = 0.0f64;
        for (g, c) in grads.iter_mut().zip(scenarios) {
            *g = 2.0 * dot(c.coords(), &residual);
            grad_scale = grad_scale.max(math::abs(*g));
        }
        let mut fw = 0usize;
        for s in 1..s_count {
            if grads[s] < grads[fw] {
                fw = s;
            }
        }
        let avg_grad = 2.0 * dot(&p, &residual);
        let gap = avg_grad - grads[fw];
        achieved_gap = gap;
        let noise_floor = f64::EPSILON * (64.0 + 8.0 * s_count as f64) * (grad_scale + 1.0);
        if gap <= (tol * tol).max(noise_floor) {
            return Ok(Point::new(p));
        }

        if !active.contains(&fw) {
            active.push(fw);
            weights.push(0.0);
        }
        minimize_over_active(scenarios, &mut active, &mut weights, z);

        for pc in p.iter_mut() {
            *pc = 0.0;
        }
        for (idx, wgt) in active.iter().zip(&weights) {
            for (pc, sc) in p.iter_mut().zip(scenarios[*idx].coords()) {
                *pc += wgt * sc;
            }
        }
    }
    Err(Error::ProjectionAccuracy { achieved_gap })
}

/// Exactly minimizes `‖Σ w_i c_i − z‖²` over simplex weights supported on the
/// active scenarios. Repeatedly solves the affine-hull minimizer; while it
/// has negative coordinates, moves the current feasible weights toward it
/// until the first coordinate vanishes and drops that scenario.
fn minimize_over_active(
    scenarios: &[Point],
    active: &mut Vec<usize>,
    weights: &mut Vec<f64>,
    z: &Point,
) {
    loop {
        let target = affine_weights(scenarios, active, z);
        let feasible = target.iter().all(|t| *t >= -1e-12);
        if feasible {
            *weights = target;
            let mut total = 0.0;
            for w in weights.iter_mut() {
                if *w < 0.0 {
                    *w = 0.0;
                }
                total += *w;
            }
            for w in weights.iter_mut() {
                *w /= total;
            }
            return;
        }

        let mut theta = 1.0f64;
        for (w, t) in weights.iter().zip(&target) {
            if *t < 0.0 && *w - *t > 0.0 {
                theta = theta.min(*w / (*w - *t));
            }
        }
        let mut kept_active = Vec::with_capacity(active.len());
        let mut kept_weights = Vec::with_capacity(active.len());
        let mut dropped = false;
        for ((idx, w), t) in active.iter().zip(weights.iter()).zip(&target) {
            let moved = *w + theta * (*t - *w);
            if moved <= 1e-14 {
                dropped = true;
            } else {
                kept_active.push(*idx);
                kept_weights.push(moved);
            }
        }
        if !dropped {
            // Numerical stalemate: keep the feasible part of the move.
            let total: f64 = kept_weights.iter().sum();
            for w in kept_weights.iter_mut() {
                *w /= total;
            }
            *active = kept_active;
            *weights = kept_weights;
            return;
        }
        let total: f64 = kept_weights.iter().sum();
        for w in kept_weights.iter_mut() {
            *w /= total;
        }
        *active = kept_active;
        *weights = kept_weights;
        if active.len() == 1 {
            weights[0] = 1.0;
            return;
        }
    }
}

/// Minimizer of `‖Σ w_i c_i − z‖²` over affine weights (summing to one, sign
/// free) of the active scenarios, via the normal equations anchored at the
/// first active scenario. Rank-deficient systems return one valid minimizer.
fn affine_weights(scenarios: &[Point], active: &[usize], z: &Point) -> Vec<f64> {
    let k = active.len();
    if k == 1 {
        return vec![1.0];
    }
    let base = scenarios[active[0]].coords();
    let n = base.len();
    let m = k - 1;
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    for idx in &active[1..] {
        let c = scenarios[*idx].coords();
        cols.push((0..n).map(|t| c[t] - base[t]).collect());
    }
    let target: Vec<f64> = (0..n).map(|t| z[t] - base[t]).collect();
    let mut gram = vec![0.0f64; m * m];
    let mut rhs = vec![0.0f64; m];
    for i in 0..m {
        for j in i..m {
            let v = dot(&cols[i], &cols[j]);
            gram[i * m + j] = v;
            gram[j * m + i] = v;
        }
        rhs[i] = dot(&cols[i], &target);
    }
    let t = solve_consistent(&mut gram, &mut rhs, m);
    let mut w = vec![0.0f64; k];
    w[0] = 1.0 - t.iter().sum::<f64>();
    w[1..].copy_from_slice(&t);
    w
}

/// Gaussian elimination with partial pivoting for small consistent systems.
/// Columns without a usable pivot get their variable set to zero, which picks
/// one solution when the matrix is rank deficient (the normal equations are
/// always consistent, so skipped rows carry no information).
fn solve_consistent(a: &mut [f64], b: &mut [f64], m: usize) -> Vec<f64> {
    let mut scale = 0.0f64;
    for v in a.iter() {
        scale = scale.max(math::abs(*v));
    }
    let eps = f64::EPSILON * 16.0 * (m as f64 + 1.0) * (scale + 1.0);
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; m];
    let mut row = 0usize;
    for col in 0..m {
        if row >= m {
            break;
        }
        let mut best = row;
        for r in row + 1..m {
            if math::abs(a[r * m + col]) > math::abs(a[best * m + col]) {
                best = r;
            }
        }
        if math::abs(a[best * m + col]) <= eps {
            continue;
        }
        if best != row {
            for cc in 0..m {
                a.swap(row * m + cc, best * m + cc);
            }
            b.swap(row, best);
        }
        for r in row + 1..m {
            let f = a[r * m + col] / a[row * m + col];
            if f != 0.0 {
                for cc in col..m {
                    a[r * m + cc] -= f * a[row * m + cc];
                }
                b[r] -= f * b[row];
            }
        }
        pivot_row_of_col[col] = Some(row);
        row += 1;
    }
    let mut x = vec![0.0f64; m];
    for col in (0..m).rev() {
        if let Some(r) = pivot_row_of_col[col] {
            let mut acc = b[r];
            for cc in col + 1..m {
                acc -= a[r * m + cc] * x[cc];
            }
            x[col] = acc / a[r * m + col];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budgeted(c_lower: &[f64], d: &[f64], gamma: f64) -> UncertaintySet {
        UncertaintySet::Budgeted(BudgetedSet::new(c_lower.to_vec(), d.to_vec(), gamma).unwrap())
    }

    fn hull(scenarios: &[&[f64]]) -> UncertaintySet {
        UncertaintySet::ScenarioHull(
            ScenarioHullSet::new(scenarios.iter().map(|s| Point::new(s.to_vec())).collect())
                .unwrap(),
        )
    }

    #[test]
    fn constructors_reject_bad_data() {
        assert!(BoxSet::new(vec![0.0], vec![-1.0]).is_err());
        assert!(BoxSet::new(vec![0.0], vec![f64::NAN]).is_err());
        assert!(BoxSet::new(vec![], vec![]).is_err());
        assert!(BudgetedSet::new(vec![0.0], vec![0.0], 1.0).is_err());
        assert!(BudgetedSet::new(vec![0.0], vec![1.0], -0.5).is_err());
        assert!(BudgetedSet::new(vec![0.0, 0.0], vec![1.0], 1.0).is_err());
        assert!(ScenarioHullSet::new(vec![]).is_err());
        assert!(
            ScenarioHullSet::new(vec![Point::new(vec![1.0]), Point::new(vec![1.0, 2.0])]).is_err()
        );
    }

    #[test]
    fn box_support_picks_bounds_by_sign() {
        let set = UncertaintySet::Box(BoxSet::new(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap());
        let (val, c) = set.support_max(&Point::new(vec![3.0, -2.0])).unwrap();
        assert_eq!(c.coords(), &[2.0, -1.0]);
        assert_eq!(val, 8.0);
    }

    #[test]
    fn budgeted_support_spends_budget_greedily() {
        let set = budgeted(&[1.0, 1.0, 1.0], &[2.0, 3.0, 1.0], 1.5);
        let (val, c) = set.support_max(&Point::new(vec![1.0, 2.0, 3.0])).unwrap();
        assert_eq!(c.coords(), &[1.0, 4.0, 1.5]);
        assert_eq!(val, 13.5);
        assert!(set.contains(&c, 1e-12).unwrap());
    }

    #[test]
    fn budgeted_support_ignores_nonpositive_gains() {
        let set = budgeted(&[1.0, 2.0], &[1.0, 1.0], 2.0);
        let (val, c) = set.support_max(&Point::new(vec![-1.0, 0.0])).unwrap();
        assert_eq!(c.coords(), &[1.0, 2.0]);
        assert_eq!(val, -1.0);
    }

    #[test]
    fn scenario_support_is_best_scenario_first_wins() {
        let set = hull(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]);
        let (val, c) = set.support_max(&Point::new(vec![2.0, 1.0])).unwrap();
        assert_eq!(c.coords(), &[1.0, 0.0]);
        assert_eq!(val, 2.0);
    }

    #[test]
    fn box_projection_clamps() {
        let set = UncertaintySet::Box(BoxSet::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap());
        let p = set.project(&Point::new(vec![-1.0, 5.0]), 1e-9).unwrap();
        assert_eq!(p.coords(), &[0.0, 2.0]);
    }

    #[test]
    fn budgeted_projection_symmetric_case() {
        let set = budgeted(&[0.0, 0.0], &[1.0, 1.0], 1.0);
        let p = set.project(&Point::new(vec![1.0, 1.0]), 1e-9).unwrap();
        assert!((p.coords()[0] - 0.5).abs() < 1e-12);
        assert!((p.coords()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn budgeted_projection_weighted_case() {
        // Stationarity requires that both coordinates share the multiplier:
        // 2*(t0 - 1) = 8*(t1 - 1) with t0 + t1 = 1 gives t = (0.2, 0.8).
        let set = budgeted(&[0.0, 0.0], &[1.0, 2.0], 1.0);
        let p = set.project(&Point::new(vec![1.0, 2.0]), 1e-9).unwrap();
        assert!((p.coords()[0] - 0.2).abs() < 1e-12);
        assert!((p.coords()[1] - 1.6).abs() < 1e-12);
    }

    #[test]
    fn budgeted_projection_pegs_dominant_coordinate() {
        let set = budgeted(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0], 1.0);
        let p = set.project(&Point::new(vec![5.0, 0.3, 0.0]), 1e-9).unwrap();
        assert!((p.coords()[0] - 1.0).abs() < 1e-12);
        assert!(p.coords()[1].abs() < 1e-12);
        assert!(p.coords()[2].abs() < 1e-12);
    }

    #[test]
    fn budgeted_projection_inactive_budget_is_pure_clamp() {
        let set = budgeted(&[0.0, 0.0], &[1.0, 1.0], 2.0);
        let p = set.project(&Point::new(vec![0.25, 7.0]), 1e-9).unwrap();
        assert_eq!(p.coords(), &[0.25, 1.0]);
    }

    #[test]
    fn budgeted_projection_zero_budget() {
        let set = budgeted(&[1.0, 2.0], &[1.0, 1.0], 0.0);
        let p = set.project(&Point::new(vec![9.0, 9.0]), 1e-9).unwrap();
        assert_eq!(p.coords(), &[1.0, 2.0]);
    }

    #[test]
    fn hull_projection_onto_segment() {
        let set = hull(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let p = set.project(&Point::new(vec![0.5, 1.0]), 1e-9).unwrap();
        assert!((p.coords()[0] - 0.5).abs() < 1e-10);
        assert!(p.coords()[1].abs() < 1e-10);
    }

    #[test]
    fn hull_projection_of_member_is_itself() {
        let set = hull(&[&[0.0, 0.0], &[2.0, 0.0], &[0.0, 2.0]]);
        let z = Point::new(vec![0.5, 0.5]);
        let p = set.project(&z, 1e-9).unwrap();
        assert!(p.dist(&z) < 1e-9);
    }

    #[test]
    fn box_constants() {
        let set = UncertaintySet::Box(BoxSet::new(vec![-1.0, 0.0], vec![2.0, 3.0]).unwrap());
        let (m, m_max) = set.constants();
        assert!((m - 18.0f64.sqrt()).abs() < 1e-12);
        assert!((m_max - 13.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn budgeted_constants_integer_budget() {
        let set = budgeted(&[0.0, 0.0], &[3.0, 4.0], 1.0);
        let (m, m_max) = set.constants();
        assert!((m - 5.0).abs() < 1e-12);
        assert!((m_max - 4.0).abs() < 1e-12);
    }

    #[test]
    fn budgeted_constants_fractional_budget() {
        let set = budgeted(&[1.0, 2.0], &[3.0, 4.0], 1.5);
        let (_, m_max) = set.constants();
        // Profile (0.5, 1) reaches c = (2.5, 6).
        assert!((m_max - 42.25f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn budgeted_diameter_single_coordinate_fraction() {
        let set = budgeted(&[0.0], &[2.0], 0.5);
        let (m, _) = set.constants();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budgeted_max_norm_puts_the_fraction_where_it_pays() {
        let c_lower = [9.99567478308203, 3.076897192723576];
        let d = [2.4797138260119524, 4.92375351013958];
        let gamma = 1.7315425952887047;
        let set = budgeted(&c_lower, &d, gamma);
        let (_, m_max) = set.constants();
        // The full unit belongs on the second coordinate and the fraction on
        // the first, even though the first has the larger full-unit gain.
        let frac = gamma - 1.0;
        let c1 = c_lower[0] + frac * d[0];
        let c2 = c_lower[1] + d[1];
        let expect = math::sqrt(c1 * c1 + c2 * c2);
        assert!((m_max - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn scenario_constants() {
        let set = hull(&[&[0.0, 0.0], &[3.0, 4.0], &[1.0, 1.0]]);
        let (m, m_max) = set.constants();
        assert_eq!(m, 5.0);
        assert_eq!(m_max, 5.0);
    }

    #[test]
    fn centers_are_members() {
        let sets = [
            UncertaintySet::Box(BoxSet::new(vec![-1.0, 0.0], vec![2.0, 3.0]).unwrap()),
            budgeted(&[1.0, 2.0, 3.0], &[1.0, 2.0, 1.0], 2.0),
            hull(&[&[0.0, 0.0], &[2.0, 0.0], &[0.0, 2.0]]),
        ];
        for set in &sets {
            let c = set.center();
            assert!(set.contains(&c, 1e-9).unwrap(), "center not in {}", set.kind_name());
        }
    }

    #[test]
    fn projection_rejects_bad_arguments() {
        let set = budgeted(&[0.0, 0.0], &[1.0, 1.0], 1.0);
        assert!(set.project(&Point::new(vec![1.0]), 1e-9).is_err());
        assert!(set.project(&Point::new(vec![f64::NAN, 0.0]), 1e-9).is_err());
        assert!(set.project(&Point::new(vec![0.0, 0.0]), 0.0).is_err());
    }
}
