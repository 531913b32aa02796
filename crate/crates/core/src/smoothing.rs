//! Smoothed objective and smoothing schedules.
//!
//! The robust objective `f(x) = max_{c in U} c'x` is piecewise linear. Its
//! smoothed surrogate with parameter `mu > 0` and anchor `c0 in U` is
//!
//! ```text
//!     f_mu(x) = max_{c in U} { c'x - (mu/2) ||c - c0||^2 },
//! ```
//!
//! whose unique maximizer is the Euclidean projection of `c0 + x/mu` onto
//! `U`. That maximizer is the gradient of `f_mu`, which is Lipschitz with
//! constant `1/mu`, and
//!
//! ```text
//!     f_mu(x) <= f(x) <= f_mu(x) + (mu/2) M^2
//! ```
//!
//! where `M` is the diameter of `U`.

use crate::error::{Error, Result};
use crate::math;
use crate::point::Point;
use crate::uncertainty::UncertaintySet;

/// True robust objective `max_{c in U} c'x`.
pub fn eval_f(set: &UncertaintySet, x: &Point) -> Result<f64> {
    Ok(set.support_max(x)?.0)
}

/// Evaluates the smoothed objective and its gradient in one projection.
///
/// Returns `(f_mu(x), grad)` where `grad` is the projection of
/// `anchor + x/mu` onto the set.
pub fn smoothed_value_gradient(
    set: &UncertaintySet,
    anchor: &Point,
    mu: f64,
    x: &Point,
    projection_tol: f64,
) -> Result<(f64, Point)> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Invalid("smoothing parameter must be finite and positive"));
    }
    if x.dim() != set.dimension() {
        return Err(Error::DimensionMismatch { expected: set.dimension(), got: x.dim() });
    }
    let shifted = Point::new(
        anchor
            .coords()
            .iter()
            .zip(x.coords())
            .map(|(c0, xj)| c0 + xj / mu)
            .collect(),
    );
    let grad = set.project(&shifted, projection_tol)?;
    let dev = grad.dist(anchor);
    let value = grad.dot(x) - 0.5 * mu * dev * dev;
    Ok((value, grad))
}

/// A smoothed objective with a fixed anchor and smoothing parameter.
#[derive(Clone, Debug)]
pub struct SmoothedObjective<'a> {
    set: &'a UncertaintySet,
    anchor: Point,
    mu: f64,
    projection_tol: f64,
}

impl<'a> SmoothedObjective<'a> {
    /// Builds a smoothed objective. The anchor must belong to the set (up to
    /// a small tolerance) and `mu` must be positive.
    pub fn new(
        set: &'a UncertaintySet,
        anchor: Point,
        mu: f64,
        projection_tol: f64,
    ) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Invalid("smoothing parameter must be finite and positive"));
        }
        if !(projection_tol > 0.0) || !projection_tol.is_finite() {
            return Err(Error::Invalid("projection tolerance must be finite and positive"));
        }
        if anchor.dim() != set.dimension() {
            return Err(Error::DimensionMismatch { expected: set.dimension(), got: anchor.dim() });
        }
        if !anchor.is_finite() {
            return Err(Error::NonFinite("smoothing anchor"));
        }
        let membership_tol = 1e-6 * (1.0 + anchor.norm());
        if !set.contains(&anchor, membership_tol)? {
            return Err(Error::Invalid("smoothing anchor lies outside the uncertainty set"));
        }
        Ok(Self { set, anchor, mu, projection_tol })
    }

    /// Builds a smoothed objective anchored at the set's center.
    pub fn with_default_anchor(
        set: &'a UncertaintySet,
        mu: f64,
        projection_tol: f64,
    ) -> Result<Self> {
        Self::new(set, set.center(), mu, projection_tol)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn set(&self) -> &UncertaintySet {
        self.set
    }

    /// `(f_mu(x), grad f_mu(x))`.
    pub fn value_and_gradient(&self, x: &Point) -> Result<(f64, Point)> {
        smoothed_value_gradient(self.set, &self.anchor, self.mu, x, self.projection_tol)
    }

    /// Computable bracket `lower <= f(x) <= upper` from one evaluation:
    /// `lower = f_mu(x)`, `upper = f_mu(x) + (mu/2) * diameter^2`.
    pub fn sandwich_bounds(&self, x: &Point, uncertainty_diameter: f64) -> Result<(f64, f64)> {
        let (value, _) = self.value_and_gradient(x)?;
        let upper = value + 0.5 * self.mu * uncertainty_diameter * uncertainty_diameter;
        Ok((value, upper))
    }
}

/// Smoothing parameter schedule across iterations (counted from zero).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MuSchedule {
    /// Constant parameter.
    Fixed(f64),
    /// Decreasing schedule `mu_t = 2 D / (M_max * sqrt(t + 1))`, which needs
    /// no target accuracy up front. Requires both constants positive.
    Adaptive { feasible_diameter: f64, uncertainty_max_norm: f64 },
}

impl MuSchedule {
    pub fn mu_at(&self, t: usize) -> f64 {
        match *self {
            MuSchedule::Fixed(mu) => mu,
            MuSchedule::Adaptive { feasible_diameter, uncertainty_max_norm } => {
                debug_assert!(feasible_diameter > 0.0 && uncertainty_max_norm > 0.0);
                2.0 * feasible_diameter / (uncertainty_max_norm * math::sqrt((t + 1) as f64))
            }
        }
    }
}
