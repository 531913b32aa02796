//! Run configuration shared by all solvers.

use crate::error::{Error, Result};

/// Which solver to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Smoothed Frank-Wolfe with a fixed smoothing parameter.
    Fw,
    /// Smoothed Frank-Wolfe with a decreasing smoothing schedule.
    Afw,
    /// Smoothed Frank-Wolfe with periodic convex-hull restricted solves and
    /// certified dual bounds.
    FwConvhull,
    /// Constraint generation on the epigraph formulation.
    ConsGen,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Fw, Method::Afw, Method::FwConvhull, Method::ConsGen];

    /// Stable lowercase name, used in CLI arguments and output files.
    pub fn name(self) -> &'static str {
        match self {
            Method::Fw => "fw",
            Method::Afw => "afw",
            Method::FwConvhull => "fw-convhull",
            Method::ConsGen => "consgen",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "fw" => Some(Method::Fw),
            "afw" => Some(Method::Afw),
            "fw-convhull" | "fw_convhull" => Some(Method::FwConvhull),
            "consgen" => Some(Method::ConsGen),
            _ => None,
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs controlling a solver run.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub method: Method,
    /// Target additive accuracy on the true objective.
    pub epsilon: f64,
    /// Fixed smoothing parameter override. `None` selects `epsilon / M^2`.
    pub mu_override: Option<f64>,
    /// Hard cap on iterations, applied after the theoretical iteration bound.
    pub max_iters: usize,
    /// Hard cap on linear minimization oracle calls.
    pub max_lmo_calls: usize,
    /// Convex-hull solve cadence for [`Method::FwConvhull`].
    pub conv_hull_period: usize,
    /// Feasibility and optimality tolerance for inner LP solves.
    pub lp_tolerance: f64,
    /// Accuracy requested from iterative Euclidean projections.
    pub projection_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Fw,
            epsilon: 0.1,
            mu_override: None,
            max_iters: 10_000,
            max_lmo_calls: 2_500,
            conv_hull_period: 10,
            lp_tolerance: 1e-9,
            projection_tolerance: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        Self { method, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Invalid("epsilon must be finite and positive"));
        }
        if let Some(mu) = self.mu_override {
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(Error::Invalid("mu override must be finite and positive"));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::Invalid("max_iters must be at least 1"));
        }
        if self.max_lmo_calls == 0 {
            return Err(Error::Invalid("max_lmo_calls must be at least 1"));
        }
        if self.conv_hull_period == 0 {
            return Err(Error::Invalid("conv_hull_period must be at least 1"));
        }
        if !(self.lp_tolerance > 0.0) || !self.lp_tolerance.is_finite() {
            return Err(Error::Invalid("lp_tolerance must be finite and positive"));
        }
        if !(self.projection_tolerance > 0.0) || !self.projection_tolerance.is_finite() {
            return Err(Error::Invalid("projection_tolerance must be finite and positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let cfg = SolverConfig::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.epsilon, 0.1);
        assert_eq!(cfg.max_iters, 10_000);
        assert_eq!(cfg.max_lmo_calls, 2_500);
        assert_eq!(cfg.conv_hull_period, 10);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = SolverConfig::default();
        cfg.epsilon = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = SolverConfig::default();
        cfg.mu_override = Some(-1.0);
        assert!(cfg.validate().is_err());

        let mut cfg = SolverConfig::default();
        cfg.max_iters = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = SolverConfig::default();
        cfg.epsilon = f64::NAN;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.name()), Some(m));
        }
        assert_eq!(Method::parse("simplex"), None);
    }
}
