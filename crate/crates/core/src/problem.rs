//! Problem instances and the geometric constants that drive the complexity
//! bounds.

use alloc::boxed::Box;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::math;
use crate::oracles::Lmo;
use crate::uncertainty::UncertaintySet;

/// Geometric quantities of an instance:
///
/// * `feasible_diameter` bounds the Euclidean distance between any two points
///   the oracle can return (`D`),
/// * `uncertainty_diameter` bounds the Euclidean diameter of the uncertainty
///   set (`M`),
/// * `uncertainty_max_norm` bounds the Euclidean norm of its members
///   (`M_max`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricConstants {
    pub feasible_diameter: f64,
    pub uncertainty_diameter: f64,
    pub uncertainty_max_norm: f64,
}

impl GeometricConstants {
    pub fn new(
        feasible_diameter: f64,
        uncertainty_diameter: f64,
        uncertainty_max_norm: f64,
    ) -> Result<Self> {
        let c = Self { feasible_diameter, uncertainty_diameter, uncertainty_max_norm };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.feasible_diameter, self.uncertainty_diameter, self.uncertainty_max_norm];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("geometric constants"));
        }
        if all.iter().any(|v| *v < 0.0) {
            return Err(Error::Invalid("geometric constants must be nonnegative"));
        }
        // Triangle inequality: any two members of the set are within
        // 2 * max_norm of each other.
        if self.uncertainty_diameter > 2.0 * self.uncertainty_max_norm + 1e-9 {
            return Err(Error::Invalid("uncertainty diameter exceeds twice the max norm"));
        }
        Ok(())
    }
}

/// Smoothing parameter `epsilon / M^2` that makes the smoothed objective an
/// `epsilon/2`-accurate surrogate of the true one.
///
/// Errors with [`Error::DegenerateUncertainty`] when `M = 0`; the problem is
/// then deterministic and a single oracle call solves it.
pub fn default_mu(epsilon: f64, uncertainty_diameter: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Invalid("epsilon must be finite and positive"));
    }
    if !uncertainty_diameter.is_finite() || uncertainty_diameter < 0.0 {
        return Err(Error::Invalid("uncertainty diameter must be finite and nonnegative"));
    }
    if uncertainty_diameter == 0.0 {
        return Err(Error::DegenerateUncertainty);
    }
    Ok(epsilon / (uncertainty_diameter * uncertainty_diameter))
}

/// Number of Frank-Wolfe iterations, `ceil(4 D^2 M^2 / epsilon^2)`, that
/// guarantees an `epsilon`-accurate iterate under the default smoothing.
pub fn iteration_bound(
    epsilon: f64,
    feasible_diameter: f64,
    uncertainty_diameter: f64,
) -> Result<u64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Invalid("epsilon must be finite and positive"));
    }
    if !feasible_diameter.is_finite()
        || feasible_diameter < 0.0
        || !uncertainty_diameter.is_finite()
        || uncertainty_diameter < 0.0
    {
        return Err(Error::Invalid("diameters must be finite and nonnegative"));
    }
    let d2 = feasible_diameter * feasible_diameter;
    let m2 = uncertainty_diameter * uncertainty_diameter;
    let raw = 4.0 * d2 * m2 / (epsilon * epsilon);
    if !raw.is_finite() {
        return Err(Error::NonFinite("iteration bound"));
    }
    Ok(math::ceil(raw) as u64)
}

/// A robust optimization instance: a feasible region behind a linear
/// minimization oracle, an uncertainty set, and geometric constants.
pub struct ProblemInstance {
    name: String,
    lmo: Box<dyn Lmo>,
    uncertainty: UncertaintySet,
    constants: GeometricConstants,
}

impl ProblemInstance {
    /// Builds an instance, deriving the geometric constants from the oracle's
    /// diameter bound and the uncertainty set.
    pub fn new(name: String, lmo: Box<dyn Lmo>, uncertainty: UncertaintySet) -> Result<Self> {
        let (m, m_max) = uncertainty.constants();
        let constants = GeometricConstants::new(lmo.diameter_bound(), m, m_max)?;
        Self::with_constants(name, lmo, uncertainty, constants)
    }

    /// Builds an instance with caller-supplied constants (for instances loaded
    /// from files that carry their own). The constants are validated but not
    /// recomputed.
    pub fn with_constants(
        name: String,
        lmo: Box<dyn Lmo>,
        uncertainty: UncertaintySet,
        constants: GeometricConstants,
    ) -> Result<Self> {
        if lmo.dimension() != uncertainty.dimension() {
            return Err(Error::DimensionMismatch {
                expected: lmo.dimension(),
                got: uncertainty.dimension(),
            });
        }
        if lmo.dimension() == 0 {
            return Err(Error::Invalid("instance dimension must be at least 1"));
        }
        constants.validate()?;
        Ok(Self { name, lmo, uncertainty, constants })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.lmo.dimension()
    }

    pub fn lmo(&self) -> &dyn Lmo {
        self.lmo.as_ref()
    }

    pub fn uncertainty(&self) -> &UncertaintySet {
        &self.uncertainty
    }

    pub fn constants(&self) -> GeometricConstants {
        self.constants
    }
}

impl core::fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("constants", &self.constants)
            .finish_non_exhaustive()
    }
}
