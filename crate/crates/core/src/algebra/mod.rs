//! Binary aggregation functions on the unit square.
//!
//! Every function in the catalog is an [`Aggregator`]: a pure map
//! `[0,1]² → [0,1]` together with the metadata the grid predicates need
//! (a continuity budget and the location of any registered jumps).
//! Algebraic properties are never asserted by hand; [`Aggregator::declared_props`]
//! runs the predicate suite in [`axioms`] and caches the result.

mod axioms;
mod catalog;
mod construct;

use std::fmt;

use thiserror::Error;

pub use axioms::{check_axiom, expected_failures, props_on, Axiom, AxiomCheck, PropSet};
pub use catalog::{catalog_entries, catalog_get, Aggregator, CatalogEntry, Kernel, Map};
pub use construct::{from_ratio, from_ratio_with, weighted_sum, RatioCondition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("value {0} is outside [0, 1]")]
    OutOfUnit(f64),
    #[error("unknown catalog identifier `{0}`")]
    UnknownId(String),
    #[error("parameter `{name}` = {value} is out of range for `{id}` ({expected})")]
    BadParam {
        id: String,
        name: String,
        value: f64,
        expected: &'static str,
    },
    #[error("`{id}` takes no parameter named `{name}`")]
    UnexpectedParam { id: String, name: String },
    #[error("grid step {0} does not divide [0, 1]")]
    BadStep(f64),
    #[error("weighted sum needs at least one member")]
    EmptyCombination,
    #[error("{members} members but {weights} weights")]
    WeightCount { members: usize, weights: usize },
    #[error("weights must be nonnegative and sum to 1 (sum = {0})")]
    WeightSum(f64),
    #[error("member `{id}` is not a semi-overlap function: {axiom} fails")]
    NotSemiOverlap { id: String, axiom: Axiom },
    #[error("ratio construction: condition ({condition}) fails at ({u}, {v})")]
    Ratio {
        condition: RatioCondition,
        u: f64,
        v: f64,
    },
}

/// A real number known to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(value: f64) -> Result<Self, AlgebraError> {
        if (0.0..=1.0).contains(&value) {
            Ok(UnitValue(value))
        } else {
            Err(AlgebraError::OutOfUnit(value))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            UnitValue(0.0)
        } else {
            UnitValue(value.clamp(0.0, 1.0))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for UnitValue {
    type Error = AlgebraError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        UnitValue::new(value)
    }
}

impl From<UnitValue> for f64 {
    fn from(v: UnitValue) -> f64 {
        v.0
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Uniform grid on `[0, 1]` including both endpoints.
///
/// Points are generated as `k / n` rather than by repeated addition, so
/// `0`, `1` and every decimal grid point are the nearest doubles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    step: f64,
    intervals: usize,
}

impl GridSpec {
    /// Default step for one- and two-variable axioms.
    pub const AXIOM_STEP: f64 = 1e-3;
    /// Default step for laws quantified over three variables.
    pub const LAW_STEP: f64 = 1e-2;

    pub fn new(step: f64) -> Result<Self, AlgebraError> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(AlgebraError::BadStep(step));
        }
        let intervals = (1.0 / step).round();
        if (intervals * step - 1.0).abs() > 1e-9 {
            return Err(AlgebraError::BadStep(step));
        }
        Ok(GridSpec {
            step,
            intervals: intervals as usize,
        })
    }

    pub fn axiom_default() -> Self {
        GridSpec::new(Self::AXIOM_STEP).expect("valid step")
    }

    pub fn law_default() -> Self {
        GridSpec::new(Self::LAW_STEP).expect("valid step")
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of grid points, `round(1/step) + 1`.
    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> f64 {
        k as f64 / self.intervals as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// The coarser of this grid and `step`.
    pub fn coarsened(&self, step: f64) -> GridSpec {
        if step > self.step {
            GridSpec::new(step).unwrap_or(*self)
        } else {
            *self
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::axiom_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_value_rejects_out_of_range() {
        assert!(UnitValue::new(0.0).is_ok());
        assert!(UnitValue::new(1.0).is_ok());
        assert_eq!(UnitValue::new(1.5), Err(AlgebraError::OutOfUnit(1.5)));
        assert!(UnitValue::new(-0.1).is_err());
        assert!(UnitValue::new(f64::NAN).is_err());
        assert_eq!(UnitValue::saturating(2.0).get(), 1.0);
    }

    #[test]
    fn grid_counts_and_endpoints() {
        let g = GridSpec::new(1e-3).unwrap();
        assert_eq!(g.len(), 1001);
        assert_eq!(g.point(0), 0.0);
        assert_eq!(g.point(1000), 1.0);
        assert_eq!(g.point(300), 0.3);
        assert_eq!(GridSpec::new(0.05).unwrap().len(), 21);
        assert!(GridSpec::new(0.3).is_err());
        assert!(GridSpec::new(0.0).is_err());
    }
}
