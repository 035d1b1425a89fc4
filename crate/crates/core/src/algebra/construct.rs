//! Building new aggregators from existing ones.

use std::fmt;
use std::sync::Arc;

use super::catalog::Form;
use super::{Aggregator, AlgebraError, Axiom, GridSpec};

const WEIGHT_TOL: f64 = 1e-12;
const NUM_EPS: f64 = 1e-12;

/// Convex combination `Σ wᵢ fᵢ` of semi-overlap functions.
///
/// Weights must be nonnegative and sum to 1 within `1e-12`. Every member
/// must pass the five semi-overlap predicates.
pub fn weighted_sum(members: &[Aggregator], weights: &[f64]) -> Result<Aggregator, AlgebraError> {
    if members.is_empty() {
        return Err(AlgebraError::EmptyCombination);
    }
    if members.len() != weights.len() {
        return Err(AlgebraError::WeightCount {
            members: members.len(),
            weights: weights.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || (total - 1.0).abs() > WEIGHT_TOL {
        return Err(AlgebraError::WeightSum(total));
    }
    for m in members {
        let props = m.declared_props();
        if let Some(&axiom) = Axiom::SEMI_OVERLAP.iter().find(|&&a| !props.contains(a)) {
            return Err(AlgebraError::NotSemiOverlap {
                id: m.id().to_string(),
                axiom,
            });
        }
    }
    let id = members
        .iter()
        .zip(weights)
        .map(|(m, w)| format!("{w}*{}", m.id()))
        .collect::<Vec<_>>()
        .join("+");
    let parts = weights
        .iter()
        .copied()
        .zip(members.iter().cloned())
        .collect();
    Ok(Aggregator::from_form(
        id,
        Vec::new(),
        Form::Weighted { parts, total },
    ))
}

/// Which hypothesis of the ratio construction `f / (f + g)` was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioCondition {
    /// `f + g` vanishes somewhere.
    NonZeroSum,
    /// `f` or `g` is not symmetric.
    Symmetric,
    /// `uv = 0` but `f ≠ 0`.
    ZeroAtBoundary,
    /// `uv = 1` but `g ≠ 0`.
    GVanishesAtOne,
    /// `f` is not nondecreasing or `g` is not nonincreasing.
    Monotone,
    /// `f` or `f + g` moves faster than the stated slope bound.
    Continuity,
}

impl RatioCondition {
    pub fn number(&self) -> u8 {
        match self {
            RatioCondition::NonZeroSum => 1,
            RatioCondition::Symmetric => 2,
            RatioCondition::ZeroAtBoundary => 3,
            RatioCondition::GVanishesAtOne => 4,
            RatioCondition::Monotone => 5,
            RatioCondition::Continuity => 6,
        }
    }
}

impl fmt::Display for RatioCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            RatioCondition::NonZeroSum => "f + g > 0",
            RatioCondition::Symmetric => "f, g commutative",
            RatioCondition::ZeroAtBoundary => "uv = 0 implies f = 0",
            RatioCondition::GVanishesAtOne => "uv = 1 implies g = 0",
            RatioCondition::Monotone => "f increasing, g decreasing",
            RatioCondition::Continuity => "f and f + g continuous",
        };
        write!(f, "{}: {text}", self.number())
    }
}

/// `f / (f + g)` checked on the law grid with slope bound 4.
pub fn from_ratio(
    f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
) -> Result<Aggregator, AlgebraError> {
    from_ratio_with(f, g, &GridSpec::law_default(), 4.0)
}

/// `f / (f + g)` with an explicit check grid and slope bound for `f` and `f + g`.
pub fn from_ratio_with(
    f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    grid: &GridSpec,
    lipschitz: f64,
) -> Result<Aggregator, AlgebraError> {
    let pts = grid.points();
    let fail = |condition, u, v| Err(AlgebraError::Ratio { condition, u, v });
    let budget = lipschitz * grid.step() + NUM_EPS;
    for (i, &u) in pts.iter().enumerate() {
        for (j, &v) in pts.iter().enumerate() {
            let (a, b) = (f(u, v), g(u, v));
            if a + b == 0.0 {
                return fail(RatioCondition::NonZeroSum, u, v);
            }
            if a != f(v, u) || b != g(v, u) {
                return fail(RatioCondition::Symmetric, u, v);
            }
            if u * v == 0.0 && a != 0.0 {
                return fail(RatioCondition::ZeroAtBoundary, u, v);
            }
            if u * v == 1.0 && b != 0.0 {
                return fail(RatioCondition::GVanishesAtOne, u, v);
            }
            for (nu, nv) in [(pts.get(i + 1), Some(&v)), (Some(&u), pts.get(j + 1))] {
                let (Some(&nu), Some(&nv)) = (nu, nv) else {
                    continue;
                };
                let (na, nb) = (f(nu, nv), g(nu, nv));
                if na < a || nb > b {
                    return fail(RatioCondition::Monotone, u, v);
                }
                if (na - a).abs() > budget || ((na + nb) - (a + b)).abs() > budget {
                    return fail(RatioCondition::Continuity, u, v);
                }
            }
        }
    }
    // The quotient of two L-Lipschitz maps with f + g bounded below is
    // Lipschitz; the bound below is from the grid minimum of f + g.
    let floor = pts
        .iter()
        .flat_map(|&u| pts.iter().map(move |&v| (u, v)))
        .map(|(u, v)| f(u, v) + g(u, v))
        .fold(f64::INFINITY, f64::min);
    let slope = 2.0 * lipschitz / floor;
    Ok(Aggregator::from_form(
        "ratio",
        Vec::new(),
        Form::Ratio {
            f: Arc::new(f),
            g: Arc::new(g),
            lipschitz: slope,
        },
    ))
}
