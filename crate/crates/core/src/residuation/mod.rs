//! Residual implications `I(u,v) = sup{w : f(u,w) ≤ v}`.
//!
//! The grid oracle is the ground truth; closed forms are attached for the
//! catalog functions whose printed residual survives comparison with it.

mod closed;
mod properties;

use rayon::prelude::*;

use crate::algebra::{Aggregator, GridSpec, UnitValue};

pub use closed::Table1Row;
pub use properties::{
    check_impl_property, format_tuple, ImplProperty, ImplPropertyReport, PropertyCheck,
};

/// Slack for floating noise in the "⇐" direction of the adjunction.
pub const RP_EPS: f64 = 1e-9;

/// Largest grid `w` with `f(u, w) ≤ v`; `0` when no grid point qualifies.
pub fn residual_oracle(f: &Aggregator, u: f64, v: f64, grid: &GridSpec) -> f64 {
    (0..grid.len())
        .rev()
        .map(|k| grid.point(k))
        .find(|&w| f.eval(u, w) <= v)
        .unwrap_or(0.0)
}

/// A residual implication together with its source aggregator.
#[derive(Debug, Clone)]
pub struct ResidualImplication {
    source: Aggregator,
    closed: Option<Table1Row>,
    oracle_grid: GridSpec,
}

impl ResidualImplication {
    /// Attaches the closed form for `f` when one is known, otherwise falls
    /// back to the oracle on the axiom grid.
    pub fn of(f: &Aggregator) -> Self {
        ResidualImplication {
            source: f.clone(),
            closed: Table1Row::for_aggregator(f),
            oracle_grid: GridSpec::axiom_default(),
        }
    }

    pub fn oracle_only(f: &Aggregator, grid: GridSpec) -> Self {
        ResidualImplication {
            source: f.clone(),
            closed: None,
            oracle_grid: grid,
        }
    }

    pub fn with_closed(f: &Aggregator, row: Table1Row) -> Self {
        ResidualImplication {
            source: f.clone(),
            closed: Some(row),
            oracle_grid: GridSpec::axiom_default(),
        }
    }

    pub fn source(&self) -> &Aggregator {
        &self.source
    }

    pub fn closed_form(&self) -> Option<Table1Row> {
        self.closed
    }

    pub fn oracle_grid(&self) -> GridSpec {
        self.oracle_grid
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match self.closed {
            Some(row) => row.residual_closed(u, v),
            None => residual_oracle(&self.source, u, v, &self.oracle_grid),
        }
    }

    pub fn apply(&self, u: UnitValue, v: UnitValue) -> UnitValue {
        UnitValue::saturating(self.eval(u.get(), v.get()))
    }

    pub fn oracle(&self, u: f64, v: f64) -> f64 {
        residual_oracle(&self.source, u, v, &self.oracle_grid)
    }
}

/// Outcome of the residuation property check.
#[derive(Debug, Clone, PartialEq)]
pub enum RpStatus {
    Pass,
    /// `(u, v, w)` with the adjunction broken.
    Fail {
        u: f64,
        v: f64,
        w: f64,
    },
    /// `f(1, v) = 0` for some `v > 0`, so the residual is not a fuzzy
    /// implication and the adjunction is not tested.
    ImplicationConditionFails {
        v: f64,
    },
}

impl RpStatus {
    pub fn passed(&self) -> bool {
        matches!(self, RpStatus::Pass)
    }
}

impl std::fmt::Display for RpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RpStatus::Pass => f.write_str("pass"),
            RpStatus::Fail { u, v, w } => write!(f, "fail ({u}, {v}, {w})"),
            RpStatus::ImplicationConditionFails { v } => write!(f, "Eq(3.2) fails at v={v}"),
        }
    }
}

/// Checks `f(u,w) ≤ v ⇔ I(u,v) ≥ w` on every grid triple.
///
/// The "⇒" side allows `I` to fall one grid step short of `w`, which absorbs
/// the discretised supremum; the "⇐" side allows `1e-9` of floating noise.
pub fn check_rp(f: &Aggregator, imp: &ResidualImplication, grid: &GridSpec) -> RpStatus {
    let pts = grid.points();
    if let Some(&v) = pts[1..].iter().find(|&&v| f.eval(1.0, v) <= 0.0) {
        return RpStatus::ImplicationConditionFails { v };
    }
    let step = grid.step();
    let found = pts.par_iter().find_map_first(|&u| {
        for &v in &pts {
            let i = imp.eval(u, v);
            for &w in &pts {
                let below = f.eval(u, w) <= v;
                let forward = !below || i >= w - step - RP_EPS;
                let backward = i < w || f.eval(u, w) <= v + RP_EPS;
                if !(forward && backward) {
                    return Some(RpStatus::Fail { u, v, w });
                }
            }
        }
        None
    });
    found.unwrap_or(RpStatus::Pass)
}

/// Value of `min{w : I(u,w) ≥ v}` over the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualMin {
    pub value: f64,
    /// False when no grid point satisfied the condition and `value` fell
    /// back to 1.
    pub found: bool,
}

/// Recovers `f(u, v)` from the oracle residual on `grid`.
pub fn dual_min_form(f: &Aggregator, u: f64, v: f64, grid: &GridSpec) -> DualMin {
    (0..grid.len())
        .map(|k| grid.point(k))
        .find(|&w| residual_oracle(f, u, w, grid) >= v)
        .map(|value| DualMin { value, found: true })
        .unwrap_or(DualMin {
            value: 1.0,
            found: false,
        })
}

/// Largest deviation between a row's printed residual and the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub row: Table1Row,
    pub max_deviation: f64,
    /// First grid point where the deviation is maximal.
    pub worst: (f64, f64),
    /// Grid points where the printed value leaves `[0, 1]`.
    pub out_of_range: usize,
    pub tolerance: f64,
}

impl Discrepancy {
    pub fn is_discrepant(&self) -> bool {
        self.max_deviation > self.tolerance || self.out_of_range > 0
    }
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}\tmax_dev={:.6}\tat=({}, {})\tout_of_range={}\t{}",
            self.row,
            self.max_deviation,
            self.worst.0,
            self.worst.1,
            self.out_of_range,
            if self.is_discrepant() {
                "DISCREPANT"
            } else {
                "agrees"
            }
        )
    }
}

/// Compares the printed formula of `row` against the oracle at `oracle_grid`
/// on every point of `sample_grid`.
pub fn discrepancy_report(
    row: Table1Row,
    sample_grid: &GridSpec,
    oracle_grid: &GridSpec,
) -> Discrepancy {
    compare(row, sample_grid, oracle_grid, |u, v| {
        row.residual_printed(u, v)
    })
}

/// Same as [`discrepancy_report`] for the closed form actually used.
pub fn closed_form_agreement(
    row: Table1Row,
    sample_grid: &GridSpec,
    oracle_grid: &GridSpec,
) -> Discrepancy {
    compare(row, sample_grid, oracle_grid, |u, v| {
        row.residual_closed(u, v)
    })
}

fn compare(
    row: Table1Row,
    sample_grid: &GridSpec,
    oracle_grid: &GridSpec,
    formula: impl Fn(f64, f64) -> f64 + Sync,
) -> Discrepancy {
    let f = row.source();
    let pts = sample_grid.points();
    let per_u: Vec<(f64, (f64, f64), usize)> = pts
        .par_iter()
        .map(|&u| {
            let mut worst = (-1.0, (u, 0.0));
            let mut out = 0;
            for &v in &pts {
                let printed = formula(u, v);
                if !(0.0..=1.0).contains(&printed) {
                    out += 1;
                }
                let dev = if printed.is_nan() {
                    f64::INFINITY
                } else {
                    (printed - residual_oracle(&f, u, v, oracle_grid)).abs()
                };
                if dev > worst.0 {
                    worst = (dev, (u, v));
                }
            }
            (worst.0, worst.1, out)
        })
        .collect();
    let mut best = (-1.0, (0.0, 0.0));
    for &(dev, at, _) in &per_u {
        if dev > best.0 {
            best = (dev, at);
        }
    }
    Discrepancy {
        row,
        max_deviation: best.0,
        worst: best.1,
        out_of_range: per_u.iter().map(|r| r.2).sum(),
        tolerance: oracle_grid.step() + 1e-9,
    }
}
