use std::fmt;

use rayon::prelude::*;

use super::{check_rp, residual_oracle, ResidualImplication, RpStatus};
use crate::algebra::GridSpec;

/// Step used for the three-variable exchange principle.
pub const EXCHANGE_STEP: f64 = 0.05;

/// Properties of fuzzy implications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImplProperty {
    /// `I(1,v) = v`.
    Np,
    /// `u ≤ v ⇒ I(u,v) = 1`.
    Lop,
    /// `I(u,v) = 1 ⇒ u ≤ v`.
    Rop,
    /// `u ≤ v ⇔ I(u,v) = 1`.
    Op,
    /// `I(u, I(v,w)) = I(v, I(u,w))`.
    Ep,
    /// `I(u,u) = 1`.
    Ip,
    /// `v ≤ I(u,v)`.
    Cb,
    /// `I(u,v) ≤ I(u, I(u,v))`.
    Sib,
    /// `I(u,v) = I(u, I(u,v))`.
    Ib,
    /// Antitone in the first argument.
    I1,
    /// Monotone in the second argument.
    I2,
    /// `I(0,0) = 1`.
    I3,
    /// `I(1,1) = 1`.
    I4,
    /// `I(1,0) = 0`.
    I5,
}

impl ImplProperty {
    pub const ALL: [ImplProperty; 14] = [
        ImplProperty::Np,
        ImplProperty::Lop,
        ImplProperty::Rop,
        ImplProperty::Op,
        ImplProperty::Ep,
        ImplProperty::Ip,
        ImplProperty::Cb,
        ImplProperty::Sib,
        ImplProperty::Ib,
        ImplProperty::I1,
        ImplProperty::I2,
        ImplProperty::I3,
        ImplProperty::I4,
        ImplProperty::I5,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ImplProperty::Np => "NP",
            ImplProperty::Lop => "LOP",
            ImplProperty::Rop => "ROP",
            ImplProperty::Op => "OP",
            ImplProperty::Ep => "EP",
            ImplProperty::Ip => "IP",
            ImplProperty::Cb => "CB",
            ImplProperty::Sib => "SIB",
            ImplProperty::Ib => "IB",
            ImplProperty::I1 => "I1",
            ImplProperty::I2 => "I2",
            ImplProperty::I3 => "I3",
            ImplProperty::I4 => "I4",
            ImplProperty::I5 => "I5",
        }
    }

    pub fn parse(s: &str) -> Option<ImplProperty> {
        ImplProperty::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for ImplProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub property: ImplProperty,
    pub holds: bool,
    /// Lexicographically first counterexample, in argument order.
    pub witness: Option<Vec<f64>>,
}

/// Oracle residual tabulated as grid indices, so nested applications such
/// as `I(u, I(v,w))` stay on the grid and compare exactly.
struct Table {
    n: usize,
    grid: GridSpec,
    idx: Vec<usize>,
}

impl Table {
    fn build(imp: &ResidualImplication, grid: GridSpec) -> Table {
        let n = grid.len();
        let f = imp.source();
        let idx = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let u = grid.point(i);
                (0..n).map(move |j| {
                    let w = residual_oracle(f, u, grid.point(j), &grid);
                    (w * (n - 1) as f64).round() as usize
                })
            })
            .collect();
        Table { n, grid, idx }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        self.idx[i * self.n + j]
    }

    fn p(&self, k: usize) -> f64 {
        self.grid.point(k)
    }

    fn first_pair(&self, bad: impl Fn(usize, usize) -> bool + Sync) -> Option<Vec<f64>> {
        (0..self.n).find_map(|i| {
            (0..self.n)
                .find(|&j| bad(i, j))
                .map(|j| vec![self.p(i), self.p(j)])
        })
    }
}

/// Checks one property of the residual of `imp`'s source on `grid`, using
/// the oracle tabulated at the same grid. The exchange principle runs on a
/// grid no finer than `0.05`.
pub fn check_impl_property(
    imp: &ResidualImplication,
    property: ImplProperty,
    grid: &GridSpec,
) -> PropertyCheck {
    let grid = if property == ImplProperty::Ep {
        grid.coarsened(EXCHANGE_STEP)
    } else {
        *grid
    };
    let t = Table::build(imp, grid);
    check_on_table(&t, property)
}

fn check_on_table(t: &Table, property: ImplProperty) -> PropertyCheck {
    let top = t.n - 1;
    let witness = match property {
        ImplProperty::Np => (0..t.n)
            .find(|&j| t.at(top, j) != j)
            .map(|j| vec![1.0, t.p(j)]),
        ImplProperty::Lop => t.first_pair(|i, j| i <= j && t.at(i, j) != top),
        ImplProperty::Rop => t.first_pair(|i, j| t.at(i, j) == top && i > j),
        ImplProperty::Op => t.first_pair(|i, j| (i <= j) != (t.at(i, j) == top)),
        ImplProperty::Ep => (0..t.n).into_par_iter().find_map_first(|i| {
            for j in 0..t.n {
                for k in 0..t.n {
                    if t.at(i, t.at(j, k)) != t.at(j, t.at(i, k)) {
                        return Some(vec![t.p(i), t.p(j), t.p(k)]);
                    }
                }
            }
            None
        }),
        ImplProperty::Ip => (0..t.n)
            .find(|&i| t.at(i, i) != top)
            .map(|i| vec![t.p(i), t.p(i)]),
        ImplProperty::Cb => t.first_pair(|i, j| j > t.at(i, j)),
        ImplProperty::Sib => t.first_pair(|i, j| t.at(i, j) > t.at(i, t.at(i, j))),
        ImplProperty::Ib => t.first_pair(|i, j| t.at(i, j) != t.at(i, t.at(i, j))),
        ImplProperty::I1 => t.first_pair(|i, j| i + 1 < t.n && t.at(i + 1, j) > t.at(i, j)),
        ImplProperty::I2 => t.first_pair(|i, j| j + 1 < t.n && t.at(i, j + 1) < t.at(i, j)),
        ImplProperty::I3 => (t.at(0, 0) != top).then(|| vec![0.0, 0.0]),
        ImplProperty::I4 => (t.at(top, top) != top).then(|| vec![1.0, 1.0]),
        ImplProperty::I5 => (t.at(top, 0) != 0).then(|| vec![1.0, 0.0]),
    };
    PropertyCheck {
        property,
        holds: witness.is_none(),
        witness,
    }
}

/// Every implication property plus the residuation check for one aggregator.
#[derive(Debug, Clone)]
pub struct ImplPropertyReport {
    pub source_id: String,
    pub checks: Vec<PropertyCheck>,
    pub rp: RpStatus,
}

impl ImplPropertyReport {
    pub fn build(imp: &ResidualImplication, grid: &GridSpec) -> ImplPropertyReport {
        let table = Table::build(imp, *grid);
        let coarse = grid.coarsened(EXCHANGE_STEP);
        let coarse_table = (coarse != *grid).then(|| Table::build(imp, coarse));
        let checks = ImplProperty::ALL
            .iter()
            .map(|&p| match (&coarse_table, p) {
                (Some(c), ImplProperty::Ep) => check_on_table(c, p),
                _ => check_on_table(&table, p),
            })
            .collect();
        ImplPropertyReport {
            source_id: imp.source().id().to_string(),
            checks,
            rp: check_rp(imp.source(), imp, grid),
        }
    }

    pub fn get(&self, property: ImplProperty) -> &PropertyCheck {
        self.checks
            .iter()
            .find(|c| c.property == property)
            .expect("report covers every property")
    }

    pub fn holds(&self, property: ImplProperty) -> bool {
        self.get(property).holds
    }

    /// One line per property: `name<TAB>pass|fail<TAB>witness`.
    pub fn to_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                let witness = c
                    .witness
                    .as_ref()
                    .map(|w| format_tuple(w))
                    .unwrap_or_else(|| "-".to_string());
                format!(
                    "{}\t{}\t{}",
                    c.property,
                    if c.holds { "pass" } else { "fail" },
                    witness
                )
            })
            .collect();
        let rp = match &self.rp {
            RpStatus::Pass => "RP\tpass\t-".to_string(),
            RpStatus::Fail { u, v, w } => format!("RP\tfail\t{}", format_tuple(&[*u, *v, *w])),
            status @ RpStatus::ImplicationConditionFails { .. } => format!("RP\tskipped\t{status}"),
        };
        lines.push(rp);
        lines
    }
}

/// `(a, b, ...)` with shortest float formatting.
pub fn format_tuple(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog_get;

    fn report(id: &str, params: &[(&str, f64)]) -> ImplPropertyReport {
        let f = catalog_get(id, params).unwrap();
        ImplPropertyReport::build(&ResidualImplication::of(&f), &GridSpec::law_default())
    }

    #[test]
    fn product_has_neutral_left_property() {
        let r = report("t1_product", &[]);
        assert!(r.holds(ImplProperty::Np));
        assert!(r.holds(ImplProperty::Op));
        assert!(r.rp.passed());
    }

    #[test]
    fn powprod_two_is_identity_but_not_right_ordered() {
        let r = report("ex33_powprod", &[("p", 2.0)]);
        assert!(r.holds(ImplProperty::Ip));
        assert!(r.holds(ImplProperty::Lop));
        assert!(!r.holds(ImplProperty::Np));
        assert!(!r.holds(ImplProperty::Rop));
        let w = r.get(ImplProperty::Rop).witness.clone().unwrap();
        assert!(w[0] > w[1]);
    }

    #[test]
    fn min_is_iterative_boolean() {
        let r = report("t1_min", &[]);
        assert!(r.holds(ImplProperty::Ib));
        assert!(r.holds(ImplProperty::Ep));
        assert!(!report("t1_product", &[]).holds(ImplProperty::Ib));
    }

    #[test]
    fn fuzzy_implication_axioms_hold_for_residuals() {
        for id in ["t1_min", "so1", "so2", "so4", "o_prod_mean"] {
            let r = report(id, &[]);
            for p in [
                ImplProperty::I1,
                ImplProperty::I2,
                ImplProperty::I3,
                ImplProperty::I4,
                ImplProperty::I5,
            ] {
                assert!(r.holds(p), "{id} {p}");
            }
        }
    }

    #[test]
    fn report_lines_are_tab_separated() {
        let lines = report("ex33_powprod", &[]).to_lines();
        assert_eq!(lines.len(), ImplProperty::ALL.len() + 1);
        assert!(lines[0].starts_with("NP\tfail\t(1, "));
    }
}
