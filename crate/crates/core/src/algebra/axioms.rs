use std::fmt;

use super::{Aggregator, GridSpec};

/// Slack for floating noise in continuity increments.
const NUM_EPS: f64 = 1e-12;
/// Tolerance for the associativity law, whose two sides evaluate `f` at
/// off-grid intermediate values.
const ASSOC_TOL: f64 = 1e-12;

/// Algebraic properties with a grid predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// Commutativity.
    S1,
    /// `uv = 0 ⇒ f(u,v) = 0`.
    S2,
    /// `uv = 1 ⇒ f(u,v) = 1`.
    S3,
    /// Nondecreasing in both arguments.
    S4,
    /// Left-continuity.
    S5,
    /// Deflationary: `f(u,1) ≤ u`.
    S6,
    /// Inflationary: `f(u,1) ≥ u`.
    S7,
    O1,
    /// `f(u,v) = 0 ⇔ uv = 0`.
    O2,
    /// `f(u,v) = 1 ⇔ uv = 1`.
    O3,
    O4,
    /// Continuity (no jumps in either direction).
    O5,
    T1,
    /// Associativity.
    T2,
    T3,
    T4,
    /// There is a pair `u, v > 0` with `f(u,v) = 0`.
    ZeroDivisors,
    /// `f(u,1) = f(1,u) = u`.
    NeutralOne,
    /// `f(u,v) ≤ min(u,v)`.
    BelowMin,
}

impl Axiom {
    pub const ALL: [Axiom; 19] = [
        Axiom::S1,
        Axiom::S2,
        Axiom::S3,
        Axiom::S4,
        Axiom::S5,
        Axiom::S6,
        Axiom::S7,
        Axiom::O1,
        Axiom::O2,
        Axiom::O3,
        Axiom::O4,
        Axiom::O5,
        Axiom::T1,
        Axiom::T2,
        Axiom::T3,
        Axiom::T4,
        Axiom::ZeroDivisors,
        Axiom::NeutralOne,
        Axiom::BelowMin,
    ];

    pub const SEMI_OVERLAP: [Axiom; 5] = [Axiom::S1, Axiom::S2, Axiom::S3, Axiom::S4, Axiom::S5];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::S1 => "S1",
            Axiom::S2 => "S2",
            Axiom::S3 => "S3",
            Axiom::S4 => "S4",
            Axiom::S5 => "S5",
            Axiom::S6 => "S6",
            Axiom::S7 => "S7",
            Axiom::O1 => "O1",
            Axiom::O2 => "O2",
            Axiom::O3 => "O3",
            Axiom::O4 => "O4",
            Axiom::O5 => "O5",
            Axiom::T1 => "T1",
            Axiom::T2 => "T2",
            Axiom::T3 => "T3",
            Axiom::T4 => "T4",
            Axiom::ZeroDivisors => "zero_divisors",
            Axiom::NeutralOne => "neutral_one",
            Axiom::BelowMin => "below_min",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
    }

    /// Laws over three variables, checked on the coarser law grid.
    pub fn is_ternary(&self) -> bool {
        matches!(self, Axiom::T2)
    }

    /// True for existential properties, whose witness is an example rather
    /// than a counterexample.
    pub fn is_existential(&self) -> bool {
        matches!(self, Axiom::ZeroDivisors)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of one grid predicate.
///
/// For universal properties `witness` is the lexicographically first
/// failing tuple; for [`Axiom::ZeroDivisors`] it is the first example.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Vec<f64>>,
}

impl AxiomCheck {
    fn pass(axiom: Axiom) -> Self {
        AxiomCheck {
            axiom,
            holds: true,
            witness: None,
        }
    }

    fn fail(axiom: Axiom, witness: Vec<f64>) -> Self {
        AxiomCheck {
            axiom,
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Set of properties that passed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropSet {
    checks: Vec<AxiomCheck>,
}

impl PropSet {
    pub fn contains(&self, axiom: Axiom) -> bool {
        self.checks.iter().any(|c| c.axiom == axiom && c.holds)
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn checks(&self) -> &[AxiomCheck] {
        &self.checks
    }

    pub fn is_semi_overlap(&self) -> bool {
        Axiom::SEMI_OVERLAP.iter().all(|&a| self.contains(a))
    }

    pub fn holding(&self) -> impl Iterator<Item = Axiom> + '_ {
        self.checks.iter().filter(|c| c.holds).map(|c| c.axiom)
    }
}

pub(crate) fn compute_props(f: &Aggregator) -> PropSet {
    props_on(f, &GridSpec::axiom_default())
}

/// Every axiom checked on `grid`; ternary ones use the law grid when
/// `grid` is finer.
pub fn props_on(f: &Aggregator, grid: &GridSpec) -> PropSet {
    let law_grid = GridSpec::law_default();
    let ternary_grid = if grid.step() < law_grid.step() {
        law_grid
    } else {
        *grid
    };
    let checks = Axiom::ALL
        .iter()
        .map(|&a| check_axiom(f, a, if a.is_ternary() { &ternary_grid } else { grid }))
        .collect();
    PropSet { checks }
}

/// Semi-overlap axioms a catalog entry is known to fail although it is
/// listed among the semi-overlap examples.
pub fn expected_failures(id: &str) -> &'static [Axiom] {
    match id {
        "t1_arith_mean" => &[Axiom::S2],
        _ => &[],
    }
}

fn first_pair(pts: &[f64], mut bad: impl FnMut(f64, f64) -> bool) -> Option<Vec<f64>> {
    for &u in pts {
        for &v in pts {
            if bad(u, v) {
                return Some(vec![u, v]);
            }
        }
    }
    None
}

/// Evaluates one axiom on every point (pair, triple) of `grid`.
pub fn check_axiom(f: &Aggregator, axiom: Axiom, grid: &GridSpec) -> AxiomCheck {
    let pts = grid.points();
    let n = pts.len();
    let verdict = |witness: Option<Vec<f64>>| match witness {
        Some(w) => AxiomCheck::fail(axiom, w),
        None => AxiomCheck::pass(axiom),
    };
    match axiom {
        Axiom::S1 | Axiom::O1 | Axiom::T1 => {
            verdict(first_pair(&pts, |u, v| f.eval(u, v) != f.eval(v, u)))
        }
        Axiom::S2 => verdict(first_pair(&pts, |u, v| u * v == 0.0 && f.eval(u, v) != 0.0)),
        Axiom::S3 => verdict((f.eval(1.0, 1.0) != 1.0).then(|| vec![1.0, 1.0])),
        Axiom::S4 | Axiom::O4 | Axiom::T3 => {
            for i in 0..n {
                for j in 0..n {
                    let here = f.eval(pts[i], pts[j]);
                    let up_u = i + 1 < n && f.eval(pts[i + 1], pts[j]) < here;
                    let up_v = j + 1 < n && f.eval(pts[i], pts[j + 1]) < here;
                    if up_u || up_v {
                        return AxiomCheck::fail(axiom, vec![pts[i], pts[j]]);
                    }
                }
            }
            AxiomCheck::pass(axiom)
        }
        Axiom::S5 => verdict(left_continuity_witness(f, grid, false)),
        Axiom::O5 => verdict(left_continuity_witness(f, grid, true)),
        Axiom::S6 => verdict(
            pts.iter()
                .find(|&&u| f.eval(u, 1.0) > u)
                .map(|&u| vec![u, 1.0]),
        ),
        Axiom::S7 => verdict(
            pts.iter()
                .find(|&&u| f.eval(u, 1.0) < u)
                .map(|&u| vec![u, 1.0]),
        ),
        Axiom::O2 => verdict(first_pair(&pts, |u, v| {
            (f.eval(u, v) == 0.0) != (u * v == 0.0)
        })),
        Axiom::O3 => verdict(first_pair(&pts, |u, v| {
            (f.eval(u, v) == 1.0) != (u * v == 1.0)
        })),
        Axiom::T2 => {
            for &u in &pts {
                for &v in &pts {
                    let uv = f.eval(u, v);
                    for &w in &pts {
                        let left = f.eval(u, f.eval(v, w));
                        let right = f.eval(uv, w);
                        if (left - right).abs() > ASSOC_TOL {
                            return AxiomCheck::fail(axiom, vec![u, v, w]);
                        }
                    }
                }
            }
            AxiomCheck::pass(axiom)
        }
        Axiom::T4 | Axiom::NeutralOne => verdict(
            pts.iter()
                .find(|&&u| f.eval(u, 1.0) != u || f.eval(1.0, u) != u)
                .map(|&u| vec![u, 1.0]),
        ),
        Axiom::ZeroDivisors => {
            match first_pair(&pts, |u, v| u > 0.0 && v > 0.0 && f.eval(u, v) == 0.0) {
                Some(w) => AxiomCheck {
                    axiom,
                    holds: true,
                    witness: Some(w),
                },
                None => AxiomCheck {
                    axiom,
                    holds: false,
                    witness: None,
                },
            }
        }
        Axiom::BelowMin => verdict(first_pair(&pts, |u, v| f.eval(u, v) > u.min(v))),
    }
}

/// Scans `f(u, ·)` along the grid for increments above the continuity
/// budget. With `strict` every such increment is a failure; otherwise an
/// increment is allowed when a registered jump lies in `[v_prev, v)` and
/// `f` is closed from the left there.
fn left_continuity_witness(f: &Aggregator, grid: &GridSpec, strict: bool) -> Option<Vec<f64>> {
    let pts = grid.points();
    let step = grid.step();
    let budget = f.continuity_budget(step) + NUM_EPS;
    for &u in &pts {
        let mut prev_v = pts[0];
        let mut prev_f = f.eval(u, prev_v);
        for &v in &pts[1..] {
            let here = f.eval(u, v);
            if (here - prev_f).abs() > budget {
                let excused = !strict
                    && f.jumps(u).into_iter().any(|j| {
                        j >= prev_v - NUM_EPS && j < v - NUM_EPS && closed_from_left(f, u, j, step)
                    });
                if !excused {
                    return Some(vec![u, v]);
                }
            }
            prev_v = v;
            prev_f = here;
        }
    }
    None
}

fn closed_from_left(f: &Aggregator, u: f64, at: f64, step: f64) -> bool {
    if at <= 0.0 {
        return true;
    }
    let h = at.min(step * 1e-3);
    (f.eval(u, at) - f.eval(u, at - h)).abs() <= f.continuity_budget(h) + NUM_EPS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog_get;

    fn get(id: &str, params: &[(&str, f64)]) -> Aggregator {
        catalog_get(id, params).unwrap()
    }

    #[test]
    fn gated_min_passes_s2_but_has_zero_divisors() {
        let f = get("t1_gated_min", &[("a", 0.5)]);
        let g = GridSpec::axiom_default();
        assert!(check_axiom(&f, Axiom::S2, &g).holds);
        let o2 = check_axiom(&f, Axiom::O2, &g);
        assert!(!o2.holds);
        let w = o2.witness.unwrap();
        assert!(w[0] * w[1] != 0.0 && f.eval(w[0], w[1]) == 0.0);
        assert_eq!(f.eval(0.2, 0.2), 0.0);
        assert!(check_axiom(&f, Axiom::ZeroDivisors, &g).holds);
    }

    #[test]
    fn powprod_deflationary_and_inflationary() {
        let g = GridSpec::axiom_default();
        let p2 = get("ex33_powprod", &[("p", 2.0)]);
        let p05 = get("ex33_powprod", &[("p", 0.5)]);
        assert!(check_axiom(&p2, Axiom::S6, &g).holds);
        assert!(!check_axiom(&p2, Axiom::S7, &g).holds);
        assert!(check_axiom(&p05, Axiom::S7, &g).holds);
        assert!(!check_axiom(&p05, Axiom::S6, &g).holds);
    }

    #[test]
    fn arith_mean_fails_s2_at_zero() {
        let f = get("t1_arith_mean", &[]);
        let c = check_axiom(&f, Axiom::S2, &GridSpec::axiom_default());
        assert!(!c.holds);
        assert_eq!(c.witness, Some(vec![0.0, 0.001]));
    }

    #[test]
    fn gated_jump_is_left_continuous_not_continuous() {
        let g = GridSpec::axiom_default();
        for id in ["t1_gated_min", "t1_gated_prod"] {
            let f = get(id, &[]);
            assert!(check_axiom(&f, Axiom::S5, &g).holds, "{id}");
            assert!(!check_axiom(&f, Axiom::O5, &g).holds, "{id}");
        }
    }

    #[test]
    fn right_closed_step_fails_left_continuity() {
        // Jumps at v = 0.5 but takes the upper value there.
        let f = Aggregator::custom_with_jumps(
            "right_closed",
            |u: f64, v: f64| if u.min(v) >= 0.5 { u.min(v) } else { 0.0 },
            1.0,
            |u| if u >= 0.5 { vec![0.5] } else { Vec::new() },
        );
        let c = check_axiom(&f, Axiom::S5, &GridSpec::law_default());
        assert!(!c.holds);
        assert_eq!(c.witness, Some(vec![0.5, 0.5]));

        // Same jump, left-closed.
        let g = Aggregator::custom_with_jumps(
            "left_closed",
            |u: f64, v: f64| if u.min(v) > 0.5 { u.min(v) } else { 0.0 },
            1.0,
            |u| if u > 0.5 { vec![0.5] } else { Vec::new() },
        );
        assert!(check_axiom(&g, Axiom::S5, &GridSpec::law_default()).holds);
    }

    #[test]
    fn unregistered_jump_fails() {
        let f = Aggregator::custom(
            "step",
            |u: f64, v: f64| if u + v > 1.0 { u * v } else { 0.0 },
            1.0,
        );
        assert!(!check_axiom(&f, Axiom::S5, &GridSpec::law_default()).holds);
    }

    #[test]
    fn product_is_associative_and_min_below_min() {
        let g = GridSpec::law_default();
        assert!(check_axiom(&get("t1_product", &[]), Axiom::T2, &g).holds);
        assert!(check_axiom(&get("t1_min", &[]), Axiom::T2, &g).holds);
        assert!(!check_axiom(&get("ex33_minmaxsq", &[]), Axiom::T2, &g).holds);
        assert!(check_axiom(&get("t1_product", &[]), Axiom::BelowMin, &g).holds);
        assert!(!check_axiom(&get("o_sqrt_min", &[]), Axiom::BelowMin, &g).holds);
    }

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(Axiom::parse(a.name()), Some(a));
        }
    }
}
