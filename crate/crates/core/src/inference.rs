//! Fuzzy modus ponens solved by the quintuple implication principle:
//!
//! `B*(v) = max_u A*(u) ⊙ [(A*(u) → A(u)) ⊙ (A(u) → B(v))]`
//!
//! for a conjunction `⊙` and its residual `→`, on finite universes.

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{catalog_get, Aggregator, AlgebraError, Axiom, GridSpec};
use crate::fuzzyset::{similarity, DiscreteFuzzySet, FuzzySetError};
use crate::residuation::{check_rp, ResidualImplication, RpStatus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    FuzzySet(#[from] FuzzySetError),
    #[error("`{id}` is not a semi-overlap function: {axiom} fails")]
    NotSemiOverlap { id: String, axiom: Axiom },
    #[error("`{id}` and its residual do not form a residual pair: {status}")]
    NotResidual { id: String, status: RpStatus },
    #[error("`{0}` does not have 1 as neutral element")]
    NoNeutralOne(String),
    #[error("{0}")]
    UniverseMismatch(String),
    #[error("rule {rule} has {antecedents} antecedents but {facts} facts were given")]
    Arity {
        rule: usize,
        antecedents: usize,
        facts: usize,
    },
    #[error("at least one rule is required")]
    NoRules,
}

/// Tolerance for comparing computed fuzzy sets with expected ones.
pub const SET_EPS: f64 = 1e-12;

/// A semi-overlap function together with its residual implication.
#[derive(Debug, Clone)]
pub struct ConjImplPair {
    conj: Aggregator,
    imp: ResidualImplication,
    neutral_one: bool,
    neutral_waived: bool,
}

impl ConjImplPair {
    /// Pair for `conj`, which must be a semi-overlap function with 1 as
    /// neutral element whose residual passes the adjunction check.
    pub fn new(conj: &Aggregator) -> Result<Self, InferenceError> {
        Self::build(conj, false)
    }

    /// Like [`ConjImplPair::new`] without requiring 1 as neutral element.
    /// Used when the pair only scores matches; the waiver is recorded.
    pub fn waiving_neutral(conj: &Aggregator) -> Result<Self, InferenceError> {
        Self::build(conj, true)
    }

    /// Pair from a catalog id or alias, with default parameters.
    pub fn from_id(id: &str) -> Result<Self, InferenceError> {
        Self::new(&catalog_get(id, &[])?)
    }

    fn build(conj: &Aggregator, waive: bool) -> Result<Self, InferenceError> {
        let props = conj.declared_props();
        if let Some(&axiom) = Axiom::SEMI_OVERLAP.iter().find(|&&a| !props.contains(a)) {
            return Err(InferenceError::NotSemiOverlap {
                id: conj.id().to_string(),
                axiom,
            });
        }
        let neutral_one = props.contains(Axiom::NeutralOne);
        if !neutral_one && !waive {
            return Err(InferenceError::NoNeutralOne(conj.id().to_string()));
        }
        let imp = ResidualImplication::of(conj);
        // Oracle-only residuals are costly per evaluation; check them on a
        // coarser grid.
        let grid = if imp.closed_form().is_some() {
            GridSpec::law_default()
        } else {
            GridSpec::law_default().coarsened(0.05)
        };
        let status = check_rp(conj, &imp, &grid);
        if !status.passed() {
            return Err(InferenceError::NotResidual {
                id: conj.id().to_string(),
                status,
            });
        }
        Ok(ConjImplPair {
            conj: conj.clone(),
            imp,
            neutral_one,
            neutral_waived: waive && !neutral_one,
        })
    }

    pub fn id(&self) -> &str {
        self.conj.id()
    }

    pub fn conjunction(&self) -> &Aggregator {
        &self.conj
    }

    pub fn implication(&self) -> &ResidualImplication {
        &self.imp
    }

    pub fn has_neutral_one(&self) -> bool {
        self.neutral_one
    }

    /// True when the pair was accepted without 1 as neutral element.
    pub fn neutral_waived(&self) -> bool {
        self.neutral_waived
    }

    #[inline]
    pub fn conj(&self, u: f64, v: f64) -> f64 {
        self.conj.eval(u, v)
    }

    #[inline]
    pub fn imp(&self, u: f64, v: f64) -> f64 {
        self.imp.eval(u, v)
    }

    /// The three-factor term `a* ⊙ ((a* → a) ⊙ (a → b))`.
    #[inline]
    pub fn quintuple_term(&self, a_star: f64, a: f64, b: f64) -> f64 {
        self.conj(a_star, self.conj(self.imp(a_star, a), self.imp(a, b)))
    }
}

/// One rule `A → B` and an input `A*` on the same universe as `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct FmpProblem {
    pub a: DiscreteFuzzySet,
    pub b: DiscreteFuzzySet,
    pub a_star: DiscreteFuzzySet,
}

impl FmpProblem {
    pub fn new(
        a: DiscreteFuzzySet,
        b: DiscreteFuzzySet,
        a_star: DiscreteFuzzySet,
    ) -> Result<Self, InferenceError> {
        if !a.same_universe(&a_star) {
            return Err(InferenceError::UniverseMismatch(
                "the input and the rule antecedent must share a universe".into(),
            ));
        }
        Ok(FmpProblem { a, b, a_star })
    }
}

/// Several rules `A_i → B_i` with one input.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiRuleProblem {
    pub rules: Vec<(DiscreteFuzzySet, DiscreteFuzzySet)>,
    pub a_star: DiscreteFuzzySet,
}

impl MultiRuleProblem {
    pub fn new(
        rules: Vec<(DiscreteFuzzySet, DiscreteFuzzySet)>,
        a_star: DiscreteFuzzySet,
    ) -> Result<Self, InferenceError> {
        let Some((_, b0)) = rules.first() else {
            return Err(InferenceError::NoRules);
        };
        for (i, (a, b)) in rules.iter().enumerate() {
            if !a.same_universe(&a_star) {
                return Err(InferenceError::UniverseMismatch(format!(
                    "antecedent of rule {} is not on the input's universe",
                    i + 1
                )));
            }
            if !b.same_universe(b0) {
                return Err(InferenceError::UniverseMismatch(format!(
                    "consequent of rule {} is not on the first rule's output universe",
                    i + 1
                )));
            }
        }
        Ok(MultiRuleProblem { rules, a_star })
    }

    /// The single-rule problem for rule `i` (0-based).
    pub fn rule(&self, i: usize) -> FmpProblem {
        let (a, b) = &self.rules[i];
        FmpProblem {
            a: a.clone(),
            b: b.clone(),
            a_star: self.a_star.clone(),
        }
    }
}

/// Every intermediate of one QIP solution, indexed `[u][v]` for matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct QipTrace {
    /// `A*(u) → A(u)`.
    pub input_to_antecedent: Vec<f64>,
    /// `A(u) → B(v)`.
    pub rule_implication: Vec<Vec<f64>>,
    /// `(A*(u) → A(u)) ⊙ (A(u) → B(v))`.
    pub inner: Vec<Vec<f64>>,
    /// `A*(u) ⊙ inner[u][v]`.
    pub terms: Vec<Vec<f64>>,
    pub output: DiscreteFuzzySet,
}

pub fn qip_fmp_trace(p: &FmpProblem, pair: &ConjImplPair) -> Result<QipTrace, InferenceError> {
    if !p.a.same_universe(&p.a_star) {
        return Err(InferenceError::UniverseMismatch(
            "the input and the rule antecedent must share a universe".into(),
        ));
    }
    let a = p.a.degrees();
    let a_star = p.a_star.degrees();
    let b = p.b.degrees();
    let input_to_antecedent: Vec<f64> = a_star
        .iter()
        .zip(a)
        .map(|(&s, &x)| pair.imp(s, x))
        .collect();
    let rule_implication: Vec<Vec<f64>> = a
        .iter()
        .map(|&x| b.iter().map(|&y| pair.imp(x, y)).collect())
        .collect();
    let inner: Vec<Vec<f64>> = input_to_antecedent
        .iter()
        .zip(&rule_implication)
        .map(|(&l, row)| row.iter().map(|&r| pair.conj(l, r)).collect())
        .collect();
    let terms: Vec<Vec<f64>> = a_star
        .iter()
        .zip(&inner)
        .map(|(&s, row)| row.iter().map(|&x| pair.conj(s, x)).collect())
        .collect();
    let degrees = (0..b.len())
        .map(|j| terms.iter().map(|row| row[j]).fold(0.0, f64::max))
        .map(|d| d.clamp(0.0, 1.0))
        .collect();
    let output = p.b.with_degrees(degrees)?;
    Ok(QipTrace {
        input_to_antecedent,
        rule_implication,
        inner,
        terms,
        output,
    })
}

/// The QIP solution `B*` of a single-rule problem.
pub fn qip_fmp(p: &FmpProblem, pair: &ConjImplPair) -> Result<DiscreteFuzzySet, InferenceError> {
    Ok(qip_fmp_trace(p, pair)?.output)
}

/// Per-rule solutions and their pointwise maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct FitaResult {
    pub per_rule: Vec<DiscreteFuzzySet>,
    pub union: DiscreteFuzzySet,
}

/// First infer with every rule, then aggregate by pointwise maximum.
pub fn fita_union(p: &MultiRuleProblem, pair: &ConjImplPair) -> Result<FitaResult, InferenceError> {
    let per_rule = (0..p.rules.len())
        .into_par_iter()
        .map(|i| qip_fmp(&p.rule(i), pair))
        .collect::<Result<Vec<_>, _>>()?;
    let union = pointwise_max(&per_rule)?;
    Ok(FitaResult { per_rule, union })
}

fn pointwise_max(sets: &[DiscreteFuzzySet]) -> Result<DiscreteFuzzySet, InferenceError> {
    let first = sets.first().ok_or(InferenceError::NoRules)?;
    let degrees = (0..first.len())
        .map(|j| sets.iter().map(|s| s.degrees()[j]).fold(0.0, f64::max))
        .collect();
    Ok(first.with_degrees(degrees)?)
}

/// A rule with one antecedent per input attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiAttrRule {
    pub antecedents: Vec<DiscreteFuzzySet>,
    pub consequent: DiscreteFuzzySet,
}

/// Intermediate values of the similarity-weighted aggregation.
#[derive(Debug, Clone, PartialEq)]
pub struct Algorithm1Result {
    /// `B*_i`, the union over attributes of each rule's solutions.
    pub per_rule: Vec<DiscreteFuzzySet>,
    /// Mean similarity `S_i` between each rule's antecedents and the facts.
    pub similarities: Vec<f64>,
    /// `S = max_i S_i`.
    pub best: f64,
    /// Rules attaining `S` (0-based).
    pub winners: Vec<usize>,
    /// `(1 + S)/2` for winners, `(1 − S)/2` otherwise.
    pub weights: Vec<f64>,
    /// `max_i w_i · B*_i`.
    pub output: DiscreteFuzzySet,
}

/// Similarity-weighted multi-rule inference. Every rule is solved attribute
/// by attribute, the rule whose antecedents are most similar to the facts
/// gets weight `(1 + S)/2` and the rest `(1 − S)/2`.
pub fn algorithm1(
    rules: &[MultiAttrRule],
    facts: &[DiscreteFuzzySet],
    pair: &ConjImplPair,
) -> Result<Algorithm1Result, InferenceError> {
    if rules.is_empty() {
        return Err(InferenceError::NoRules);
    }
    let mut per_rule = Vec::with_capacity(rules.len());
    let mut similarities = Vec::with_capacity(rules.len());
    for (i, rule) in rules.iter().enumerate() {
        if rule.antecedents.len() != facts.len() || facts.is_empty() {
            return Err(InferenceError::Arity {
                rule: i + 1,
                antecedents: rule.antecedents.len(),
                facts: facts.len(),
            });
        }
        let mut outputs = Vec::with_capacity(facts.len());
        let mut total = 0.0;
        for (a, fact) in rule.antecedents.iter().zip(facts) {
            let problem = FmpProblem::new(a.clone(), rule.consequent.clone(), fact.clone())?;
            outputs.push(qip_fmp(&problem, pair)?);
            total += similarity(a, fact)?;
        }
        per_rule.push(pointwise_max(&outputs)?);
        similarities.push(total / facts.len() as f64);
    }
    if per_rule.iter().any(|b| !b.same_universe(&per_rule[0])) {
        return Err(InferenceError::UniverseMismatch(
            "rule consequents must share a universe".into(),
        ));
    }
    let best = similarities
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<usize> = (0..rules.len())
        .filter(|&i| similarities[i] == best)
        .collect();
    let weights: Vec<f64> = (0..rules.len())
        .map(|i| {
            if winners.contains(&i) {
                (1.0 + best) / 2.0
            } else {
                (1.0 - best) / 2.0
            }
        })
        .collect();
    let scaled: Vec<DiscreteFuzzySet> = per_rule
        .iter()
        .zip(&weights)
        .map(|(b, &w)| b.with_degrees(b.degrees().iter().map(|d| w * d).collect()))
        .collect::<Result<_, _>>()?;
    let output = pointwise_max(&scaled)?;
    Ok(Algorithm1Result {
        per_rule,
        similarities,
        best,
        winners,
        weights,
        output,
    })
}

/// Outcome of feeding a rule's own antecedent back as the input.
#[derive(Debug, Clone, PartialEq)]
pub enum Reducibility {
    /// The output equals the rule's consequent.
    Reducible { output: DiscreteFuzzySet },
    /// The output differs from the consequent.
    NonReducible {
        observed: DiscreteFuzzySet,
        expected: DiscreteFuzzySet,
    },
    /// The antecedent is not normal, or the pair lacks 1 as neutral element.
    HypothesisUnmet(String),
}

impl Reducibility {
    pub fn is_reducible(&self) -> bool {
        matches!(self, Reducibility::Reducible { .. })
    }
}

/// How the rule base is evaluated in a reducibility check.
#[derive(Debug, Clone, Copy)]
pub enum ReducibilityTarget<'a> {
    Single {
        a: &'a DiscreteFuzzySet,
        b: &'a DiscreteFuzzySet,
    },
    /// FITA union over `rules`, feeding rule `index`'s antecedent.
    Fita {
        rules: &'a [(DiscreteFuzzySet, DiscreteFuzzySet)],
        index: usize,
    },
    /// Similarity-weighted aggregation, feeding rule `index`'s antecedents.
    Algorithm1 {
        rules: &'a [MultiAttrRule],
        index: usize,
    },
}

fn sets_equal(x: &DiscreteFuzzySet, y: &DiscreteFuzzySet) -> bool {
    x.same_universe(y)
        && x.degrees()
            .iter()
            .zip(y.degrees())
            .all(|(a, b)| (a - b).abs() <= SET_EPS)
}

/// Sets `A* := A` for the chosen rule and compares the output with its
/// consequent.
pub fn check_reducibility(
    target: ReducibilityTarget<'_>,
    pair: &ConjImplPair,
) -> Result<Reducibility, InferenceError> {
    if !pair.has_neutral_one() {
        return Ok(Reducibility::HypothesisUnmet(format!(
            "`{}` does not have 1 as neutral element",
            pair.id()
        )));
    }
    let (antecedents, expected, observed) = match target {
        ReducibilityTarget::Single { a, b } => {
            let out = qip_fmp(&FmpProblem::new(a.clone(), b.clone(), a.clone())?, pair)?;
            (vec![a.clone()], b.clone(), out)
        }
        ReducibilityTarget::Fita { rules, index } => {
            let (a, b) = rules.get(index).ok_or(InferenceError::NoRules)?;
            let problem = MultiRuleProblem::new(rules.to_vec(), a.clone())?;
            (
                vec![a.clone()],
                b.clone(),
                fita_union(&problem, pair)?.union,
            )
        }
        ReducibilityTarget::Algorithm1 { rules, index } => {
            let rule = rules.get(index).ok_or(InferenceError::NoRules)?;
            let out = algorithm1(rules, &rule.antecedents, pair)?.output;
            (rule.antecedents.clone(), rule.consequent.clone(), out)
        }
    };
    if let Some(a) = antecedents.iter().find(|a| !a.is_normal()) {
        return Ok(Reducibility::HypothesisUnmet(format!(
            "antecedent ({a}) is not normal"
        )));
    }
    Ok(if sets_equal(&observed, &expected) {
        Reducibility::Reducible { output: observed }
    } else {
        Reducibility::NonReducible { observed, expected }
    })
}

/// Whether `(A(u) → B(v)) → ((A*(u) → A(u)) → (A*(u) → B*(v)))` equals 1 for
/// every `u` and `v`.
pub fn quintuple_identity(p: &FmpProblem, pair: &ConjImplPair, b_star: &DiscreteFuzzySet) -> bool {
    let (a, a_star) = (p.a.degrees(), p.a_star.degrees());
    a.iter().zip(a_star).all(|(&x, &s)| {
        p.b.degrees().iter().zip(b_star.degrees()).all(|(&y, &z)| {
            let inner = pair.imp(pair.imp(s, x), pair.imp(s, z));
            pair.imp(pair.imp(x, y), inner) >= 1.0
        })
    })
}

/// Result of the least-solution check on a QIP output.
#[derive(Debug, Clone, PartialEq)]
pub enum LeastSolution {
    /// `B*` satisfies the identity and lowering any coordinate by `step`
    /// breaks it.
    Least,
    /// `B*` itself fails the identity.
    NotASolution,
    /// Lowering coordinate `index` keeps the identity, so `B*` is not least.
    NotLeast { index: usize },
    /// The pair lacks 1 as neutral element; minimality is not claimed.
    NotApplicable,
}

/// Checks that the QIP output is the least set satisfying the quintuple
/// identity, by lowering each positive coordinate by `step`.
pub fn check_least_solution(
    p: &FmpProblem,
    pair: &ConjImplPair,
    step: f64,
) -> Result<LeastSolution, InferenceError> {
    if !pair.has_neutral_one() {
        return Ok(LeastSolution::NotApplicable);
    }
    let b_star = qip_fmp(p, pair)?;
    if !quintuple_identity(p, pair, &b_star) {
        return Ok(LeastSolution::NotASolution);
    }
    for index in 0..b_star.len() {
        let mut lowered = b_star.degrees().to_vec();
        if lowered[index] <= 0.0 {
            continue;
        }
        lowered[index] = (lowered[index] - step).max(0.0);
        if quintuple_identity(p, pair, &b_star.with_degrees(lowered)?) {
            return Ok(LeastSolution::NotLeast { index });
        }
    }
    Ok(LeastSolution::Least)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(prefix: &str, d: &[f64]) -> DiscreteFuzzySet {
        DiscreteFuzzySet::on(prefix, d).unwrap()
    }

    fn min_pair() -> ConjImplPair {
        ConjImplPair::from_id("t1_min").unwrap()
    }

    fn example43() -> FmpProblem {
        FmpProblem::new(
            set("u", &[0.0, 0.4, 0.7, 1.0]),
            set("v", &[0.2, 0.5, 0.9, 1.0]),
            set("u", &[0.1, 0.3, 0.5, 0.9]),
        )
        .unwrap()
    }

    #[test]
    fn worked_single_rule_example() {
        let t = qip_fmp_trace(&example43(), &min_pair()).unwrap();
        assert_eq!(t.input_to_antecedent, vec![0.0, 1.0, 1.0, 1.0]);
        assert_eq!(t.rule_implication[1], vec![0.2, 1.0, 1.0, 1.0]);
        assert_eq!(t.inner[0], vec![0.0; 4]);
        assert_eq!(t.terms[3], vec![0.2, 0.5, 0.9, 0.9]);
        assert_eq!(t.output.degrees(), &[0.2, 0.5, 0.9, 0.9]);
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let mut p = example43();
        p.a_star = set("u", &[0.0; 4]);
        assert_eq!(qip_fmp(&p, &min_pair()).unwrap().degrees(), &[0.0; 4]);
    }

    #[test]
    fn pairs_are_validated() {
        assert!(matches!(
            ConjImplPair::from_id("t1_arith_mean"),
            Err(InferenceError::NotSemiOverlap { .. })
        ));
        assert!(matches!(
            ConjImplPair::from_id("t1_min_pow"),
            Err(InferenceError::NoNeutralOne(_))
        ));
        let waived =
            ConjImplPair::waiving_neutral(&catalog_get("t1_min_pow", &[]).unwrap()).unwrap();
        assert!(waived.neutral_waived());
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let err = FmpProblem::new(
            set("u", &[0.0, 1.0]),
            set("v", &[1.0]),
            set("x", &[0.0, 1.0]),
        );
        assert!(matches!(err, Err(InferenceError::UniverseMismatch(_))));
    }

    #[test]
    fn weights_for_two_rules() {
        let pair = min_pair();
        let rule = |a: &[f64], b: &[f64]| MultiAttrRule {
            antecedents: vec![set("u", a)],
            consequent: set("v", b),
        };
        // S_1 = 0.9 and S_2 = 0.5 against the fact (1, 0).
        let rules = vec![
            rule(&[0.9, 0.1], &[1.0, 0.0]),
            rule(&[0.5, 0.5], &[0.0, 1.0]),
        ];
        let r = algorithm1(&rules, &[set("u", &[1.0, 0.0])], &pair).unwrap();
        assert!((r.similarities[0] - 0.9).abs() < 1e-12);
        assert_eq!(r.winners, vec![0]);
        assert!((r.weights[0] - 0.95).abs() < 1e-12);
        assert!((r.weights[1] - 0.05).abs() < 1e-12);
    }

    #[test]
    fn least_solution_on_worked_example() {
        assert_eq!(
            check_least_solution(&example43(), &min_pair(), 0.01).unwrap(),
            LeastSolution::Least
        );
    }
}
