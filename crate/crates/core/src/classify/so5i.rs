use std::collections::HashMap;

use super::{ClassifyError, Mode, Prediction, RuleBase};
use crate::algebra::Aggregator;
use crate::inference::ConjImplPair;

/// Fuzzification and sampling of the input pyramid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So5iSettings {
    /// Half-width of the triangular fuzzifier on each axis.
    pub half_width: f64,
    /// Grid step over the square `[x − h, x + h]²`.
    pub step: f64,
}

impl Default for So5iSettings {
    fn default() -> Self {
        So5iSettings {
            half_width: 0.25,
            step: 0.01,
        }
    }
}

impl So5iSettings {
    fn validate(&self) -> Result<usize, ClassifyError> {
        let ok = self.half_width > 0.0
            && self.step > 0.0
            && self.step.is_finite()
            && self.step <= 2.0 * self.half_width;
        let n = (2.0 * self.half_width / self.step).round();
        if !ok || (n * self.step - 2.0 * self.half_width).abs() > 1e-9 {
            return Err(ClassifyError::Settings(format!(
                "grid step {} does not divide the support width {}",
                self.step,
                2.0 * self.half_width
            )));
        }
        Ok(n as usize + 1)
    }
}

/// SO5I-FRC with one semi-overlap pair per rule.
#[derive(Debug, Clone)]
pub struct So5i {
    rules: RuleBase,
    pairs: Vec<ConjImplPair>,
    /// Offsets `−h + k·step` from the sample along each axis.
    offsets: Vec<f64>,
    /// `A*` on the grid, row-major (first axis outer).
    a_star: Vec<f64>,
    /// Score of each rule when its antecedent vanishes on the whole support.
    empty_scores: Vec<f64>,
}

impl So5i {
    pub fn new(
        rules: &RuleBase,
        kernels: &[Aggregator],
        settings: So5iSettings,
    ) -> Result<Self, ClassifyError> {
        if rules.mode != Mode::So5i {
            return Err(ClassifyError::WrongMode {
                expected: Mode::So5i,
                found: rules.mode,
            });
        }
        rules.validate()?;
        if rules.arity() != 2 {
            return Err(ClassifyError::Arity {
                expected: 2,
                got: rules.arity(),
            });
        }
        if kernels.len() != rules.rules.len() {
            return Err(ClassifyError::KernelCount {
                rules: rules.rules.len(),
                kernels: kernels.len(),
            });
        }
        let n = settings.validate()?;

        // Building a pair runs the adjunction check, so share them by id.
        let mut cache: HashMap<String, ConjImplPair> = HashMap::new();
        let mut pairs = Vec::with_capacity(kernels.len());
        for k in kernels {
            let pair = match cache.get(k.id()) {
                Some(p) => p.clone(),
                None => {
                    let p = ConjImplPair::waiving_neutral(k)?;
                    if p.implication().closed_form().is_none() {
                        return Err(ClassifyError::NoClosedForm(k.id().to_string()));
                    }
                    cache.insert(k.id().to_string(), p.clone());
                    p
                }
            };
            pairs.push(pair);
        }

        let h = settings.half_width;
        let offsets: Vec<f64> = (0..n).map(|k| -h + k as f64 * settings.step).collect();
        let tri: Vec<f64> = offsets
            .iter()
            .map(|o| (1.0 - o.abs() / h).max(0.0))
            .collect();
        let a_star: Vec<f64> = tri
            .iter()
            .flat_map(|&r| tri.iter().map(move |&c| r.min(c)))
            .collect();

        let empty_scores = rules
            .rules
            .iter()
            .zip(&pairs)
            .map(|(rule, pair)| {
                let b = rule.consequent.expect("validated");
                a_star
                    .iter()
                    .fold(0.0, |m: f64, &s| m.max(pair.quintuple_term(s, 0.0, b)))
            })
            .collect();

        Ok(So5i {
            rules: rules.clone(),
            pairs,
            offsets,
            a_star,
            empty_scores,
        })
    }

    pub fn grid_points(&self) -> usize {
        self.offsets.len()
    }

    /// Matching degree of every rule, in rule order:
    /// `max_x A*(x) ⊙ ((A*(x) → A_j(x)) ⊙ (A_j(x) → B_j))`.
    pub fn matching(&self, sample: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        if sample.len() != 2 {
            return Err(ClassifyError::Arity {
                expected: 2,
                got: sample.len(),
            });
        }
        let n = self.offsets.len();
        let mut first = vec![0.0; n];
        let mut second = vec![0.0; n];
        let mut scores = Vec::with_capacity(self.rules.rules.len());
        for (j, (rule, pair)) in self.rules.rules.iter().zip(&self.pairs).enumerate() {
            let (m1, m2) = (&rule.antecedents[0], &rule.antecedents[1]);
            for (k, off) in self.offsets.iter().enumerate() {
                first[k] = m1.eval(sample[0] + off);
                second[k] = m2.eval(sample[1] + off);
            }
            if first.iter().all(|&d| d == 0.0) || second.iter().all(|&d| d == 0.0) {
                scores.push(self.empty_scores[j]);
                continue;
            }
            let b = rule.consequent.expect("validated");
            let mut best: f64 = 0.0;
            for (r, &d1) in first.iter().enumerate() {
                let row = &self.a_star[r * n..(r + 1) * n];
                for (&s, &d2) in row.iter().zip(&second) {
                    best = best.max(pair.quintuple_term(s, d1.min(d2), b));
                }
            }
            scores.push(best);
        }
        Ok(scores)
    }

    /// Class of the best-matching rule. The lowest rule index wins ties,
    /// which are flagged when the tied rules disagree on the class.
    pub fn classify(&self, sample: &[f64]) -> Result<Prediction, ClassifyError> {
        let scores = self.matching(sample)?;
        let mut best = 0;
        for (j, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = j;
            }
        }
        let class = self.rules.rules[best].class;
        let tie = scores
            .iter()
            .zip(&self.rules.rules)
            .any(|(&s, r)| s == scores[best] && r.class != class);
        Ok(Prediction { class, scores, tie })
    }
}

/// One-shot SO5I-FRC classification of `sample`.
pub fn so5i_classify(
    sample: &[f64],
    rules: &RuleBase,
    kernels: &[Aggregator],
    settings: So5iSettings,
) -> Result<Prediction, ClassifyError> {
    So5i::new(rules, kernels, settings)?.classify(sample)
}
