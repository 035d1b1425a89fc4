use super::{ClassLabel, ClassifyError, Mode, Prediction, RuleBase};
use crate::algebra::Aggregator;

/// FARC-HD inference with one overlap function per rule.
#[derive(Debug, Clone)]
pub struct FarcHd {
    rules: RuleBase,
    overlaps: Vec<Aggregator>,
    classes: Vec<ClassLabel>,
}

impl FarcHd {
    pub fn new(rules: &RuleBase, overlaps: Vec<Aggregator>) -> Result<Self, ClassifyError> {
        if rules.mode != Mode::FarcHd {
            return Err(ClassifyError::WrongMode {
                expected: Mode::FarcHd,
                found: rules.mode,
            });
        }
        rules.validate()?;
        if overlaps.len() != rules.rules.len() {
            return Err(ClassifyError::KernelCount {
                rules: rules.rules.len(),
                kernels: overlaps.len(),
            });
        }
        Ok(FarcHd {
            classes: rules.classes(),
            rules: rules.clone(),
            overlaps,
        })
    }

    /// Matching degree `O(μ₁, μ₂)` of every rule, in rule order.
    pub fn matching(&self, sample: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        if sample.len() != self.rules.arity() {
            return Err(ClassifyError::Arity {
                expected: self.rules.arity(),
                got: sample.len(),
            });
        }
        Ok(self
            .rules
            .rules
            .iter()
            .zip(&self.overlaps)
            .map(|(rule, o)| {
                let mut degrees = rule.antecedents.iter().zip(sample).map(|(m, &x)| m.eval(x));
                let first = degrees.next().unwrap_or(0.0);
                degrees.fold(first, |acc, d| o.eval(acc, d))
            })
            .collect())
    }

    pub fn classify(&self, sample: &[f64]) -> Result<Prediction, ClassifyError> {
        let matching = self.matching(sample)?;
        let mut conf = vec![0.0; self.classes.len()];
        // Left-to-right in rule order so confidences are bit-stable.
        for ((rule, mu), _) in self.rules.rules.iter().zip(&matching).zip(&self.overlaps) {
            let weight = rule.weight.expect("validated").value();
            let c = self
                .classes
                .binary_search(&rule.class)
                .expect("class of a rule");
            conf[c] += mu * weight;
        }
        let best = conf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let top: Vec<usize> = (0..conf.len()).filter(|&c| conf[c] == best).collect();
        Ok(Prediction {
            class: self.classes[top[0]],
            scores: conf,
            tie: top.len() > 1,
        })
    }
}

/// One-shot FARC-HD classification of `sample`.
pub fn farc_hd_classify(
    sample: &[f64],
    rules: &RuleBase,
    overlaps: &[Aggregator],
) -> Result<Prediction, ClassifyError> {
    FarcHd::new(rules, overlaps.to_vec())?.classify(sample)
}
