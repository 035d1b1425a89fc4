//! Fuzzy rule bases and two classifiers over them.
//!
//! - FARC-HD scores each class by the sum of `O(μ₁, μ₂) · RW_j` over its
//!   rules, for an overlap function `O` chosen per rule.
//! - SO5I-FRC fuzzifies the sample into a pyramid `A*` and scores each rule
//!   by the quintuple-implication match between `A*` and the whole rule
//!   `A_j → B_j`, for a semi-overlap function and its residual per rule.

mod banana;
mod farc;
mod so5i;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{Aggregator, AlgebraError};
use crate::fuzzyset::MembershipFn;
use crate::inference::InferenceError;

pub use banana::{
    banana_rulebase, BANANA_BOUNDS, BANANA_CONSEQUENTS, TABLE5_KERNELS, TABLE7_KERNELS,
};
pub use farc::{farc_hd_classify, FarcHd};
pub use so5i::{so5i_classify, So5i, So5iSettings};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("sample has {got} attributes but the rule base expects {expected}")]
    Arity { expected: usize, got: usize },
    #[error("rule {rule}: {what} is required in {mode} mode")]
    MissingField {
        rule: usize,
        what: &'static str,
        mode: Mode,
    },
    #[error("rule base is in {found} mode, expected {expected}")]
    WrongMode { expected: Mode, found: Mode },
    #[error("{kernels} kernels given for {rules} rules")]
    KernelCount { rules: usize, kernels: usize },
    #[error("kernel `{0}` has no registered closed-form residual")]
    NoClosedForm(String),
    #[error("rule indices must be unique and increasing (rule {0})")]
    RuleOrder(usize),
    #[error("rule {rule} has {got} antecedents, expected {expected}")]
    RuleArity {
        rule: usize,
        expected: usize,
        got: usize,
    },
    #[error("rule base has no rules")]
    Empty,
    #[error("class labels start at 1")]
    BadClass,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("{0}")]
    Settings(String),
}

/// A class label; ids start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel(u32);

impl ClassLabel {
    pub fn new(id: u32) -> Result<Self, ClassifyError> {
        if id == 0 {
            Err(ClassifyError::BadClass)
        } else {
            Ok(ClassLabel(id))
        }
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn name(self) -> String {
        format!("class {}", self.0)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A rule weight kept as the ratio it was given in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleWeight {
    pub num: u32,
    pub den: u32,
}

impl RuleWeight {
    pub fn new(num: u32, den: u32) -> Result<Self, ClassifyError> {
        if den == 0 || num > den {
            return Err(ClassifyError::Settings(format!(
                "rule weight {num}/{den} is not in [0, 1]"
            )));
        }
        Ok(RuleWeight { num, den })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for RuleWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RuleWeight {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassifyError::Settings(format!("bad rule weight `{s}`"));
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        RuleWeight::new(
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    FarcHd,
    So5i,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::FarcHd => "farc_hd",
            Mode::So5i => "so5i",
        })
    }
}

impl FromStr for Mode {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "farc_hd" => Ok(Mode::FarcHd),
            "so5i" => Ok(Mode::So5i),
            other => Err(ClassifyError::Settings(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    /// 1-based position in the rule base.
    pub index: usize,
    pub antecedents: Vec<MembershipFn>,
    pub class: ClassLabel,
    /// Degree of the one-point consequent `B_j`.
    pub consequent: Option<f64>,
    pub weight: Option<RuleWeight>,
    /// Catalog id of the rule's default kernel.
    pub kernel: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    pub mode: Mode,
    /// Attribute domains `[lo, hi]`, informational.
    pub domains: Vec<(f64, f64)>,
    pub rules: Vec<FuzzyRule>,
}

impl RuleBase {
    /// Checks arity, rule order and the per-mode fields.
    pub fn validate(&self) -> Result<(), ClassifyError> {
        let first = self.rules.first().ok_or(ClassifyError::Empty)?;
        let arity = first.antecedents.len();
        let mut last = 0;
        for rule in &self.rules {
            if rule.index <= last {
                return Err(ClassifyError::RuleOrder(rule.index));
            }
            last = rule.index;
            if rule.antecedents.len() != arity {
                return Err(ClassifyError::RuleArity {
                    rule: rule.index,
                    expected: arity,
                    got: rule.antecedents.len(),
                });
            }
            match self.mode {
                Mode::FarcHd if rule.weight.is_none() => {
                    return Err(ClassifyError::MissingField {
                        rule: rule.index,
                        what: "rw",
                        mode: self.mode,
                    })
                }
                Mode::So5i if rule.consequent.is_none() => {
                    return Err(ClassifyError::MissingField {
                        rule: rule.index,
                        what: "b",
                        mode: self.mode,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.rules.first().map_or(0, |r| r.antecedents.len())
    }

    /// Distinct class labels in ascending order.
    pub fn classes(&self) -> Vec<ClassLabel> {
        let mut classes: Vec<ClassLabel> = self.rules.iter().map(|r| r.class).collect();
        classes.sort();
        classes.dedup();
        classes
    }

    pub fn default_kernels(&self) -> Vec<String> {
        self.rules.iter().map(|r| r.kernel.clone()).collect()
    }
}

/// A classifier's decision with the scores it was based on.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: ClassLabel,
    /// Per-class confidences (FARC-HD, ascending class order) or per-rule
    /// matching degrees (SO5I-FRC, rule order).
    pub scores: Vec<f64>,
    /// Set when the maximum is attained by several classes, or by several
    /// rules with different labels.
    pub tie: bool,
}

/// Either classifier behind one interface, chosen by the rule base's mode.
#[derive(Debug, Clone)]
pub enum Classifier {
    FarcHd(FarcHd),
    So5i(So5i),
}

impl Classifier {
    /// `step` is the SO5I-FRC grid step and is ignored in FARC-HD mode.
    pub fn build(
        rules: &RuleBase,
        kernels: &[Aggregator],
        step: f64,
    ) -> Result<Self, ClassifyError> {
        Ok(match rules.mode {
            Mode::FarcHd => Classifier::FarcHd(FarcHd::new(rules, kernels.to_vec())?),
            Mode::So5i => Classifier::So5i(So5i::new(
                rules,
                kernels,
                So5iSettings {
                    step,
                    ..So5iSettings::default()
                },
            )?),
        })
    }

    pub fn classify(&self, sample: &[f64]) -> Result<Prediction, ClassifyError> {
        match self {
            Classifier::FarcHd(c) => c.classify(sample),
            Classifier::So5i(c) => c.classify(sample),
        }
    }
}
