//! File formats: KEEL datasets, rule bases, inference problems and
//! experiment configs, plus the experiment runner.

mod config;
mod experiment;
mod keel;
mod problem;
mod rules;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::classify::{ClassLabel, ClassifyError};
use crate::fuzzyset::FuzzySetError;
use crate::inference::InferenceError;

pub use config::{load_config, parse_config, ExperimentConfig};
pub use experiment::{run_experiment, ExperimentReport, MappingOutcome};
pub use keel::{parse_keel, parse_keel_str, Attribute, AttributeKind, Dataset, Sample};
pub use problem::{load_problem, parse_problem, ProblemFile, PROBLEM_HEADER};
pub use rules::{load_rulebase, parse_rulebase, rulebase_to_string, write_rulebase, RULES_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("{}: {msg}", path.display())]
    Io { path: PathBuf, msg: String },
    #[error("{}: {inner}", path.display())]
    InFile {
        path: PathBuf,
        inner: Box<DataError>,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing @data section")]
    MissingData,
    #[error("no samples")]
    NoSamples,
    #[error("line {line}: {got} fields, expected {expected}")]
    Arity {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: unsupported attribute type `{ty}`")]
    UnsupportedType { line: usize, ty: String },
    #[error("line {line}: bad number `{token}`")]
    BadNumber { line: usize, token: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    FuzzySet(#[from] FuzzySetError),
}

impl DataError {
    fn at(self, path: &Path) -> DataError {
        DataError::InFile {
            path: path.to_path_buf(),
            inner: Box::new(self),
        }
    }
}

fn read_text(path: &Path) -> Result<String, DataError> {
    std::fs::read_to_string(path).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// Maps raw output tokens of a dataset to class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    name: Option<&'static str>,
    entries: Vec<(String, ClassLabel)>,
}

impl LabelMap {
    /// `-1.0 → 1`, `1.0 → 2`: the labelling of the published Banana excerpt.
    pub fn table2() -> Self {
        LabelMap {
            name: Some("table2"),
            entries: vec![
                ("-1.0".into(), ClassLabel::new(1).unwrap()),
                ("1.0".into(), ClassLabel::new(2).unwrap()),
            ],
        }
    }

    /// `1.0 → 1`, `-1.0 → 2`: the labelling under which the rule regions'
    /// class shares come out close to the published consequents.
    pub fn swapped() -> Self {
        LabelMap {
            name: Some("swapped"),
            entries: vec![
                ("1.0".into(), ClassLabel::new(1).unwrap()),
                ("-1.0".into(), ClassLabel::new(2).unwrap()),
            ],
        }
    }

    pub fn get(&self, token: &str) -> Option<ClassLabel> {
        self.entries
            .iter()
            .find(|(t, _)| keel::same_token(t, token))
            .map(|&(_, c)| c)
    }

    /// The map with the class ids of a two-entry map exchanged.
    pub fn alternate(&self) -> Option<LabelMap> {
        match (self.name, self.entries.as_slice()) {
            (Some("table2"), _) => Some(Self::swapped()),
            (Some("swapped"), _) => Some(Self::table2()),
            (_, [(t1, c1), (t2, c2)]) => Some(LabelMap {
                name: None,
                entries: vec![(t1.clone(), *c2), (t2.clone(), *c1)],
            }),
            _ => None,
        }
    }
}

impl Default for LabelMap {
    fn default() -> Self {
        Self::table2()
    }
}

impl fmt::Display for LabelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.name {
            return f.write_str(name);
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(t, c)| format!("{t}:{c}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LabelMap {
    type Err = DataError;

    /// `table2`, `swapped`, or `token:class,token:class,...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "table2" => return Ok(Self::table2()),
            "swapped" => return Ok(Self::swapped()),
            _ => {}
        }
        let bad = || DataError::Config(format!("bad label map `{s}`"));
        let entries = s
            .split(',')
            .map(|part| {
                let (token, class) = part.rsplit_once(':').ok_or_else(bad)?;
                let id: u32 = class.trim().parse().map_err(|_| bad())?;
                Ok((token.trim().to_string(), ClassLabel::new(id)?))
            })
            .collect::<Result<Vec<_>, DataError>>()?;
        if entries.is_empty() {
            return Err(bad());
        }
        Ok(LabelMap {
            name: None,
            entries,
        })
    }
}
