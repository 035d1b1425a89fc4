use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{load_rulebase, parse_keel, DataError, ExperimentConfig, LabelMap};
use crate::algebra::{catalog_get, Aggregator};
use crate::classify::{ClassLabel, Classifier, ClassifyError, Prediction};

/// Accuracy of one run under one label mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingOutcome {
    pub map: LabelMap,
    pub correct: usize,
    /// `confusion[t][p]`: samples of class `classes[t]` predicted as
    /// `classes[p]`. Samples whose token is not in the map are left out.
    pub confusion: Vec<Vec<usize>>,
    pub unmapped: usize,
}

impl MappingOutcome {
    fn tally(
        map: LabelMap,
        classes: &[ClassLabel],
        labels: &[&str],
        predictions: &[Prediction],
    ) -> Self {
        let mut confusion = vec![vec![0; classes.len()]; classes.len()];
        let mut unmapped = 0;
        for (label, pred) in labels.iter().zip(predictions) {
            let truth = map
                .get(label)
                .and_then(|c| classes.iter().position(|&k| k == c));
            let guess = classes.iter().position(|&k| k == pred.class);
            match (truth, guess) {
                (Some(t), Some(p)) => confusion[t][p] += 1,
                _ => unmapped += 1,
            }
        }
        let correct = (0..classes.len()).map(|c| confusion[c][c]).sum();
        MappingOutcome {
            map,
            correct,
            confusion,
            unmapped,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub classes: Vec<ClassLabel>,
    pub total: usize,
    pub ties: usize,
    /// The configured mapping first, then its alternate if there is one.
    pub outcomes: Vec<MappingOutcome>,
    /// Index into `outcomes` of the reported mapping: the one closest to
    /// the target, or the configured one without a target.
    pub reported: usize,
    pub runtime: Duration,
}

impl ExperimentReport {
    pub fn accuracy_of(&self, i: usize) -> f64 {
        self.outcomes[i].correct as f64 / self.total as f64
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy_of(self.reported)
    }

    pub fn outcome(&self) -> &MappingOutcome {
        &self.outcomes[self.reported]
    }

    /// Deterministic summary lines; the reported mapping comes first.
    pub fn machine_lines(&self) -> Vec<String> {
        let mut order = vec![self.reported];
        order.extend((0..self.outcomes.len()).filter(|&i| i != self.reported));
        order
            .into_iter()
            .enumerate()
            .map(|(k, i)| {
                let o = &self.outcomes[i];
                let mut line = format!(
                    "exp={} acc={:.6} correct={} total={}",
                    self.config.id,
                    self.accuracy_of(i),
                    o.correct,
                    self.total
                );
                let _ = write!(line, " map={}", o.map);
                if k == 0 {
                    let _ = write!(line, " ties={}", self.ties);
                } else {
                    line.push_str(" alt");
                }
                line
            })
            .collect()
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment {}", self.config.id);
        for line in self.config.echo() {
            let _ = writeln!(out, "  {line}");
        }
        for (i, o) in self.outcomes.iter().enumerate() {
            let marker = if i == self.reported { "*" } else { " " };
            let _ = writeln!(
                out,
                "{marker} map {:<10} accuracy {:>7.3}%  ({}/{})",
                o.map.to_string(),
                100.0 * self.accuracy_of(i),
                o.correct,
                self.total
            );
            let header: Vec<String> = self
                .classes
                .iter()
                .map(|c| format!("{:>8}", format!("pred {c}")))
                .collect();
            let _ = writeln!(out, "    {:>8} {}", "", header.join(" "));
            for (t, row) in o.confusion.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|n| format!("{n:>8}")).collect();
                let _ = writeln!(
                    out,
                    "    {:>8} {}",
                    format!("true {}", self.classes[t]),
                    cells.join(" ")
                );
            }
            if o.unmapped > 0 {
                let _ = writeln!(out, "    unmapped samples: {}", o.unmapped);
            }
        }
        let _ = writeln!(out, "  ties: {}", self.ties);
        if let Some(target) = self.config.target {
            let observed = 100.0 * self.accuracy();
            let _ = writeln!(
                out,
                "  target {target:.2}%  observed {observed:.2}%  delta {:+.2}",
                observed - target
            );
        }
        let _ = writeln!(out, "  runtime: {:.2?}", self.runtime);
        out
    }
}

/// Runs one experiment. Samples are classified in parallel on the current
/// rayon pool; results are collected in file order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, DataError> {
    let start = Instant::now();
    let dataset = parse_keel(&cfg.dataset)?;
    let rules = load_rulebase(&cfg.rules)?;
    if rules.mode != cfg.mode {
        return Err(ClassifyError::WrongMode {
            expected: cfg.mode,
            found: rules.mode,
        }
        .into());
    }
    let ids = if cfg.kernels.is_empty() {
        rules.default_kernels()
    } else {
        cfg.kernels.clone()
    };
    let kernels = ids
        .iter()
        .map(|id| catalog_get(id, &[]))
        .collect::<Result<Vec<Aggregator>, _>>()?;
    let classifier = Classifier::build(&rules, &kernels, cfg.grid_step)?;

    let predictions = dataset
        .samples
        .par_iter()
        .map(|s| classifier.classify(&s.values))
        .collect::<Result<Vec<_>, _>>()?;

    let classes = rules.classes();
    let labels: Vec<&str> = dataset.samples.iter().map(|s| s.label.as_str()).collect();
    let mut outcomes = vec![MappingOutcome::tally(
        cfg.label_map.clone(),
        &classes,
        &labels,
        &predictions,
    )];
    if let Some(alt) = cfg.label_map.alternate() {
        outcomes.push(MappingOutcome::tally(alt, &classes, &labels, &predictions));
    }
    let total = predictions.len();
    let reported = match cfg.target {
        Some(target) => {
            let gap = |o: &MappingOutcome| (100.0 * o.correct as f64 / total as f64 - target).abs();
            (1..outcomes.len()).fold(0, |best, i| {
                if gap(&outcomes[i]) < gap(&outcomes[best]) {
                    i
                } else {
                    best
                }
            })
        }
        None => 0,
    };
    let report = ExperimentReport {
        config: cfg.clone(),
        classes,
        total,
        ties: predictions.iter().filter(|p| p.tie).count(),
        outcomes,
        reported,
        runtime: start.elapsed(),
    };
    if let Some(out) = &cfg.out {
        let mut text = report.human();
        for line in report.machine_lines() {
            text.push_str(&line);
            text.push('\n');
        }
        std::fs::write(out, text).map_err(|e| DataError::Io {
            path: out.clone(),
            msg: e.to_string(),
        })?;
    }
    Ok(report)
}
