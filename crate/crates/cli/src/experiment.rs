use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};

use soi_core::dataio::{load_config, run_experiment, ExperimentReport, LabelMap};

use crate::{Outcome, Usage};

pub struct Settings {
    pub grid_step: Option<f64>,
    pub label_map: Option<LabelMap>,
    pub tolerance: f64,
}

/// Groups compared by mean accuracy, best first.
const ORDERING: [&str; 3] = ["table7", "table5", "table4"];

pub fn run(configs: &[PathBuf], all_dir: Option<&Path>, settings: &Settings) -> Result<Outcome> {
    let mut paths = configs.to_vec();
    if let Some(dir) = all_dir {
        let mut found: Vec<PathBuf> = std::fs::read_dir(dir)
            .with_context(|| format!("reading {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
            .collect();
        found.sort();
        paths.extend(found);
    }
    if paths.is_empty() {
        return Err(Usage("give config files or --all".into()).into());
    }

    let start = Instant::now();
    let mut reports = Vec::with_capacity(paths.len());
    for path in &paths {
        let mut cfg = load_config(path)?;
        if let Some(step) = settings.grid_step {
            cfg.grid_step = step;
        }
        if let Some(map) = &settings.label_map {
            cfg.label_map = map.clone();
        }
        reports.push(run_experiment(&cfg).with_context(|| format!("experiment {}", cfg.id))?);
    }

    let mut text = String::new();
    if all_dir.is_none() {
        for r in &reports {
            text.push_str(&r.human());
            text.push('\n');
        }
    }
    summary(&mut text, &reports, settings.tolerance);
    let _ = writeln!(text, "# total runtime {:.1?}", start.elapsed());
    for r in &reports {
        for line in r.machine_lines() {
            let _ = writeln!(text, "{line}");
        }
    }
    Ok(Outcome { text, ok: true })
}

fn status(target: f64, observed: f64, tolerance: f64) -> &'static str {
    if (observed - target).abs() <= tolerance {
        "within"
    } else {
        "OUTSIDE"
    }
}

fn summary(text: &mut String, reports: &[ExperimentReport], tolerance: f64) {
    let _ = writeln!(
        text,
        "{:<14} {:>8} {:>9} {:>7}  {:<8} map (tolerance ±{tolerance} points)",
        "experiment", "target", "observed", "delta", "status"
    );
    // group -> (observed, targets)
    let mut groups: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in reports {
        let observed = 100.0 * r.accuracy();
        let (target, delta, verdict) = match r.config.target {
            Some(t) => (
                format!("{t:.2}"),
                format!("{:+.2}", observed - t),
                status(t, observed, tolerance),
            ),
            None => ("-".into(), "-".into(), "-"),
        };
        let _ = writeln!(
            text,
            "{:<14} {:>8} {:>9.2} {:>7}  {:<8} {}",
            r.config.id,
            target,
            observed,
            delta,
            verdict,
            r.outcome().map
        );
        let g = groups.entry(r.config.group()).or_default();
        g.0.push(observed);
        if let Some(t) = r.config.target {
            g.1.push(t);
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mut means = BTreeMap::new();
    for (group, (observed, targets)) in &groups {
        if observed.len() < 2 {
            continue;
        }
        let m = mean(observed);
        means.insert(*group, m);
        if targets.len() == observed.len() {
            let t = mean(targets);
            let _ = writeln!(
                text,
                "{:<14} {:>8.3} {:>9.3} {:>7}  {}",
                format!("{group} avg"),
                t,
                m,
                format!("{:+.2}", m - t),
                status(t, m, tolerance)
            );
        } else {
            let _ = writeln!(text, "{:<14} {:>8} {:>9.3}", format!("{group} avg"), "-", m);
        }
    }
    if ORDERING.iter().all(|g| means.contains_key(g)) {
        let holds = ORDERING.windows(2).all(|w| means[w[0]] > means[w[1]]);
        let _ = writeln!(
            text,
            "ordering {}: {}",
            ORDERING.join(" > "),
            if holds { "holds" } else { "FAILS" }
        );
    }
}
