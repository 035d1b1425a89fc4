use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use soi_core::algebra::{catalog_entries, catalog_get, Aggregator};
use soi_core::classify::Classifier;
use soi_core::dataio::{self, LabelMap};
use soi_core::inference::{fita_union, qip_fmp, ConjImplPair};

mod experiment;
mod verify;

/// Semi-overlap functions, quintuple-implication inference and fuzzy
/// rule-based classification.
#[derive(Parser, Debug)]
#[command(name = "soi", version)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check axioms and implication properties of a catalog function.
    Verify {
        /// Catalog id or alias, or `all`.
        target: String,
        /// Grid step for the axiom checks.
        #[arg(long, default_value_t = 1e-3)]
        grid_step: f64,
        /// Grid step for the implication property table.
        #[arg(long, default_value_t = 1e-2)]
        law_step: f64,
    },
    /// Solve a fuzzy modus ponens problem file.
    Infer {
        problem: PathBuf,
        /// Conjunction to use; overrides the file's `pair=`.
        #[arg(long)]
        pair: Option<String>,
    },
    /// Classify a KEEL dataset with a rule base.
    Classify {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Comma-separated kernel ids, one per rule, or a single id for all.
        #[arg(long, value_delimiter = ',')]
        kernels: Vec<String>,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
        #[arg(long, default_value = "table2")]
        label_map: String,
        /// Print one line per sample.
        #[arg(long)]
        verbose: bool,
    },
    /// Run experiment configs and compare with their targets.
    Experiment {
        configs: Vec<PathBuf>,
        /// Run every config in --configs-dir and print the summary.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "configs")]
        configs_dir: PathBuf,
        /// Override the configs' grid step.
        #[arg(long)]
        grid_step: Option<f64>,
        /// Override the configs' label map.
        #[arg(long)]
        label_map: Option<String>,
        /// Accepted distance to a target, in percentage points.
        #[arg(long, default_value_t = 3.0)]
        tolerance: f64,
    },
    /// List catalog functions and aliases.
    Catalog,
}

/// A failure caused by the invocation itself; exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// What a command produced: text for stdout and whether it succeeded.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Usage("--threads must be at least 1".into()).into());
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building the thread pool")?;
    let outcome = pool.install(|| dispatch(cli.command))?;
    print!("{}", outcome.text);
    if let Some(out) = &cli.out {
        std::fs::write(out, &outcome.text).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(outcome.ok)
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Verify {
            target,
            grid_step,
            law_step,
        } => verify::run(&target, grid_step, law_step),
        Command::Infer { problem, pair } => infer(&problem, pair),
        Command::Classify {
            rules,
            data,
            kernels,
            grid_step,
            label_map,
            verbose,
        } => classify(&rules, &data, kernels, grid_step, &label_map, verbose),
        Command::Experiment {
            configs,
            all,
            configs_dir,
            grid_step,
            label_map,
            tolerance,
        } => {
            let label_map = label_map.map(|m| parse_label_map(&m)).transpose()?;
            let settings = experiment::Settings {
                grid_step,
                label_map,
                tolerance,
            };
            experiment::run(&configs, all.then_some(configs_dir.as_path()), &settings)
        }
        Command::Catalog => Ok(catalog()),
    }
}

pub fn kernel(id: &str) -> Result<Aggregator> {
    catalog_get(id, &[]).map_err(|e| Usage(e.to_string()).into())
}

fn parse_label_map(s: &str) -> Result<LabelMap> {
    s.parse()
        .map_err(|e: dataio::DataError| Usage(e.to_string()).into())
}

fn infer(path: &PathBuf, pair: Option<String>) -> Result<Outcome> {
    let file = dataio::load_problem(path)?;
    let id = pair
        .or(file.pair)
        .ok_or_else(|| Usage("no pair given on the command line or in the file".into()))?;
    let pair = ConjImplPair::new(&kernel(&id)?)?;
    let p = &file.problem;
    let result = if p.rules.len() == 1 {
        qip_fmp(&p.rule(0), &pair)?
    } else {
        fita_union(p, &pair)?.union
    };
    Ok(Outcome {
        text: format!("{result}\n"),
        ok: true,
    })
}

fn classify(
    rules: &PathBuf,
    data: &PathBuf,
    kernels: Vec<String>,
    step: f64,
    label_map: &str,
    verbose: bool,
) -> Result<Outcome> {
    use rayon::prelude::*;

    let rb = dataio::load_rulebase(rules)?;
    let ds = dataio::parse_keel(data)?;
    let map = parse_label_map(label_map)?;
    let ids = match kernels.len() {
        0 => rb.default_kernels(),
        // One kernel stands for every rule.
        1 => vec![kernels[0].clone(); rb.rules.len()],
        _ => kernels,
    };
    let kernels = ids
        .iter()
        .map(|id| kernel(id))
        .collect::<Result<Vec<_>>>()?;
    let clf = Classifier::build(&rb, &kernels, step)?;
    let preds = ds
        .samples
        .par_iter()
        .map(|s| clf.classify(&s.values))
        .collect::<Result<Vec<_>, _>>()?;

    let mut text = String::new();
    let mut correct = 0;
    for (i, (s, p)) in ds.samples.iter().zip(&preds).enumerate() {
        let truth = map.get(&s.label);
        correct += usize::from(truth == Some(p.class));
        if verbose {
            let values: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
            text.push_str(&format!(
                "{}\t{}\t{}\t{}{}\n",
                i + 1,
                values.join(","),
                truth.map_or("?".to_string(), |c| c.to_string()),
                p.class,
                if p.tie { "\ttie" } else { "" }
            ));
        }
    }
    text.push_str(&format!(
        "acc={:.6} correct={} total={} map={} ties={}\n",
        correct as f64 / preds.len() as f64,
        correct,
        preds.len(),
        map,
        preds.iter().filter(|p| p.tie).count()
    ));
    Ok(Outcome { text, ok: true })
}

fn catalog() -> Outcome {
    let mut text = String::new();
    for e in catalog_entries() {
        text.push_str(&format!("{:<16} {:<40} {}\n", e.id, e.formula, e.params));
    }
    text.push_str("\naliases: o_a..o_e (overlap choices), so1..so4 (semi-overlap choices)\n");
    for alias in [
        "o_a", "o_b", "o_c", "o_d", "o_e", "so1", "so2", "so3", "so4",
    ] {
        if let Ok(f) = catalog_get(alias, &[]) {
            text.push_str(&format!("  {alias:<4} -> {}\n", f.id()));
        }
    }
    Outcome { text, ok: true }
}
