//! Experiment configs: flat `key=value` lines, `#` comments.
//!
//! Keys: `id`, `dataset`, `rules`, `mode`, `kernels` (comma-separated, one
//! per rule; omitted means the rule base's defaults), `grid_step`,
//! `label_map`, `target` (accuracy in percent) and `out`. Relative paths
//! are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use super::{read_text, DataError, LabelMap};
use crate::algebra::catalog_get;
use crate::classify::Mode;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub id: String,
    pub dataset: PathBuf,
    pub rules: PathBuf,
    pub mode: Mode,
    pub kernels: Vec<String>,
    pub grid_step: f64,
    pub label_map: LabelMap,
    pub target: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Experiment family: the id up to `_exp`, e.g. `table7`.
    pub fn group(&self) -> &str {
        self.id.split_once("_exp").map_or(&self.id, |(g, _)| g)
    }

    /// `key=value` lines that parse back to this config.
    pub fn echo(&self) -> Vec<String> {
        let mut lines = vec![
            format!("id={}", self.id),
            format!("dataset={}", self.dataset.display()),
            format!("rules={}", self.rules.display()),
            format!("mode={}", self.mode),
        ];
        if !self.kernels.is_empty() {
            lines.push(format!("kernels={}", self.kernels.join(",")));
        }
        lines.push(format!("grid_step={}", self.grid_step));
        lines.push(format!("label_map={}", self.label_map));
        if let Some(t) = self.target {
            lines.push(format!("target={t}"));
        }
        if let Some(out) = &self.out {
            lines.push(format!("out={}", out.display()));
        }
        lines
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig, DataError> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&read_text(path)?, base).map_err(|e| e.at(path))
}

pub fn parse_config(text: &str, base: &Path) -> Result<ExperimentConfig, DataError> {
    let (mut id, mut dataset, mut rules, mut mode) = (None, None, None, None);
    let mut kernels = Vec::new();
    let mut grid_step = 0.01;
    let mut label_map = LabelMap::default();
    let (mut target, mut out) = (None, None);
    let resolve = |p: &str| {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };

    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |msg: String| DataError::Syntax { line: no + 1, msg };
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| syntax(format!("expected key=value, got `{line}`")))?;
        match key {
            "id" => id = Some(value.to_string()),
            "dataset" => dataset = Some(resolve(value)),
            "rules" => rules = Some(resolve(value)),
            "mode" => mode = Some(value.parse::<Mode>()?),
            "kernels" => kernels = value.split(',').map(|k| k.trim().to_string()).collect(),
            "grid_step" => {
                grid_step = value
                    .parse()
                    .ok()
                    .filter(|s: &f64| *s > 0.0)
                    .ok_or_else(|| syntax(format!("bad grid step `{value}`")))?
            }
            "label_map" => label_map = value.parse()?,
            "target" => {
                target = Some(
                    value
                        .parse()
                        .map_err(|_| syntax(format!("bad target `{value}`")))?,
                )
            }
            "out" if value.is_empty() => out = None,
            "out" => out = Some(resolve(value)),
            other => return Err(syntax(format!("unknown key `{other}`"))),
        }
    }
    for k in &kernels {
        catalog_get(k, &[])?;
    }
    let missing = |k: &str| DataError::Config(format!("missing `{k}`"));
    Ok(ExperimentConfig {
        id: id.ok_or_else(|| missing("id"))?,
        dataset: dataset.ok_or_else(|| missing("dataset"))?,
        rules: rules.ok_or_else(|| missing("rules"))?,
        mode: mode.ok_or_else(|| missing("mode"))?,
        kernels,
        grid_step,
        label_map,
        target,
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_are_relative_to_the_config() {
        let cfg = parse_config(
            "# demo\nid=table7_exp1\ndataset=../data/banana.dat\nrules=/abs/r.rules\nmode=so5i\nkernels=so3,so1\n",
            Path::new("configs"),
        )
        .unwrap();
        assert_eq!(cfg.dataset, Path::new("configs/../data/banana.dat"));
        assert_eq!(cfg.rules, Path::new("/abs/r.rules"));
        assert_eq!(cfg.group(), "table7");
        assert_eq!(cfg.grid_step, 0.01);
        let again = parse_config(&cfg.echo().join("\n"), Path::new("")).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn unknown_kernels_and_keys_fail() {
        let base = "id=x\ndataset=d\nrules=r\nmode=so5i\n";
        assert!(matches!(
            parse_config(&format!("{base}kernels=nosuch\n"), Path::new("")),
            Err(DataError::Algebra(_))
        ));
        assert!(matches!(
            parse_config(&format!("{base}colour=red\n"), Path::new("")),
            Err(DataError::Syntax { line: 5, .. })
        ));
        assert!(matches!(
            parse_config("id=x\n", Path::new("")),
            Err(DataError::Config(_))
        ));
    }
}
