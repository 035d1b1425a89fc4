//! The `soi-rules v1` rule-base format:
//!
//! ```text
//! soi-rules v1
//! mode=so5i
//! domains=-2.41:2.81,-1.9:2.2
//! rule 1 class=1 ant=tra(-2.66,-2.31,-1.36,-1.01);tra(-2.15,-1.8,0.42,0.77) b=0.891 kernel=so3
//! ```
//!
//! `b=` and `rw=` are optional per line and required by the mode. Blank
//! lines and `#` comments are skipped.

use std::fmt::Write as _;
use std::path::Path;

use super::{read_text, DataError};
use crate::classify::{ClassLabel, FuzzyRule, Mode, RuleBase, RuleWeight};
use crate::fuzzyset::MembershipFn;

pub const RULES_HEADER: &str = "soi-rules v1";

pub fn load_rulebase(path: impl AsRef<Path>) -> Result<RuleBase, DataError> {
    let path = path.as_ref();
    parse_rulebase(&read_text(path)?).map_err(|e| e.at(path))
}

pub fn parse_rulebase(text: &str) -> Result<RuleBase, DataError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, RULES_HEADER)) => {}
        Some((line, other)) => {
            return Err(DataError::Syntax {
                line,
                msg: format!("expected `{RULES_HEADER}`, found `{other}`"),
            })
        }
        None => {
            return Err(DataError::Syntax {
                line: 1,
                msg: format!("expected `{RULES_HEADER}`"),
            })
        }
    }

    let mut mode = None;
    let mut domains = Vec::new();
    let mut rules: Vec<FuzzyRule> = Vec::new();
    for (line, text) in lines {
        let syntax = |msg: String| DataError::Syntax { line, msg };
        if let Some(rest) = text.strip_prefix("rule ") {
            let rule = parse_rule(rest).map_err(syntax)?;
            if rules.iter().any(|r| r.index == rule.index) {
                return Err(syntax(format!("duplicate rule index {}", rule.index)));
            }
            rules.push(rule);
        } else if let Some(m) = text.strip_prefix("mode=") {
            mode = Some(m.parse::<Mode>().map_err(|e| syntax(e.to_string()))?);
        } else if let Some(d) = text.strip_prefix("domains=") {
            domains = d
                .split(',')
                .map(|pair| {
                    let (lo, hi) = pair.split_once(':')?;
                    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
                })
                .collect::<Option<Vec<(f64, f64)>>>()
                .ok_or_else(|| syntax(format!("bad domains `{d}`")))?;
        } else {
            return Err(syntax(format!("unrecognised line `{text}`")));
        }
    }
    let rb = RuleBase {
        mode: mode.ok_or(DataError::Syntax {
            line: 0,
            msg: "missing `mode=` line".into(),
        })?,
        domains,
        rules,
    };
    rb.validate()?;
    Ok(rb)
}

fn parse_rule(rest: &str) -> Result<FuzzyRule, String> {
    let mut fields = rest.split_whitespace();
    let index: usize = fields
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("rule index missing")?;
    let (mut class, mut antecedents, mut consequent, mut weight, mut kernel) =
        (None, None, None, None, None);
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{field}`"))?;
        match key {
            "class" => {
                let id: u32 = value.parse().map_err(|_| format!("bad class `{value}`"))?;
                class = Some(ClassLabel::new(id).map_err(|e| e.to_string())?);
            }
            "ant" => {
                antecedents = Some(
                    value
                        .split(';')
                        .map(|m| m.parse::<MembershipFn>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| e.to_string())?,
                )
            }
            "b" => {
                let b: f64 = value
                    .parse()
                    .map_err(|_| format!("bad consequent `{value}`"))?;
                if !(0.0..=1.0).contains(&b) {
                    return Err(format!("consequent {b} is outside [0, 1]"));
                }
                consequent = Some(b);
            }
            "rw" => weight = Some(value.parse::<RuleWeight>().map_err(|e| e.to_string())?),
            "kernel" => kernel = Some(value.to_string()),
            other => return Err(format!("unknown field `{other}`")),
        }
    }
    Ok(FuzzyRule {
        index,
        antecedents: antecedents.ok_or("ant= missing")?,
        class: class.ok_or("class= missing")?,
        consequent,
        weight,
        kernel: kernel.unwrap_or_else(|| "t1_min".into()),
    })
}

pub fn rulebase_to_string(rb: &RuleBase) -> String {
    let mut out = format!("{RULES_HEADER}\nmode={}\n", rb.mode);
    if !rb.domains.is_empty() {
        let d: Vec<String> = rb
            .domains
            .iter()
            .map(|(lo, hi)| format!("{lo:?}:{hi:?}"))
            .collect();
        let _ = writeln!(out, "domains={}", d.join(","));
    }
    for r in &rb.rules {
        let ant: Vec<String> = r.antecedents.iter().map(|m| m.to_string()).collect();
        let _ = write!(
            out,
            "rule {} class={} ant={}",
            r.index,
            r.class,
            ant.join(";")
        );
        if let Some(b) = r.consequent {
            let _ = write!(out, " b={b:?}");
        }
        if let Some(w) = r.weight {
            let _ = write!(out, " rw={w}");
        }
        let _ = writeln!(out, " kernel={}", r.kernel);
    }
    out
}

pub fn write_rulebase(rb: &RuleBase, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    std::fs::write(path, rulebase_to_string(rb)).map_err(|e| DataError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}
