//! Small inference problems for the `infer` command:
//!
//! ```text
//! soi-problem v1
//! pair=so3
//! u=u1,u2,u3,u4
//! v=v1,v2,v3,v4
//! a_star=0.1,0.3,0.5,0.9
//! rule a=0,0.4,0.7,1 b=0.2,0.5,0.9,1
//! ```
//!
//! One `rule` line gives a single-rule problem; several are combined by
//! pointwise maximum of the per-rule solutions.

use std::path::Path;

use super::{read_text, DataError};
use crate::fuzzyset::DiscreteFuzzySet;
use crate::inference::MultiRuleProblem;

pub const PROBLEM_HEADER: &str = "soi-problem v1";

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    /// Pair suggested by the file; callers may override it.
    pub pair: Option<String>,
    pub problem: MultiRuleProblem,
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<ProblemFile, DataError> {
    let path = path.as_ref();
    parse_problem(&read_text(path)?).map_err(|e| e.at(path))
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, DataError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    if !matches!(lines.next(), Some((_, PROBLEM_HEADER))) {
        return Err(DataError::Syntax {
            line: 1,
            msg: format!("expected `{PROBLEM_HEADER}`"),
        });
    }
    let (mut pair, mut u, mut v, mut a_star) = (None, None, None, None);
    let mut raw_rules: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::new();
    for (line, text) in lines {
        let syntax = |msg: String| DataError::Syntax { line, msg };
        if let Some(rest) = text.strip_prefix("rule ") {
            let (mut a, mut b) = (None, None);
            for field in rest.split_whitespace() {
                match field.split_once('=') {
                    Some(("a", d)) => a = Some(degrees(d).map_err(syntax)?),
                    Some(("b", d)) => b = Some(degrees(d).map_err(syntax)?),
                    _ => return Err(syntax(format!("unexpected `{field}`"))),
                }
            }
            let a = a.ok_or_else(|| syntax("rule without a=".into()))?;
            let b = b.ok_or_else(|| syntax("rule without b=".into()))?;
            raw_rules.push((line, a, b));
            continue;
        }
        match text.split_once('=') {
            Some(("pair", p)) => pair = Some(p.trim().to_string()),
            Some(("u", l)) => u = Some(labels(l)),
            Some(("v", l)) => v = Some(labels(l)),
            Some(("a_star", d)) => a_star = Some(degrees(d).map_err(syntax)?),
            _ => return Err(syntax(format!("unrecognised line `{text}`"))),
        }
    }
    let missing = |what: &str| DataError::Syntax {
        line: 0,
        msg: format!("missing `{what}=` line"),
    };
    let u = u.ok_or_else(|| missing("u"))?;
    let v = v.ok_or_else(|| missing("v"))?;
    let a_star = DiscreteFuzzySet::new(u.clone(), a_star.ok_or_else(|| missing("a_star"))?)?;
    let rules = raw_rules
        .into_iter()
        .map(|(_, a, b)| {
            Ok((
                DiscreteFuzzySet::new(u.clone(), a)?,
                DiscreteFuzzySet::new(v.clone(), b)?,
            ))
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    Ok(ProblemFile {
        pair,
        problem: MultiRuleProblem::new(rules, a_star)?,
    })
}

fn labels(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).collect()
}

fn degrees(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad degree `{t}`"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzyset::FuzzySetError;

    #[test]
    fn parses_two_rules() {
        let text = "soi-problem v1\nu=u1,u2,u3\nv=v1,v2,v3\na_star=0.1,0.6,1\n\
                    rule a=0.1,0.6,1 b=0.3,0.7,1\nrule a=0.2,0.4,0.8 b=0.1,0.8,1\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.pair, None);
        assert_eq!(p.problem.rules.len(), 2);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let text = "soi-problem v1\nu=u1,u2\nv=v1\na_star=0.1,0.6,1\nrule a=0.1,0.6 b=0.3\n";
        assert_eq!(
            parse_problem(text),
            Err(DataError::FuzzySet(FuzzySetError::LengthMismatch {
                labels: 2,
                degrees: 3
            }))
        );
    }
}
