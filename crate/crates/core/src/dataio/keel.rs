use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{read_text, DataError};

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    /// `real`, `integer` or `numeric`, with the declared range if any.
    Real {
        range: Option<(f64, f64)>,
    },
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

/// One row: the input values and the raw output token.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub values: Vec<f64>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    /// Input attributes, in column order.
    pub inputs: Vec<Attribute>,
    pub output: Attribute,
    pub samples: Vec<Sample>,
    /// `(sample index, input index)` of values outside their declared range.
    pub out_of_range: Vec<(usize, usize)>,
    pub source: Option<PathBuf>,
}

const RANGE_EPS: f64 = 1e-9;

pub fn parse_keel(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut ds = parse_keel_str(&text).map_err(|e| e.at(path))?;
    ds.source = Some(path.to_path_buf());
    Ok(ds)
}

/// Parses KEEL text. Keywords are case-insensitive; `%` starts a comment
/// line. Without `@inputs`/`@outputs` the last attribute is the output.
pub fn parse_keel_str(text: &str) -> Result<Dataset, DataError> {
    let mut name = String::new();
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut input_names: Option<Vec<String>> = None;
    let mut output_names: Option<Vec<String>> = None;
    let mut lines = text.lines().enumerate();
    let mut data_line = None;

    for (no, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => name = rest.to_string(),
            "@attribute" => attributes.push(parse_attribute(rest, no + 1)?),
            "@inputs" => input_names = Some(name_list(rest)),
            "@outputs" | "@output" => output_names = Some(name_list(rest)),
            "@data" => {
                data_line = Some(no + 1);
                break;
            }
            _ => {
                return Err(DataError::Syntax {
                    line: no + 1,
                    msg: format!("unexpected header line `{line}`"),
                })
            }
        }
    }
    if data_line.is_none() {
        return Err(DataError::MissingData);
    }
    if attributes.len() < 2 {
        return Err(DataError::Syntax {
            line: data_line.unwrap_or(0),
            msg: "at least one input and one output attribute are required".into(),
        });
    }

    let find = |n: &str| {
        attributes
            .iter()
            .position(|a| a.name == n)
            .ok_or_else(|| DataError::Syntax {
                line: 0,
                msg: format!("unknown attribute `{n}`"),
            })
    };
    let output_idx = match &output_names {
        Some(names) if names.len() == 1 => find(&names[0])?,
        Some(names) => {
            return Err(DataError::Syntax {
                line: 0,
                msg: format!(
                    "exactly one output attribute is supported, got {}",
                    names.len()
                ),
            })
        }
        None => attributes.len() - 1,
    };
    let input_idx: Vec<usize> = match &input_names {
        Some(names) => names.iter().map(|n| find(n)).collect::<Result<_, _>>()?,
        None => (0..attributes.len()).filter(|&i| i != output_idx).collect(),
    };
    for &i in &input_idx {
        if let AttributeKind::Nominal(_) = attributes[i].kind {
            return Err(DataError::UnsupportedType {
                line: 0,
                ty: format!("nominal input `{}`", attributes[i].name),
            });
        }
    }

    let mut samples = Vec::new();
    let mut out_of_range = Vec::new();
    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != attributes.len() {
            return Err(DataError::Arity {
                line: no + 1,
                expected: attributes.len(),
                got: fields.len(),
            });
        }
        let mut values = Vec::with_capacity(input_idx.len());
        for (k, &i) in input_idx.iter().enumerate() {
            let v: f64 = fields[i].parse().map_err(|_| DataError::BadNumber {
                line: no + 1,
                token: fields[i].to_string(),
            })?;
            if let AttributeKind::Real {
                range: Some((lo, hi)),
            } = attributes[i].kind
            {
                if v < lo - RANGE_EPS || v > hi + RANGE_EPS {
                    out_of_range.push((samples.len(), k));
                }
            }
            values.push(v);
        }
        let label = fields[output_idx].to_string();
        if let AttributeKind::Nominal(allowed) = &attributes[output_idx].kind {
            if !allowed.iter().any(|a| same_token(a, &label)) {
                return Err(DataError::Syntax {
                    line: no + 1,
                    msg: format!("class `{label}` is not declared"),
                });
            }
        }
        samples.push(Sample { values, label });
    }
    if samples.is_empty() {
        return Err(DataError::NoSamples);
    }

    Ok(Dataset {
        name,
        inputs: input_idx.iter().map(|&i| attributes[i].clone()).collect(),
        output: attributes[output_idx].clone(),
        samples,
        out_of_range,
        source: None,
    })
}

fn name_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_attribute(rest: &str, line: usize) -> Result<Attribute, DataError> {
    let syntax = |msg: &str| DataError::Syntax {
        line,
        msg: msg.to_string(),
    };
    if let Some(open) = rest.find('{') {
        let name = rest[..open].trim();
        let body = rest[open + 1..]
            .trim_end()
            .strip_suffix('}')
            .ok_or_else(|| syntax("unclosed `{`"))?;
        if name.is_empty() {
            return Err(syntax("attribute without a name"));
        }
        return Ok(Attribute {
            name: name.to_string(),
            kind: AttributeKind::Nominal(name_list(body)),
        });
    }
    let (name, rest) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| syntax("attribute without a type"))?;
    let rest = rest.trim_start();
    let (ty, range) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    match ty.to_ascii_lowercase().as_str() {
        "real" | "integer" | "numeric" => {}
        other => {
            return Err(DataError::UnsupportedType {
                line,
                ty: other.to_string(),
            })
        }
    }
    let range = match range.trim() {
        "" => None,
        r => {
            let body = r
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| syntax("range must look like [lo, hi]"))?;
            let (lo, hi) = body
                .split_once(',')
                .ok_or_else(|| syntax("range must look like [lo, hi]"))?;
            let num = |t: &str| {
                t.trim().parse::<f64>().map_err(|_| DataError::BadNumber {
                    line,
                    token: t.trim().to_string(),
                })
            };
            Some((num(lo)?, num(hi)?))
        }
    };
    Ok(Attribute {
        name: name.to_string(),
        kind: AttributeKind::Real { range },
    })
}

/// Class tokens match literally or as equal numbers (`1` and `1.0`).
pub(crate) fn same_token(a: &str, b: &str) -> bool {
    a == b || matches!((a.parse::<f64>(), b.parse::<f64>()), (Ok(x), Ok(y)) if x == y)
}

impl Dataset {
    /// KEEL text that parses back to the same samples.
    pub fn to_keel_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "@relation {}", self.name);
        for a in self.inputs.iter().chain(std::iter::once(&self.output)) {
            match &a.kind {
                AttributeKind::Real {
                    range: Some((lo, hi)),
                } => {
                    let _ = writeln!(out, "@attribute {} real [{lo:?}, {hi:?}]", a.name);
                }
                AttributeKind::Real { range: None } => {
                    let _ = writeln!(out, "@attribute {} real", a.name);
                }
                AttributeKind::Nominal(values) => {
                    let _ = writeln!(out, "@attribute {} {{{}}}", a.name, values.join(", "));
                }
            }
        }
        let names: Vec<&str> = self.inputs.iter().map(|a| a.name.as_str()).collect();
        let _ = writeln!(out, "@inputs {}", names.join(", "));
        let _ = writeln!(out, "@outputs {}", self.output.name);
        out.push_str("@data\n");
        for s in &self.samples {
            for v in &s.values {
                let _ = write!(out, "{v:?},");
            }
            out.push_str(&s.label);
            out.push('\n');
        }
        out
    }
}
