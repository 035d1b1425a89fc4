use std::fmt::Write as _;

use anyhow::Result;

use soi_core::algebra::{catalog_entries, expected_failures, props_on, Axiom, GridSpec};
use soi_core::residuation::{format_tuple, ImplPropertyReport, ResidualImplication};

use crate::{kernel, Outcome, Usage};

pub fn run(target: &str, grid_step: f64, law_step: f64) -> Result<Outcome> {
    let grid = GridSpec::new(grid_step).map_err(|e| Usage(e.to_string()))?;
    let law = GridSpec::new(law_step).map_err(|e| Usage(e.to_string()))?;
    let ids: Vec<String> = if target == "all" {
        catalog_entries().iter().map(|e| e.id.to_string()).collect()
    } else {
        vec![target.to_string()]
    };

    let mut text = String::new();
    let mut ok = true;
    for id in &ids {
        let f = kernel(id)?;
        let props = props_on(&f, &grid);
        let _ = writeln!(text, "{} (axioms at step {})", f.id(), grid.step());
        for c in props.checks() {
            let witness = c.witness.as_deref().map_or("-".to_string(), format_tuple);
            let _ = writeln!(
                text,
                "  {}\t{}\t{}",
                c.axiom,
                if c.holds { "pass" } else { "fail" },
                witness
            );
        }

        let failing: Vec<Axiom> = Axiom::SEMI_OVERLAP
            .iter()
            .copied()
            .filter(|&a| !props.contains(a))
            .collect();
        let expected = expected_failures(f.id());
        let matches = failing == expected;
        ok &= matches;

        if failing.is_empty() {
            let imp = ResidualImplication::of(&f);
            let source = if imp.closed_form().is_some() {
                "closed form"
            } else {
                "oracle"
            };
            let report = ImplPropertyReport::build(&imp, &law);
            let _ = writeln!(
                text,
                "  residual implication ({source}, properties at step {})",
                law.step()
            );
            for line in report.to_lines() {
                let _ = writeln!(text, "  {line}");
            }
        }

        let names: Vec<&str> = failing.iter().map(|a| a.name()).collect();
        let verdict = match (failing.is_empty(), matches) {
            (true, _) => "semi-overlap".to_string(),
            (false, true) => format!("not semi-overlap ({}), expected erratum", names.join(", ")),
            (false, false) => format!("not semi-overlap ({}), UNEXPECTED", names.join(", ")),
        };
        let _ = writeln!(text, "verdict {}: {verdict}\n", f.id());
    }
    Ok(Outcome { text, ok })
}
