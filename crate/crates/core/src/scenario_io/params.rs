//! Parameter documents.
//!
//! ```text
//! [universe]
//! 1 Barnesiella          # label, optional display name
//! 2
//! reserve 12 13          # labels kept for uncatalogued species
//! [growth]
//! 1 0.37                 # label value, one line per catalogued label
//! [susceptibility]
//! 1 -3.29
//! [interaction]
//! -0.2 0.1 ...           # row p, column q = effect of q on p,
//!                        # rows and columns in [universe] order
//! ```
//!
//! Reserve labels carry no parameters.

use std::collections::BTreeMap;

use super::doc::{Document, Line, ParseError, Section};
use crate::algebra::{Label, Universe};
use crate::flow::GlobalParams;

pub fn load_params(text: &str) -> Result<GlobalParams, ParseError> {
    let doc = Document::parse(text)?;
    doc.reject_unknown(&["universe", "growth", "susceptibility", "interaction"])?;

    let universe_sec = doc.require("universe")?;
    let mut known = Vec::new();
    let mut reserve = Vec::new();
    let mut names = BTreeMap::new();
    for line in &universe_sec.lines {
        if line.tokens[0] == "reserve" {
            for i in 1..line.tokens.len() {
                reserve.push(line.label(i)?);
            }
            continue;
        }
        let label = line.label(0)?;
        known.push(label);
        if line.tokens.len() > 1 {
            names.insert(label, line.tokens[1..].join(" "));
        }
    }
    if known.is_empty() {
        return Err(ParseError::new(
            universe_sec.line,
            "[universe] declares no labels",
        ));
    }
    let universe = Universe::new(known.clone(), reserve)
        .map_err(|e| ParseError::new(universe_sec.line, e.to_string()))?;

    let growth = per_label(doc.require("growth")?, &universe)?;
    let susceptibility = per_label(doc.require("susceptibility")?, &universe)?;

    let inter = doc.require("interaction")?;
    let n = known.len();
    if inter.lines.len() != n {
        return Err(ParseError::new(
            inter.line,
            format!(
                "interaction matrix has {} rows, expected {n} to match {n} growth rates",
                inter.lines.len()
            ),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    for line in &inter.lines {
        if line.tokens.len() != n {
            return Err(line.err(format!(
                "interaction row has {} columns, expected {n}",
                line.tokens.len()
            )));
        }
        rows.push(
            (0..n)
                .map(|i| line.real(i))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }

    GlobalParams::new(universe, growth, rows, susceptibility)
        .map(|p| p.with_names(names))
        .map_err(|e| ParseError::new(0, e.to_string()))
}

/// One value per catalogued label, returned in universe order.
fn per_label(sec: &Section<'_>, universe: &Universe) -> Result<Vec<f64>, ParseError> {
    let mut values: BTreeMap<Label, (f64, &Line<'_>)> = BTreeMap::new();
    for line in &sec.lines {
        line.expect_len(2, "`label value`")?;
        let label = line.label(0)?;
        if !universe.known().contains(&label) {
            return Err(line.err(format!(
                "label {label} in [{}] is not a catalogued universe label",
                sec.name
            )));
        }
        if values.insert(label, (line.real(1)?, line)).is_some() {
            return Err(line.err(format!("label {label} appears twice in [{}]", sec.name)));
        }
    }
    universe
        .known()
        .iter()
        .map(|l| {
            values.get(l).map(|(v, _)| *v).ok_or_else(|| {
                ParseError::new(
                    sec.line,
                    format!("[{}] has no entry for label {l}", sec.name),
                )
            })
        })
        .collect()
}
