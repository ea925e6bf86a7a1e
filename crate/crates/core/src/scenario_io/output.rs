//! Writers for completed arcs: time series, event log and plot data.
//!
//! Absence is never written as zero. In the time series an absent species
//! is an empty field; in plot data its trajectory has a gap.

use std::io::{self, Write};

use super::doc::ParseError;
use crate::algebra::{BasisSet, Label};
use crate::hybrid::{HybridArc, HybridTime, JumpKind};

/// 17 significant digits; an exact zero is written `0.0`.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        "0.0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// `t,k,<label_1>,...,<label_n>` over every universe label in ascending
/// order, one row per stored sample.
pub fn write_timeseries<W: Write>(arc: &HybridArc, mut sink: W) -> io::Result<()> {
    let labels: Vec<Label> = arc.universe.full_basis().iter().collect();
    write!(sink, "t,k")?;
    for l in &labels {
        write!(sink, ",{l}")?;
    }
    writeln!(sink)?;
    let mut line = String::new();
    for seg in &arc.segments {
        // position of each universe label inside the segment's dense samples
        let slots: Vec<Option<usize>> = labels
            .iter()
            .map(|l| seg.labels().binary_search(l).ok())
            .collect();
        for sample in &seg.samples {
            line.clear();
            line.push_str(&fmt_real(sample.t));
            line.push(',');
            line.push_str(&seg.k.to_string());
            for slot in &slots {
                line.push(',');
                if let Some(i) = slot {
                    line.push_str(&fmt_real(sample.values[*i]));
                }
            }
            line.push('\n');
            sink.write_all(line.as_bytes())?;
        }
    }
    sink.flush()
}

pub const EVENTS_HEADER: &str = "t,k,kind,affected,pre_basis,post_basis";

pub fn write_events<W: Write>(arc: &HybridArc, mut sink: W) -> io::Result<()> {
    writeln!(sink, "{EVENTS_HEADER}")?;
    for j in &arc.jumps {
        writeln!(
            sink,
            "{},{},{},{},{},{}",
            fmt_real(j.time.t),
            j.time.k,
            j.kind,
            j.affected.joined(),
            j.pre_basis.joined(),
            j.post_basis.joined()
        )?;
    }
    sink.flush()
}

/// One parsed line of an event log.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRow {
    pub time: HybridTime,
    pub kind: JumpKind,
    pub affected: BasisSet,
    pub pre_basis: BasisSet,
    pub post_basis: BasisSet,
}

pub fn read_events(text: &str) -> Result<Vec<EventRow>, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == EVENTS_HEADER => {}
        _ => return Err(ParseError::new(1, "missing event log header")),
    }
    let set = |s: &str, no: usize| -> Result<BasisSet, ParseError> {
        if s.is_empty() {
            return Ok(BasisSet::empty());
        }
        s.split(';')
            .map(|t| super::doc::parse_label(t, no))
            .collect()
    };
    lines
        .map(|(i, line)| {
            let no = i + 1;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(ParseError::new(no, "expected 6 fields"));
            }
            Ok(EventRow {
                time: HybridTime::new(
                    super::doc::parse_real(f[0], no)?,
                    f[1].parse()
                        .map_err(|_| ParseError::new(no, "bad jump counter"))?,
                ),
                kind: f[2].parse().map_err(|e: String| ParseError::new(no, e))?,
                affected: set(f[3], no)?,
                pre_basis: set(f[4], no)?,
                post_basis: set(f[5], no)?,
            })
        })
        .collect()
}

/// Whitespace-separated blocks in the gnuplot `index` layout: one block per
/// label that is ever present (`t value` rows, a blank line wherever the
/// species is absent), then an event block (`t k kind label` rows, one row
/// per affected label). Blocks are separated by two blank lines.
pub fn emit_plot_data<W: Write>(arc: &HybridArc, mut sink: W) -> io::Result<()> {
    let present = arc.labels_ever_present();
    let mut first_block = true;
    let mut separate = |sink: &mut W| -> io::Result<()> {
        if !std::mem::take(&mut first_block) {
            writeln!(sink)?;
            writeln!(sink)?;
        }
        Ok(())
    };
    for label in present.iter() {
        separate(&mut sink)?;
        match arc.names.get(&label) {
            Some(name) => writeln!(sink, "# species {label} {name}")?,
            None => writeln!(sink, "# species {label}")?,
        }
        let mut in_span = false;
        let mut had_span = false;
        for seg in &arc.segments {
            let Ok(pos) = seg.labels().binary_search(&label) else {
                in_span = false;
                continue;
            };
            if !in_span && had_span {
                writeln!(sink)?;
            }
            for s in &seg.samples {
                writeln!(sink, "{} {}", fmt_real(s.t), fmt_real(s.values[pos]))?;
            }
            in_span = true;
            had_span = true;
        }
    }
    if !arc.jumps.is_empty() {
        separate(&mut sink)?;
        writeln!(sink, "# events")?;
        for j in &arc.jumps {
            if j.affected.is_empty() {
                writeln!(sink, "{} {} {} -", fmt_real(j.time.t), j.time.k, j.kind)?;
            }
            for l in j.affected.iter() {
                writeln!(sink, "{} {} {} {l}", fmt_real(j.time.t), j.time.k, j.kind)?;
            }
        }
    }
    sink.flush()
}
