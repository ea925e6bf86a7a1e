//! Scenario documents: initial state, antibiotic course, therapy schedule,
//! jump thresholds and run settings.
//!
//! ```text
//! [initial]
//! 1 0.7
//! [antibiotic]
//! 0 4 1            # start end level, level held on [start, end)
//! [therapy]
//! @ 190            # event time, then `label value` lines
//! 9 0.85
//! [jumps]
//! beta = 1e-6
//! enable_auto_extinct = true
//! [appear]         # optional payload injected on autonomous appearance
//! 3 0.1
//! [run]
//! horizon = 600
//! dt = 0.01
//! scheme = cn      # euler | rk4 | cn
//! [names]          # optional display names
//! 9 Clostridium difficile
//! ```
//!
//! A therapy event whose labels sit strictly inside the current basis is a
//! removal: its labels are the species to retain, and their values are
//! injected on top.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::doc::{fmt_exact, parse_bool, Document, Line, ParseError, Section};
use crate::algebra::{Label, Universe, VBVector};
use crate::flow::{AntibioticSignal, IntegratorSettings, Scheme, SignalPiece};
use crate::hybrid::JumpConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct TherapyEvent {
    pub time: f64,
    pub payload: VBVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub initial_state: VBVector,
    pub antibiotic: AntibioticSignal,
    pub therapy: Vec<TherapyEvent>,
    pub jumps: JumpConfig,
    /// Days.
    pub horizon: f64,
    pub integrator: IntegratorSettings,
    pub names: BTreeMap<Label, String>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("horizon must be finite and >= 0, got {0}")]
    Horizon(f64),
    #[error("dt must be finite and > 0, got {0}")]
    StepSize(f64),
    #[error("therapy times must be strictly increasing, non-negative and before the horizon (offending time {0})")]
    TherapyTime(f64),
    #[error("label {label} in {place} is not part of the universe")]
    UnknownLabel { label: Label, place: String },
    #[error("{0}")]
    Jumps(String),
    #[error("non-finite abundance for label {0} in the initial state")]
    NonFinite(Label),
}

impl Scenario {
    /// A flow-only scenario with default thresholds and settings.
    pub fn new(initial_state: VBVector, horizon: f64) -> Self {
        Scenario {
            initial_state,
            antibiotic: AntibioticSignal::none(),
            therapy: Vec::new(),
            jumps: JumpConfig::default(),
            horizon,
            integrator: IntegratorSettings::default(),
            names: BTreeMap::new(),
        }
    }

    pub fn validate(&self, universe: &Universe) -> Result<(), ScenarioError> {
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(ScenarioError::Horizon(self.horizon));
        }
        let dt = self.integrator.dt;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(ScenarioError::StepSize(dt));
        }
        let check = |x: &VBVector, place: String| {
            universe.check(x).map_err(|e| match e {
                crate::algebra::AlgebraError::UnknownLabel(label) => {
                    ScenarioError::UnknownLabel { label, place }
                }
                other => ScenarioError::Jumps(other.to_string()),
            })
        };
        check(&self.initial_state, "the initial state".into())?;
        if let Some((l, _)) = self.initial_state.iter().find(|(_, v)| !v.is_finite()) {
            return Err(ScenarioError::NonFinite(*l));
        }
        let mut prev = f64::NEG_INFINITY;
        for ev in &self.therapy {
            if !(ev.time > prev) || ev.time < 0.0 || !(ev.time < self.horizon) {
                return Err(ScenarioError::TherapyTime(ev.time));
            }
            prev = ev.time;
            check(&ev.payload, format!("the therapy event at t = {}", ev.time))?;
        }
        if let Some(p) = &self.jumps.appear_payload {
            check(p, "the appearance payload".into())?;
        }
        self.jumps
            .validate()
            .map_err(|e| ScenarioError::Jumps(e.to_string()))
    }

    /// Serializes to the scenario document format; `load_scenario` reads it
    /// back to an identical value.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        let vec_lines = |out: &mut String, x: &VBVector| {
            for (l, v) in x.iter() {
                let _ = writeln!(out, "{l} {}", fmt_exact(*v));
            }
        };
        out.push_str("[initial]\n");
        vec_lines(&mut out, &self.initial_state);
        out.push_str("\n[antibiotic]\n");
        for p in self.antibiotic.pieces() {
            let _ = writeln!(
                out,
                "{} {} {}",
                fmt_exact(p.start),
                fmt_exact(p.end),
                fmt_exact(p.level)
            );
        }
        out.push_str("\n[therapy]\n");
        for ev in &self.therapy {
            let _ = writeln!(out, "@ {}", fmt_exact(ev.time));
            vec_lines(&mut out, &ev.payload);
        }
        let j = &self.jumps;
        let _ = write!(
            out,
            "\n[jumps]\nalpha = {}\nbeta = {}\nxi_plus = {}\nxi_minus = {}\n\
             enable_auto_appear = {}\nenable_auto_extinct = {}\n",
            fmt_exact(j.alpha),
            fmt_exact(j.beta),
            fmt_exact(j.xi_plus),
            fmt_exact(j.xi_minus),
            j.enable_auto_appear,
            j.enable_auto_extinct
        );
        if let Some(p) = &j.appear_payload {
            out.push_str("\n[appear]\n");
            vec_lines(&mut out, p);
        }
        let _ = write!(
            out,
            "\n[run]\nhorizon = {}\ndt = {}\nscheme = {}\n",
            fmt_exact(self.horizon),
            fmt_exact(self.integrator.dt),
            self.integrator.scheme
        );
        if !self.names.is_empty() {
            out.push_str("\n[names]\n");
            for (l, name) in &self.names {
                let _ = writeln!(out, "{l} {name}");
            }
        }
        out
    }
}

fn vector_from(
    lines: &[Line<'_>],
    universe: &Universe,
    place: &str,
) -> Result<VBVector, ParseError> {
    let mut coords = BTreeMap::new();
    for line in lines {
        line.expect_len(2, "`label value`")?;
        let label = line.label(0)?;
        if !universe.contains(label) {
            return Err(line.err(format!(
                "label {label} in {place} is not part of the universe"
            )));
        }
        if coords.insert(label, line.real(1)?).is_some() {
            return Err(line.err(format!("label {label} appears twice in {place}")));
        }
    }
    Ok(VBVector::from_pairs(coords))
}

fn therapy_events(sec: &Section<'_>, universe: &Universe) -> Result<Vec<TherapyEvent>, ParseError> {
    let mut events: Vec<TherapyEvent> = Vec::new();
    let mut i = 0;
    while i < sec.lines.len() {
        let head = &sec.lines[i];
        if head.tokens[0] != "@" {
            return Err(head.err("expected `@ <time>` to open a therapy event"));
        }
        head.expect_len(2, "`@ <time>`")?;
        let time = head.real(1)?;
        if let Some(prev) = events.last() {
            if !(time > prev.time) {
                return Err(head.err(format!(
                    "therapy event at t = {time} does not follow t = {}",
                    prev.time
                )));
            }
        }
        let end = sec.lines[i + 1..]
            .iter()
            .position(|l| l.tokens[0] == "@")
            .map_or(sec.lines.len(), |p| i + 1 + p);
        let payload = vector_from(
            &sec.lines[i + 1..end],
            universe,
            &format!("the therapy event at t = {time}"),
        )?;
        events.push(TherapyEvent { time, payload });
        i = end;
    }
    Ok(events)
}

pub fn load_scenario(text: &str, universe: &Universe) -> Result<Scenario, ParseError> {
    let doc = Document::parse(text)?;
    doc.reject_unknown(&[
        "initial",
        "antibiotic",
        "therapy",
        "jumps",
        "appear",
        "run",
        "names",
    ])?;

    let initial_sec = doc.require("initial")?;
    let initial_state = vector_from(&initial_sec.lines, universe, "[initial]")?;

    let mut pieces = Vec::new();
    if let Some(sec) = doc.section("antibiotic") {
        for line in &sec.lines {
            line.expect_len(3, "`start end level`")?;
            pieces.push(SignalPiece {
                start: line.real(0)?,
                end: line.real(1)?,
                level: line.real(2)?,
            });
        }
    }
    let antibiotic = AntibioticSignal::new(pieces).map_err(|e| {
        ParseError::new(
            doc.section("antibiotic").map_or(0, |s| s.line),
            e.to_string(),
        )
    })?;

    let therapy = match doc.section("therapy") {
        Some(sec) => therapy_events(sec, universe)?,
        None => Vec::new(),
    };

    let mut jumps = JumpConfig::default();
    if let Some(sec) = doc.section("jumps") {
        for line in &sec.lines {
            let (key, value) = line.key_value()?;
            let real = || super::doc::parse_real(value, line.no);
            match key {
                "alpha" => jumps.alpha = real()?,
                "beta" => jumps.beta = real()?,
                "xi_plus" => jumps.xi_plus = real()?,
                "xi_minus" => jumps.xi_minus = real()?,
                "enable_auto_appear" => jumps.enable_auto_appear = parse_bool(value, line.no)?,
                "enable_auto_extinct" => jumps.enable_auto_extinct = parse_bool(value, line.no)?,
                other => return Err(line.err(format!("unknown key `{other}` in [jumps]"))),
            }
        }
    }
    if let Some(sec) = doc.section("appear") {
        jumps.appear_payload = Some(vector_from(&sec.lines, universe, "[appear]")?);
    }

    let run_sec = doc.require("run")?;
    let mut horizon = None;
    let mut integrator = IntegratorSettings::default();
    for line in &run_sec.lines {
        let (key, value) = line.key_value()?;
        match key {
            "horizon" => {
                let h = super::doc::parse_real(value, line.no)?;
                if !(h >= 0.0) || !h.is_finite() {
                    return Err(line.err(format!("horizon must be finite and >= 0, got {h}")));
                }
                horizon = Some(h);
            }
            "dt" => integrator.dt = super::doc::parse_real(value, line.no)?,
            "scheme" => integrator.scheme = value.parse::<Scheme>().map_err(|e| line.err(e))?,
            other => return Err(line.err(format!("unknown key `{other}` in [run]"))),
        }
    }
    let horizon = horizon.ok_or_else(|| ParseError::new(run_sec.line, "[run] needs a horizon"))?;

    let mut names = BTreeMap::new();
    if let Some(sec) = doc.section("names") {
        for line in &sec.lines {
            if line.tokens.len() < 2 {
                return Err(line.err("expected `label name`"));
            }
            names.insert(line.label(0)?, line.tokens[1..].join(" "));
        }
    }

    let scenario = Scenario {
        initial_state,
        antibiotic,
        therapy,
        jumps,
        horizon,
        integrator,
        names,
    };
    scenario
        .validate(universe)
        .map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(scenario)
}
