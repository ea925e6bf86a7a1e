//! Command implementations behind the `varbasis` binary.
//!
//! Exit codes: 0 success, 1 self-check failure or output failure,
//! 2 unreadable or invalid input, 3 numerical failure during integration.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};
use thiserror::Error;

use crate::algebra::{BasisSet, Label, VBVector};
use crate::flow::{GlobalParams, Scheme};
use crate::hybrid::{self, classify_exogenous, ExogenousClass, HybridArc, HybridError, JumpKind};
use crate::scenario_io::{
    emit_plot_data, load_params, load_scenario, write_events, write_timeseries, Scenario,
};
use crate::selfcheck::{run_selfcheck, SelfCheckReport};

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const EVENTS_FILE: &str = "events.csv";
pub const PLOT_FILE: &str = "plot.dat";
pub const REPORT_FILE: &str = "report.txt";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Numerical(String),
    #[error("writing {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    SelfCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Invalid(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Output { .. } | CliError::SelfCheck(_) => 1,
        }
    }
}

impl From<HybridError> for CliError {
    fn from(e: HybridError) -> Self {
        match e {
            HybridError::Numerical { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

/// Command-line values that replace the scenario file's settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub beta: Option<f64>,
    pub scheme: Option<Scheme>,
    pub no_auto_extinct: bool,
    pub horizon: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, scenario: &mut Scenario) {
        if let Some(dt) = self.dt {
            scenario.integrator.dt = dt;
        }
        if let Some(scheme) = self.scheme {
            scenario.integrator.scheme = scheme;
        }
        if let Some(beta) = self.beta {
            scenario.jumps.beta = beta;
        }
        if self.no_auto_extinct {
            scenario.jumps.enable_auto_extinct = false;
        }
        if let Some(h) = self.horizon {
            scenario.horizon = h;
            let before = scenario.therapy.len();
            scenario.therapy.retain(|ev| ev.time < h);
            if scenario.therapy.len() < before {
                warn!(
                    "--horizon {h} drops {} therapy events scheduled at or after it",
                    before - scenario.therapy.len()
                );
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub status: i32,
    pub counts: BTreeMap<JumpKind, usize>,
    pub final_state: VBVector,
    pub final_time: f64,
    pub duration: Duration,
}

impl RunReport {
    pub fn from_arc(arc: &HybridArc, duration: Duration) -> Self {
        RunReport {
            status: 0,
            counts: JumpKind::ALL
                .into_iter()
                .map(|k| (k, arc.jump_count(k)))
                .collect(),
            final_state: arc.final_state(),
            final_time: arc.segments.last().map_or(0.0, |s| s.end),
            duration,
        }
    }

    pub fn count(&self, kind: JumpKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn exogenous(&self) -> usize {
        self.count(JumpKind::ExogenousAdd) + self.count(JumpKind::ExogenousRemove)
    }

    pub fn autonomous(&self) -> usize {
        self.count(JumpKind::AutoAppear) + self.count(JumpKind::AutoExtinct)
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status {}", self.status)?;
        for (kind, n) in &self.counts {
            writeln!(f, "jumps {kind} {n}")?;
        }
        writeln!(f, "final_time {}", self.final_time)?;
        writeln!(f, "final_basis {}", self.final_state.basis())?;
        writeln!(f, "final_state {}", self.final_state)?;
        write!(f, "wall_clock_ms {}", self.duration.as_millis())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

pub fn load_inputs(
    params_path: &Path,
    scenario_path: &Path,
) -> Result<(GlobalParams, Scenario), CliError> {
    let params = load_params(&read(params_path)?).map_err(|e| CliError::Input {
        path: params_path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let scenario =
        load_scenario(&read(scenario_path)?, params.universe()).map_err(|e| CliError::Input {
            path: scenario_path.to_path_buf(),
            msg: e.to_string(),
        })?;
    Ok((params, scenario))
}

fn write_file<F>(dir: &Path, name: &str, f: F) -> Result<(), CliError>
where
    F: FnOnce(BufWriter<File>) -> std::io::Result<()>,
{
    let path = dir.join(name);
    File::create(&path)
        .and_then(|file| f(BufWriter::new(file)))
        .map_err(|source| CliError::Output { path, source })
}

/// Loads, simulates and writes the time series, event log, plot data and run
/// report into `out_dir`.
pub fn cmd_simulate(
    params_path: &Path,
    scenario_path: &Path,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let (params, mut scenario) = load_inputs(params_path, scenario_path)?;
    overrides.apply(&mut scenario);
    scenario
        .validate(params.universe())
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    info!(
        "simulating {} days with dt = {} ({})",
        scenario.horizon, scenario.integrator.dt, scenario.integrator.scheme
    );
    let arc = hybrid::run(&params, &scenario)?;

    fs::create_dir_all(out_dir).map_err(|source| CliError::Output {
        path: out_dir.to_path_buf(),
        source,
    })?;
    write_file(out_dir, TIMESERIES_FILE, |w| write_timeseries(&arc, w))?;
    write_file(out_dir, EVENTS_FILE, |w| write_events(&arc, w))?;
    write_file(out_dir, PLOT_FILE, |w| emit_plot_data(&arc, w))?;
    let report = RunReport::from_arc(&arc, started.elapsed());
    write_file(out_dir, REPORT_FILE, |mut w| {
        use std::io::Write;
        writeln!(w, "{report}")
    })?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Cross-checks a parsed scenario against its parameters without simulating.
///
/// The basis is tracked through the therapy schedule as if no autonomous
/// jump fired; that basis is the largest one the state can have at each
/// event, so a removal classified against it is only "plausible".
pub fn check_scenario(params: &GlobalParams, scenario: &Scenario) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |severity, message: String| out.push(Diagnostic { severity, message });
    if let Err(e) = scenario.validate(params.universe()) {
        push(Severity::Error, e.to_string());
        return out;
    }
    let flowable = |b: &BasisSet| b.iter().find(|l| !params.has_params(*l));
    if let Some(l) = flowable(&scenario.initial_state.basis()) {
        push(
            Severity::Error,
            format!("initial label {l} has no parameters"),
        );
    }
    let mut basis = scenario.initial_state.basis();
    for ev in &scenario.therapy {
        let probe = VBVector::constant_on(&basis, 1.0);
        let class = classify_exogenous(&probe, &ev.payload);
        let payload_basis = ev.payload.basis();
        if let Some(l) = flowable(&payload_basis) {
            push(
                Severity::Error,
                format!(
                    "therapy at t = {} names label {l}, which has no parameters",
                    ev.time
                ),
            );
        }
        match class {
            ExogenousClass::None => push(
                Severity::Warning,
                format!("therapy at t = {} is empty and will be ignored", ev.time),
            ),
            ExogenousClass::Add => {
                let next = basis.union(&payload_basis);
                push(
                    Severity::Info,
                    format!("t = {}: addition {basis} -> {next}", ev.time),
                );
                basis = next;
            }
            ExogenousClass::Remove => {
                push(
                    Severity::Info,
                    format!("t = {}: removal {basis} -> {payload_basis}", ev.time),
                );
                if scenario.jumps.enable_auto_extinct {
                    push(
                        Severity::Warning,
                        format!(
                            "t = {}: removal retains {payload_basis}; if one of these species goes \
                             extinct first, the event becomes an addition",
                            ev.time
                        ),
                    );
                }
                basis = payload_basis;
            }
        }
    }
    if let Some(p) = &scenario.jumps.appear_payload {
        if let Some(l) = flowable(&p.basis()) {
            push(
                Severity::Error,
                format!("appearance payload label {l} has no parameters"),
            );
        }
    }
    out
}

pub fn cmd_validate(params_path: &Path, scenario_path: &Path) -> Result<Vec<Diagnostic>, CliError> {
    let (params, scenario) = load_inputs(params_path, scenario_path)?;
    let diags = check_scenario(&params, &scenario);
    match diags.iter().find(|d| d.severity == Severity::Error) {
        Some(d) => Err(CliError::Invalid(d.message.clone())),
        None => Ok(diags),
    }
}

pub fn cmd_selfcheck(trials: usize, seed: u64) -> Result<SelfCheckReport, CliError> {
    let report = run_selfcheck(trials, seed);
    if report.passed() {
        Ok(report)
    } else {
        Err(CliError::SelfCheck(report.to_string()))
    }
}

/// Labels whose abundance in `arc` is ever written, in ascending order.
pub fn labels_ever_present(arc: &HybridArc) -> Vec<Label> {
    arc.labels_ever_present().iter().collect()
}
