//! Hybrid flow/jump execution.
//!
//! Between jumps the state flows on a fixed basis. At a jump the basis may
//! grow (`+_∪`) or shrink (`+_∩`). Jumps come from two sources:
//!
//! * exogenous therapy inputs `v`, classified against the current basis;
//! * autonomous threshold crossings: extinction when `0 < x_j <= beta`,
//!   appearance when `x_j >= alpha`.
//!
//! Within one instant the order is exogenous, then extinction, then
//! appearance. Each jump increments the hybrid counter `k` by one, so several
//! jumps at the same `t` occupy successive instants `(t, k), (t, k + 1), ...`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use thiserror::Error;

use crate::algebra::{AlgebraError, BasisSet, Label, Universe, VBVector};
use crate::flow::{FlowError, GlobalParams, Integrator, RestrictedParams};
use crate::scenario_io::Scenario;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HybridError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Params(#[from] FlowError),
    #[error("integration failed after last valid time {last_valid}: {source}")]
    Numerical {
        last_valid: HybridTime,
        source: FlowError,
    },
    #[error("contract violation: {0}")]
    Contract(String),
}

/// A point `(t, k)` of a hybrid time domain, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridTime {
    pub t: f64,
    pub k: usize,
}

impl HybridTime {
    pub fn new(t: f64, k: usize) -> Self {
        HybridTime { t, k }
    }
}

impl PartialOrd for HybridTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.t.partial_cmp(&other.t)? {
            Ordering::Equal => Some(self.k.cmp(&other.k)),
            o => Some(o),
        }
    }
}

impl fmt::Display for HybridTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, k={})", self.t, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JumpKind {
    ExogenousAdd,
    ExogenousRemove,
    AutoAppear,
    AutoExtinct,
}

impl JumpKind {
    pub const ALL: [JumpKind; 4] = [
        JumpKind::ExogenousAdd,
        JumpKind::ExogenousRemove,
        JumpKind::AutoAppear,
        JumpKind::AutoExtinct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            JumpKind::ExogenousAdd => "EXOGENOUS_ADD",
            JumpKind::ExogenousRemove => "EXOGENOUS_REMOVE",
            JumpKind::AutoAppear => "AUTO_APPEAR",
            JumpKind::AutoExtinct => "AUTO_EXTINCT",
        }
    }

    pub fn is_exogenous(self) -> bool {
        matches!(self, JumpKind::ExogenousAdd | JumpKind::ExogenousRemove)
    }
}

impl fmt::Display for JumpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for JumpKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        JumpKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown jump kind `{s}`"))
    }
}

/// One discrete transition.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpRecord {
    /// Instant the jump leaves; the post-jump segment has counter `time.k + 1`.
    pub time: HybridTime,
    pub kind: JumpKind,
    pub pre_basis: BasisSet,
    pub post_basis: BasisSet,
    /// Labels added or removed by the jump.
    pub affected: BasisSet,
    /// Coordinates that crossed `alpha`; empty except for `AutoAppear`.
    pub triggers: BasisSet,
    pub pre_state: VBVector,
    pub post_state: VBVector,
}

impl JumpRecord {
    fn new(time: HybridTime, kind: JumpKind, pre: &VBVector, post: VBVector) -> Self {
        let pre_basis = pre.basis();
        let post_basis = post.basis();
        let affected = match kind {
            JumpKind::ExogenousAdd | JumpKind::AutoAppear => post_basis.difference(&pre_basis),
            JumpKind::ExogenousRemove | JumpKind::AutoExtinct => pre_basis.difference(&post_basis),
        };
        JumpRecord {
            time,
            kind,
            pre_basis,
            post_basis,
            affected,
            triggers: BasisSet::empty(),
            pre_state: pre.clone(),
            post_state: post,
        }
    }

    /// Additions never shrink the basis and removals strictly shrink it.
    ///
    /// Additions may leave the basis unchanged: an exogenous input on labels
    /// that are all present, or an appearance with an empty payload.
    pub fn basis_consistent(&self) -> bool {
        match self.kind {
            JumpKind::ExogenousAdd | JumpKind::AutoAppear => {
                self.pre_basis.is_subset(&self.post_basis)
            }
            JumpKind::ExogenousRemove | JumpKind::AutoExtinct => {
                self.post_basis.is_strict_subset(&self.pre_basis)
            }
        }
    }
}

/// Thresholds and perturbations of the autonomous jump sets.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpConfig {
    pub alpha: f64,
    pub beta: f64,
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub enable_auto_appear: bool,
    pub enable_auto_extinct: bool,
    /// Species injected on appearance; must be disjoint from the current basis.
    pub appear_payload: Option<VBVector>,
}

impl Default for JumpConfig {
    fn default() -> Self {
        JumpConfig {
            alpha: f64::INFINITY,
            beta: 1e-6,
            xi_plus: 0.01,
            xi_minus: 0.0,
            enable_auto_appear: false,
            enable_auto_extinct: true,
            appear_payload: None,
        }
    }
}

impl JumpConfig {
    pub fn validate(&self) -> Result<(), HybridError> {
        if !(self.alpha > 0.0) {
            return Err(HybridError::Config(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(HybridError::Config(format!(
                "beta must be finite and > 0, got {}",
                self.beta
            )));
        }
        if !self.xi_plus.is_finite() || !self.xi_minus.is_finite() {
            return Err(HybridError::Config(
                "xi_plus and xi_minus must be finite".into(),
            ));
        }
        if self.enable_auto_appear && self.enable_auto_extinct && self.beta >= self.alpha {
            return Err(HybridError::Config(format!(
                "beta ({}) must be below alpha ({}) when both autonomous jump sets are enabled",
                self.beta, self.alpha
            )));
        }
        Ok(())
    }
}

/// Fire-once bookkeeping that keeps appearance jumps from repeating forever.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZenoGuard {
    /// Labels already credited with triggering an appearance.
    pub fired_appear: BasisSet,
    /// Last extinction condition processed, as `(step index, basis)`.
    pub last_extinct: Option<(usize, BasisSet)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExogenousClass {
    Add,
    Remove,
    None,
}

/// Classifies a therapy input against the current state.
///
/// `v` lists the species to retain when its basis is strictly inside the
/// current basis; otherwise it injects abundance on the united basis.
pub fn classify_exogenous(x: &VBVector, v: &VBVector) -> ExogenousClass {
    if v.is_empty() {
        return ExogenousClass::None;
    }
    let (b, d) = (x.basis(), v.basis());
    if d.is_strict_subset(&b) {
        ExogenousClass::Remove
    } else {
        ExogenousClass::Add
    }
}

pub fn apply_exogenous(
    x: &VBVector,
    v: &VBVector,
    at: HybridTime,
) -> Result<(VBVector, JumpRecord), HybridError> {
    let (post, kind) = match classify_exogenous(x, v) {
        ExogenousClass::Add => (x.union_add(v), JumpKind::ExogenousAdd),
        ExogenousClass::Remove => (x.inter_add(v), JumpKind::ExogenousRemove),
        ExogenousClass::None => {
            return Err(HybridError::Contract(
                "apply_exogenous called with an empty input".into(),
            ))
        }
    };
    let record = JumpRecord::new(at, kind, x, post.clone());
    Ok((post, record))
}

/// Labels `j` with `0 < x_j <= beta`.
pub fn detect_auto_extinct(x: &VBVector, cfg: &JumpConfig) -> BasisSet {
    x.iter()
        .filter(|(_, &v)| v > 0.0 && v <= cfg.beta)
        .map(|(l, _)| *l)
        .collect()
}

/// Removes `doomed` in one jump and shifts the retained coordinates by
/// `xi_minus`. Returns `None` when there is nothing to remove. Removing the
/// whole basis yields the empty-basis vector.
pub fn apply_auto_extinct(
    x: &VBVector,
    doomed: &BasisSet,
    cfg: &JumpConfig,
    at: HybridTime,
) -> Option<(VBVector, JumpRecord)> {
    if doomed.is_empty() {
        return None;
    }
    let retained = x.basis().difference(doomed);
    let h = VBVector::constant_on(&retained, cfg.xi_minus);
    let post = x.inter_add(&h);
    let mut record = JumpRecord::new(at, JumpKind::AutoExtinct, x, post.clone());
    record.affected = doomed.intersection(&x.basis());
    Some((post, record))
}

/// Labels with `x_j >= alpha` that have not triggered an appearance before.
pub fn detect_auto_appear(x: &VBVector, cfg: &JumpConfig, guard: &ZenoGuard) -> BasisSet {
    x.iter()
        .filter(|(l, &v)| v >= cfg.alpha && !guard.fired_appear.contains(**l))
        .map(|(l, _)| *l)
        .collect()
}

/// `x +_∪ (xi_plus · 1(x) +_∪ payload)`; the triggering labels are marked
/// in `guard` so they never fire again.
pub fn apply_auto_appear(
    x: &VBVector,
    cfg: &JumpConfig,
    guard: &mut ZenoGuard,
    at: HybridTime,
) -> Result<(VBVector, JumpRecord), HybridError> {
    let triggers = detect_auto_appear(x, cfg, guard);
    if triggers.is_empty() {
        return Err(HybridError::Contract(
            "apply_auto_appear called without a triggering coordinate".into(),
        ));
    }
    let payload = cfg.appear_payload.clone().unwrap_or_default();
    let overlap = payload.basis().intersection(&x.basis());
    if !overlap.is_empty() {
        return Err(HybridError::Config(format!(
            "appearance payload labels {overlap} are already present in the state"
        )));
    }
    let g = x.unit_from().scale(cfg.xi_plus).union_add(&payload);
    let post = x.union_add(&g);
    for l in triggers.iter() {
        guard.fired_appear.insert(l);
    }
    let mut record = JumpRecord::new(at, JumpKind::AutoAppear, x, post.clone());
    record.triggers = triggers;
    Ok((post, record))
}

/// One stored point of a segment, dense over the segment's labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub values: Vec<f64>,
}

/// A flow interval `[start, end]` with counter `k` on a fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub k: usize,
    pub start: f64,
    pub end: f64,
    pub basis: BasisSet,
    labels: Vec<Label>,
    pub samples: Vec<Sample>,
}

impl Segment {
    fn open(k: usize, t: f64, x: &VBVector) -> Self {
        Segment {
            k,
            start: t,
            end: t,
            basis: x.basis(),
            labels: x.labels().collect(),
            samples: vec![Sample {
                t,
                values: x.values(),
            }],
        }
    }

    fn push(&mut self, t: f64, values: &[f64]) {
        self.end = t;
        self.samples.push(Sample {
            t,
            values: values.to_vec(),
        });
    }

    /// Segment labels in ascending order; sample values follow this order.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn state(&self, i: usize) -> VBVector {
        VBVector::from_dense(&self.labels, &self.samples[i].values)
    }

    pub fn last_state(&self) -> VBVector {
        self.state(self.samples.len() - 1)
    }

    pub fn value(&self, i: usize, label: Label) -> Option<f64> {
        let pos = self.labels.binary_search(&label).ok()?;
        Some(self.samples[i].values[pos])
    }
}

/// A completed run: basis-stamped segments separated by jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridArc {
    pub universe: Universe,
    pub names: BTreeMap<Label, String>,
    pub segments: Vec<Segment>,
    pub jumps: Vec<JumpRecord>,
}

impl HybridArc {
    pub fn final_state(&self) -> VBVector {
        self.segments
            .last()
            .map(Segment::last_state)
            .unwrap_or_default()
    }

    pub fn jump_count(&self, kind: JumpKind) -> usize {
        self.jumps.iter().filter(|j| j.kind == kind).count()
    }

    /// Every label that is present in at least one segment.
    pub fn labels_ever_present(&self) -> BasisSet {
        self.segments
            .iter()
            .fold(BasisSet::empty(), |acc, s| acc.union(&s.basis))
    }

    /// Post-hoc check of the hybrid time domain: contiguous non-decreasing
    /// intervals, counters `0, 1, 2, ...`, one jump between each pair of
    /// segments, and a basis that only changes at jumps.
    pub fn validate(&self) -> Result<(), String> {
        if self.segments.len() != self.jumps.len() + 1 {
            return Err(format!(
                "{} segments for {} jumps",
                self.segments.len(),
                self.jumps.len()
            ));
        }
        let times: Vec<HybridTime> = self.jumps.iter().map(|j| j.time).collect();
        check_jump_sequence(&times)?;
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.k != i {
                return Err(format!("segment {i} carries counter {}", seg.k));
            }
            if !(seg.start <= seg.end) {
                return Err(format!("segment {i} runs backwards"));
            }
            let first = seg
                .samples
                .first()
                .ok_or(format!("segment {i} has no samples"))?;
            let last = seg.samples.last().expect("non-empty");
            if first.t != seg.start || last.t != seg.end {
                return Err(format!("segment {i} samples do not span its interval"));
            }
            if seg.samples.windows(2).any(|w| w[1].t < w[0].t) {
                return Err(format!("segment {i} samples are not ordered"));
            }
            if seg
                .samples
                .iter()
                .any(|s| s.values.len() != seg.labels.len())
            {
                return Err(format!("segment {i} has a sample off its basis"));
            }
            if let Some(prev) = i.checked_sub(1).map(|p| &self.segments[p]) {
                let jump = &self.jumps[i - 1];
                if prev.end != seg.start || jump.time.t != seg.start {
                    return Err(format!("segments {} and {i} are not contiguous", i - 1));
                }
                if jump.pre_basis != prev.basis || jump.post_basis != seg.basis {
                    return Err(format!("jump {} does not match its segments' bases", i - 1));
                }
                if !jump.basis_consistent() {
                    return Err(format!(
                        "jump {} violates its kind's basis inclusion",
                        i - 1
                    ));
                }
            }
        }
        if let Some(first) = self.segments.first() {
            if first.start != 0.0 {
                return Err("arc does not start at t = 0".into());
            }
        }
        Ok(())
    }
}

/// Checks a jump sequence: counters `0, 1, 2, ...` and non-decreasing,
/// non-negative times.
pub fn check_jump_sequence(times: &[HybridTime]) -> Result<(), String> {
    for (i, ht) in times.iter().enumerate() {
        if ht.k != i {
            return Err(format!("jump {i} has counter {}", ht.k));
        }
        if !(ht.t >= 0.0) {
            return Err(format!("jump {i} at negative time {}", ht.t));
        }
        if i > 0 && !(times[i - 1] < *ht) {
            return Err(format!("jump {i} at {ht} does not follow {}", times[i - 1]));
        }
    }
    Ok(())
}

struct ArcBuilder {
    segments: Vec<Segment>,
    current: Segment,
    jumps: Vec<JumpRecord>,
}

impl ArcBuilder {
    fn k(&self) -> usize {
        self.current.k
    }

    fn jump(&mut self, record: JumpRecord) {
        let next = Segment::open(self.current.k + 1, record.time.t, &record.post_state);
        debug!(
            "{} at {}: {} -> {}",
            record.kind, record.time, record.pre_basis, record.post_basis
        );
        self.segments
            .push(std::mem::replace(&mut self.current, next));
        self.jumps.push(record);
    }
}

/// Simulates `scenario` under `params` and returns the full hybrid arc.
///
/// Time is the grid `n · dt`; therapy times and the horizon are snapped to
/// the nearest grid point. Autonomous jump sets are evaluated at every grid
/// instant after the flow step and any scheduled input.
pub fn run(params: &GlobalParams, scenario: &Scenario) -> Result<HybridArc, HybridError> {
    let universe = params.universe();
    scenario
        .validate(universe)
        .map_err(|e| HybridError::Config(e.to_string()))?;
    let cfg = &scenario.jumps;
    let dt = scenario.integrator.dt;
    let n_steps = (scenario.horizon / dt).round() as usize;

    let mut schedule: BTreeMap<usize, &VBVector> = BTreeMap::new();
    for ev in &scenario.therapy {
        let n = (ev.time / dt).round() as usize;
        if schedule.insert(n, &ev.payload).is_some() {
            return Err(HybridError::Config(format!(
                "therapy at t = {} lands on an occupied step with dt = {dt}",
                ev.time
            )));
        }
    }

    let mut state = scenario.initial_state.clone();
    let mut rp: RestrictedParams = params.restrict(&state.basis())?;
    let mut xs = state.values();
    let mut integrator = Integrator::new(scenario.integrator);
    let mut guard = ZenoGuard::default();
    let mut arc = ArcBuilder {
        segments: Vec::new(),
        current: Segment::open(0, 0.0, &state),
        jumps: Vec::new(),
    };

    for n in 0..=n_steps {
        let t = n as f64 * dt;
        if n > 0 {
            let t_prev = (n - 1) as f64 * dt;
            integrator
                .step(&rp, &scenario.antibiotic, t_prev, &mut xs)
                .map_err(|source| HybridError::Numerical {
                    last_valid: HybridTime::new(t_prev, arc.k()),
                    source,
                })?;
            arc.current.push(t, &xs);
            state = VBVector::from_dense(&rp.labels, &xs);
        }
        let k_before = arc.k();

        if let Some(v) = schedule.get(&n) {
            if classify_exogenous(&state, v) != ExogenousClass::None {
                let (post, record) = apply_exogenous(&state, v, HybridTime::new(t, arc.k()))?;
                state = post;
                arc.jump(record);
            }
        }

        if cfg.enable_auto_extinct && guard.last_extinct.as_ref() != Some(&(n, state.basis())) {
            let doomed = detect_auto_extinct(&state, cfg);
            if let Some((post, record)) =
                apply_auto_extinct(&state, &doomed, cfg, HybridTime::new(t, arc.k()))
            {
                guard.last_extinct = Some((n, post.basis()));
                state = post;
                arc.jump(record);
            }
        }

        if cfg.enable_auto_appear && !detect_auto_appear(&state, cfg, &guard).is_empty() {
            // payload species already in the basis are not injected again
            let fresh = JumpConfig {
                appear_payload: cfg
                    .appear_payload
                    .as_ref()
                    .map(|p| p.project(&p.basis().difference(&state.basis()))),
                ..cfg.clone()
            };
            let (post, record) =
                apply_auto_appear(&state, &fresh, &mut guard, HybridTime::new(t, arc.k()))?;
            state = post;
            arc.jump(record);
        }

        if arc.k() != k_before {
            rp = params.restrict(&state.basis())?;
            xs = state.values();
        }

        if state.is_empty() && n < n_steps {
            let t_end = n_steps as f64 * dt;
            let skipped = schedule.range(n + 1..).count();
            if skipped > 0 {
                warn!("state reached the empty basis at t = {t}; {skipped} later therapy events not applied");
            }
            arc.current.push(t_end, &[]);
            break;
        }
    }

    let ArcBuilder {
        mut segments,
        current,
        jumps,
    } = arc;
    segments.push(current);
    Ok(HybridArc {
        universe: universe.clone(),
        names: if scenario.names.is_empty() {
            params.names().clone()
        } else {
            scenario.names.clone()
        },
        segments,
        jumps,
    })
}
