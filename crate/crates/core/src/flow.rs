//! Continuous gLV dynamics on the current basis.
//!
//! The flow is `f(x, u) = x ⊙ (ρ + W x + u ε)` with every parameter
//! restricted to the labels of `x`. Three fixed-step schemes advance it:
//! explicit Euler, classical RK4, and a diagonal semi-implicit
//! Crank–Nicolson variant (bracket frozen at the start of the step,
//! multiplicative factor averaged), which needs no linear solve.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{BasisSet, Label, Universe, VBVector};

/// Guard on the Crank–Nicolson denominator `1 - dt r / 2`.
pub const CN_SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("no parameters for label {0}")]
    MissingParams(Label),
    #[error("{what} has {got} entries, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("state basis {state} does not match parameter basis {params}")]
    BasisMismatch { state: BasisSet, params: BasisSet },
    #[error("coordinate of label {0} became non-finite")]
    Divergence(Label),
    #[error("Crank-Nicolson step is singular for label {label} (dt = {dt}); reduce dt")]
    StepSize { label: Label, dt: f64 },
    #[error("antibiotic pieces overlap or are malformed near t = {0}")]
    BadSignal(f64),
}

/// Universe-indexed gLV parameters.
///
/// Entries are total over the catalogued labels; reserve labels carry no
/// parameters, so any basis containing one cannot flow.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalParams {
    universe: Universe,
    names: BTreeMap<Label, String>,
    index: BTreeMap<Label, usize>,
    growth: Vec<f64>,
    interactions: Vec<f64>,
    susceptibility: Vec<f64>,
}

impl GlobalParams {
    /// Vectors and matrix rows follow `universe.known()` order; `interactions[p][q]`
    /// is the effect of species `q` on species `p`.
    pub fn new(
        universe: Universe,
        growth: Vec<f64>,
        interactions: Vec<Vec<f64>>,
        susceptibility: Vec<f64>,
    ) -> Result<Self, FlowError> {
        let n = universe.known().len();
        let check = |what, got| {
            if got == n {
                Ok(())
            } else {
                Err(FlowError::Dimension {
                    what,
                    expected: n,
                    got,
                })
            }
        };
        check("growth vector", growth.len())?;
        check("susceptibility vector", susceptibility.len())?;
        check("interaction matrix", interactions.len())?;
        for row in &interactions {
            check("interaction row", row.len())?;
        }
        let index = universe
            .known()
            .iter()
            .enumerate()
            .map(|(i, l)| (*l, i))
            .collect();
        Ok(GlobalParams {
            universe,
            names: BTreeMap::new(),
            index,
            growth,
            interactions: interactions.into_iter().flatten().collect(),
            susceptibility,
        })
    }

    pub fn with_names(mut self, names: BTreeMap<Label, String>) -> Self {
        self.names = names;
        self
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn names(&self) -> &BTreeMap<Label, String> {
        &self.names
    }

    pub fn has_params(&self, label: Label) -> bool {
        self.index.contains_key(&label)
    }

    pub fn growth(&self, label: Label) -> Option<f64> {
        self.index.get(&label).map(|&i| self.growth[i])
    }

    pub fn susceptibility(&self, label: Label) -> Option<f64> {
        self.index.get(&label).map(|&i| self.susceptibility[i])
    }

    /// `W_pq`, the effect of `q` on `p`.
    pub fn interaction(&self, p: Label, q: Label) -> Option<f64> {
        let n = self.growth.len();
        let i = *self.index.get(&p)?;
        let j = *self.index.get(&q)?;
        Some(self.interactions[i * n + j])
    }

    /// Sub-vectors and sub-matrix over `basis`, in ascending label order.
    pub fn restrict(&self, basis: &BasisSet) -> Result<RestrictedParams, FlowError> {
        let n = self.growth.len();
        let idx = basis
            .iter()
            .map(|l| {
                self.index
                    .get(&l)
                    .copied()
                    .ok_or(FlowError::MissingParams(l))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = idx.len();
        let mut w = Vec::with_capacity(m * m);
        for &i in &idx {
            w.extend(idx.iter().map(|&j| self.interactions[i * n + j]));
        }
        Ok(RestrictedParams {
            labels: basis.iter().collect(),
            rho: idx.iter().map(|&i| self.growth[i]).collect(),
            w,
            eps: idx.iter().map(|&i| self.susceptibility[i]).collect(),
        })
    }
}

/// Parameters restricted to one basis; `w` is row-major `dim × dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedParams {
    pub labels: Vec<Label>,
    pub rho: Vec<f64>,
    pub w: Vec<f64>,
    pub eps: Vec<f64>,
}

impl RestrictedParams {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn basis(&self) -> BasisSet {
        self.labels.iter().copied().collect()
    }

    /// `r = ρ + W x + u ε`.
    pub fn bracket(&self, x: &[f64], u: f64, out: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let row = &self.w[i * n..(i + 1) * n];
            let wx: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            out[i] = self.rho[i] + wx + u * self.eps[i];
        }
    }

    /// `x ⊙ (ρ + W x + u ε)` on dense coordinates.
    pub fn rhs(&self, x: &[f64], u: f64, out: &mut [f64]) {
        self.bracket(x, u, out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o *= xi;
        }
    }

    fn dense(&self, x: &VBVector) -> Result<Vec<f64>, FlowError> {
        if x.dim() != self.dim() || !x.labels().eq(self.labels.iter().copied()) {
            return Err(FlowError::BasisMismatch {
                state: x.basis(),
                params: self.basis(),
            });
        }
        Ok(x.values())
    }

    pub fn flow_rhs(&self, x: &VBVector, u: f64) -> Result<VBVector, FlowError> {
        let xs = self.dense(x)?;
        let mut out = vec![0.0; xs.len()];
        self.rhs(&xs, u, &mut out);
        Ok(VBVector::from_dense(&self.labels, &out))
    }
}

/// Piecewise-constant antibiotic level, zero outside every piece.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AntibioticSignal {
    pieces: Vec<SignalPiece>,
}

/// Level held on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPiece {
    pub start: f64,
    pub end: f64,
    pub level: f64,
}

impl AntibioticSignal {
    pub fn new(mut pieces: Vec<SignalPiece>) -> Result<Self, FlowError> {
        pieces.sort_by(|a, b| a.start.total_cmp(&b.start));
        for p in &pieces {
            if !(p.start < p.end) || !p.level.is_finite() {
                return Err(FlowError::BadSignal(p.start));
            }
        }
        for pair in pieces.windows(2) {
            if pair[1].start < pair[0].end {
                return Err(FlowError::BadSignal(pair[1].start));
            }
        }
        Ok(AntibioticSignal { pieces })
    }

    pub fn none() -> Self {
        AntibioticSignal::default()
    }

    pub fn pieces(&self) -> &[SignalPiece] {
        &self.pieces
    }

    pub fn level(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| p.start <= t && t < p.end)
            .map_or(0.0, |p| p.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    Euler,
    Rk4,
    #[default]
    CrankNicolson,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Euler => "euler",
            Scheme::Rk4 => "rk4",
            Scheme::CrankNicolson => "cn",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euler" => Ok(Scheme::Euler),
            "rk4" => Ok(Scheme::Rk4),
            "cn" => Ok(Scheme::CrankNicolson),
            other => Err(format!(
                "unknown scheme `{other}` (expected euler, rk4 or cn)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    pub scheme: Scheme,
    /// Step size in days.
    pub dt: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        IntegratorSettings {
            scheme: Scheme::CrankNicolson,
            dt: 0.01,
        }
    }
}

/// Fixed-step integrator with reusable stage buffers.
#[derive(Debug, Clone)]
pub struct Integrator {
    settings: IntegratorSettings,
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Integrator {
    pub fn new(settings: IntegratorSettings) -> Self {
        Integrator {
            settings,
            k: Default::default(),
            tmp: Vec::new(),
        }
    }

    pub fn settings(&self) -> IntegratorSettings {
        self.settings
    }

    /// Advances `x` in place from `t` to `t + dt`. The basis never changes.
    pub fn step(
        &mut self,
        rp: &RestrictedParams,
        signal: &AntibioticSignal,
        t: f64,
        x: &mut [f64],
    ) -> Result<(), FlowError> {
        let n = x.len();
        debug_assert_eq!(n, rp.dim());
        for k in &mut self.k {
            k.resize(n, 0.0);
        }
        self.tmp.resize(n, 0.0);
        let dt = self.settings.dt;
        match self.settings.scheme {
            Scheme::Euler => {
                let k1 = &mut self.k[0];
                rp.rhs(x, signal.level(t), k1);
                for (xi, ki) in x.iter_mut().zip(k1.iter()) {
                    *xi += dt * ki;
                }
            }
            Scheme::Rk4 => {
                let half = 0.5 * dt;
                let (u0, u_half, u1) = (
                    signal.level(t),
                    signal.level(t + half),
                    signal.level(t + dt),
                );
                let [k1, k2, k3, k4] = &mut self.k;
                let tmp = &mut self.tmp;
                rp.rhs(x, u0, k1);
                for i in 0..n {
                    tmp[i] = x[i] + half * k1[i];
                }
                rp.rhs(tmp, u_half, k2);
                for i in 0..n {
                    tmp[i] = x[i] + half * k2[i];
                }
                rp.rhs(tmp, u_half, k3);
                for i in 0..n {
                    tmp[i] = x[i] + dt * k3[i];
                }
                rp.rhs(tmp, u1, k4);
                for i in 0..n {
                    x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
            Scheme::CrankNicolson => {
                let r = &mut self.k[0];
                rp.bracket(x, signal.level(t), r);
                for i in 0..n {
                    let h = 0.5 * dt * r[i];
                    let denom = 1.0 - h;
                    if denom.abs() < CN_SINGULAR_TOL {
                        return Err(FlowError::StepSize {
                            label: rp.labels[i],
                            dt,
                        });
                    }
                    x[i] *= (1.0 + h) / denom;
                }
            }
        }
        match x.iter().position(|v| !v.is_finite()) {
            Some(i) => Err(FlowError::Divergence(rp.labels[i])),
            None => Ok(()),
        }
    }
}

/// One explicit step (Euler or RK4) on a basis-stamped state.
pub fn step_explicit(
    x: &VBVector,
    rp: &RestrictedParams,
    signal: &AntibioticSignal,
    t: f64,
    dt: f64,
    scheme: Scheme,
) -> Result<VBVector, FlowError> {
    assert!(
        scheme != Scheme::CrankNicolson,
        "step_explicit called with the semi-implicit scheme"
    );
    step_with(x, rp, signal, t, IntegratorSettings { scheme, dt })
}

/// One semi-implicit Crank–Nicolson step:
/// `x' = x (1 + dt r / 2) / (1 - dt r / 2)` with `r` evaluated at `x`.
pub fn step_crank_nicolson(
    x: &VBVector,
    rp: &RestrictedParams,
    signal: &AntibioticSignal,
    t: f64,
    dt: f64,
) -> Result<VBVector, FlowError> {
    step_with(
        x,
        rp,
        signal,
        t,
        IntegratorSettings {
            scheme: Scheme::CrankNicolson,
            dt,
        },
    )
}

fn step_with(
    x: &VBVector,
    rp: &RestrictedParams,
    signal: &AntibioticSignal,
    t: f64,
    settings: IntegratorSettings,
) -> Result<VBVector, FlowError> {
    let mut xs = rp.dense(x)?;
    Integrator::new(settings).step(rp, signal, t, &mut xs)?;
    Ok(VBVector::from_dense(&rp.labels, &xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn logistic(rho: f64, w: f64, eps: f64) -> GlobalParams {
        GlobalParams::new(Universe::range(1), vec![rho], vec![vec![w]], vec![eps]).unwrap()
    }

    fn one(v: f64) -> VBVector {
        VBVector::from_pairs([(1u32, v)])
    }

    #[test]
    fn rhs_hand_values() {
        let rp = logistic(1.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        assert_eq!(rp.flow_rhs(&one(2.0), 0.0).unwrap(), one(-2.0));
        assert_eq!(rp.flow_rhs(&one(1.0), 0.0).unwrap(), one(0.0));

        let rp = logistic(1.0, -1.0, -0.5)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        assert_eq!(rp.flow_rhs(&one(1.0), 1.0).unwrap(), one(-0.5));
    }

    #[test]
    fn rhs_rejects_basis_mismatch() {
        let rp = logistic(1.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let err = rp.flow_rhs(&VBVector::from_pairs([(2u32, 1.0)]), 0.0);
        assert!(matches!(err, Err(FlowError::BasisMismatch { .. })));
        assert!(rp.flow_rhs(&VBVector::zero_empty(), 0.0).is_err());
    }

    #[test]
    fn restrict_extracts_blocks() {
        let n = 11;
        let u = Universe::range(n as u32);
        let w: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (10 * (i + 1) + j + 1) as f64).collect())
            .collect();
        let p = GlobalParams::new(
            u.clone(),
            (1..=n).map(|i| i as f64).collect(),
            w,
            (1..=n).map(|i| -(i as f64)).collect(),
        )
        .unwrap();
        let rp = p.restrict(&BasisSet::from_ids([1, 4])).unwrap();
        assert_eq!(rp.rho, vec![1.0, 4.0]);
        assert_eq!(rp.eps, vec![-1.0, -4.0]);
        assert_eq!(rp.w, vec![11.0, 14.0, 41.0, 44.0]);

        let full = p.restrict(u.full_basis()).unwrap();
        assert_eq!(full.dim(), n);
        assert_eq!(full.w[n + 2], p.interaction(Label(2), Label(3)).unwrap());

        let empty = p.restrict(&BasisSet::empty()).unwrap();
        assert_eq!(empty.dim(), 0);
        assert!(empty.w.is_empty());

        assert_eq!(
            p.restrict(&BasisSet::from_ids([3, 12])),
            Err(FlowError::MissingParams(Label(12)))
        );
    }

    #[test]
    fn params_dimension_checked() {
        let err = GlobalParams::new(
            Universe::range(2),
            vec![1.0, 1.0],
            vec![vec![1.0, 0.0]],
            vec![0.0, 0.0],
        );
        assert!(matches!(err, Err(FlowError::Dimension { .. })));
    }

    #[test]
    fn euler_hand_step() {
        let rp = logistic(1.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let s = AntibioticSignal::none();
        let x1 = step_explicit(&one(2.0), &rp, &s, 0.0, 0.1, Scheme::Euler).unwrap();
        assert!((x1.get(Label(1)).unwrap() - 1.8).abs() < 1e-15);
    }

    #[test]
    fn cn_hand_step() {
        let rp = logistic(1.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let s = AntibioticSignal::none();
        // r = 1 - 2 = -1 at x = 2
        let x1 = step_crank_nicolson(&one(2.0), &rp, &s, 0.0, 0.1).unwrap();
        let expected = 2.0 * (1.0 - 0.05) / (1.0 + 0.05);
        assert!((x1.get(Label(1)).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 1.809_523_809_523_809_5).abs() < 1e-15);
    }

    #[test]
    fn cn_singular_step_is_reported() {
        // r = 2 at x = 0 with rho = 2, so 1 - dt r / 2 = 0 for dt = 1
        let rp = logistic(2.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let err = step_crank_nicolson(&one(0.0), &rp, &AntibioticSignal::none(), 0.0, 1.0);
        assert_eq!(
            err,
            Err(FlowError::StepSize {
                label: Label(1),
                dt: 1.0
            })
        );
    }

    #[test]
    fn divergence_is_reported() {
        let rp = logistic(1.0, 1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let err = step_explicit(
            &one(1e200),
            &rp,
            &AntibioticSignal::none(),
            0.0,
            1.0,
            Scheme::Euler,
        );
        assert_eq!(err, Err(FlowError::Divergence(Label(1))));
    }

    #[test]
    fn equilibrium_is_a_fixed_point_of_every_scheme() {
        let rp = logistic(1.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let s = AntibioticSignal::none();
        for scheme in [Scheme::Euler, Scheme::Rk4, Scheme::CrankNicolson] {
            let x = step_with(
                &one(1.0),
                &rp,
                &s,
                0.0,
                IntegratorSettings { scheme, dt: 0.1 },
            )
            .unwrap();
            assert_eq!(x, one(1.0), "{scheme}");
        }
    }

    #[test]
    fn tiny_step_is_near_identity() {
        let rp = logistic(1.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let s = AntibioticSignal::none();
        for scheme in [Scheme::Euler, Scheme::Rk4, Scheme::CrankNicolson] {
            let x = step_with(
                &one(2.0),
                &rp,
                &s,
                0.0,
                IntegratorSettings { scheme, dt: 1e-12 },
            )
            .unwrap();
            assert!(x.approx_eq(&one(2.0), 1e-11));
        }
    }

    #[test]
    fn cn_agrees_with_euler_to_second_order() {
        // Oracle: 1000 Euler steps of 1e-7 spanning one step of 1e-4.
        let rp = logistic(1.0, -1.0, 0.0)
            .restrict(&BasisSet::from_ids([1]))
            .unwrap();
        let s = AntibioticSignal::none();
        let mut fine = vec![2.0];
        let mut it = Integrator::new(IntegratorSettings {
            scheme: Scheme::Euler,
            dt: 1e-7,
        });
        for i in 0..1000 {
            it.step(&rp, &s, i as f64 * 1e-7, &mut fine).unwrap();
        }
        let dt = 1e-4;
        let cn = step_crank_nicolson(&one(2.0), &rp, &s, 0.0, dt).unwrap();
        let eu = step_explicit(&one(2.0), &rp, &s, 0.0, dt, Scheme::Euler).unwrap();
        let cn = cn.get(Label(1)).unwrap();
        let eu = eu.get(Label(1)).unwrap();
        assert!((cn - fine[0]).abs() < 10.0 * dt * dt);
        assert!((eu - fine[0]).abs() < 10.0 * dt * dt);
        assert!((cn - eu).abs() < 10.0 * dt * dt);
    }

    #[test]
    fn antibiotic_signal_is_left_closed() {
        let s = AntibioticSignal::new(vec![SignalPiece {
            start: 0.0,
            end: 4.0,
            level: 1.0,
        }])
        .unwrap();
        assert_eq!(s.level(0.0), 1.0);
        assert_eq!(s.level(3.99), 1.0);
        assert_eq!(s.level(4.0), 0.0);
        assert_eq!(s.level(-1.0), 0.0);
        let overlapping = AntibioticSignal::new(vec![
            SignalPiece {
                start: 0.0,
                end: 4.0,
                level: 1.0,
            },
            SignalPiece {
                start: 3.0,
                end: 5.0,
                level: 2.0,
            },
        ]);
        assert_eq!(overlapping, Err(FlowError::BadSignal(3.0)));
    }

    #[test]
    fn rk4_samples_signal_at_midpoint() {
        // x' = x * u(t) with u switching off at 0.05: only the first stage sees it.
        let p =
            GlobalParams::new(Universe::range(1), vec![0.0], vec![vec![0.0]], vec![1.0]).unwrap();
        let rp = p.restrict(&BasisSet::from_ids([1])).unwrap();
        let s = AntibioticSignal::new(vec![SignalPiece {
            start: 0.0,
            end: 0.05,
            level: 1.0,
        }])
        .unwrap();
        let x = step_explicit(&one(1.0), &rp, &s, 0.0, 0.1, Scheme::Rk4).unwrap();
        assert!((x.get(Label(1)).unwrap() - (1.0 + 0.1 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn scheme_round_trips_through_text() {
        for s in [Scheme::Euler, Scheme::Rk4, Scheme::CrankNicolson] {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert!("heun".parse::<Scheme>().is_err());
    }

    fn block_params() -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
        (
            proptest::collection::vec(-1.0f64..1.0, 4),
            proptest::collection::vec(proptest::collection::vec(-0.5f64..0.5, 4), 4),
            proptest::collection::vec(-1.0f64..0.0, 4),
            proptest::collection::vec(0.0f64..2.0, 4),
        )
    }

    proptest! {
        #[test]
        fn restriction_matches_block_diagonal_projection((rho, mut w, eps, x0) in block_params(), u in 0.0f64..1.0) {
            // Zero every coupling between {1,2} and {3,4}.
            for i in 0..4 {
                for j in 0..4 {
                    if (i < 2) != (j < 2) {
                        w[i][j] = 0.0;
                    }
                }
            }
            let p = GlobalParams::new(Universe::range(4), rho, w, eps).unwrap();
            let full_basis = BasisSet::from_ids([1, 2, 3, 4]);
            let sub = BasisSet::from_ids([1, 2]);
            let x = VBVector::from_pairs((1u32..=4).zip(x0.iter().copied()));
            let full = p.restrict(&full_basis).unwrap().flow_rhs(&x, u).unwrap();
            let part = p.restrict(&sub).unwrap().flow_rhs(&x.project(&sub), u).unwrap();
            prop_assert!(full.project(&sub).approx_eq(&part, 1e-12));
        }

        #[test]
        fn steps_keep_the_basis(x0 in proptest::collection::vec(0.0f64..2.0, 3), dt in 1e-4f64..0.05) {
            let p = GlobalParams::new(
                Universe::range(3),
                vec![0.5, 0.2, -0.1],
                vec![vec![-1.0, 0.1, 0.0], vec![0.2, -0.8, 0.1], vec![0.0, 0.3, -0.5]],
                vec![-1.0, 0.0, 0.5],
            ).unwrap();
            let b = BasisSet::from_ids([1, 2, 3]);
            let rp = p.restrict(&b).unwrap();
            let x = VBVector::from_pairs((1u32..=3).zip(x0));
            let s = AntibioticSignal::none();
            for scheme in [Scheme::Euler, Scheme::Rk4, Scheme::CrankNicolson] {
                let y = step_with(&x, &rp, &s, 0.0, IntegratorSettings { scheme, dt }).unwrap();
                prop_assert_eq!(y.basis(), b.clone());
            }
        }
    }
}
