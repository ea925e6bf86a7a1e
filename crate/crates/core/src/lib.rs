//! Generalized Lotka–Volterra dynamics on a variable-basis state space.
//!
//! The state is a [`VBVector`]: a set of present species together with their
//! abundances. Abundances flow continuously under the gLV equations between
//! discrete jumps that add species (`+_∪`) or remove them (`+_∩`), either on
//! a therapy schedule or when an abundance crosses a threshold.

pub mod algebra;
pub mod cli;
pub mod flow;
pub mod hybrid;
pub mod scenario_io;
pub mod selfcheck;

pub use algebra::{AlgebraError, BasisSet, Label, Universe, VBVector};
pub use flow::{AntibioticSignal, GlobalParams, IntegratorSettings, RestrictedParams, Scheme};
pub use hybrid::{run, HybridArc, HybridError, HybridTime, JumpConfig, JumpKind, JumpRecord};
pub use scenario_io::{load_params, load_scenario, Scenario, TherapyEvent};
