//! Constructive procedures: activation, the three-copy and two-copy
//! distillation protocols, charge measurements and the optical states used in
//! the demos.
//!
//! Everything is simulated exactly on the sparse Fock representation. Local
//! projections are applied to the full multi-copy state, probabilities are the
//! conditional post-selection probabilities of each step, and measurement
//! outcomes are enumerated or post-selected rather than sampled.

mod activation;
mod distill;
mod optics;
mod subspace;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::PureState;
use crate::ssr::SectorKey;

pub use activation::{build_activator, verify_activation};
pub use distill::{distill_auto, protocol_a, protocol_b};
pub use optics::{
    coherent_pair, make_coherent, make_two_mode_squeezed, qnd_measure, QndOutcome, Truncated, Truncation,
};
pub use subspace::{entangled_compressions, Compression, SubspaceChoice};

/// Tolerance below which a post-selection probability counts as zero.
pub const PROB_TOL: f64 = 1e-12;
/// Tolerance on the normalized output coefficients `lambda_+` and `lambda_-`.
pub const LAMBDA_TOL: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProtocolKind {
    Activation,
    ProtocolA,
    ProtocolB,
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtocolKind::Activation => "activation",
            ProtocolKind::ProtocolA => "A",
            ProtocolKind::ProtocolB => "B",
        })
    }
}

/// One projection or measurement, with its conditional success probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub action: String,
    pub probability: f64,
    pub sector: Option<SectorKey>,
}

impl StepRecord {
    fn new(action: impl Into<String>, probability: f64) -> Self {
        Self {
            action: action.into(),
            probability,
            sector: None,
        }
    }
}

/// Output coefficients in the `|S+>|S+>`, `|S->|S->` form. `plus`/`minus`
/// refer to the normalized output and normalized `|S±>`; the `raw_` values
/// are the coefficients of the unnormalized projected state against the
/// unnormalized `|S±> = |n n'> ± |n' n>`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lambdas {
    pub plus: Complex64,
    pub minus: Complex64,
    pub raw_plus: Complex64,
    pub raw_minus: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOutcome {
    pub protocol: ProtocolKind,
    pub success: bool,
    /// Product of the step probabilities.
    pub probability: f64,
    /// Normalized, locally invariant and entangled whenever `success`.
    pub output: Option<PureState>,
    pub transcript: Vec<StepRecord>,
    pub choice: Option<(SubspaceChoice, SubspaceChoice)>,
    pub lambdas: Option<Lambdas>,
    /// The product state that activated the final copy (activation and
    /// protocol A).
    pub activator: Option<PureState>,
    pub reason: Option<String>,
}

impl ProtocolOutcome {
    fn failure(protocol: ProtocolKind, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        Self {
            protocol,
            success: false,
            probability: 0.0,
            output: None,
            transcript: vec![StepRecord::new(format!("select subspace: {reason}"), 0.0)],
            choice: None,
            lambdas: None,
            activator: None,
            reason: Some(reason),
        }
    }

    pub fn step_product(&self) -> f64 {
        self.transcript.iter().map(|s| s.probability).product()
    }
}

/// Runs a chain of projections on a normalized state, recording the
/// conditional probability of each.
struct Run {
    state: PureState,
    transcript: Vec<StepRecord>,
}

impl Run {
    fn new(state: PureState) -> Self {
        Self {
            state,
            transcript: Vec::new(),
        }
    }

    fn alive(&self) -> bool {
        !self.state.is_empty()
    }

    /// Applies `op` and renormalizes. Returns false once the branch has
    /// vanished.
    fn step(&mut self, action: impl Into<String>, op: impl FnOnce(&PureState) -> PureState) -> bool {
        if !self.alive() {
            self.transcript.push(StepRecord::new(action, 0.0));
            return false;
        }
        let next = op(&self.state);
        let p = next.norm_sqr() / self.state.norm_sqr();
        if p <= PROB_TOL {
            self.transcript.push(StepRecord::new(action, 0.0));
            self.state = PureState::zero(self.state.layout());
            return false;
        }
        self.transcript.push(StepRecord::new(action, p));
        self.state = next.normalized().expect("nonzero branch");
        true
    }

    fn probability(&self) -> f64 {
        self.transcript.iter().map(|s| s.probability).product()
    }
}
