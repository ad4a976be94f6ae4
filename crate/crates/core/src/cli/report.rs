//! Machine-readable reports.
//!
//! Every float goes through [`round12`] when a section is built, so the
//! document holds exactly what it serializes to and a JSON round trip
//! reproduces it bit for bit. Key order is the field order below.

use serde::{Deserialize, Serialize};

use crate::classify::ClassificationReport;
use crate::fock::PureState;
use crate::oracle::OracleVerdict;
use crate::protocols::{ProtocolOutcome, SubspaceChoice};
use crate::ssr::SectorKey;

use super::parse::render;

pub const SCHEMA: &str = "ssr-ent/1";

/// Rounds to 12 significant digits; negative zero and non-finite values
/// become zero.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub version: String,
    pub command: String,
    pub rule: String,
    pub input: Option<InputEcho>,
    pub classification: Option<ClassificationSection>,
    pub protocol: Option<ProtocolSection>,
    pub twirl: Option<TwirlSection>,
    pub demo: Option<DemoSection>,
    pub error: Option<ErrorSection>,
}

impl ReportDocument {
    pub fn new(command: &str, rule: impl ToString) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            rule: rule.to_string(),
            input: None,
            classification: None,
            protocol: None,
            twirl: None,
            demo: None,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub text: String,
    pub original_norm: f64,
    pub state: StateSection,
}

impl InputEcho {
    pub fn new(text: &str, state: &PureState, original_norm: f64) -> Self {
        Self {
            text: text.to_string(),
            original_norm: round12(original_norm),
            state: StateSection::new(state),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub label: String,
    pub value: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSection {
    pub layout: String,
    pub expression: String,
    pub amplitudes: Vec<Amplitude>,
}

impl StateSection {
    pub fn new(psi: &PureState) -> Self {
        Self {
            layout: psi.layout().to_string(),
            expression: render(psi),
            amplitudes: psi
                .iter()
                .map(|(l, a)| Amplitude {
                    label: l.to_string(),
                    value: [round12(a.re), round12(a.im)],
                })
                .collect(),
        }
    }
}

fn sector_pair(s: SectorKey) -> [u32; 2] {
    [s.alice_charge, s.bob_charge]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorWeight {
    pub sector: [u32; 2],
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSection {
    pub copies: usize,
    pub sector: [u32; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub class: String,
    pub is_product: bool,
    pub is_locally_invariant: bool,
    pub distillation_number: Option<u8>,
    pub witness: Option<WitnessSection>,
    pub schmidt_coefficients: Vec<f64>,
    pub sectors: Vec<SectorWeight>,
}

impl ClassificationSection {
    pub fn new(
        report: &ClassificationReport,
        schmidt: &[f64],
        sectors: impl IntoIterator<Item = (SectorKey, f64)>,
    ) -> Self {
        Self {
            class: report.class.to_string(),
            is_product: report.is_product,
            is_locally_invariant: report.is_locally_invariant,
            distillation_number: report.distillation_number,
            witness: report.witness.map(|w| WitnessSection {
                copies: w.copies,
                sector: sector_pair(w.sector),
            }),
            schmidt_coefficients: schmidt.iter().copied().map(round12).collect(),
            sectors: sectors
                .into_iter()
                .map(|(k, w)| SectorWeight {
                    sector: sector_pair(k),
                    weight: round12(w),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSection {
    pub action: String,
    pub probability: f64,
    pub sector: Option<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSection {
    pub plus: [f64; 2],
    pub minus: [f64; 2],
    pub raw_plus: [f64; 2],
    pub raw_minus: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceSection {
    pub alice: [String; 2],
    pub bob: [String; 2],
}

fn ket_pair(c: &SubspaceChoice) -> [String; 2] {
    [c.ket1.to_string(), c.ket2.to_string()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSection {
    pub protocol: String,
    pub success: bool,
    pub probability: f64,
    pub steps: Vec<StepSection>,
    pub subspaces: Option<SubspaceSection>,
    pub lambdas: Option<LambdaSection>,
    pub activator: Option<StateSection>,
    pub output: Option<StateSection>,
    pub reason: Option<String>,
}

impl ProtocolSection {
    pub fn new(out: &ProtocolOutcome) -> Self {
        let c = |z: num_complex::Complex64| [round12(z.re), round12(z.im)];
        Self {
            protocol: out.protocol.to_string(),
            success: out.success,
            probability: round12(out.probability),
            steps: out
                .transcript
                .iter()
                .map(|s| StepSection {
                    action: s.action.clone(),
                    probability: round12(s.probability),
                    sector: s.sector.map(sector_pair),
                })
                .collect(),
            subspaces: out.choice.as_ref().map(|(a, b)| SubspaceSection {
                alice: ket_pair(a),
                bob: ket_pair(b),
            }),
            lambdas: out.lambdas.map(|l| LambdaSection {
                plus: c(l.plus),
                minus: c(l.minus),
                raw_plus: c(l.raw_plus),
                raw_minus: c(l.raw_minus),
            }),
            activator: out.activator.as_ref().map(StateSection::new),
            output: out.output.as_ref().map(StateSection::new),
            reason: out.reason.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorEntry {
    pub row: String,
    pub col: String,
    pub value: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSection {
    pub sector: [u32; 2],
    pub weight: f64,
    pub pure: bool,
    pub distillable: bool,
    pub min_compressed_partial_transpose: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwirlSection {
    pub trace: f64,
    pub entries: Vec<OperatorEntry>,
    pub min_partial_transpose_eigenvalue: f64,
    pub ppt: bool,
    pub one_distillable: bool,
    pub blocks: Vec<BlockSection>,
}

impl TwirlSection {
    pub fn new(rho: &crate::oracle::DensityOperator, min_pt: f64, ppt: bool, verdict: &OracleVerdict) -> Self {
        Self {
            trace: round12(rho.operator().trace().re),
            entries: rho
                .operator()
                .iter()
                .map(|((r, c), v)| OperatorEntry {
                    row: r.to_string(),
                    col: c.to_string(),
                    value: [round12(v.re), round12(v.im)],
                })
                .collect(),
            min_partial_transpose_eigenvalue: round12(min_pt),
            ppt,
            one_distillable: verdict.distillable,
            blocks: verdict
                .blocks
                .iter()
                .map(|b| BlockSection {
                    sector: sector_pair(b.sector),
                    weight: round12(b.weight),
                    pure: b.pure,
                    distillable: b.distillable(),
                    min_compressed_partial_transpose: round12(b.min_compressed_pt),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationSection {
    pub cutoff: u32,
    /// Weight dropped from each truncated mode.
    pub mode_loss: f64,
    /// Weight dropped from the whole truncated resource.
    pub loss: f64,
    /// Deviation of the post-selection probability from its untruncated value.
    pub probability_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoSection {
    pub name: String,
    pub narrative: Vec<String>,
    pub classifications: Vec<(String, String)>,
    pub fidelity_to_eepr: Option<f64>,
    pub truncation: Option<TruncationSection>,
    pub seed: Option<u64>,
    pub samples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorSection {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}
