//! The optical scenarios: activation by shared reference states and
//! two-copy distillation of a single delocalized photon.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::classify;
use crate::error::Result;
use crate::fock::PureState;
use crate::protocols::{
    coherent_pair, make_two_mode_squeezed, protocol_b, verify_activation, ProtocolOutcome, Truncation,
};
use crate::ssr::{twirl_pure, ChargeRule};
use crate::states;

use super::report::{round12, DemoSection, ProtocolSection, ReportDocument, TruncationSection};

pub const ALPHA: f64 = 1.0;
pub const GAMMA: f64 = 0.5;
const TRIALS: usize = 10;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Demo {
    VeperActivation,
    Veper2Copy,
    CoherentActivation,
    SqueezedActivation,
    RefbitGap,
}

impl Demo {
    pub const ALL: [Demo; 5] = [
        Demo::VeperActivation,
        Demo::Veper2Copy,
        Demo::CoherentActivation,
        Demo::SqueezedActivation,
        Demo::RefbitGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Demo::VeperActivation => "veper-activation",
            Demo::Veper2Copy => "veper-2copy",
            Demo::CoherentActivation => "coherent-activation",
            Demo::SqueezedActivation => "squeezed-activation",
            Demo::RefbitGap => "refbit-gap",
        }
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demo {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Demo::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| {
            let names: Vec<_> = Demo::ALL.iter().map(|d| d.name()).collect();
            format!("unknown demo {s:?}; expected one of {}", names.join(", "))
        })
    }
}

struct Scenario {
    narrative: Vec<String>,
    classifications: Vec<(String, String)>,
    outcome: ProtocolOutcome,
    fidelity: Option<f64>,
    truncation: Option<TruncationSection>,
}

fn fidelity_to_eepr(out: &ProtocolOutcome) -> Option<f64> {
    let output = out.output.as_ref()?;
    (output.layout() == states::eepr().layout()).then(|| round12(output.fidelity(&states::eepr())))
}

fn class_of(name: &str, psi: &PureState, rule: ChargeRule) -> Result<(String, String)> {
    Ok((name.to_string(), classify(psi, rule)?.class.to_string()))
}

fn veper_activation(rule: ChargeRule) -> Result<Scenario> {
    let (psi, chi) = (states::veper(), states::refbit_plus());
    let (_, outcome) = verify_activation(&psi, &chi, rule)?;
    Ok(Scenario {
        narrative: vec![
            "Alice and Bob share a single photon split over two modes, and a reference pair |+>|+>.".into(),
            "Neither resource is 1-distillable on its own.".into(),
            "Both measure local photon number over their two modes and keep the outcome 1.".into(),
        ],
        classifications: vec![
            class_of("single photon", &psi, rule)?,
            class_of("reference pair", &chi, rule)?,
        ],
        fidelity: fidelity_to_eepr(&outcome),
        outcome,
        truncation: None,
    })
}

fn veper_2copy(rule: ChargeRule) -> Result<Scenario> {
    let psi = states::veper();
    let outcome = protocol_b(&psi, rule)?;
    Ok(Scenario {
        narrative: vec![
            "Two copies of a single photon split between Alice and Bob.".into(),
            "Both measure local photon number over their two modes and keep the outcome 1.".into(),
            "The surviving state is dual-rail entangled and locally invariant.".into(),
        ],
        classifications: vec![class_of("single photon", &psi, rule)?],
        fidelity: fidelity_to_eepr(&outcome),
        outcome,
        truncation: None,
    })
}

fn coherent_activation(rule: ChargeRule, trunc: Truncation) -> Result<Scenario> {
    let psi = states::veper();
    let chi = coherent_pair(Complex64::new(ALPHA, 0.0), trunc)?;
    let (_, outcome) = verify_activation(&psi, &chi.state, rule)?;
    let mode_loss = 1.0 - (1.0 - chi.loss).sqrt();
    // Only the vacuum and one-photon terms of each coherent state survive.
    let a2 = ALPHA * ALPHA;
    let exact = a2 * (-2.0 * a2).exp();
    Ok(Scenario {
        narrative: vec![
            format!("The reference pair is replaced by coherent states |a>|a> with a = {ALPHA}, cut at {} photons per mode.", chi.cutoff),
            "Both measure local photon number over their two modes and keep the outcome 1.".into(),
        ],
        classifications: vec![
            class_of("single photon", &psi, rule)?,
            class_of("coherent pair", &chi.state, rule)?,
        ],
        fidelity: fidelity_to_eepr(&outcome),
        truncation: Some(TruncationSection {
            cutoff: chi.cutoff,
            mode_loss: round12(mode_loss),
            loss: round12(chi.loss),
            probability_error: round12((outcome.probability - exact).abs()),
        }),
        outcome,
    })
}

fn squeezed_activation(rule: ChargeRule, trunc: Truncation) -> Result<Scenario> {
    let psi = make_two_mode_squeezed(GAMMA, trunc)?;
    let chi = coherent_pair(Complex64::new(ALPHA, 0.0), trunc)?;
    let (_, outcome) = verify_activation(&psi.state, &chi.state, rule)?;
    let loss = 1.0 - (1.0 - psi.loss) * (1.0 - chi.loss);
    let mode_loss = (1.0 - (1.0 - chi.loss).sqrt()).max(psi.loss);
    let a2 = ALPHA * ALPHA;
    let exact = (1.0 - GAMMA.powi(4)) * a2 * a2 * (-2.0 * a2).exp();
    Ok(Scenario {
        narrative: vec![
            format!("Alice and Bob share a two-mode squeezed state with g = {GAMMA} and coherent states with a = {ALPHA}."),
            "Every charge sector of the squeezed state is a product, so it is not 1-distillable.".into(),
            "Keeping total local photon number 1 on the squeezed and coherent modes leaves an entangled invariant state.".into(),
        ],
        classifications: vec![
            class_of("squeezed state", &psi.state, rule)?,
            class_of("coherent pair", &chi.state, rule)?,
        ],
        fidelity: None,
        truncation: Some(TruncationSection {
            cutoff: psi.cutoff,
            mode_loss: round12(mode_loss),
            loss: round12(loss),
            probability_error: round12((outcome.probability - exact).abs()),
        }),
        outcome,
    })
}

fn refbit_gap(rule: ChargeRule) -> Result<Scenario> {
    let (psi, plus, minus) = (states::veper(), states::refbit_plus(), states::refbit_minus());
    let twirl_gap = twirl_pure(&plus, rule)?
        .operator()
        .max_abs_diff(twirl_pure(&minus, rule)?.operator());
    let (_, outcome) = verify_activation(&psi, &plus, rule)?;
    Ok(Scenario {
        narrative: vec![
            "The reference pairs |+>|+> and |->|-> are products, yet not preparable under the rule.".into(),
            format!(
                "After averaging over local phases they coincide (largest entry difference {:e}).",
                round12(twirl_gap)
            ),
            "Added to the single photon, |+>|+> makes the pair 1-distillable.".into(),
        ],
        classifications: vec![
            class_of("single photon", &psi, rule)?,
            class_of("|+>|+>", &plus, rule)?,
            class_of("|->|->", &minus, rule)?,
            class_of("single photon with |+>|+>", &psi.tensor(&plus), rule)?,
        ],
        fidelity: fidelity_to_eepr(&outcome),
        outcome,
        truncation: None,
    })
}

/// Runs a scenario. With a seed, also samples repeated trials of the
/// post-selection for the narrative.
pub fn run_demo(demo: Demo, rule: ChargeRule, trunc: Truncation, seed: Option<u64>) -> Result<ReportDocument> {
    let s = match demo {
        Demo::VeperActivation => veper_activation(rule)?,
        Demo::Veper2Copy => veper_2copy(rule)?,
        Demo::CoherentActivation => coherent_activation(rule, trunc)?,
        Demo::SqueezedActivation => squeezed_activation(rule, trunc)?,
        Demo::RefbitGap => refbit_gap(rule)?,
    };
    let samples = seed.map_or_else(Vec::new, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (1..=TRIALS)
            .map(|k| {
                let kept = rng.gen_bool(s.outcome.probability.clamp(0.0, 1.0));
                format!("trial {k}: {}", if kept { "kept" } else { "discarded" })
            })
            .collect()
    });
    let mut doc = ReportDocument::new("demo", rule);
    doc.protocol = Some(ProtocolSection::new(&s.outcome));
    doc.demo = Some(DemoSection {
        name: demo.name().to_string(),
        narrative: s.narrative,
        classifications: s.classifications,
        fidelity_to_eepr: s.fidelity,
        truncation: s.truncation,
        seed,
        samples,
    });
    Ok(doc)
}
