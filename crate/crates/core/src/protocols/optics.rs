use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, LocalKet, ModeLayout, Party, PureState};
use crate::ssr::{local_charge, ChargeRule};

/// Fock cutoff (largest kept photon number) and the largest tolerated weight
/// outside it.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub cutoff: u32,
    pub max_loss: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            cutoff: 8,
            max_loss: 1e-5,
        }
    }
}

impl Truncation {
    pub fn with_cutoff(cutoff: u32) -> Self {
        Self {
            cutoff,
            ..Self::default()
        }
    }
}

/// A truncated, renormalized state and the weight dropped before
/// renormalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncated<T> {
    pub state: T,
    pub loss: f64,
    pub cutoff: u32,
}

fn check(trunc: Truncation, kept: f64) -> Result<f64> {
    if trunc.cutoff < 1 {
        return Err(Error::Domain("cutoff must be at least 1".into()));
    }
    let loss = (1.0 - kept).max(0.0);
    if loss > trunc.max_loss {
        return Err(Error::CutoffTooSmall {
            cutoff: trunc.cutoff,
            loss,
            bound: trunc.max_loss,
        });
    }
    Ok(loss)
}

/// `|alpha> = e^{-|alpha|^2/2} sum_n alpha^n / sqrt(n!) |n>` on one mode,
/// truncated at `n <= cutoff`.
pub fn make_coherent(alpha: Complex64, trunc: Truncation) -> Result<Truncated<LocalKet>> {
    let mut amp = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut terms = Vec::with_capacity(trunc.cutoff as usize + 1);
    for n in 0..=trunc.cutoff {
        if n > 0 {
            amp = amp * alpha / f64::from(n).sqrt();
        }
        terms.push((vec![n], amp));
    }
    let raw = LocalKet::from_terms(1, terms)?;
    let loss = check(trunc, raw.norm_sqr())?;
    Ok(Truncated {
        state: raw.normalized()?,
        loss,
        cutoff: trunc.cutoff,
    })
}

/// `|alpha>_A |alpha>_B`; the loss is that of the product.
pub fn coherent_pair(alpha: Complex64, trunc: Truncation) -> Result<Truncated<PureState>> {
    let single = make_coherent(alpha, trunc)?;
    let kept = 1.0 - single.loss;
    let loss = 1.0 - kept * kept;
    Ok(Truncated {
        state: PureState::product(&single.state, &single.state)?,
        loss,
        cutoff: trunc.cutoff,
    })
}

/// `sqrt(1 - gamma^2) sum_n gamma^n |n>_A |n>_B`, truncated at `n <= cutoff`.
pub fn make_two_mode_squeezed(gamma: f64, trunc: Truncation) -> Result<Truncated<PureState>> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain(format!(
            "squeezing parameter must lie in [0, 1), got {gamma}"
        )));
    }
    let norm = (1.0 - gamma * gamma).sqrt();
    let terms: Vec<(Complex64, BasisLabel)> = (0..=trunc.cutoff)
        .map(|n| {
            (
                Complex64::new(norm * gamma.powi(n as i32), 0.0),
                BasisLabel::new(vec![n], vec![n]),
            )
        })
        .collect();
    let raw = PureState::make_ket(ModeLayout::new(1, 1)?, terms)?;
    let loss = check(trunc, raw.norm_sqr())?;
    Ok(Truncated {
        state: raw.normalized()?,
        loss,
        cutoff: trunc.cutoff,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QndOutcome {
    pub charge: u32,
    pub probability: f64,
    pub state: PureState,
}

/// Non-demolition measurement of one party's local charge: every outcome
/// with its probability and normalized post-measurement state, by charge.
pub fn qnd_measure(psi: &PureState, party: Party, rule: ChargeRule) -> Result<Vec<QndOutcome>> {
    let psi = psi.normalized()?;
    let mut charges: Vec<u32> = psi.iter().map(|(l, _)| local_charge(l, party, rule)).collect();
    charges.sort_unstable();
    charges.dedup();
    charges
        .into_iter()
        .map(|charge| {
            let (branch, probability) = psi.project(|l| local_charge(l, party, rule) == charge);
            Ok(QndOutcome {
                charge,
                probability,
                state: branch.normalized()?,
            })
        })
        .collect()
}
