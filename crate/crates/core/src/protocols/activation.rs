use crate::classify::is_one_distillable;
use crate::error::{Error, Result};
use crate::fock::{Party, PureState, RANK_TOL};
use crate::ssr::{is_locally_invariant, sector_support, ChargeRule};

use super::subspace::{entangled_compressions, Compression, SubspaceChoice};
use super::{ProtocolKind, ProtocolOutcome, Run};

/// Builds `chi = (|n> + |n'>) (x) (|m> + |m'>)` (normalized) from the first
/// entangled 2x2 compression of a bound state. Since every such compression
/// of a bound state fails to be invariant, `chi` is a product that is not
/// locally invariant.
pub fn build_activator(psi: &PureState, rule: ChargeRule) -> Result<(PureState, (SubspaceChoice, SubspaceChoice))> {
    if psi.is_empty() {
        return Err(Error::EmptyState);
    }
    if psi.is_product(RANK_TOL)? {
        return Err(Error::Domain("a product state has no entanglement to activate".into()));
    }
    if is_one_distillable(psi, rule)?.0 {
        return Err(Error::Domain(
            "state is already 1-distillable; nothing to activate".into(),
        ));
    }
    let choice = entangled_compressions(psi, rule)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Consistency("entangled state without an entangled 2x2 compression".into()))?;
    if choice.is_invariant() {
        return Err(Error::Consistency(
            "bound state with an invariant entangled compression".into(),
        ));
    }
    let chi = PureState::product(&choice.alice.uniform(), &choice.bob.uniform())?.normalized()?;
    Ok((chi, (choice.alice, choice.bob)))
}

/// Projects `psi (x) chi` onto `span{n n', n' n} (x) span{m m', m' m}` for
/// the entangled compressions of `psi`, in order, and reports the first one
/// that leaves an entangled, locally invariant state. `chi` must share the
/// layout of `psi`; it becomes the second copy in the party-wise layout.
pub fn verify_activation(psi: &PureState, chi: &PureState, rule: ChargeRule) -> Result<(bool, ProtocolOutcome)> {
    if psi.layout() != chi.layout() {
        let out = ProtocolOutcome::failure(
            ProtocolKind::Activation,
            format!(
                "activator layout {} differs from state layout {}",
                chi.layout(),
                psi.layout()
            ),
        );
        return Ok((false, out));
    }
    let choices = entangled_compressions(psi, rule);
    if choices.is_empty() {
        return Ok((
            false,
            ProtocolOutcome::failure(ProtocolKind::Activation, "state is a product"),
        ));
    }
    let joint = psi.normalized()?.tensor(&chi.normalized()?);
    let mut first_failure = None;
    for choice in &choices {
        let out = activate_on(&joint, psi, chi, choice, rule)?;
        if out.success {
            return Ok((true, out));
        }
        first_failure.get_or_insert(out);
    }
    Ok((false, first_failure.expect("at least one choice")))
}

fn activate_on(
    joint: &PureState,
    psi: &PureState,
    chi: &PureState,
    choice: &Compression,
    rule: ChargeRule,
) -> Result<ProtocolOutcome> {
    let layout = psi.layout();
    let a_modes: Vec<usize> = [layout.copy_modes(Party::A, 0), layout.copy_modes(Party::A, 1)].concat();
    let b_modes: Vec<usize> = [layout.copy_modes(Party::B, 0), layout.copy_modes(Party::B, 1)].concat();
    let a_pair = choice.alice.swap_pair();
    let b_pair = choice.bob.swap_pair();

    let mut run = Run::new(joint.clone());
    run.step(
        format!(
            "project A(copy1,activator) onto span{{{}{}, {}{}}}",
            choice.alice.ket1, choice.alice.ket2, choice.alice.ket2, choice.alice.ket1
        ),
        |s| s.apply_local_projector(Party::A, &a_modes, &a_pair),
    );
    run.step(
        format!(
            "project B(copy1,activator) onto span{{{}{}, {}{}}}",
            choice.bob.ket1, choice.bob.ket2, choice.bob.ket2, choice.bob.ket1
        ),
        |s| s.apply_local_projector(Party::B, &b_modes, &b_pair),
    );

    let probability = run.probability();
    let (success, output, reason) = judge(&run.state, rule)?;
    if let (Some(last), Some(out)) = (run.transcript.last_mut(), output.as_ref()) {
        last.sector = sector_support(out, rule).keys().next().copied();
    }
    Ok(ProtocolOutcome {
        protocol: ProtocolKind::Activation,
        success,
        probability,
        output,
        transcript: run.transcript,
        choice: Some((choice.alice.clone(), choice.bob.clone())),
        lambdas: None,
        activator: Some(chi.clone()),
        reason,
    })
}

/// Success iff the final branch survived and is entangled and invariant.
pub(super) fn judge(state: &PureState, rule: ChargeRule) -> Result<(bool, Option<PureState>, Option<String>)> {
    if state.is_empty() {
        return Ok((false, None, Some("projection annihilates the state".into())));
    }
    let invariant = is_locally_invariant(state, rule);
    let product = state.is_product(RANK_TOL)?;
    let reason = match (invariant, product) {
        (true, false) => None,
        (_, true) => Some("projected state is a product".to_string()),
        (false, false) => Some("projected state is not locally invariant".to_string()),
    };
    Ok((reason.is_none(), Some(state.clone()), reason))
}
