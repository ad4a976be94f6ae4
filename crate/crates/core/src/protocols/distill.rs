//! The three-copy protocol (A) and the two-copy protocol (B).
//!
//! Both start from an entangled 2x2 compression `{n, n'} x {m, m'}` of the
//! state. Protocol A needs a residual `<n|psi>` on Bob's side and a residual
//! `<m|psi>` on Alice's side that are both superpositions of two charges; it
//! then measures two copies into a non-invariant product state and uses it to
//! activate the third. Protocol B projects two copies onto the invariant
//! span of `|n n'>, |n' n>` and `|m m'>, |m' m>`, leaving
//! `l+ |S+>|S+> + l- |S->|S->` with `l- = det/2 != 0` and
//! `l+ = (c00 c11 + c01 c10)/2`.
//!
//! When the two kets on one side share a charge that side may be rotated
//! freely inside its subspace. A QR rotation makes the compressed block
//! triangular, which forces `l+ = det/2 != 0`; this is how Protocol B covers
//! every state on which Protocol A has no admissible choice.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{LocalKet, Party, PureState, RANK_TOL};
use crate::linalg::{self, CMatrix};
use crate::ssr::{sector_support, ChargeRule};

use super::activation::judge;
use super::subspace::{entangled_compressions, Compression};
use super::{Lambdas, ProtocolKind, ProtocolOutcome, Run, LAMBDA_TOL};

fn require_entangled(psi: &PureState) -> Result<()> {
    if psi.is_empty() {
        return Err(Error::EmptyState);
    }
    if psi.is_product(RANK_TOL)? {
        return Err(Error::Domain("protocols need an entangled input".into()));
    }
    Ok(())
}

fn nonzero(z: Complex64, scale: f64) -> bool {
    z.norm() > RANK_TOL * scale
}

/// Row `i` of the block is the residual `<a_i|psi>` on Bob's side; it breaks
/// invariance iff both entries survive and Bob's kets differ in charge.
fn admissible_for_a(choice: &Compression) -> Option<(usize, usize)> {
    if choice.alice.same_charge() || choice.bob.same_charge() {
        return None;
    }
    let c = &choice.block;
    let scale = choice.weight().sqrt();
    let row = (0..2).find(|&i| nonzero(c[i][0], scale) && nonzero(c[i][1], scale))?;
    let col = (0..2).find(|&j| nonzero(c[0][j], scale) && nonzero(c[1][j], scale))?;
    Some((row, col))
}

pub fn protocol_a(psi: &PureState, rule: ChargeRule) -> Result<ProtocolOutcome> {
    require_entangled(psi)?;
    let psi = psi.normalized()?;
    let Some((choice, (row, col))) = entangled_compressions(&psi, rule)
        .into_iter()
        .find_map(|c| admissible_for_a(&c).map(|rc| (c, rc)))
    else {
        return Ok(ProtocolOutcome::failure(
            ProtocolKind::ProtocolA,
            "condition unsatisfiable",
        ));
    };

    let layout = psi.layout();
    let modes = |party, k| layout.copy_modes(party, k);
    let a_basis = [choice.alice.ket1.clone(), choice.alice.ket2.clone()];
    let b_basis = [choice.bob.ket1.clone(), choice.bob.ket2.clone()];

    let mut run = Run::new(psi.tensor_power(3));
    for k in 0..3 {
        run.step(
            format!("project copy {} onto the chosen 2x2 subspace (A)", k + 1),
            |s| s.apply_local_projector(Party::A, &modes(Party::A, k), &a_basis),
        );
        run.step(
            format!("project copy {} onto the chosen 2x2 subspace (B)", k + 1),
            |s| s.apply_local_projector(Party::B, &modes(Party::B, k), &b_basis),
        );
    }
    let a_outcome = &a_basis[row];
    let b_outcome = &b_basis[col];
    run.step(
        format!("Alice measures copy 1 in the subspace basis, outcome {a_outcome}"),
        |s| s.apply_local_projector(Party::A, &modes(Party::A, 0), std::slice::from_ref(a_outcome)),
    );
    run.step(
        format!("Bob measures copy 2 in the subspace basis, outcome {b_outcome}"),
        |s| s.apply_local_projector(Party::B, &modes(Party::B, 1), std::slice::from_ref(b_outcome)),
    );

    // copy-2 Alice holds column `col`, copy-1 Bob holds row `row`
    let c = &choice.block;
    let mix = |kets: &[LocalKet; 2], w: [Complex64; 2]| -> Result<LocalKet> {
        kets[0].scaled(w[0]).add(&kets[1].scaled(w[1]))?.normalized()
    };
    let column = mix(&a_basis, [c[0][col], c[1][col]])?;
    let residual_row = mix(&b_basis, [c[row][0], c[row][1]])?;
    let activator = PureState::product(&column, &residual_row)?;

    let a_pair = choice.alice.swap_pair();
    let b_pair = choice.bob.swap_pair();
    let a_modes = [modes(Party::A, 2), modes(Party::A, 1)].concat();
    let b_modes = [modes(Party::B, 2), modes(Party::B, 0)].concat();
    run.step("activate copy 3: project A(copy3, copy2) onto span{n n', n' n}", |s| {
        s.apply_local_projector(Party::A, &a_modes, &a_pair)
    });
    run.step("activate copy 3: project B(copy3, copy1) onto span{m m', m' m}", |s| {
        s.apply_local_projector(Party::B, &b_modes, &b_pair)
    });

    let probability = run.probability();
    let (success, output, reason) = judge(&run.state, rule)?;
    if let (Some(last), Some(out)) = (run.transcript.last_mut(), output.as_ref()) {
        last.sector = sector_support(out, rule).keys().next().copied();
    }
    if !success {
        return Err(Error::Consistency(format!(
            "protocol A failed on an admissible choice: {}",
            reason.unwrap_or_default()
        )));
    }
    Ok(ProtocolOutcome {
        protocol: ProtocolKind::ProtocolA,
        success,
        probability,
        output,
        transcript: run.transcript,
        choice: Some((choice.alice, choice.bob)),
        lambdas: None,
        activator: Some(activator),
        reason,
    })
}

fn lambda_plus_raw(c: &[[Complex64; 2]; 2]) -> Complex64 {
    (c[0][0] * c[1][1] + c[0][1] * c[1][0]) / 2.0
}

/// Candidate subspaces for Protocol B derived from one entangled compression:
/// the basis itself, then (if `l+` vanishes) a triangularizing rotation of a
/// side whose kets share a charge.
fn b_candidates(psi: &PureState, choice: &Compression) -> Vec<Compression> {
    let mut out = vec![choice.clone()];
    let block = CMatrix::from_fn(2, 2, |i, j| choice.block[i][j]);
    if choice.alice.same_charge() {
        let q = linalg::qr_unitary(&block);
        out.push(Compression::from_kets(
            psi,
            choice.alice.rotated(&q),
            choice.bob.clone(),
        ));
    }
    if choice.bob.same_charge() {
        let q = linalg::qr_unitary(&block.transpose());
        out.push(Compression::from_kets(
            psi,
            choice.alice.clone(),
            choice.bob.rotated(&q),
        ));
    }
    out
}

fn b_works(choice: &Compression) -> bool {
    lambda_plus_raw(&choice.block).norm() > RANK_TOL * choice.weight()
}

pub fn protocol_b(psi: &PureState, rule: ChargeRule) -> Result<ProtocolOutcome> {
    require_entangled(psi)?;
    let psi = psi.normalized()?;
    let choices = entangled_compressions(&psi, rule);
    let Some(first) = choices.first().cloned() else {
        return Err(Error::Consistency(
            "entangled state without an entangled 2x2 compression".into(),
        ));
    };
    let picked = choices
        .iter()
        .flat_map(|c| b_candidates(&psi, c))
        .find(b_works)
        .unwrap_or(first);
    run_b(&psi, picked, rule)
}

fn run_b(psi: &PureState, choice: Compression, rule: ChargeRule) -> Result<ProtocolOutcome> {
    let layout = psi.layout();
    let modes = |party, k| layout.copy_modes(party, k);
    let a_basis = [choice.alice.ket1.clone(), choice.alice.ket2.clone()];
    let b_basis = [choice.bob.ket1.clone(), choice.bob.ket2.clone()];

    let mut run = Run::new(psi.tensor_power(2));
    for k in 0..2 {
        run.step(
            format!("project copy {} onto the chosen 2x2 subspace (A)", k + 1),
            |s| s.apply_local_projector(Party::A, &modes(Party::A, k), &a_basis),
        );
        run.step(
            format!("project copy {} onto the chosen 2x2 subspace (B)", k + 1),
            |s| s.apply_local_projector(Party::B, &modes(Party::B, k), &b_basis),
        );
    }
    let a_modes = [modes(Party::A, 0), modes(Party::A, 1)].concat();
    let b_modes = [modes(Party::B, 0), modes(Party::B, 1)].concat();
    let a_pair = choice.alice.swap_pair();
    let b_pair = choice.bob.swap_pair();
    run.step("project A(copy1, copy2) onto span{n n', n' n}", |s| {
        s.apply_local_projector(Party::A, &a_modes, &a_pair)
    });
    run.step("project B(copy1, copy2) onto span{m m', m' m}", |s| {
        s.apply_local_projector(Party::B, &b_modes, &b_pair)
    });

    let probability = run.probability();
    let (projected_success, output, mut reason) = judge(&run.state, rule)?;
    if let (Some(last), Some(out)) = (run.transcript.last_mut(), output.as_ref()) {
        last.sector = sector_support(out, rule).keys().next().copied();
    }

    let lambdas = output.as_ref().map(|out| {
        let s = |sign: f64, pair: &[LocalKet; 2]| {
            pair[0]
                .add(&pair[1].scaled(Complex64::new(sign, 0.0)))
                .expect("same modes")
        };
        let (sa_p, sa_m) = (s(1.0, &a_pair), s(-1.0, &a_pair));
        let (sb_p, sb_m) = (s(1.0, &b_pair), s(-1.0, &b_pair));
        let coeff = |sa: &LocalKet, sb: &LocalKet| {
            let target = PureState::product(sa, sb).expect("nonzero kets");
            target.inner(out) / target.norm_sqr().sqrt()
        };
        let plus = coeff(&sa_p, &sb_p);
        let minus = coeff(&sa_m, &sb_m);
        let raw = unnormalized_raw(&a_modes, &b_modes, &a_pair, &b_pair, psi);
        Lambdas {
            plus,
            minus,
            raw_plus: raw.0,
            raw_minus: raw.1,
        }
    });

    let Some(l) = lambdas else {
        return Err(Error::Consistency(
            "protocol B projection annihilated an entangled compression".into(),
        ));
    };
    if l.minus.norm() <= LAMBDA_TOL {
        return Err(Error::Consistency(format!(
            "lambda_- vanished ({:.3e})",
            l.minus.norm()
        )));
    }
    if (l.plus.norm_sqr() + l.minus.norm_sqr() - 1.0).abs() > 1e-9 {
        return Err(Error::Consistency("output is not of the S+S+ / S-S- form".into()));
    }
    let success = l.plus.norm() > LAMBDA_TOL;
    if success != projected_success {
        return Err(Error::Consistency(format!(
            "lambda_+ = {:.3e} disagrees with the entanglement of the output",
            l.plus.norm()
        )));
    }
    if !success {
        reason = Some("lambda_+ vanishes for every admissible subspace".into());
    }
    Ok(ProtocolOutcome {
        protocol: ProtocolKind::ProtocolB,
        success,
        probability,
        output: if success { output } else { None },
        transcript: run.transcript,
        choice: Some((choice.alice, choice.bob)),
        lambdas: Some(l),
        activator: None,
        reason,
    })
}

/// `(l+, l-)` of the unnormalized projection of the two original copies,
/// against unnormalized `|S±>`: `<S±S±|P psi^2> / <S±|S±>^2`.
fn unnormalized_raw(
    a_modes: &[usize],
    b_modes: &[usize],
    a_pair: &[LocalKet; 2],
    b_pair: &[LocalKet; 2],
    psi: &PureState,
) -> (Complex64, Complex64) {
    let p = psi
        .tensor(psi)
        .apply_local_projector(Party::A, a_modes, a_pair)
        .apply_local_projector(Party::B, b_modes, b_pair);
    let s = |sign: f64, pair: &[LocalKet; 2]| {
        pair[0]
            .add(&pair[1].scaled(Complex64::new(sign, 0.0)))
            .expect("same modes")
    };
    let coeff = |sa: LocalKet, sb: LocalKet| {
        let target = PureState::product(&sa, &sb).expect("nonzero kets");
        let n = target.norm_sqr();
        target.inner(&p) / n
    };
    (
        coeff(s(1.0, a_pair), s(1.0, b_pair)),
        coeff(s(-1.0, a_pair), s(-1.0, b_pair)),
    )
}

/// Tries Protocol A, then Protocol B.
pub fn distill_auto(psi: &PureState, rule: ChargeRule) -> Result<ProtocolOutcome> {
    let a = protocol_a(psi, rule)?;
    if a.success {
        return Ok(a);
    }
    protocol_b(psi, rule)
}
