//! The named states used throughout the examples and tests, all normalized.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::fock::{BasisLabel, ModeLayout, PureState};

fn build(alice_modes: usize, bob_modes: usize, terms: &[(f64, &[u32], &[u32])]) -> PureState {
    let layout = ModeLayout::new(alice_modes, bob_modes).expect("static layout");
    PureState::make_ket(
        layout,
        terms
            .iter()
            .map(|&(a, x, y)| (Complex64::new(a, 0.0), BasisLabel::new(x.to_vec(), y.to_vec()))),
    )
    .and_then(|s| s.normalized())
    .expect("static state")
}

/// Single photon shared between two modes: `(|0;1> + |1;0>)/sqrt2`.
pub fn veper() -> PureState {
    build(1, 1, &[(FRAC_1_SQRT_2, &[0], &[1]), (FRAC_1_SQRT_2, &[1], &[0])])
}

/// Dual-rail entangled state: `(|01;10> + |10;01>)/sqrt2`.
pub fn eepr() -> PureState {
    build(
        2,
        2,
        &[(FRAC_1_SQRT_2, &[0, 1], &[1, 0]), (FRAC_1_SQRT_2, &[1, 0], &[0, 1])],
    )
}

/// `|+>_A |+>_B` with `|±> = (|0> ± |1>)/sqrt2`.
pub fn refbit_plus() -> PureState {
    build(
        1,
        1,
        &[
            (0.5, &[0], &[0]),
            (0.5, &[0], &[1]),
            (0.5, &[1], &[0]),
            (0.5, &[1], &[1]),
        ],
    )
}

/// `|->_A |->_B`.
pub fn refbit_minus() -> PureState {
    build(
        1,
        1,
        &[
            (0.5, &[0], &[0]),
            (-0.5, &[0], &[1]),
            (-0.5, &[1], &[0]),
            (0.5, &[1], &[1]),
        ],
    )
}

/// `(|01>_A |0>_B + |10>_A |1>_B)/sqrt2`.
pub fn psi_2d_prime() -> PureState {
    build(2, 1, &[(1.0, &[0, 1], &[0]), (1.0, &[1, 0], &[1])])
}

/// `(|01>_A |+>_B + |10>_A |->_B)/sqrt2`.
pub fn psi_2d_double_prime() -> PureState {
    build(
        2,
        1,
        &[
            (1.0, &[0, 1], &[0]),
            (1.0, &[0, 1], &[1]),
            (1.0, &[1, 0], &[0]),
            (-1.0, &[1, 0], &[1]),
        ],
    )
}

/// `(|0>_A |1>_B + |1>_A |0>_B)/sqrt2`, the same state as [`veper`].
pub fn psi_2d_triple_prime() -> PureState {
    veper()
}

/// `(|0>_A |+>_B + |1>_A |->_B)/sqrt2`: needs three copies.
pub fn psi_3d() -> PureState {
    build(
        1,
        1,
        &[
            (1.0, &[0], &[0]),
            (1.0, &[0], &[1]),
            (1.0, &[1], &[0]),
            (-1.0, &[1], &[1]),
        ],
    )
}
