use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::{LocalKet, Party, PureState, RANK_TOL};
use crate::linalg::{self, CMatrix};
use crate::ssr::ChargeRule;

/// A local two-dimensional subspace spanned by two orthonormal charge
/// eigenstates of one party.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceChoice {
    pub party: Party,
    pub ket1: LocalKet,
    pub ket2: LocalKet,
    pub charge1: u32,
    pub charge2: u32,
}

impl SubspaceChoice {
    pub fn kets(&self) -> [&LocalKet; 2] {
        [&self.ket1, &self.ket2]
    }

    pub fn same_charge(&self) -> bool {
        self.charge1 == self.charge2
    }

    /// `{ket1 (x) ket2, ket2 (x) ket1}`: the basis of the invariant subspace
    /// of two copies of this subspace with total charge `charge1 + charge2`.
    pub fn swap_pair(&self) -> [LocalKet; 2] {
        [self.ket1.tensor(&self.ket2), self.ket2.tensor(&self.ket1)]
    }

    /// `ket1 + ket2`, unnormalized.
    pub fn uniform(&self) -> LocalKet {
        self.ket1.add(&self.ket2).expect("same modes")
    }

    /// Same subspace with basis `ket_i' = sum_k u[k,i] ket_k`.
    pub(crate) fn rotated(&self, u: &CMatrix) -> SubspaceChoice {
        let combine = |i: usize| {
            self.ket1
                .scaled(u[(0, i)])
                .add(&self.ket2.scaled(u[(1, i)]))
                .expect("same modes")
        };
        SubspaceChoice {
            party: self.party,
            ket1: combine(0),
            ket2: combine(1),
            charge1: self.charge1,
            charge2: self.charge2,
        }
    }
}

/// Local 2x2 subspaces on which the state compresses to an entangled state,
/// with the compressed coefficients `block[i][j] = <a_i b_j|psi>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Compression {
    pub alice: SubspaceChoice,
    pub bob: SubspaceChoice,
    pub block: [[Complex64; 2]; 2],
}

impl Compression {
    pub(crate) fn from_kets(psi: &PureState, alice: SubspaceChoice, bob: SubspaceChoice) -> Self {
        let block = compress(psi, alice.kets(), bob.kets());
        Self { alice, bob, block }
    }

    /// Fails invariance, as every choice for a bound state must.
    pub fn is_invariant(&self) -> bool {
        self.alice.same_charge() && self.bob.same_charge()
    }

    pub fn weight(&self) -> f64 {
        self.block.iter().flatten().map(|z| z.norm_sqr()).sum()
    }
}

/// `<a_i b_j|psi>` for the given local kets.
pub(crate) fn compress(psi: &PureState, a: [&LocalKet; 2], b: [&LocalKet; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::default(); 2]; 2];
    for (label, amp) in psi.iter() {
        for i in 0..2 {
            let wa = a[i].amplitude(label.alice()).conj();
            if wa == Complex64::default() {
                continue;
            }
            for j in 0..2 {
                let wb = b[j].amplitude(label.bob()).conj();
                out[i][j] += wa * wb * amp;
            }
        }
    }
    out
}

/// Every pair of support sub-labels on each side whose 2x2 compression is
/// entangled, Alice pairs outermost, both in lexicographic order.
pub fn entangled_compressions(psi: &PureState, rule: ChargeRule) -> Vec<Compression> {
    let (rows, cols, m) = psi.coefficient_matrix();
    let mut out = Vec::new();
    for i1 in 0..rows.len() {
        for i2 in i1 + 1..rows.len() {
            for j1 in 0..cols.len() {
                for j2 in j1 + 1..cols.len() {
                    let block = [[m[(i1, j1)], m[(i1, j2)]], [m[(i2, j1)], m[(i2, j2)]]];
                    if !linalg::is_rank_two_2x2(&block, RANK_TOL) {
                        continue;
                    }
                    let side = |party, x: &Vec<u32>, y: &Vec<u32>| SubspaceChoice {
                        party,
                        ket1: LocalKet::basis(x.clone()),
                        ket2: LocalKet::basis(y.clone()),
                        charge1: rule.charge(x),
                        charge2: rule.charge(y),
                    };
                    out.push(Compression {
                        alice: side(Party::A, &rows[i1], &rows[i2]),
                        bob: side(Party::B, &cols[j1], &cols[j2]),
                        block,
                    });
                }
            }
        }
    }
    out
}
