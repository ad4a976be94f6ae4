//! Density operators, the partial transpose, and a distillability oracle for
//! twirled states.
//!
//! The oracle deliberately walks a different path from [`crate::classify`]:
//! it never looks at pure-state coefficient matrices. Each sector block of the
//! twirled operator is diagonalized as a Hermitian matrix, a pure block is
//! tested through the spectrum of its reduced state, and every block is also
//! scanned for a 2x2 compression with a negative partial transpose. The two
//! block tests must agree on pure blocks.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, ModeLayout, Party};
use crate::linalg::{self, CMatrix};
use crate::ssr::{sector_of, ChargeRule, SectorKey};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const EIGEN_TOL: f64 = 1e-9;

type Entries = BTreeMap<(BasisLabel, BasisLabel), Complex64>;

/// A finite-support operator on the Fock space of a [`ModeLayout`]. Not
/// necessarily Hermitian or positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseOperator {
    layout: ModeLayout,
    entries: Entries,
}

impl SparseOperator {
    pub fn from_entries(layout: ModeLayout, mut entries: Entries) -> Self {
        entries.retain(|_, v| *v != Complex64::default());
        Self { layout, entries }
    }

    pub fn layout(&self) -> ModeLayout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(BasisLabel, BasisLabel), &Complex64)> {
        self.entries.iter()
    }

    pub fn entry(&self, row: &BasisLabel, col: &BasisLabel) -> Complex64 {
        self.entries
            .get(&(row.clone(), col.clone()))
            .copied()
            .unwrap_or_default()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.iter().filter(|((x, y), _)| x == y).map(|(_, v)| *v).sum()
    }

    /// Largest `|entry(x,y) - conj(entry(y,x))|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|((x, y), v)| (v - self.entry(y, x).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SparseOperator) -> f64 {
        let keys: BTreeSet<&(BasisLabel, BasisLabel)> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .map(|(x, y)| (self.entry(x, y) - other.entry(x, y)).norm())
            .fold(0.0, f64::max)
    }

    /// Dense matrix over `labels` in the given order.
    pub fn to_dense(&self, labels: &[BasisLabel]) -> CMatrix {
        let idx: BTreeMap<&BasisLabel, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut m = CMatrix::zeros(labels.len(), labels.len());
        for ((x, y), v) in &self.entries {
            if let (Some(&i), Some(&j)) = (idx.get(x), idx.get(y)) {
                m[(i, j)] = *v;
            }
        }
        m
    }

    /// Labels grouped into connected components of the nonzero-entry graph.
    /// The operator is block diagonal over these groups.
    pub fn support_blocks(&self) -> Vec<Vec<BasisLabel>> {
        let labels: BTreeSet<&BasisLabel> = self.entries.keys().flat_map(|(x, y)| [x, y]).collect();
        let labels: Vec<&BasisLabel> = labels.into_iter().collect();
        let idx: BTreeMap<&BasisLabel, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (x, y) in self.entries.keys() {
            let (rx, ry) = (find(&mut parent, idx[x]), find(&mut parent, idx[y]));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
        let mut groups: BTreeMap<usize, Vec<BasisLabel>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push((*l).clone());
        }
        groups.into_values().collect()
    }

    /// Smallest eigenvalue on the whole Fock space. Outside the support the
    /// operator vanishes, so this is never above `0.0`. Assumes Hermiticity.
    pub fn min_eigenvalue(&self) -> f64 {
        self.support_blocks()
            .iter()
            .filter_map(|b| linalg::hermitian_eigenvalues(&self.to_dense(b)).first().copied())
            .fold(0.0, f64::min)
    }

    /// Transpose on one party's labels: `<a b|X|a' b'>` moves to `<a' b|X|a b'>`
    /// for party A. Its own inverse.
    pub fn partial_transpose(&self, party: Party) -> SparseOperator {
        let entries = self
            .entries
            .iter()
            .map(|((x, y), v)| {
                let (x2, y2) = match party {
                    Party::A => (
                        BasisLabel::new(y.alice().to_vec(), x.bob().to_vec()),
                        BasisLabel::new(x.alice().to_vec(), y.bob().to_vec()),
                    ),
                    Party::B => (
                        BasisLabel::new(x.alice().to_vec(), y.bob().to_vec()),
                        BasisLabel::new(y.alice().to_vec(), x.bob().to_vec()),
                    ),
                };
                ((x2, y2), *v)
            })
            .collect();
        Self {
            layout: self.layout,
            entries,
        }
    }
}

/// A validated mixed state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SparseOperator", into = "SparseOperator")]
pub struct DensityOperator(SparseOperator);

impl DensityOperator {
    pub fn new(op: SparseOperator) -> Result<Self> {
        let herm = op.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(Error::Domain(format!("operator is not Hermitian (defect {herm:.3e})")));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Domain(format!("trace is {tr}, expected 1")));
        }
        let min = op.min_eigenvalue();
        if min < -EIGEN_TOL {
            return Err(Error::Domain(format!(
                "operator is not positive (eigenvalue {min:.3e})"
            )));
        }
        Ok(Self(op))
    }

    /// `|psi><psi|` for a normalized pure state.
    pub fn from_pure(psi: &crate::fock::PureState) -> Result<Self> {
        let mut entries = Entries::new();
        for (x, a) in psi.iter() {
            for (y, b) in psi.iter() {
                entries.insert((x.clone(), y.clone()), a * b.conj());
            }
        }
        Self::new(SparseOperator::from_entries(psi.layout(), entries))
    }

    pub fn operator(&self) -> &SparseOperator {
        &self.0
    }

    pub fn layout(&self) -> ModeLayout {
        self.0.layout
    }
}

impl TryFrom<SparseOperator> for DensityOperator {
    type Error = Error;

    fn try_from(op: SparseOperator) -> Result<Self> {
        Self::new(op)
    }
}

impl From<DensityOperator> for SparseOperator {
    fn from(d: DensityOperator) -> Self {
        d.0
    }
}

pub fn partial_transpose(rho: &DensityOperator, party: Party) -> SparseOperator {
    rho.0.partial_transpose(party)
}

pub fn min_partial_transpose_eigenvalue(rho: &DensityOperator) -> f64 {
    rho.0.partial_transpose(Party::A).min_eigenvalue()
}

/// Positive partial transpose test: `min eig(rho^T_A) >= -tol`.
pub fn is_ppt(rho: &DensityOperator, tol: f64) -> bool {
    min_partial_transpose_eigenvalue(rho) >= -tol
}

/// Per-block evidence collected by [`twirled_verdict`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockVerdict {
    pub sector: SectorKey,
    pub weight: f64,
    pub pure: bool,
    /// Reduced-state spectrum test; only meaningful for pure blocks.
    pub entangled_pure: bool,
    /// Most negative partial-transpose eigenvalue over 2x2 compressions of the
    /// normalized block.
    pub min_compressed_pt: f64,
}

impl BlockVerdict {
    pub fn distillable(&self) -> bool {
        if self.pure {
            self.entangled_pure
        } else {
            self.min_compressed_pt < -EIGEN_TOL
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub distillable: bool,
    pub witness: Option<SectorKey>,
    pub blocks: Vec<BlockVerdict>,
}

/// Decides 1-distillability (unrestricted LOCC) of an operator that is block
/// diagonal across charge sectors. Pure blocks are decided exactly; mixed
/// blocks only through the 2x2 basis compressions, which is a sufficient
/// condition.
pub fn twirled_verdict(rho: &DensityOperator, rule: ChargeRule) -> Result<OracleVerdict> {
    let mut sectors: BTreeMap<SectorKey, BTreeSet<BasisLabel>> = BTreeMap::new();
    for ((x, y), _) in rho.0.iter() {
        let (kx, ky) = (sector_of(x, rule), sector_of(y, rule));
        if kx != ky {
            return Err(Error::Domain(format!(
                "operator couples sectors {kx} and {ky}; not block diagonal"
            )));
        }
        sectors.entry(kx).or_default().extend([x.clone(), y.clone()]);
    }

    let mut blocks = Vec::new();
    for (sector, labels) in sectors {
        let labels: Vec<BasisLabel> = labels.into_iter().collect();
        let dense = rho.0.to_dense(&labels);
        let weight = dense.trace().re;
        if weight <= EIGEN_TOL {
            continue;
        }
        let block = dense.map(|v| v / weight);
        let verdict = block_verdict(sector, weight, &labels, &block)?;
        blocks.push(verdict);
    }
    let witness = blocks.iter().find(|b| b.distillable()).map(|b| b.sector);
    Ok(OracleVerdict {
        distillable: witness.is_some(),
        witness,
        blocks,
    })
}

pub fn twirled_one_distillable(rho: &DensityOperator, rule: ChargeRule) -> Result<bool> {
    Ok(twirled_verdict(rho, rule)?.distillable)
}

fn block_verdict(sector: SectorKey, weight: f64, labels: &[BasisLabel], block: &CMatrix) -> Result<BlockVerdict> {
    let eig = linalg::hermitian_eigen(block);
    let (top_val, top_vec) = eig.last().cloned().expect("nonempty block");
    let pure = top_val >= 1.0 - EIGEN_TOL;

    let entangled_pure = pure && {
        let reduced = reduced_alice(labels, &top_vec);
        let ev = linalg::hermitian_eigenvalues(&reduced);
        ev.len() >= 2 && ev[ev.len() - 2] > EIGEN_TOL
    };

    let min_compressed_pt = min_compressed_pt(labels, block);
    if pure && entangled_pure != (min_compressed_pt < -EIGEN_TOL) {
        return Err(Error::Consistency(format!(
            "sector {sector}: reduced-spectrum test says {entangled_pure}, 2x2 PPT scan found min eigenvalue {min_compressed_pt:.3e}"
        )));
    }
    Ok(BlockVerdict {
        sector,
        weight,
        pure,
        entangled_pure,
        min_compressed_pt,
    })
}

/// `Tr_B |v><v|` for a vector over `labels`.
fn reduced_alice(labels: &[BasisLabel], v: &[Complex64]) -> CMatrix {
    let rows: Vec<&[u32]> = labels
        .iter()
        .map(|l| l.alice())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let idx: BTreeMap<&[u32], usize> = rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut by_bob: BTreeMap<&[u32], Vec<(usize, Complex64)>> = BTreeMap::new();
    for (l, a) in labels.iter().zip(v) {
        by_bob.entry(l.bob()).or_default().push((idx[l.alice()], *a));
    }
    let mut m = CMatrix::zeros(rows.len(), rows.len());
    for col in by_bob.values() {
        for &(i, a) in col {
            for &(j, b) in col {
                m[(i, j)] += a * b.conj();
            }
        }
    }
    m
}

/// Scans every compression of `block` onto `span{a1,a2} (x) span{b1,b2}` over
/// basis sub-labels and returns the smallest partial-transpose eigenvalue
/// seen (`0.0` if there is no 2x2 compression).
fn min_compressed_pt(labels: &[BasisLabel], block: &CMatrix) -> f64 {
    let idx: BTreeMap<&BasisLabel, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let alice: Vec<&[u32]> = labels
        .iter()
        .map(|l| l.alice())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let bob: Vec<&[u32]> = labels
        .iter()
        .map(|l| l.bob())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut best = 0.0f64;
    for i1 in 0..alice.len() {
        for i2 in i1 + 1..alice.len() {
            for j1 in 0..bob.len() {
                for j2 in j1 + 1..bob.len() {
                    let local = [
                        (alice[i1], bob[j1]),
                        (alice[i1], bob[j2]),
                        (alice[i2], bob[j1]),
                        (alice[i2], bob[j2]),
                    ];
                    let pos: Vec<Option<usize>> = local
                        .iter()
                        .map(|(a, b)| idx.get(&BasisLabel::new(a.to_vec(), b.to_vec())).copied())
                        .collect();
                    let mut comp = CMatrix::zeros(4, 4);
                    for r in 0..4 {
                        for c in 0..4 {
                            if let (Some(pr), Some(pc)) = (pos[r], pos[c]) {
                                comp[(r, c)] = block[(pr, pc)];
                            }
                        }
                    }
                    // local index = 2*alice + bob; transpose the alice index
                    let mut pt = CMatrix::zeros(4, 4);
                    for r in 0..4 {
                        for c in 0..4 {
                            let (ra, rb, ca, cb) = (r / 2, r % 2, c / 2, c % 2);
                            pt[(2 * ca + rb, 2 * ra + cb)] = comp[(r, c)];
                        }
                    }
                    if let Some(&m) = linalg::hermitian_eigenvalues(&pt).first() {
                        best = best.min(m);
                        if best < -EIGEN_TOL {
                            return best;
                        }
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::PureState;
    use crate::ssr::twirl_pure;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn lbl(a: &[u32], b: &[u32]) -> BasisLabel {
        BasisLabel::new(a.to_vec(), b.to_vec())
    }

    fn state(a: usize, b: usize, terms: &[(f64, &[u32], &[u32])]) -> PureState {
        let l = ModeLayout::new(a, b).unwrap();
        PureState::make_ket(l, terms.iter().map(|(x, p, q)| (c(*x), lbl(p, q))))
            .unwrap()
            .normalized()
            .unwrap()
    }

    fn veper() -> PureState {
        state(1, 1, &[(1.0, &[0], &[1]), (1.0, &[1], &[0])])
    }

    fn eepr() -> PureState {
        state(2, 2, &[(1.0, &[0, 1], &[1, 0]), (1.0, &[1, 0], &[0, 1])])
    }

    #[test]
    fn eepr_partial_transpose_has_negative_half() {
        let rho = DensityOperator::from_pure(&eepr()).unwrap();
        let min = min_partial_transpose_eigenvalue(&rho);
        assert!((min + 0.5).abs() < 1e-9, "{min}");
        assert!(!is_ppt(&rho, EIGEN_TOL));
    }

    #[test]
    fn product_and_twirled_states_are_ppt() {
        let plus = state(
            1,
            1,
            &[
                (1.0, &[0], &[0]),
                (1.0, &[0], &[1]),
                (1.0, &[1], &[0]),
                (1.0, &[1], &[1]),
            ],
        );
        assert!(is_ppt(&DensityOperator::from_pure(&plus).unwrap(), EIGEN_TOL));
        let rule = ChargeRule::TotalNumber;
        assert!(is_ppt(&twirl_pure(&veper(), rule).unwrap(), EIGEN_TOL));
        assert!(is_ppt(&twirl_pure(&plus, rule).unwrap(), EIGEN_TOL));
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let rho = DensityOperator::from_pure(&eepr()).unwrap();
        for party in [Party::A, Party::B] {
            let back = partial_transpose(&rho, party).partial_transpose(party);
            assert_eq!(&back, rho.operator());
        }
    }

    #[test]
    fn density_validation() {
        let l = ModeLayout::new(1, 1).unwrap();
        let mut e = Entries::new();
        e.insert((lbl(&[0], &[0]), lbl(&[0], &[0])), c(0.5));
        assert!(DensityOperator::new(SparseOperator::from_entries(l, e.clone())).is_err());
        e.insert((lbl(&[1], &[0]), lbl(&[1], &[0])), c(0.5));
        assert!(DensityOperator::new(SparseOperator::from_entries(l, e.clone())).is_ok());
        e.insert((lbl(&[0], &[0]), lbl(&[1], &[0])), c(0.9));
        e.insert((lbl(&[1], &[0]), lbl(&[0], &[0])), c(0.9));
        assert!(DensityOperator::new(SparseOperator::from_entries(l, e)).is_err());
    }

    #[test]
    fn twirled_oracle_examples() {
        let rule = ChargeRule::TotalNumber;
        assert!(twirled_one_distillable(&twirl_pure(&eepr(), rule).unwrap(), rule).unwrap());
        assert!(!twirled_one_distillable(&twirl_pure(&veper(), rule).unwrap(), rule).unwrap());
        let vv = veper().tensor(&veper());
        let v = twirled_verdict(&twirl_pure(&vv, rule).unwrap(), rule).unwrap();
        assert!(v.distillable);
        assert_eq!(v.witness, Some(SectorKey::new(1, 1)));
    }

    #[test]
    fn oracle_rejects_coherences_between_sectors() {
        let rho = DensityOperator::from_pure(&veper()).unwrap();
        assert!(matches!(
            twirled_one_distillable(&rho, ChargeRule::TotalNumber),
            Err(Error::Domain(_))
        ));
    }
}
