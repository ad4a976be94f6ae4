//! Sparse Fock-basis states of a bipartite system of bosonic modes.
//!
//! A state is a finite map from occupation-number labels to complex
//! amplitudes. Nothing is ever expanded over a truncated Fock space: dense
//! matrices are only built over the distinct sub-labels that actually occur in
//! a state's support.
//!
//! Multi-copy states use the party-wise layout: the tensor product of two
//! states puts all of Alice's modes (first factor, then second) before all of
//! Bob's, so the A:B cut is the same cut for every number of copies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Amplitudes with magnitude at or below this are dropped from the support.
pub const DROP_TOL: f64 = 1e-12;
/// Relative tolerance on singular values when counting Schmidt rank.
pub const RANK_TOL: f64 = 1e-9;
/// Tolerance on unit norm.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::A => f.write_str("A"),
            Party::B => f.write_str("B"),
        }
    }
}

/// Number of modes held by each party.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeLayout {
    alice_modes: usize,
    bob_modes: usize,
}

impl ModeLayout {
    pub fn new(alice_modes: usize, bob_modes: usize) -> Result<Self> {
        if alice_modes == 0 || bob_modes == 0 {
            return Err(Error::Layout(format!(
                "each party needs at least one mode, got {alice_modes}+{bob_modes}"
            )));
        }
        Ok(Self { alice_modes, bob_modes })
    }

    pub fn alice_modes(&self) -> usize {
        self.alice_modes
    }

    pub fn bob_modes(&self) -> usize {
        self.bob_modes
    }

    pub fn modes(&self, party: Party) -> usize {
        match party {
            Party::A => self.alice_modes,
            Party::B => self.bob_modes,
        }
    }

    /// Party-wise concatenation, as produced by [`PureState::tensor`].
    pub fn concat(&self, other: &ModeLayout) -> ModeLayout {
        ModeLayout {
            alice_modes: self.alice_modes + other.alice_modes,
            bob_modes: self.bob_modes + other.bob_modes,
        }
    }

    /// Layout of `copies` party-wise copies of a state with this layout.
    pub fn copies(&self, copies: usize) -> ModeLayout {
        ModeLayout {
            alice_modes: self.alice_modes * copies,
            bob_modes: self.bob_modes * copies,
        }
    }

    /// Mode indices of copy `k` (zero based) on `party` in a multi-copy layout.
    pub fn copy_modes(&self, party: Party, k: usize) -> Vec<usize> {
        let m = self.modes(party);
        (k * m..(k + 1) * m).collect()
    }
}

impl fmt::Display for ModeLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.alice_modes, self.bob_modes)
    }
}

/// Occupation numbers of every mode, Alice's then Bob's.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    alice: Vec<u32>,
    bob: Vec<u32>,
}

impl BasisLabel {
    pub fn new(alice: Vec<u32>, bob: Vec<u32>) -> Self {
        Self { alice, bob }
    }

    pub fn alice(&self) -> &[u32] {
        &self.alice
    }

    pub fn bob(&self) -> &[u32] {
        &self.bob
    }

    pub fn side(&self, party: Party) -> &[u32] {
        match party {
            Party::A => &self.alice,
            Party::B => &self.bob,
        }
    }

    fn side_mut(&mut self, party: Party) -> &mut Vec<u32> {
        match party {
            Party::A => &mut self.alice,
            Party::B => &mut self.bob,
        }
    }

    pub fn fits(&self, layout: &ModeLayout) -> bool {
        self.alice.len() == layout.alice_modes && self.bob.len() == layout.bob_modes
    }

    /// Party-wise concatenation.
    pub fn concat(&self, other: &BasisLabel) -> BasisLabel {
        let mut alice = self.alice.clone();
        alice.extend_from_slice(&other.alice);
        let mut bob = self.bob.clone();
        bob.extend_from_slice(&other.bob);
        BasisLabel { alice, bob }
    }

    /// Occupations of the selected modes of one party, in the given order.
    pub fn select(&self, party: Party, modes: &[usize]) -> Vec<u32> {
        let side = self.side(party);
        modes.iter().map(|&m| side[m]).collect()
    }

    fn with_selected(&self, party: Party, modes: &[usize], occ: &[u32]) -> BasisLabel {
        let mut out = self.clone();
        let side = out.side_mut(party);
        for (&m, &n) in modes.iter().zip(occ) {
            side[m] = n;
        }
        out
    }
}

fn join(occ: &[u32]) -> String {
    occ.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{};{}>", join(&self.alice), join(&self.bob))
    }
}

/// A vector on the modes of a single party: used for local subspace bases,
/// single-party factors of product states and local measurement outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalKet {
    modes: usize,
    amps: BTreeMap<Vec<u32>, Complex64>,
}

impl LocalKet {
    pub fn basis(occ: Vec<u32>) -> Self {
        let modes = occ.len();
        let mut amps = BTreeMap::new();
        amps.insert(occ, Complex64::new(1.0, 0.0));
        Self { modes, amps }
    }

    pub fn from_terms(modes: usize, terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>) -> Result<Self> {
        let mut amps: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (occ, a) in terms {
            if occ.len() != modes {
                return Err(Error::Layout(format!(
                    "local label {} has {} modes, expected {modes}",
                    join(&occ),
                    occ.len()
                )));
            }
            *amps.entry(occ).or_default() += a;
        }
        amps.retain(|_, a| a.norm() > DROP_TOL);
        Ok(Self { modes, amps })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitude(&self, occ: &[u32]) -> Complex64 {
        self.amps.get(occ).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.amps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n <= DROP_TOL {
            return Err(Error::EmptyState);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            modes: self.modes,
            amps: self
                .amps
                .iter()
                .map(|(k, a)| (k.clone(), a * c))
                .filter(|(_, a)| a.norm() > DROP_TOL)
                .collect(),
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &LocalKet) -> Complex64 {
        self.amps
            .iter()
            .filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b))
            .sum()
    }

    /// Tensor product on concatenated modes.
    pub fn tensor(&self, other: &LocalKet) -> LocalKet {
        let mut amps = BTreeMap::new();
        for (k1, a1) in &self.amps {
            for (k2, a2) in &other.amps {
                let mut k = k1.clone();
                k.extend_from_slice(k2);
                amps.insert(k, a1 * a2);
            }
        }
        LocalKet {
            modes: self.modes + other.modes,
            amps,
        }
    }

    /// Sum of two kets on the same modes.
    pub fn add(&self, other: &LocalKet) -> Result<LocalKet> {
        LocalKet::from_terms(
            self.modes,
            self.amps.iter().chain(other.amps.iter()).map(|(k, a)| (k.clone(), *a)),
        )
    }

    /// Total particle number of every label, if it is the same for all of them.
    pub fn common_total(&self) -> Option<u32> {
        let mut totals = self.amps.keys().map(|k| k.iter().sum::<u32>());
        let first = totals.next()?;
        totals.all(|t| t == first).then_some(first)
    }
}

impl fmt::Display for LocalKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.amps.iter().map(|(k, a)| (format!("|{}>", join(k)), *a)))
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (String, Complex64)>) -> fmt::Result {
    let mut first = true;
    for (ket, a) in terms {
        let (neg, a) = if a.im == 0.0 && a.re < 0.0 {
            (true, -a)
        } else {
            (false, a)
        };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
            (true, false) => {}
        }
        first = false;
        if a == Complex64::new(1.0, 0.0) {
            f.write_str(&ket)?;
        } else if a.im == 0.0 {
            write!(f, "{} {}", a.re, ket)?;
        } else {
            write!(f, "({}{:+}i) {}", a.re, a.im, ket)?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// A bipartite pure state with finite support in the Fock basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    layout: ModeLayout,
    amps: BTreeMap<BasisLabel, Complex64>,
}

impl PureState {
    /// Builds a superposition. Duplicate labels are summed and amplitudes at
    /// or below [`DROP_TOL`] are dropped. The result is not normalized.
    pub fn make_ket(layout: ModeLayout, terms: impl IntoIterator<Item = (Complex64, BasisLabel)>) -> Result<Self> {
        let mut amps: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
        for (a, label) in terms {
            if !label.fits(&layout) {
                return Err(Error::Layout(format!("label {label} does not match layout {layout}")));
            }
            *amps.entry(label).or_default() += a;
        }
        amps.retain(|_, a| a.norm() > DROP_TOL);
        if amps.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self { layout, amps })
    }

    /// The zero vector, which is what an orthogonal projection produces.
    pub fn zero(layout: ModeLayout) -> Self {
        Self {
            layout,
            amps: BTreeMap::new(),
        }
    }

    /// A single basis ket with unit amplitude.
    pub fn basis(alice: Vec<u32>, bob: Vec<u32>) -> Result<Self> {
        let layout = ModeLayout::new(alice.len(), bob.len())?;
        Self::make_ket(layout, [(Complex64::new(1.0, 0.0), BasisLabel::new(alice, bob))])
    }

    /// `|a>_A |b>_B`.
    pub fn product(a: &LocalKet, b: &LocalKet) -> Result<Self> {
        let layout = ModeLayout::new(a.modes(), b.modes())?;
        let terms = a.iter().flat_map(|(ka, va)| {
            b.iter()
                .map(move |(kb, vb)| (va * vb, BasisLabel::new(ka.clone(), kb.clone())))
        });
        Self::make_ket(layout, terms)
    }

    fn from_map(layout: ModeLayout, mut amps: BTreeMap<BasisLabel, Complex64>) -> Self {
        amps.retain(|_, a| a.norm() > DROP_TOL);
        Self { layout, amps }
    }

    pub fn layout(&self) -> ModeLayout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.amps.iter()
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.amps.get(label).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if self.amps.is_empty() || n <= DROP_TOL {
            return Err(Error::EmptyState);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_map(self.layout, self.amps.iter().map(|(k, a)| (k.clone(), a * c)).collect())
    }

    /// `<self|other>`; zero when the layouts differ.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        if self.layout != other.layout {
            return Complex64::default();
        }
        self.amps
            .iter()
            .filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b))
            .sum()
    }

    /// `|<self|other>|^2 / (<self|self><other|other>)`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        let d = self.norm_sqr() * other.norm_sqr();
        if d == 0.0 {
            return 0.0;
        }
        self.inner(other).norm_sqr() / d
    }

    /// Party-wise tensor product: Alice's modes of `self` then `other`, and
    /// likewise for Bob.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = BTreeMap::new();
        for (k1, a1) in &self.amps {
            for (k2, a2) in &other.amps {
                amps.insert(k1.concat(k2), a1 * a2);
            }
        }
        Self::from_map(self.layout.concat(&other.layout), amps)
    }

    /// `copies`-fold party-wise tensor power.
    pub fn tensor_power(&self, copies: usize) -> PureState {
        assert!(copies >= 1, "tensor power needs at least one copy");
        let mut out = self.clone();
        for _ in 1..copies {
            out = out.tensor(self);
        }
        out
    }

    /// Distinct sub-labels of one party over the support, in label order.
    pub fn sub_labels(&self, party: Party) -> Vec<Vec<u32>> {
        let set: BTreeSet<Vec<u32>> = self.amps.keys().map(|k| k.side(party).to_vec()).collect();
        set.into_iter().collect()
    }

    /// The A:B coefficient matrix over the support's sub-labels.
    pub fn coefficient_matrix(&self) -> (Vec<Vec<u32>>, Vec<Vec<u32>>, CMatrix) {
        let rows = self.sub_labels(Party::A);
        let cols = self.sub_labels(Party::B);
        let row_idx: BTreeMap<&[u32], usize> = rows.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
        let col_idx: BTreeMap<&[u32], usize> = cols.iter().enumerate().map(|(j, c)| (c.as_slice(), j)).collect();
        let mut m = CMatrix::zeros(rows.len(), cols.len());
        for (k, a) in &self.amps {
            m[(row_idx[k.alice()], col_idx[k.bob()])] = *a;
        }
        (rows, cols, m)
    }

    /// Singular values of the coefficient matrix, descending.
    pub fn schmidt_coefficients(&self) -> Result<Vec<f64>> {
        if self.amps.is_empty() {
            return Err(Error::EmptyState);
        }
        let (_, _, m) = self.coefficient_matrix();
        Ok(linalg::singular_values(&m))
    }

    pub fn schmidt_rank(&self, tol: f64) -> Result<usize> {
        let sv = self.schmidt_coefficients()?;
        let top = sv[0];
        Ok(sv.iter().filter(|&&s| s > tol * top).count())
    }

    /// True iff exactly one Schmidt coefficient exceeds `tol` times the largest.
    pub fn is_product(&self, tol: f64) -> Result<bool> {
        Ok(self.schmidt_rank(tol)? == 1)
    }

    /// Component on the labels accepted by `keep`, with its squared norm.
    pub fn project(&self, keep: impl Fn(&BasisLabel) -> bool) -> (PureState, f64) {
        let kept: BTreeMap<BasisLabel, Complex64> = self
            .amps
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, a)| (k.clone(), *a))
            .collect();
        let out = Self::from_map(self.layout, kept);
        let p = out.norm_sqr();
        (out, p)
    }

    /// Applies `sum_k |v_k><v_k|` on the selected modes of one party. The
    /// vectors must be orthonormal and live on `modes.len()` modes.
    pub fn apply_local_projector(&self, party: Party, modes: &[usize], basis: &[LocalKet]) -> PureState {
        debug_assert!(basis.iter().all(|v| v.modes() == modes.len()));
        let mut out: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
        for (label, a) in &self.amps {
            let occ = label.select(party, modes);
            for v in basis {
                let overlap = v.amplitude(&occ).conj();
                if overlap == Complex64::default() {
                    continue;
                }
                let c = a * overlap;
                for (occ2, w) in v.iter() {
                    *out.entry(label.with_selected(party, modes, occ2)).or_default() += c * w;
                }
            }
        }
        Self::from_map(self.layout, out)
    }

    /// Reorders one party's modes: new mode `i` is old mode `perm[i]`.
    pub fn permute_modes(&self, party: Party, perm: &[usize]) -> Result<PureState> {
        let n = self.layout.modes(party);
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Layout(format!("{perm:?} is not a permutation of {n} modes")));
        }
        let amps = self
            .amps
            .iter()
            .map(|(k, a)| {
                let mut k2 = k.clone();
                let side = k.side(party);
                *k2.side_mut(party) = perm.iter().map(|&p| side[p]).collect();
                (k2, *a)
            })
            .collect();
        Ok(Self::from_map(self.layout, amps))
    }

    /// Largest entrywise amplitude difference to `other`.
    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        let keys: BTreeSet<&BasisLabel> = self.amps.keys().chain(other.amps.keys()).collect();
        keys.into_iter()
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.amps.iter().map(|(k, a)| (k.to_string(), *a)))
    }
}
