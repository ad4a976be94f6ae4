//! Local Abelian superselection rules.
//!
//! A rule assigns each party's occupation list a conserved charge: the total
//! particle number (U(1)) or that number modulo `d` (Z_d). Every irrep of an
//! Abelian group is one-dimensional, so the group average over local phases
//! collapses to a sum of projectors onto charge sectors. That projector form
//! is what is implemented here; no numerical integration over phases is done.
//!
//! On multi-copy states charges add across copies, which falls out of the
//! party-wise layout since the charge is a sum over all of a party's modes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, Party, PureState};
use crate::oracle::{DensityOperator, SparseOperator};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ChargeRule {
    /// U(1): local photon/particle number.
    #[default]
    TotalNumber,
    /// Z_d: local number modulo `d`, with `d >= 2`.
    TotalNumberMod(u32),
}

impl ChargeRule {
    pub fn modulo(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedRule(format!("modulus must be at least 2, got {d}")));
        }
        Ok(ChargeRule::TotalNumberMod(d))
    }

    /// Charge of a local occupation list.
    pub fn charge(&self, occ: &[u32]) -> u32 {
        let n: u32 = occ.iter().sum();
        match *self {
            ChargeRule::TotalNumber => n,
            ChargeRule::TotalNumberMod(d) => n % d,
        }
    }
}

impl fmt::Display for ChargeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChargeRule::TotalNumber => f.write_str("number"),
            ChargeRule::TotalNumberMod(d) => write!(f, "mod:{d}"),
        }
    }
}

impl FromStr for ChargeRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "number" || s == "u1" {
            return Ok(ChargeRule::TotalNumber);
        }
        if let Some(d) = s.strip_prefix("mod:") {
            let d: u32 = d
                .trim()
                .parse()
                .map_err(|_| Error::UnsupportedRule(format!("bad modulus in {s:?}")))?;
            return ChargeRule::modulo(d);
        }
        let lower = s.to_ascii_lowercase();
        if ["su2", "su(2)", "so3", "so(3)", "su3", "su(3)"].contains(&lower.as_str()) {
            return Err(Error::UnsupportedRule(format!(
                "{s} is non-Abelian; only `number` and `mod:d` rules are supported"
            )));
        }
        Err(Error::UnsupportedRule(format!(
            "unknown rule {s:?}; expected `number` or `mod:d`"
        )))
    }
}

/// Pair of local charges `(alice, bob)`; ordered lexicographically.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectorKey {
    pub alice_charge: u32,
    pub bob_charge: u32,
}

impl SectorKey {
    pub fn new(alice_charge: u32, bob_charge: u32) -> Self {
        Self {
            alice_charge,
            bob_charge,
        }
    }
}

impl fmt::Display for SectorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alice_charge, self.bob_charge)
    }
}

pub fn local_charge(label: &BasisLabel, party: Party, rule: ChargeRule) -> u32 {
    rule.charge(label.side(party))
}

pub fn sector_of(label: &BasisLabel, rule: ChargeRule) -> SectorKey {
    SectorKey::new(rule.charge(label.alice()), rule.charge(label.bob()))
}

/// Unnormalized sector components of `psi`, keyed in lexicographic order.
pub fn sector_blocks(psi: &PureState, rule: ChargeRule) -> BTreeMap<SectorKey, PureState> {
    let mut terms: BTreeMap<SectorKey, Vec<(Complex64, BasisLabel)>> = BTreeMap::new();
    for (label, a) in psi.iter() {
        terms
            .entry(sector_of(label, rule))
            .or_default()
            .push((*a, label.clone()));
    }
    terms
        .into_iter()
        .filter_map(|(key, t)| PureState::make_ket(psi.layout(), t).ok().map(|s| (key, s)))
        .collect()
}

/// Component of `psi` with local charges `key`, and its squared norm.
pub fn sector_project(psi: &PureState, key: SectorKey, rule: ChargeRule) -> (PureState, f64) {
    psi.project(|label| sector_of(label, rule) == key)
}

/// Weight of every occupied sector.
pub fn sector_support(psi: &PureState, rule: ChargeRule) -> BTreeMap<SectorKey, f64> {
    let mut out: BTreeMap<SectorKey, f64> = BTreeMap::new();
    for (label, a) in psi.iter() {
        *out.entry(sector_of(label, rule)).or_default() += a.norm_sqr();
    }
    out.retain(|_, w| *w > 0.0);
    out
}

/// Charges of one party that occur in the support, with their weights.
pub fn charge_support(psi: &PureState, party: Party, rule: ChargeRule) -> BTreeMap<u32, f64> {
    let mut out: BTreeMap<u32, f64> = BTreeMap::new();
    for (label, a) in psi.iter() {
        *out.entry(local_charge(label, party, rule)).or_default() += a.norm_sqr();
    }
    out
}

/// A pure state is invariant under both local twirls iff it is a joint
/// eigenstate of the two local charges, i.e. it occupies a single sector.
pub fn is_locally_invariant(psi: &PureState, rule: ChargeRule) -> bool {
    sector_support(psi, rule).len() == 1
}

/// Applies both local twirls to `|psi><psi|`: keeps exactly the entries whose
/// row and column labels lie in the same sector.
pub fn twirl_pure(psi: &PureState, rule: ChargeRule) -> Result<DensityOperator> {
    let blocks = sector_blocks(psi, rule);
    let mut entries = BTreeMap::new();
    for block in blocks.values() {
        for (x, ax) in block.iter() {
            for (y, ay) in block.iter() {
                entries.insert((x.clone(), y.clone()), ax * ay.conj());
            }
        }
    }
    DensityOperator::new(SparseOperator::from_entries(psi.layout(), entries))
}

/// Twirl of an arbitrary sparse operator: drops inter-sector coherences.
pub fn twirl_operator(op: &SparseOperator, rule: ChargeRule) -> SparseOperator {
    let entries = op
        .iter()
        .filter(|((x, y), _)| sector_of(x, rule) == sector_of(y, rule))
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    SparseOperator::from_entries(op.layout(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeLayout;
    use std::f64::consts::FRAC_1_SQRT_2;

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

    fn plus_plus() -> PureState {
        state(
            1,
            1,
            &[
                (1.0, &[0], &[0]),
                (1.0, &[0], &[1]),
                (1.0, &[1], &[0]),
                (1.0, &[1], &[1]),
            ],
        )
    }

    fn psi_3d() -> PureState {
        state(
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

    #[test]
    fn charges() {
        let l = lbl(&[0, 1], &[1, 0]);
        assert_eq!(local_charge(&l, Party::A, ChargeRule::TotalNumber), 1);
        assert_eq!(local_charge(&l, Party::B, ChargeRule::TotalNumber), 1);
        assert_eq!(
            local_charge(&lbl(&[3], &[0]), Party::A, ChargeRule::modulo(2).unwrap()),
            1
        );
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("number".parse::<ChargeRule>().unwrap(), ChargeRule::TotalNumber);
        assert_eq!("mod:3".parse::<ChargeRule>().unwrap(), ChargeRule::TotalNumberMod(3));
        assert!(matches!("mod:1".parse::<ChargeRule>(), Err(Error::UnsupportedRule(_))));
        let err = "su2".parse::<ChargeRule>().unwrap_err();
        assert!(err.to_string().contains("non-Abelian"));
        assert!("parity".parse::<ChargeRule>().is_err());
        assert_eq!(
            ChargeRule::TotalNumberMod(4).to_string().parse::<ChargeRule>().unwrap(),
            ChargeRule::TotalNumberMod(4)
        );
    }

    #[test]
    fn sector_projection_examples() {
        let rule = ChargeRule::TotalNumber;
        let (s, w) = sector_project(&veper(), SectorKey::new(0, 1), rule);
        assert!((w - 0.5).abs() < 1e-12);
        assert!((s.amplitude(&lbl(&[0], &[1])) - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        let (s, w) = sector_project(&veper(), SectorKey::new(0, 0), rule);
        assert!(s.is_empty() && w == 0.0);
        let (s, w) = sector_project(&psi_3d(), SectorKey::new(1, 1), rule);
        assert!((w - 0.25).abs() < 1e-12);
        assert!((s.amplitude(&lbl(&[1], &[1])) - c(-0.5)).norm() < 1e-12);
    }

    #[test]
    fn sector_support_examples() {
        let rule = ChargeRule::TotalNumber;
        let v = sector_support(&veper(), rule);
        assert_eq!(
            v.keys().copied().collect::<Vec<_>>(),
            vec![SectorKey::new(0, 1), SectorKey::new(1, 0)]
        );
        assert!(v.values().all(|w| (w - 0.5).abs() < 1e-12));
        let e = sector_support(&eepr(), rule);
        assert_eq!(e.len(), 1);
        assert!((e[&SectorKey::new(1, 1)] - 1.0).abs() < 1e-12);
        let p = sector_support(&plus_plus(), rule);
        assert_eq!(p.len(), 4);
        assert!(p.values().all(|w| (w - 0.25).abs() < 1e-12));
    }

    #[test]
    fn invariance_examples() {
        let rule = ChargeRule::TotalNumber;
        assert!(is_locally_invariant(&eepr(), rule));
        assert!(!is_locally_invariant(&veper(), rule));
        assert!(!is_locally_invariant(&plus_plus(), rule));
    }

    #[test]
    fn coarser_mod_rule_merges_sectors() {
        let s = state(1, 1, &[(1.0, &[0], &[0]), (1.0, &[2], &[2])]);
        assert!(!is_locally_invariant(&s, ChargeRule::TotalNumber));
        assert!(is_locally_invariant(&s, ChargeRule::modulo(2).unwrap()));
    }

    #[test]
    fn twirl_examples() {
        let rule = ChargeRule::TotalNumber;
        let t = twirl_pure(&veper(), rule).unwrap();
        assert_eq!(t.operator().len(), 2);
        assert!((t.operator().entry(&lbl(&[0], &[1]), &lbl(&[0], &[1])) - c(0.5)).norm() < 1e-12);
        assert!(t.operator().entry(&lbl(&[0], &[1]), &lbl(&[1], &[0])).norm() == 0.0);

        let e = eepr();
        let te = twirl_pure(&e, rule).unwrap();
        assert_eq!(te.operator().len(), 4);
        let vac = PureState::basis(vec![0], vec![0]).unwrap();
        let tv = twirl_pure(&vac, rule).unwrap();
        assert_eq!(tv.operator().len(), 1);
    }
}
