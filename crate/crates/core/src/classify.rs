//! Entanglement classes of pure states under a local Abelian rule.
//!
//! A single copy is 1-distillable iff some charge-sector block of the state is
//! itself entangled. Every locally invariant 2x2 subspace sits inside one
//! sector pair, and an entangled block always has an entangled 2x2 basis
//! compression, so the sector scan is exact. The `n`-copy question is the same
//! scan on the party-wise tensor power; any non-product state is found
//! distillable by three copies at the latest.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Party, PureState, RANK_TOL};
use crate::linalg;
use crate::ssr::{is_locally_invariant, local_charge, sector_blocks, ChargeRule, SectorKey};

/// One past the three copies that always suffice, so a broken scan surfaces
/// as a consistency error rather than running on.
pub const DEFAULT_MAX_COPIES: usize = 4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntanglementClass {
    /// Product and locally invariant: preparable under the rule.
    LP,
    /// Product but not invariant: preparable once the rule is lifted.
    BLP,
    /// Entangled and 1-distillable under the rule.
    OneDistillable,
    /// Entangled but not 1-distillable.
    BoundOneD,
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EntanglementClass::LP => "LP",
            EntanglementClass::BLP => "BLP",
            EntanglementClass::OneDistillable => "OneDistillable",
            EntanglementClass::BoundOneD => "BoundOneD",
        };
        f.write_str(s)
    }
}

/// The sector of the `copies`-fold tensor power whose block is entangled.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub copies: usize,
    pub sector: SectorKey,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub is_product: bool,
    pub is_locally_invariant: bool,
    pub class: EntanglementClass,
    pub distillation_number: Option<u8>,
    pub witness: Option<Witness>,
}

impl ClassificationReport {
    /// Checks the relations between the flags, class and distillation number.
    pub fn is_consistent(&self) -> bool {
        let class_ok = match self.class {
            EntanglementClass::LP => self.is_product && self.is_locally_invariant,
            EntanglementClass::BLP => self.is_product && !self.is_locally_invariant,
            EntanglementClass::OneDistillable => self.distillation_number == Some(1),
            EntanglementClass::BoundOneD => !self.is_product && self.distillation_number.is_some_and(|n| n >= 2),
        };
        class_ok && (self.distillation_number.is_some() == !self.is_product)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Classifier {
    pub rule: ChargeRule,
    pub max_copies: usize,
}

impl Classifier {
    pub fn new(rule: ChargeRule) -> Self {
        Self {
            rule,
            max_copies: DEFAULT_MAX_COPIES,
        }
    }

    pub fn with_max_copies(mut self, max_copies: usize) -> Self {
        self.max_copies = max_copies;
        self
    }

    /// Lexicographically first sector whose block is entangled.
    pub fn is_one_distillable(&self, psi: &PureState) -> Result<(bool, Option<SectorKey>)> {
        if psi.is_empty() {
            return Err(Error::EmptyState);
        }
        if psi.is_product(RANK_TOL)? {
            return Ok((false, None));
        }
        for (key, block) in sector_blocks(psi, self.rule) {
            if !block.is_product(RANK_TOL)? {
                return Ok((true, Some(key)));
            }
        }
        Ok((false, None))
    }

    pub fn is_n_distillable(&self, psi: &PureState, copies: usize) -> Result<(bool, Option<SectorKey>)> {
        if copies == 0 {
            return Err(Error::Domain("copy count must be at least 1".into()));
        }
        if copies > self.max_copies {
            return Err(Error::ResourceLimit(format!(
                "{copies} copies requested, limit is {}",
                self.max_copies
            )));
        }
        if psi.is_empty() {
            return Err(Error::EmptyState);
        }
        if psi.is_product(RANK_TOL)? {
            return Ok((false, None));
        }
        self.is_one_distillable(&psi.tensor_power(copies))
    }

    /// Smallest number of copies that is 1-distillable, with its witness.
    pub fn distillation_witness(&self, psi: &PureState) -> Result<Witness> {
        if psi.is_product(RANK_TOL)? {
            return Err(Error::Domain("product states are not distillable".into()));
        }
        for copies in 1..=3 {
            if let (true, Some(sector)) = self.is_n_distillable(psi, copies)? {
                return Ok(Witness { copies, sector });
            }
        }
        Err(Error::Consistency(
            "non-product state is not 3-distillable; the copy scan would have to reach 4".into(),
        ))
    }

    pub fn distillation_number(&self, psi: &PureState) -> Result<u8> {
        Ok(self.distillation_witness(psi)?.copies as u8)
    }

    pub fn classify(&self, psi: &PureState) -> Result<ClassificationReport> {
        let is_product = psi.is_product(RANK_TOL)?;
        let invariant = is_locally_invariant(psi, self.rule);
        let report = if is_product {
            ClassificationReport {
                is_product,
                is_locally_invariant: invariant,
                class: if invariant {
                    EntanglementClass::LP
                } else {
                    EntanglementClass::BLP
                },
                distillation_number: None,
                witness: None,
            }
        } else {
            let w = self.distillation_witness(psi)?;
            ClassificationReport {
                is_product,
                is_locally_invariant: invariant,
                class: if w.copies == 1 {
                    EntanglementClass::OneDistillable
                } else {
                    EntanglementClass::BoundOneD
                },
                distillation_number: Some(w.copies as u8),
                witness: Some(w),
            }
        };
        if !report.is_consistent() {
            return Err(Error::Consistency(format!("inconsistent report {report:?}")));
        }
        Ok(report)
    }
}

pub fn is_one_distillable(psi: &PureState, rule: ChargeRule) -> Result<(bool, Option<SectorKey>)> {
    Classifier::new(rule).is_one_distillable(psi)
}

pub fn is_n_distillable(psi: &PureState, copies: usize, rule: ChargeRule) -> Result<(bool, Option<SectorKey>)> {
    Classifier::new(rule).is_n_distillable(psi, copies)
}

pub fn distillation_number(psi: &PureState, rule: ChargeRule) -> Result<u8> {
    Classifier::new(rule).distillation_number(psi)
}

pub fn classify(psi: &PureState, rule: ChargeRule) -> Result<ClassificationReport> {
    Classifier::new(rule).classify(psi)
}

/// Two local labels spanning a 2x2 subspace on one side.
pub type LabelPair = (Vec<u32>, Vec<u32>);

/// Pair of local 2x2 basis-label subspaces, each spanned by two labels of
/// equal charge, on which `psi` compresses to an entangled state. Finding one
/// is sufficient for 1-distillability; it is kept as a cross-check on the
/// sector scan.
pub fn invariant_subspace_witness(psi: &PureState, rule: ChargeRule) -> Option<(LabelPair, LabelPair)> {
    let (rows, cols, m) = psi.coefficient_matrix();
    let row_charge: Vec<u32> = rows.iter().map(|r| rule.charge(r)).collect();
    let col_charge: Vec<u32> = cols.iter().map(|c| rule.charge(c)).collect();
    for i1 in 0..rows.len() {
        for i2 in i1 + 1..rows.len() {
            if row_charge[i1] != row_charge[i2] {
                continue;
            }
            for j1 in 0..cols.len() {
                for j2 in j1 + 1..cols.len() {
                    if col_charge[j1] != col_charge[j2] {
                        continue;
                    }
                    let block = [[m[(i1, j1)], m[(i1, j2)]], [m[(i2, j1)], m[(i2, j2)]]];
                    if linalg::is_rank_two_2x2(&block, RANK_TOL) {
                        return Some((
                            (rows[i1].clone(), rows[i2].clone()),
                            (cols[j1].clone(), cols[j2].clone()),
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Local charges present on one party, for reporting.
pub fn party_charges(psi: &PureState, party: Party, rule: ChargeRule) -> Vec<u32> {
    let mut v: Vec<u32> = psi.iter().map(|(l, _)| local_charge(l, party, rule)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{BasisLabel, ModeLayout};
    use num_complex::Complex64;

    fn state(a: usize, b: usize, terms: &[(f64, &[u32], &[u32])]) -> PureState {
        let l = ModeLayout::new(a, b).unwrap();
        PureState::make_ket(
            l,
            terms
                .iter()
                .map(|(x, p, q)| (Complex64::new(*x, 0.0), BasisLabel::new(p.to_vec(), q.to_vec()))),
        )
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

    const U1: ChargeRule = ChargeRule::TotalNumber;

    #[test]
    fn one_distillability_examples() {
        assert_eq!(
            is_one_distillable(&eepr(), U1).unwrap(),
            (true, Some(SectorKey::new(1, 1)))
        );
        assert_eq!(is_one_distillable(&veper(), U1).unwrap(), (false, None));
        assert_eq!(is_one_distillable(&psi_3d(), U1).unwrap(), (false, None));
    }

    #[test]
    fn n_copy_examples() {
        assert_eq!(
            is_n_distillable(&veper(), 2, U1).unwrap(),
            (true, Some(SectorKey::new(1, 1)))
        );
        assert_eq!(is_n_distillable(&psi_3d(), 2, U1).unwrap(), (false, None));
        let (ok, key) = is_n_distillable(&psi_3d(), 3, U1).unwrap();
        assert!(ok);
        // first entangled block of the 3-copy power, found by scanning sectors
        assert_eq!(key, Some(SectorKey::new(1, 1)));
    }

    #[test]
    fn copy_bound_is_enforced() {
        let c = Classifier::new(U1).with_max_copies(2);
        assert!(matches!(c.is_n_distillable(&veper(), 3), Err(Error::ResourceLimit(_))));
        assert!(matches!(c.distillation_number(&psi_3d()), Err(Error::ResourceLimit(_))));
        assert!(matches!(is_n_distillable(&veper(), 0, U1), Err(Error::Domain(_))));
    }

    #[test]
    fn distillation_numbers() {
        assert_eq!(distillation_number(&eepr(), U1).unwrap(), 1);
        assert_eq!(distillation_number(&veper(), U1).unwrap(), 2);
        assert_eq!(distillation_number(&psi_3d(), U1).unwrap(), 3);
        let prod = PureState::basis(vec![0], vec![1]).unwrap();
        assert!(matches!(distillation_number(&prod, U1), Err(Error::Domain(_))));
    }

    #[test]
    fn class_examples() {
        let lp = classify(&PureState::basis(vec![0], vec![1]).unwrap(), U1).unwrap();
        assert_eq!(lp.class, EntanglementClass::LP);
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
        assert_eq!(classify(&plus, U1).unwrap().class, EntanglementClass::BLP);
        let v = classify(&veper(), U1).unwrap();
        assert_eq!(v.class, EntanglementClass::BoundOneD);
        assert_eq!(v.distillation_number, Some(2));
        assert!(v.is_consistent());
    }

    #[test]
    fn subspace_cross_check() {
        assert!(invariant_subspace_witness(&eepr(), U1).is_some());
        assert!(invariant_subspace_witness(&veper(), U1).is_none());
        assert!(invariant_subspace_witness(&psi_3d(), U1).is_none());
    }

    #[test]
    fn mod_rule_can_make_states_distillable() {
        // under Z_2 the charges 0 and 2 coincide
        let s = state(1, 1, &[(1.0, &[0], &[0]), (1.0, &[2], &[2])]);
        assert_eq!(classify(&s, U1).unwrap().distillation_number, Some(2));
        let z2 = ChargeRule::modulo(2).unwrap();
        assert_eq!(classify(&s, z2).unwrap().class, EntanglementClass::OneDistillable);
    }
}
