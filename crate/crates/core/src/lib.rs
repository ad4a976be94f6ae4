//! Entanglement of bipartite pure bosonic states when both parties are bound
//! by a local Abelian superselection rule (photon number, or photon number
//! modulo `d`).
//!
//! - [`fock`]: sparse Fock-basis states, tensor products, Schmidt analysis.
//! - [`ssr`]: charges, sector decomposition, the local twirl.
//! - [`classify`]: LP / BLP / 1-distillable / bound classes and the exact
//!   number of copies needed for distillation.
//! - [`protocols`]: activation by a product state, the three-copy and
//!   two-copy distillation protocols, charge measurements, coherent and
//!   two-mode squeezed states.
//! - [`oracle`]: density operators, partial transpose and an independent
//!   distillability check on twirled states.
//! - [`cli`]: bra-ket expression parser, JSON reports and the command-line
//!   driver behind the `ssr-ent` binary.

pub mod classify;
pub mod cli;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod oracle;
pub mod protocols;
pub mod ssr;
pub mod states;

pub use classify::{
    classify, distillation_number, is_n_distillable, is_one_distillable, ClassificationReport, Classifier,
    EntanglementClass,
};
pub use error::{Error, Result};
pub use fock::{BasisLabel, LocalKet, ModeLayout, Party, PureState};
pub use ssr::{ChargeRule, SectorKey};
