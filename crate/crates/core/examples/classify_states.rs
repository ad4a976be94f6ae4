//! Classification of the standard states under local photon-number
//! superselection.

use ssr_ent::states;
use ssr_ent::{classify, ChargeRule, PureState};

pub fn main() {
    let rule = ChargeRule::TotalNumber;
    let table: [(&str, PureState); 9] = [
        ("vacuum", PureState::basis(vec![0], vec![0]).unwrap()),
        ("|0;1>", PureState::basis(vec![0], vec![1]).unwrap()),
        ("|+>|+>", states::refbit_plus()),
        ("|->|->", states::refbit_minus()),
        ("single photon", states::veper()),
        ("dual rail", states::eepr()),
        ("psi'", states::psi_2d_prime()),
        ("psi''", states::psi_2d_double_prime()),
        ("psi_3", states::psi_3d()),
    ];

    println!("{:<14} {:<15} {:>6}  witness", "state", "class", "copies");
    for (name, psi) in &table {
        let r = classify(psi, rule).unwrap();
        assert!(r.is_consistent());
        let n = r.distillation_number.map_or("-".to_string(), |n| n.to_string());
        let w = r
            .witness
            .map_or(String::new(), |w| format!("{} in {}", w.copies, w.sector));
        println!("{name:<14} {:<15} {n:>6}  {w}", r.class.to_string());
    }
}
