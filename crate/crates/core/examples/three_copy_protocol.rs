//! A state that no two copies can distill: three copies and protocol A.

use ssr_ent::protocols::{distill_auto, protocol_a};
use ssr_ent::{distillation_number, is_n_distillable, states, ChargeRule};

pub fn main() {
    let rule = ChargeRule::TotalNumber;
    let psi = states::psi_3d();
    for n in 1..=3 {
        let (yes, sector) = is_n_distillable(&psi, n, rule).unwrap();
        println!(
            "{n} copies: distillable {yes} {}",
            sector.map_or(String::new(), |s| format!("in sector {s}"))
        );
    }
    assert_eq!(distillation_number(&psi, rule).unwrap(), 3);

    let out = protocol_a(&psi, rule).unwrap();
    assert!(out.success);
    for step in &out.transcript {
        println!("  {} (p = {:.4})", step.action, step.probability);
    }
    println!("activator from copies 1 and 2: {}", out.activator.as_ref().unwrap());
    println!("output {}", out.output.as_ref().unwrap());
    println!("probability {:.6}", out.probability);

    let auto = distill_auto(&psi, rule).unwrap();
    println!("auto picks protocol {}", auto.protocol);
}
