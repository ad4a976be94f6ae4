//! A shared reference pair activates a single delocalized photon; for other
//! bound states the activator is built from an entangled 2x2 compression.

use ssr_ent::protocols::{build_activator, verify_activation};
use ssr_ent::{classify, states, ChargeRule, EntanglementClass};

pub fn main() {
    let rule = ChargeRule::TotalNumber;

    let (ok, out) = verify_activation(&states::veper(), &states::refbit_plus(), rule).unwrap();
    assert!(ok);
    for step in &out.transcript {
        println!("{} (p = {:.4})", step.action, step.probability);
    }
    let output = out.output.unwrap();
    println!("output {output}");
    println!(
        "probability {:.6}, fidelity to dual rail {:.12}",
        out.probability,
        output.fidelity(&states::eepr())
    );

    for (name, psi) in [("psi''", states::psi_2d_double_prime()), ("psi_3", states::psi_3d())] {
        let (chi, _) = build_activator(&psi, rule).unwrap();
        assert_eq!(classify(&chi, rule).unwrap().class, EntanglementClass::BLP);
        let (ok, out) = verify_activation(&psi, &chi, rule).unwrap();
        println!(
            "{name}: activator {chi}, success {ok}, probability {:.6}",
            out.probability
        );
    }
}
