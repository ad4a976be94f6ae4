//! Two copies of a bound state distilled into a locally invariant entangled
//! state (protocol B).

use ssr_ent::protocols::protocol_b;
use ssr_ent::{states, ChargeRule};

pub fn main() {
    let rule = ChargeRule::TotalNumber;
    for (name, psi) in [
        ("single photon", states::veper()),
        ("psi'", states::psi_2d_prime()),
        ("psi''", states::psi_2d_double_prime()),
        ("psi_3", states::psi_3d()),
    ] {
        let out = protocol_b(&psi, rule).unwrap();
        let l = out.lambdas.unwrap();
        println!(
            "{name:<14} success {:<5} p = {:.6}  |l+| = {:.6}  |l-| = {:.6}",
            out.success,
            out.probability,
            l.plus.norm(),
            l.minus.norm()
        );
        if let Some(reason) = &out.reason {
            println!("{:<14} {reason}", "");
        }
    }
}
