//! Coherent states as a quantum phase reference: activation of a single
//! delocalized photon and of a two-mode squeezed state.

use num_complex::Complex64;
use ssr_ent::protocols::{coherent_pair, make_two_mode_squeezed, qnd_measure, verify_activation, Truncation};
use ssr_ent::{classify, states, ChargeRule, Party};

pub fn main() {
    let rule = ChargeRule::TotalNumber;
    let trunc = Truncation::default();
    let chi = coherent_pair(Complex64::new(1.0, 0.0), trunc).unwrap();
    println!("coherent pair: cutoff {}, dropped weight {:.4e}", chi.cutoff, chi.loss);

    let (ok, out) = verify_activation(&states::veper(), &chi.state, rule).unwrap();
    let output = out.output.unwrap();
    println!(
        "single photon: success {ok}, p = {:.8} (untruncated {:.8}), fidelity {:.12}",
        out.probability,
        (-2.0f64).exp(),
        output.fidelity(&states::eepr())
    );

    let sq = make_two_mode_squeezed(0.5, trunc).unwrap();
    println!("squeezed state alone: {}", classify(&sq.state, rule).unwrap().class);
    let (ok, out) = verify_activation(&sq.state, &chi.state, rule).unwrap();
    let output = out.output.unwrap();
    println!("squeezed state: success {ok}, p = {:.8}", out.probability);
    println!("  output {output}");
    println!("  Schmidt coefficients {:?}", output.schmidt_coefficients().unwrap());

    println!("photon-number outcomes on Alice's side of the joint state:");
    for o in qnd_measure(&states::veper().tensor(&chi.state), Party::A, rule)
        .unwrap()
        .iter()
        .take(4)
    {
        println!("  n = {}: p = {:.6}", o.charge, o.probability);
    }
}
