//! Local phase averaging, partial transposition and the independent
//! distillability oracle.

use ssr_ent::oracle::{is_ppt, min_partial_transpose_eigenvalue, twirled_verdict, DensityOperator, EIGEN_TOL};
use ssr_ent::ssr::{sector_support, twirl_pure};
use ssr_ent::{is_one_distillable, states, ChargeRule};

pub fn main() {
    let rule = ChargeRule::TotalNumber;

    let e = DensityOperator::from_pure(&states::eepr()).unwrap();
    println!(
        "dual rail: min PT eigenvalue {:.6}, PPT {}",
        min_partial_transpose_eigenvalue(&e),
        is_ppt(&e, EIGEN_TOL)
    );

    let t = twirl_pure(&states::veper(), rule).unwrap();
    println!("twirled single photon: PPT {}", is_ppt(&t, EIGEN_TOL));
    for ((r, c), v) in t.operator().iter() {
        println!("  {r}{c}: {v}");
    }

    for (name, psi) in [("psi''", states::psi_2d_double_prime()), ("dual rail", states::eepr())] {
        let rho = twirl_pure(&psi, rule).unwrap();
        let verdict = twirled_verdict(&rho, rule).unwrap();
        let (direct, _) = is_one_distillable(&psi, rule).unwrap();
        assert_eq!(verdict.distillable, direct);
        let weights: Vec<String> = sector_support(&psi, rule)
            .iter()
            .map(|(k, w)| format!("{k}: {w:.4}"))
            .collect();
        println!("{name}: sector weights {}", weights.join(", "));
        for b in &verdict.blocks {
            println!(
                "  {} weight {:.4} pure {} distillable {}",
                b.sector,
                b.weight,
                b.pure,
                b.distillable()
            );
        }
    }

    // Number conservation splits |0;0> + |2;2> into two product sectors;
    // parity alone keeps them together.
    let (pair, _) = ssr_ent::cli::parse::parse_state("|0;0> + |2;2>").unwrap();
    for r in [rule, ChargeRule::modulo(2).unwrap()] {
        let (yes, _) = is_one_distillable(&pair, r).unwrap();
        println!("|0;0> + |2;2> under {r}: 1-distillable {yes}");
    }
}
