//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::process::Command;

use num_complex::Complex64;
use ssr_ent::cli::demo::{run_demo, Demo};
use ssr_ent::cli::parse::{parse_state, render};
use ssr_ent::oracle::{is_ppt, min_partial_transpose_eigenvalue, twirled_one_distillable, DensityOperator, EIGEN_TOL};
use ssr_ent::protocols::{build_activator, protocol_a, protocol_b, verify_activation, Truncation};
use ssr_ent::ssr::{sector_support, twirl_operator, twirl_pure};
use ssr_ent::{
    classify, distillation_number, is_n_distillable, is_one_distillable, states, ChargeRule, EntanglementClass,
    PureState,
};

const TOL: f64 = 1e-9;
const RULE: ChargeRule = ChargeRule::TotalNumber;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let class_is = |name: &str, psi: &PureState, want: EntanglementClass| -> Result<(), String> {
        let r = classify(psi, RULE).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.class == want && r.is_consistent(), || format!("{name}: {:?}", r))
    };
    let veper = states::veper();
    class_is("V-EPR", &veper, EntanglementClass::BoundOneD)?;
    ensure(distillation_number(&veper, RULE) == Ok(2), || {
        "V-EPR distillation number".into()
    })?;
    class_is("E-EPR", &states::eepr(), EntanglementClass::OneDistillable)?;
    class_is("|+>|+>", &states::refbit_plus(), EntanglementClass::BLP)?;
    class_is("|->|->", &states::refbit_minus(), EntanglementClass::BLP)?;
    class_is(
        "|0;1>",
        &PureState::basis(vec![0], vec![1]).unwrap(),
        EntanglementClass::LP,
    )?;
    for (name, psi) in [
        ("psi'", states::psi_2d_prime()),
        ("psi''", states::psi_2d_double_prime()),
        ("psi'''", states::psi_2d_triple_prime()),
    ] {
        let r = classify(&psi, RULE).map_err(|e| e.to_string())?;
        ensure(r.distillation_number == Some(2) && !r.is_locally_invariant, || {
            format!("{name}: {r:?}")
        })?;
        ensure(
            !common::brute_n_distillable(&psi, 1, None) && common::brute_n_distillable(&psi, 2, None),
            || format!("{name}: reference scan disagrees"),
        )?;
    }
    let p3 = states::psi_3d();
    ensure(distillation_number(&p3, RULE) == Ok(3), || {
        "psi_3D distillation number".into()
    })?;
    ensure(!is_n_distillable(&p3, 2, RULE).map_err(|e| e.to_string())?.0, || {
        "psi_3D 2-distillable".into()
    })?;
    ensure(!common::brute_n_distillable(&p3, 2, None), || {
        "psi_3D: reference 2-copy scan finds a block".into()
    })?;
    ensure(common::brute_n_distillable(&p3, 3, None), || {
        "psi_3D: reference 3-copy scan finds nothing".into()
    })?;
    for psi in [veper, p3] {
        let s = psi.schmidt_coefficients().map_err(|e| e.to_string())?;
        let want = std::f64::consts::FRAC_1_SQRT_2;
        ensure(s.iter().all(|x| (x - want).abs() <= TOL), || {
            format!("Schmidt coefficients {s:?}")
        })?;
    }
    Ok("V-EPR B1-D/2, E-EPR 1-D, refbits BLP, |0;1> LP, psi',psi'',psi''' 2, psi_3D 3".into())
}

fn criterion_2() -> Outcome {
    let (ok, out) = verify_activation(&states::veper(), &states::refbit_plus(), RULE).map_err(|e| e.to_string())?;
    let f = out.output.as_ref().map_or(0.0, |o| o.fidelity(&states::eepr()));
    ensure(ok && f >= 1.0 - TOL && (out.probability - 0.25).abs() <= TOL, || {
        format!("success {ok}, fidelity {f}, probability {}", out.probability)
    })?;
    Ok(format!("fidelity {f:.12}, probability {:.12}", out.probability))
}

fn criterion_3() -> Outcome {
    let out = protocol_b(&states::veper(), RULE).map_err(|e| e.to_string())?;
    let f = out.output.as_ref().map_or(0.0, |o| o.fidelity(&states::eepr()));
    let l = out.lambdas.ok_or("no lambdas")?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ensure(
        out.success
            && f >= 1.0 - TOL
            && (out.probability - 0.5).abs() <= TOL
            && (l.plus.norm() - h).abs() <= TOL
            && (l.minus.norm() - h).abs() <= TOL,
        || format!("{out:?}"),
    )?;
    Ok(format!(
        "fidelity {f:.12}, probability {:.12}, |l+| {:.12}, |l-| {:.12}",
        out.probability,
        l.plus.norm(),
        l.minus.norm()
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = common::rng(4);
    let mut counts = [0usize; 3];
    for k in 0..240 {
        let psi = if k < 200 {
            common::random_entangled(&mut rng)
        } else {
            common::random_three_copy(&mut rng)
        };
        let n = distillation_number(&psi, RULE).map_err(|e| format!("state {k} {psi}: {e}"))?;
        ensure((1..=3).contains(&n), || format!("state {k}: distillation number {n}"))?;
        counts[n as usize - 1] += 1;
        let reference = (1..=3).find(|&m| common::brute_n_distillable(&psi, m, None));
        ensure(reference == Some(n as usize), || {
            format!("state {k} {psi}: {n} against reference {reference:?}")
        })?;
        let a = protocol_a(&psi, RULE).map_err(|e| format!("state {k} {psi}: A: {e}"))?;
        let b = protocol_b(&psi, RULE).map_err(|e| format!("state {k} {psi}: B: {e}"))?;
        ensure(a.success || b.success, || format!("state {k} {psi}: A and B both fail"))?;
        if let Some(l) = b.lambdas {
            ensure(l.minus.norm() > TOL, || format!("state {k}: |l-| = {}", l.minus.norm()))?;
        }
    }
    Ok(format!(
        "240 states, distillation numbers 1/2/3: {}/{}/{}",
        counts[0], counts[1], counts[2]
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = common::rng(5);
    for k in 0..100 {
        let psi = common::random_bound(&mut rng, RULE);
        let (chi, _) = build_activator(&psi, RULE).map_err(|e| format!("state {k} {psi}: {e}"))?;
        let class = classify(&chi, RULE).map_err(|e| e.to_string())?.class;
        ensure(class == EntanglementClass::BLP, || {
            format!("state {k}: activator class {class}")
        })?;
        let (ok, _) = verify_activation(&psi, &chi, RULE).map_err(|e| e.to_string())?;
        ensure(ok, || format!("state {k} {psi}: activation fails"))?;
        let b = protocol_b(&psi, RULE).map_err(|e| format!("state {k} {psi}: B: {e}"))?;
        let l = b
            .lambdas
            .ok_or_else(|| format!("state {k}: B reports no coefficients"))?;
        ensure(l.minus.norm() > TOL, || format!("state {k}: |l-| = {}", l.minus.norm()))?;
    }
    Ok("100 bound states activated; |l-| > 1e-9 in every protocol B run".into())
}

fn criterion_6() -> Outcome {
    let agree = |psi: &PureState, rule: ChargeRule| -> Result<(), String> {
        let (direct, _) = is_one_distillable(psi, rule).map_err(|e| e.to_string())?;
        let rho = twirl_pure(psi, rule).map_err(|e| e.to_string())?;
        let oracle = twirled_one_distillable(&rho, rule).map_err(|e| format!("{psi}: {e}"))?;
        ensure(direct == oracle, || {
            format!("{psi}: sector scan {direct}, oracle {oracle}")
        })
    };
    let regression = [
        states::veper(),
        states::eepr(),
        states::refbit_plus(),
        states::refbit_minus(),
        states::psi_2d_prime(),
        states::psi_2d_double_prime(),
        states::psi_3d(),
        states::veper().tensor(&states::veper()),
        states::veper().tensor(&states::refbit_plus()),
        PureState::basis(vec![0], vec![0]).unwrap(),
    ];
    for psi in &regression {
        agree(psi, RULE)?;
        agree(psi, ChargeRule::modulo(2).unwrap())?;
    }
    let mut rng = common::rng(6);
    for _ in 0..100 {
        agree(&common::random_state(&mut rng), RULE)?;
        agree(&common::random_bound(&mut rng, RULE), RULE)?;
        agree(&common::random_state(&mut rng), ChargeRule::modulo(2).unwrap())?;
    }
    Ok(format!(
        "{} regression states, 300 random states, no disagreement",
        regression.len()
    ))
}

fn criterion_7() -> Outcome {
    let e = DensityOperator::from_pure(&states::eepr()).map_err(|e| e.to_string())?;
    let min = min_partial_transpose_eigenvalue(&e);
    ensure(!is_ppt(&e, EIGEN_TOL) && (min + 0.5).abs() <= TOL, || {
        format!("E-EPR min PT eigenvalue {min}")
    })?;
    let t = twirl_pure(&states::veper(), RULE).map_err(|e| e.to_string())?;
    ensure(is_ppt(&t, EIGEN_TOL), || "twirled V-EPR is not PPT".into())?;
    Ok(format!("E-EPR min PT eigenvalue {min:.12}; twirled V-EPR PPT"))
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let psi = common::random_state(&mut rng);
        for rule in [RULE, ChargeRule::modulo(3).unwrap()] {
            let t = twirl_pure(&psi, rule).map_err(|e| e.to_string())?;
            let again = twirl_operator(t.operator(), rule);
            let idem = again.max_abs_diff(t.operator());
            let trace = (t.operator().trace() - Complex64::new(1.0, 0.0)).norm();
            let weights: f64 = sector_support(&psi, rule).values().sum();
            worst = worst.max(idem).max(trace).max((weights - 1.0).abs());
            ensure(idem <= TOL && trace <= TOL && (weights - 1.0).abs() <= TOL, || {
                format!("state {k} under {rule}: idempotence {idem}, trace {trace}, weights {weights}")
            })?;
        }
    }
    Ok(format!(
        "100 states under number and mod:3, worst deviation {worst:.3e}"
    ))
}

fn criterion_9() -> Outcome {
    let doc = run_demo(Demo::CoherentActivation, RULE, Truncation::with_cutoff(8), None).map_err(|e| e.to_string())?;
    let p = doc.protocol.as_ref().ok_or("no protocol section")?;
    let demo = doc.demo.as_ref().ok_or("no demo section")?;
    let f = demo.fidelity_to_eepr.unwrap_or(0.0);
    let t = demo.truncation.as_ref().ok_or("no truncation section")?;
    let summary = format!(
        "success {}, fidelity {f}, truncation loss per mode {:e} (two modes {:e}), probability error {:e}",
        p.success, t.mode_loss, t.loss, t.probability_error
    );
    ensure(p.success && f >= 1.0 - TOL && t.mode_loss < 1e-6, || summary.clone())?;
    Ok(summary)
}

fn run_bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ssr-ent"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn criterion_10() -> Outcome {
    for text in common::CORPUS {
        let (psi, _) = parse_state(text).map_err(|e| format!("{text:?}: {e}"))?;
        let (back, _) = parse_state(&render(&psi)).map_err(|e| format!("{text:?} rendered: {e}"))?;
        ensure(
            back.layout() == psi.layout() && back.max_abs_diff(&psi) <= 1e-12,
            || format!("{text:?} does not round-trip"),
        )?;
    }
    let runs = [
        vec!["--json", "classify", "|0;1> + |1;0>"],
        vec![
            "--json",
            "distill",
            "|0;0> + |0;1> + |1;0> - |1;1>",
            "--protocol",
            "auto",
        ],
        vec!["--json", "demo", "coherent-activation", "--seed", "7"],
        vec!["--json", "twirl", "|0,1;1,0> + |1,0;0,1>"],
    ];
    for args in &runs {
        let (c1, o1) = run_bin(args);
        let (c2, o2) = run_bin(args);
        ensure(c1 == 0 && c1 == c2 && o1 == o2 && !o1.is_empty(), || {
            format!("{args:?} not byte-stable")
        })?;
    }
    let codes = [
        (vec!["classify", "|0;1> + |1;0>"], 0),
        (vec!["distill", "|0;0> + |0;1> + |1;0> - |1;1>", "--protocol", "B"], 0),
        (vec!["classify", "|0;1"], 2),
        (vec!["classify", "|0;1> + |1,0;0>"], 2),
        (vec!["classify", "|0;0> - |0;0>"], 2),
        (vec!["demo", "no-such-demo"], 2),
        (vec!["--rule", "su2", "classify", "|0;0>"], 2),
        (vec!["twirl", "|0,1;1,0> + 1e-6 |1,0;0,1>"], 3),
        (vec!["activate", "|0,1;1,0> + |1,0;0,1>"], 4),
        (vec!["classify", "|0;1> + |1;0>", "--max-copies", "1"], 4),
    ];
    for (args, want) in &codes {
        let (code, _) = run_bin(args);
        ensure(code == *want, || format!("{args:?}: exit {code}, expected {want}"))?;
    }
    Ok(format!(
        "{} expressions round-trip, {} JSON runs byte-stable, exit codes 0/2/3/4 seen",
        common::CORPUS.len(),
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("classification table", criterion_1),
        ("activation", criterion_2),
        ("two-copy distillation", criterion_3),
        ("distillation suite", criterion_4),
        ("activation suite", criterion_5),
        ("oracle equivalence", criterion_6),
        ("PPT at 2x2", criterion_7),
        ("twirl algebra", criterion_8),
        ("coherent-state activation demo", criterion_9),
        ("parser and CLI contracts", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
