//! Writing states as bra-ket expressions, and driving the command line
//! in-process.

use ssr_ent::cli::{self, parse};

pub fn main() {
    for text in [
        "1/sqrt2 |0;1> + 1/sqrt2 |1;0>",
        "|0,1;1,0> + |1,0;0,1>",
        "(|0;0> + |1;1>) x (|0;1> - 0.5i |1;0>)",
    ] {
        let (psi, norm) = parse::parse_state(text).unwrap();
        println!(
            "{text}\n  norm {norm:.6}, modes {}\n  {}",
            psi.layout(),
            parse::render(&psi)
        );
    }
    if let Err(e) = parse::parse_state("|0;1> +\n |1,0>") {
        println!("error: {e}");
    }

    let mut out = Vec::new();
    let code = cli::run(
        ["ssr-ent", "classify", "|0;1> + |1;0>"],
        &mut std::io::empty(),
        &mut out,
        &mut std::io::sink(),
    );
    print!("{}", String::from_utf8(out).unwrap());
    println!("exit {code}");
}
