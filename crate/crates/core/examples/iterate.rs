// Certificates for iterates of the base function: sensitivity, block
// sensitivity and decision-tree depth of f^d.
//
// ```bash
// cargo run --release --example iterate
// ```

use advwb::measures::{degree, iterated_certificates};
use advwb::BooleanFunction;

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = BooleanFunction::base_f();
    for d in 1..=4 {
        let c = iterated_certificates(&f, d)?;
        println!(
            "d = {d}: {} variables, s in {}..{}, bs >= {}, D <= {}, {}",
            c.arity,
            c.s_min,
            c.s_max,
            c.bs_lower_min,
            c.d_upper,
            if c.materialized { "checked exhaustively" } else { "product rule" }
        );
    }
    println!("deg(f^2) = {}", degree(&f.iterate(2)?)?);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
