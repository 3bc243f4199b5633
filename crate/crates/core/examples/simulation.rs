// Runs query algorithms against weight schemes and watches the progress
// measure.
//
// ```bash
// cargo run --release --example simulation
// ```

use std::sync::Arc;

use advwb::adversary::{balance, scheme_f, unit_scheme};
use advwb::qsim::{check_drop_bound, check_final_bound, progress_trace, QueryAlgorithm};
use advwb::BooleanFunction;

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let parity = QueryAlgorithm::parity2();
    for x in 0..4 {
        println!("parity(2) on {x:02b}: accept {:.6}", parity.run(x).1);
    }
    let f = Arc::new(BooleanFunction::parity(2)?);
    let unit = unit_scheme(f, &[0, 3], &[1, 2], &[(0, 1), (0, 2), (3, 1), (3, 2)])?;
    let t = progress_trace(&parity, &unit)?;
    println!("W = {:?}, drop limit {}", t.w, t.drop_limit());
    let fin = check_final_bound(&parity, &unit, 0.0)?;
    println!("final bound holds: {}, T >= {}", fin.holds(), fin.query_lower_bound);

    let scheme = balance(&scheme_f())?;
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let alg = QueryAlgorithm::random(4, 2, 2, seed)?;
        let t = progress_trace(&alg, &scheme)?;
        assert!(check_drop_bound(&t), "seed {seed}");
        worst = worst.max(t.max_drop() / t.drop_limit());
    }
    println!("20 random 2-query algorithms: largest drop is {worst:.3} of the limit");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
