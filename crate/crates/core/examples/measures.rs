// Complexity measures of the three built-in base functions.
//
// ```bash
// cargo run --release --example measures
// ```

use advwb::measures::{exact_polynomial, ComplexityReport, ReportOptions};
use advwb::BooleanFunction;

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["base_f", "nae_g", "kushilevitz_h"] {
        let f = BooleanFunction::builtin(name)?;
        let report = ComplexityReport::compute(&f, &ReportOptions::default())?;
        println!("== {name} ({} variables)", f.arity());
        print!("{}", report.to_text());
        assert!(report.order_relations_hold());
    }

    // the polynomial behind deg(f) = 2
    let p = exact_polynomial(&BooleanFunction::base_f())?;
    let terms: Vec<String> = p
        .terms()
        .into_iter()
        .map(|(vars, c)| {
            let mono: Vec<String> = vars.iter().map(|i| format!("x{i}")).collect();
            format!("{c:+}*{}", if mono.is_empty() { "1".into() } else { mono.join("") })
        })
        .collect();
    println!("f = {}", terms.join(" "));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
