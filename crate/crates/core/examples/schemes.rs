// Verifies the three built-in weight schemes, balances one, and writes a
// scheme file.
//
// ```bash
// cargo run --release --example schemes
// ```

use advwb::adversary::{balance, builtin_scheme, loads, read_scheme, write_scheme, BUILTIN_SCHEMES};
use advwb::Weight;

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in BUILTIN_SCHEMES {
        let scheme = builtin_scheme(name)?;
        let report = scheme.verify();
        let l = loads(&scheme)?;
        println!(
            "{name}: {} pairs, {} violations, v_A = {}, v_B = {}, bound = {}",
            scheme.len(),
            report.total,
            l.v_a.pretty(),
            l.v_b.pretty(),
            l.bound.pretty()
        );
    }

    let h = builtin_scheme("scheme_h")?;
    let balanced = balance(&h)?;
    let l = loads(&balanced)?;
    println!("scheme_h balanced: v_A = v_B = {}", l.v_a.pretty());

    let dir = std::env::temp_dir().join("advwb-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("scheme_h.json");
    write_scheme(&balanced, &path)?;
    let back = read_scheme(&path)?;
    println!("round trip through {}: bound {}", path.display(), loads(&back)?.bound.pretty());

    // a broken directional weight shows up as a violation
    let bad = builtin_scheme("scheme_f")?.with_directional(
        0,
        12,
        1,
        Weight::Exact("1/4".parse()?),
        Weight::Exact("4/3".parse()?),
    )?;
    for v in bad.verify().violations {
        println!("violation: {v}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
