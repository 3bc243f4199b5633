// Builds both matching sets at depths 1 and 2 and derives the
// unweighted adversary bound from each.
//
// ```bash
// cargo run --release --example matchings
// ```

use advwb::matchings::{build_matchings, listed_first_matching, SetId};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let first = build_matchings(1, SetId::First)?;
    println!("listed:   {}", listed_first_matching());
    println!("built:    {}", first.render_first().unwrap_or_default());

    for d in 1..=2 {
        for set in [SetId::First, SetId::Second] {
            let ms = build_matchings(d, set)?;
            let c = ms.check()?;
            let p = &c.params;
            println!(
                "d = {d}, {set:?}: {} matchings x {} pairs, bijective {}, disjoint {}, \
                 m = {}, m' = {}, l = {}, l' = {}, bound {}",
                ms.len(),
                ms.a.len(),
                c.bijective,
                c.disjoint,
                p.m,
                p.m_prime,
                p.l,
                p.l_prime,
                p.bound
            );
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
