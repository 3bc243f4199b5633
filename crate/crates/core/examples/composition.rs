// Composes the base-function scheme with itself and checks the result.
//
// ```bash
// cargo run --release --example composition
// ```

use std::sync::Arc;
use std::time::Instant;

use advwb::adversary::{scheme_f, loads};
use advwb::compose::{compose_scheme, predicted_bound};

fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let base = Arc::new(scheme_f());
    let base_bound = loads(&base)?.bound;

    let start = Instant::now();
    let composed = compose_scheme(base.clone(), base)?;
    let scheme = &composed.scheme;
    println!(
        "f^2 scheme: |A| = {}, |B| = {}, {} pairs ({:.1?})",
        scheme.a().len(),
        scheme.b().len(),
        scheme.len(),
        start.elapsed()
    );

    let report = scheme.verify();
    println!(
        "verify: {} violations over {} pairs, exact = {}",
        report.total, report.pairs_checked, report.exact
    );
    assert!(report.is_valid());

    let l = loads(scheme)?;
    println!("v_A = {}, v_B = {}", l.v_a.pretty(), l.v_b.pretty());
    println!(
        "bound = {}, predicted {}",
        l.bound.pretty(),
        predicted_bound(base_bound, 2).pretty()
    );

    let block_sum = composed.check_block_sums();
    let products = composed.check_weight_products();
    let slice_loads = composed.check_slice_loads(64);
    println!(
        "block sums: {}/{} slices hold; weight products: {}/{}; slice loads: {}/{}",
        block_sum.checked - block_sum.failures,
        block_sum.checked,
        products.checked - products.failures,
        products.checked,
        slice_loads.checked - slice_loads.failures,
        slice_loads.checked
    );
    println!("total {:.1?}", start.elapsed());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
