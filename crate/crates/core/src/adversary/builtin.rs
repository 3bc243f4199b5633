//! The three hand-built weight schemes.

use std::sync::Arc;

use crate::adversary::relation::sensitive_partition;
use crate::adversary::scheme::{PairSpec, WeightScheme};
use crate::boolfn::{mask_vars, set_mask, BooleanFunction, KUSHILEVITZ_ZERO_TRIPLES};
use crate::error::{Error, Result};
use crate::weight::Weight;

pub const BUILTIN_SCHEMES: [&str; 3] = ["scheme_f", "scheme_g", "scheme_h"];

fn w(s: &str) -> Weight {
    Weight::Exact(s.parse().expect("literal weight"))
}

fn spec(n: usize, x: u64, y: u64, weight: Weight, per_index: impl Fn(usize) -> (Weight, Weight)) -> PairSpec {
    PairSpec {
        x,
        y,
        w: weight,
        wp: mask_vars(n, x ^ y)
            .into_iter()
            .map(|i| {
                let (f, g) = per_index(i);
                (i, f, g)
            })
            .collect(),
    }
}

/// Scheme for the 4-bit base function with bound 5/2.
///
/// Each 0-input is related to its two single sensitive flips (all
/// weights 1) and to the inputs obtained by flipping both sensitive or
/// both insensitive variables (`w = 2/3`). On a two-variable pair, `w'(u, v, i)`
/// is `1/3` when the flipped pair is sensitive for `u` and `4/3` when it is
/// insensitive for `u`.
pub fn scheme_f() -> WeightScheme {
    let f = BooleanFunction::base_f();
    let n = 4;
    let a = f.preimage(false);
    let b = f.preimage(true);
    let sens = |u: u64| set_mask(n, &sensitive_partition(&f, u).0).unwrap();
    let dir = |u: u64, diff: u64| if diff == sens(u) { w("1/3") } else { w("4/3") };
    let mut pairs = Vec::new();
    for &x in &a {
        let (s, ins) = sensitive_partition(&f, x);
        for &i in &s {
            let y = x ^ set_mask(n, &[i]).unwrap();
            pairs.push(spec(n, x, y, w("1"), |_| (w("1"), w("1"))));
        }
        for block in [&s, &ins] {
            let diff = set_mask(n, block).unwrap();
            let y = x ^ diff;
            pairs.push(spec(n, x, y, w("2/3"), |_| (dir(x, diff), dir(y, diff))));
        }
    }
    WeightScheme::new(Arc::new(f), a, b, pairs).expect("well-formed built-in")
}

/// Scheme for not-all-equal on three bits with max load `sqrt(2)/3`.
///
/// `A = {000, 111}` and every 0-input is related to every 1-input. Pairs at
/// distance 1 get `w = 2`, `w' = 2 sqrt(2)` from the 0-side and `sqrt(2)`
/// from the 1-side; pairs at distance 2 get `w = 1`, `w' = sqrt(2)/2` and
/// `sqrt(2)`.
pub fn scheme_g() -> WeightScheme {
    let f = BooleanFunction::nae_g();
    let n = 3;
    let a = f.preimage(false);
    let b = f.preimage(true);
    let mut pairs = Vec::new();
    for &x in &a {
        for &y in &b {
            let near = (x ^ y).count_ones() == 1;
            let (weight, fwd) = if near {
                (w("2"), w("2*sqrt(2)"))
            } else {
                (w("1"), w("1/2*sqrt(2)"))
            };
            pairs.push(spec(n, x, y, weight, |_| (fwd, w("sqrt(2)"))));
        }
    }
    WeightScheme::new(Arc::new(f), a, b, pairs).expect("well-formed built-in")
}

/// Scheme for the 6-variable Kushilevitz function.
///
/// `A` holds `0^6` and the ten weight-3 zeros, `B` the six weight-1
/// inputs. `0^6` is related to each `e_j` with all weights 1; a zero triple
/// is related to `e_j` for each of its three positions `j` with `w = 1/8`,
/// `w' = 1/32` from the triple and `1/2` from `e_j`.
///
/// Loads come out as `v_A = 1/6`, `v_B = 8/13`, so the maximum load is
/// `2/sqrt(39)` and the bound `sqrt(39)/2`.
pub fn scheme_h() -> WeightScheme {
    let f = BooleanFunction::kushilevitz_h();
    let n = 6;
    let triples: Vec<u64> = KUSHILEVITZ_ZERO_TRIPLES
        .iter()
        .map(|t| set_mask(n, t).unwrap())
        .collect();
    let unit = |j: usize| set_mask(n, &[j]).unwrap();
    let b: Vec<u64> = (1..=n).map(unit).collect();
    let mut a = vec![0u64];
    a.extend(&triples);
    let mut pairs: Vec<PairSpec> = (1..=n)
        .map(|j| spec(n, 0, unit(j), w("1"), |_| (w("1"), w("1"))))
        .collect();
    for &t in &triples {
        for j in mask_vars(n, t) {
            pairs.push(spec(n, t, unit(j), w("1/8"), |_| (w("1/32"), w("1/2"))));
        }
    }
    WeightScheme::new(Arc::new(f), a, b, pairs).expect("well-formed built-in")
}

pub fn builtin_scheme(name: &str) -> Result<WeightScheme> {
    match name.trim() {
        "scheme_f" => Ok(scheme_f()),
        "scheme_g" => Ok(scheme_g()),
        "scheme_h" => Ok(scheme_h()),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// For each weight-1 input `e_j` and each `i != j`: how many of the five
/// zero triples containing `j` also contain `i`.
pub fn kushilevitz_cover_counts() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for j in 1..=6 {
        for i in (1..=6).filter(|&i| i != j) {
            let count = KUSHILEVITZ_ZERO_TRIPLES
                .iter()
                .filter(|t| t.contains(&j) && t.contains(&i))
                .count();
            out.push((j, i, count));
        }
    }
    out
}
