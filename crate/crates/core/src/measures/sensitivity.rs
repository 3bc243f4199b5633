use rayon::prelude::*;

use crate::boolfn::{BooleanFunction, MAX_TABLE_ARITY};
use crate::error::{Error, Result};

/// Largest arity for the exact block-sensitivity search.
pub const MAX_BS_ARITY: usize = 12;

/// Mask of variables `i` with `f(x) != f(x^{i})`.
pub fn sensitive_mask(f: &BooleanFunction, x: u64) -> u64 {
    let fx = f.value(x);
    (0..f.arity())
        .map(|k| 1u64 << k)
        .filter(|&m| f.value(x ^ m) != fx)
        .fold(0, |acc, m| acc | m)
}

pub fn sensitivity_at(f: &BooleanFunction, x: u64) -> usize {
    sensitive_mask(f, x).count_ones() as usize
}

pub fn sensitivity(f: &BooleanFunction) -> Result<usize> {
    if f.arity() > MAX_TABLE_ARITY {
        return Err(Error::ArityOverflow {
            arity: f.arity(),
            limit: MAX_TABLE_ARITY,
            operation: "sensitivity",
        });
    }
    Ok((0..f.size())
        .into_par_iter()
        .map(|x| sensitivity_at(f, x))
        .max()
        .unwrap_or(0))
}

/// Minimal sensitive blocks at `x`: masks `S` with `f(x^S) != f(x)` such
/// that no proper nonempty subset of `S` is sensitive.
pub fn minimal_sensitive_blocks(f: &BooleanFunction, x: u64) -> Vec<u64> {
    let n = f.arity();
    let size = 1usize << n;
    let fx = f.value(x);
    let sens: Vec<bool> = (0..size as u64)
        .map(|s| s != 0 && f.value(x ^ s) != fx)
        .collect();
    // has_sub[S]: some nonempty T subset of S is sensitive
    let mut has_sub = sens.clone();
    for bit in 0..n {
        let step = 1usize << bit;
        for s in 0..size {
            if s & step != 0 && has_sub[s ^ step] {
                has_sub[s] = true;
            }
        }
    }
    (1..size)
        .filter(|&s| {
            sens[s]
                && (0..n)
                    .map(|b| 1usize << b)
                    .filter(|&m| s & m != 0)
                    .all(|m| !has_sub[s ^ m])
        })
        .map(|s| s as u64)
        .collect()
}

/// Maximum number of pairwise disjoint blocks among `blocks`, with a witness.
pub fn max_disjoint_packing(blocks: &[u64]) -> Vec<u64> {
    let mut sorted = blocks.to_vec();
    sorted.sort_by_key(|b| (b.count_ones(), *b));
    let mut search = Packing {
        blocks: sorted,
        best: Vec::new(),
        current: Vec::new(),
    };
    let universe = blocks.iter().fold(0, |a, b| a | b);
    search.run(universe);
    search.best
}

struct Packing {
    blocks: Vec<u64>,
    best: Vec<u64>,
    current: Vec<u64>,
}

impl Packing {
    fn run(&mut self, free: u64) {
        let fitting: Vec<u64> = self
            .blocks
            .iter()
            .copied()
            .filter(|b| b & !free == 0)
            .collect();
        if fitting.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        }
        let coverable = fitting.iter().fold(0, |a, b| a | b);
        let min_size = fitting[0].count_ones() as usize;
        let bound = self.current.len() + coverable.count_ones() as usize / min_size;
        if bound <= self.best.len() {
            return;
        }
        // Branch on the lowest coverable variable: either some block covers it or it stays unused.
        let e = coverable & coverable.wrapping_neg();
        for b in fitting.iter().filter(|&&b| b & e != 0) {
            self.current.push(*b);
            self.run(free & !b);
            self.current.pop();
        }
        self.run(free & !e);
    }
}

/// Block sensitivity at `x` together with a maximum disjoint family of
/// sensitive blocks.
pub fn block_sensitivity_witness(f: &BooleanFunction, x: u64) -> Result<Vec<u64>> {
    if f.arity() > MAX_BS_ARITY {
        return Err(Error::ArityOverflow {
            arity: f.arity(),
            limit: MAX_BS_ARITY,
            operation: "block sensitivity",
        });
    }
    Ok(max_disjoint_packing(&minimal_sensitive_blocks(f, x)))
}

pub fn block_sensitivity_at(f: &BooleanFunction, x: u64) -> Result<usize> {
    Ok(block_sensitivity_witness(f, x)?.len())
}

pub fn block_sensitivity(f: &BooleanFunction) -> Result<usize> {
    if f.arity() > MAX_BS_ARITY {
        return Err(Error::ArityOverflow {
            arity: f.arity(),
            limit: MAX_BS_ARITY,
            operation: "block sensitivity",
        });
    }
    Ok((0..f.size())
        .into_par_iter()
        .map(|x| max_disjoint_packing(&minimal_sensitive_blocks(f, x)).len())
        .max()
        .unwrap_or(0))
}
