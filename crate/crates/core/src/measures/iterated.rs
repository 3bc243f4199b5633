//! Certified measures of iterated functions `f^d`.
//!
//! Block sensitivity is bounded below by building explicit disjoint
//! sensitive blocks from the base function's blocks, and deterministic
//! complexity is bounded above by the composed decision tree. When the two
//! meet, both values are certified.

use rayon::prelude::*;

use crate::boolfn::{block_bits, BooleanFunction};
use crate::error::{Error, Result};
use crate::measures::sensitivity::{block_sensitivity_witness, sensitivity_at};
use crate::measures::tree::{det_complexity, DecisionTree};

/// Largest iterate arity that is verified input by input.
pub const MAX_ITERATED_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedCertificate {
    pub depth: usize,
    pub arity: u64,
    /// Smallest and largest per-input sensitivity.
    pub s_min: u64,
    pub s_max: u64,
    /// Smallest and largest per-input count of verified disjoint blocks.
    pub bs_lower_min: u64,
    pub bs_lower_max: u64,
    /// Depth of the composed decision tree.
    pub d_upper: u64,
    /// True when every input of `f^d` was checked directly.
    pub materialized: bool,
}

impl IteratedCertificate {
    /// `bs(f^d) = D(f^d)` is certified when the block lower bound meets the
    /// tree upper bound.
    pub fn tight(&self) -> bool {
        self.bs_lower_max == self.d_upper
    }
}

/// Disjoint sensitive blocks of `f^level` at `x`, built recursively from
/// the base witnesses.
pub fn composed_blocks(
    base: &BooleanFunction,
    base_blocks: &[Vec<u64>],
    level: usize,
    x: u64,
) -> Vec<u64> {
    if level == 1 {
        return base_blocks[x as usize].clone();
    }
    let n = base.arity();
    let m = n.pow(level as u32 - 1);
    let inner_value = |bits: u64| eval_iterate(base, level - 1, bits);
    let reduced = (1..=n).fold(0u64, |acc, j| (acc << 1) | inner_value(block_bits(x, n, m, j)) as u64);
    let inner: Vec<Vec<u64>> = (1..=n)
        .map(|j| composed_blocks(base, base_blocks, level - 1, block_bits(x, n, m, j)))
        .collect();
    let mut out = Vec::new();
    for &outer in &base_blocks[reduced as usize] {
        let members: Vec<usize> = (1..=n).filter(|&j| outer >> (n - j) & 1 == 1).collect();
        let count = members.iter().map(|&j| inner[j - 1].len()).min().unwrap_or(0);
        for t in 0..count {
            let block = members.iter().fold(0u64, |acc, &j| {
                acc | inner[j - 1][t] << (m * (n - j))
            });
            out.push(block);
        }
    }
    out
}

/// Evaluates `f^level` without materializing its table.
pub fn eval_iterate(base: &BooleanFunction, level: usize, x: u64) -> bool {
    if level == 1 {
        return base.value(x);
    }
    let n = base.arity();
    let m = n.pow(level as u32 - 1);
    let reduced = (1..=n).fold(0u64, |acc, j| {
        (acc << 1) | eval_iterate(base, level - 1, block_bits(x, n, m, j)) as u64
    });
    base.value(reduced)
}

pub fn iterated_certificates(f: &BooleanFunction, d: usize) -> Result<IteratedCertificate> {
    if d == 0 {
        return Err(Error::DepthOverflow { depth: 0, limit: 0 });
    }
    let n = f.arity();
    let base_blocks: Vec<Vec<u64>> = (0..f.size())
        .map(|x| block_sensitivity_witness(f, x))
        .collect::<Result<_>>()?;
    let (base_depth, base_tree) = det_complexity(f)?;
    let base_s: Vec<u64> = (0..f.size()).map(|x| sensitivity_at(f, x) as u64).collect();
    let s_min = *base_s.iter().min().unwrap();
    let s_max = *base_s.iter().max().unwrap();
    let bs_min = base_blocks.iter().map(|b| b.len() as u64).min().unwrap();

    let arity = (n as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
    if arity > MAX_ITERATED_ARITY as u64 {
        // Product rules: the composed tree has depth D^d, and composing
        // uniform block families yields bs_min^d disjoint blocks everywhere.
        // Sensitivity multiplies exactly only when it is uniform.
        let uniform_s = s_min == s_max;
        return Ok(IteratedCertificate {
            depth: d,
            arity,
            s_min: if uniform_s { s_min.pow(d as u32) } else { 0 },
            s_max: s_max.pow(d as u32),
            bs_lower_min: bs_min.pow(d as u32),
            bs_lower_max: bs_min.pow(d as u32),
            d_upper: (base_depth as u64).pow(d as u32),
            materialized: false,
        });
    }

    let fd = f.iterate(d)?;
    let mut tree = base_tree.clone();
    let mut inner_arity = n;
    for _ in 1..d {
        tree = DecisionTree::compose(&base_tree, &tree, inner_arity);
        inner_arity *= n;
    }
    let per_input: Vec<(u64, u64, usize)> = (0..fd.size())
        .into_par_iter()
        .map(|x| {
            let s = sensitivity_at(&fd, x) as u64;
            let blocks = composed_blocks(f, &base_blocks, d, x);
            let fx = fd.value(x);
            let mut used = 0u64;
            let mut valid = 0u64;
            for &b in &blocks {
                if b & used == 0 && fd.value(x ^ b) != fx {
                    valid += 1;
                    used |= b;
                }
            }
            let (v, q) = tree.run(x, fd.arity());
            let queries = if v == fx { q } else { usize::MAX };
            (s, valid, queries)
        })
        .collect();
    if per_input.iter().any(|p| p.2 == usize::MAX) {
        return Err(Error::VerificationFailed("composed decision tree disagrees with f^d".into()));
    }
    Ok(IteratedCertificate {
        depth: d,
        arity,
        s_min: per_input.iter().map(|p| p.0).min().unwrap(),
        s_max: per_input.iter().map(|p| p.0).max().unwrap(),
        bs_lower_min: per_input.iter().map(|p| p.1).min().unwrap(),
        bs_lower_max: per_input.iter().map(|p| p.1).max().unwrap(),
        d_upper: tree.depth() as u64,
        materialized: true,
    })
}
