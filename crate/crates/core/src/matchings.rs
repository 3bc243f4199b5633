//! Two families of `3^d` perfect matchings between the 0-inputs and the
//! 1-inputs of `f^d`, for the unweighted adversary bound.
//!
//! At `d = 1` the first two matchings pair every 0-input with its two
//! neighbours at distance 1 and the third flips a sensitive pair. At level
//! `d` the matchings come in three groups of `3^(d-1)`: group `g` moves the
//! reduced input along base matching `g`, and the `k`-th matching of the
//! group fills every changed block with the `k`-th matching one level down.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::adversary::relation::{relation_bound, sensitive_partition, RelationBound};
use crate::boolfn::{bit_string, block_bits, set_mask, BooleanFunction};
use crate::error::{Error, Result};

/// Highest level that is materialized.
pub const MAX_MATCHING_DEPTH: usize = 2;

/// The first level-1 matching as printed in the source listing, 1-input
/// first. The fifth entry joins two 1-inputs.
pub const LISTED_FIRST_MATCHING: [(&str, &str); 8] = [
    ("0011", "0001"),
    ("0101", "1101"),
    ("1100", "1110"),
    ("1010", "0010"),
    ("0100", "1100"),
    ("1000", "0000"),
    ("0111", "1111"),
    ("1011", "1001"),
];

/// The listed entry replaced by the only completion that keeps the other
/// seven: 0100 goes to 0110, the 0-input no listed pair covers.
pub const CORRECTED_ENTRY: (usize, (&str, &str)) = (4, ("0100", "0110"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetId {
    /// Ordered pairs `(x, y)` with `x` a 0-input.
    First,
    /// Ordered pairs `(y, x)` with `y` a 1-input.
    Second,
}

impl SetId {
    pub fn other(self) -> Self {
        match self {
            SetId::First => SetId::Second,
            SetId::Second => SetId::First,
        }
    }

    fn slot(self) -> usize {
        match self {
            SetId::First => 0,
            SetId::Second => 1,
        }
    }
}

impl std::str::FromStr for SetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "first" => Ok(SetId::First),
            "2" | "second" => Ok(SetId::Second),
            other => Err(Error::UnknownBuiltin(format!("matching set {other:?}"))),
        }
    }
}

/// `3^d` matchings of one set, each as a bijection from `A` to `B`.
#[derive(Debug, Clone)]
pub struct MatchingSet {
    pub d: usize,
    pub set: SetId,
    pub function: Arc<BooleanFunction>,
    /// `A = (f^d)^(-1)(0)` and `B = (f^d)^(-1)(1)`, sorted.
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    /// `matchings[k][s]` is the index into `b` matched to `a[s]`.
    pub matchings: Vec<Vec<u32>>,
}

/// Both sets at one level, as dense forward maps over assignments.
struct Level {
    function: BooleanFunction,
    /// `[set][k][x]` is the partner of 0-input `x`, `u64::MAX` elsewhere.
    forward: [Vec<Vec<u64>>; 2],
}

impl Level {
    fn inverse(&self, set: SetId, k: usize) -> Vec<u64> {
        let fw = &self.forward[set.slot()][k];
        let mut inv = vec![u64::MAX; fw.len()];
        for (x, &y) in fw.iter().enumerate() {
            if y != u64::MAX {
                inv[y as usize] = x as u64;
            }
        }
        inv
    }
}

fn parse_bits(s: &str) -> u64 {
    u64::from_str_radix(s, 2).expect("binary literal")
}

fn base_level() -> Level {
    let f = BooleanFunction::base_f();
    let size = f.size() as usize;
    let mut first = vec![u64::MAX; size];
    for (k, &(one, zero)) in LISTED_FIRST_MATCHING.iter().enumerate() {
        let (one, zero) = if k == CORRECTED_ENTRY.0 {
            CORRECTED_ENTRY.1
        } else {
            (one, zero)
        };
        first[parse_bits(zero) as usize] = parse_bits(one);
    }
    let mut second = vec![u64::MAX; size];
    let sens = |u: u64| set_mask(4, &sensitive_partition(&f, u).0).unwrap();
    let mut third_first = vec![u64::MAX; size];
    let mut third_second = vec![u64::MAX; size];
    for x in f.preimage(false) {
        let neighbour = sens(x) & !(first[x as usize] ^ x);
        second[x as usize] = x ^ neighbour;
        // Second set: flip the pair that is sensitive for the 0-input.
        third_second[x as usize] = x ^ sens(x);
    }
    for y in f.preimage(true) {
        // First set: flip the pair that is sensitive for the 1-input.
        third_first[(y ^ sens(y)) as usize] = y;
    }
    Level {
        forward: [
            vec![first.clone(), second.clone(), third_first],
            vec![first, second, third_second],
        ],
        function: f,
    }
}

fn next_level(base: &Level, inner: &Level) -> Result<Level> {
    let f = &base.function;
    let g = &inner.function;
    let (n, m) = (f.arity(), g.arity());
    let function = BooleanFunction::compose(f, &vec![g.clone(); n])?;
    let zeros = function.preimage(false);
    let count = inner.forward[0].len();
    let size = function.size() as usize;
    let mut forward: [Vec<Vec<u64>>; 2] = [Vec::new(), Vec::new()];
    for set in [SetId::First, SetId::Second] {
        // Inner maps: forward for 0-blocks from this set, inverse of the
        // other set for 1-blocks.
        let fw: Vec<&Vec<u64>> = inner.forward[set.slot()].iter().collect();
        let inv: Vec<Vec<u64>> = (0..count).map(|k| inner.inverse(set.other(), k)).collect();
        for group in 0..3 {
            let outer = &base.forward[set.slot()][group];
            for k in 0..count {
                let mut map = vec![u64::MAX; size];
                for &x in &zeros {
                    let xt = f.reduced(g, x);
                    let yt = outer[xt as usize];
                    let mut y = x;
                    for j in 1..=n {
                        let shift = m * (n - j);
                        if (xt ^ yt) >> (n - j) & 1 == 0 {
                            continue;
                        }
                        let xj = block_bits(x, n, m, j);
                        let yj = if xt >> (n - j) & 1 == 0 {
                            fw[k][xj as usize]
                        } else {
                            inv[k][xj as usize]
                        };
                        y = (y & !(((1u64 << m) - 1) << shift)) | (yj << shift);
                    }
                    map[x as usize] = y;
                }
                forward[set.slot()].push(map);
            }
        }
    }
    Ok(Level { function, forward })
}

fn level(d: usize) -> Result<Level> {
    if d == 0 || d > MAX_MATCHING_DEPTH {
        return Err(Error::DepthOverflow {
            depth: d,
            limit: MAX_MATCHING_DEPTH,
        });
    }
    let base = base_level();
    let mut current = base_level();
    for _ in 1..d {
        current = next_level(&base, &current)?;
    }
    Ok(current)
}

/// Builds one set of `3^d` matchings; matching `(g - 1) 3^(d-1) + k` is the
/// `k`-th of group `g`.
pub fn build_matchings(d: usize, set: SetId) -> Result<MatchingSet> {
    let lv = level(d)?;
    let a = lv.function.preimage(false);
    let b = lv.function.preimage(true);
    let mut matchings = Vec::new();
    for map in &lv.forward[set.slot()] {
        let mut row = Vec::with_capacity(a.len());
        for &x in &a {
            let y = map[x as usize];
            let idx = b.binary_search(&y).map_err(|_| {
                Error::VerificationFailed(format!("{x} is matched to {y}, not a 1-input"))
            })?;
            row.push(idx as u32);
        }
        matchings.push(row);
    }
    Ok(MatchingSet {
        d,
        set,
        function: Arc::new(lv.function),
        a,
        b,
        matchings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingCheck {
    pub bijective: bool,
    pub disjoint: bool,
    pub params: RelationBound,
}

impl MatchingSet {
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// `(x, y)` pairs of matching `k` (0-based), `x` a 0-input.
    pub fn pairs(&self, k: usize) -> Vec<(u64, u64)> {
        self.matchings[k]
            .iter()
            .enumerate()
            .map(|(s, &t)| (self.a[s], self.b[t as usize]))
            .collect()
    }

    /// Union of all matchings, sorted.
    pub fn relation(&self) -> Vec<(u64, u64)> {
        let mut r: Vec<(u64, u64)> = (0..self.len()).flat_map(|k| self.pairs(k)).collect();
        r.sort_unstable();
        r
    }

    pub fn check(&self) -> Result<MatchingCheck> {
        let bijective = self.matchings.iter().all(|row| {
            let mut seen = vec![false; self.b.len()];
            row.len() == self.a.len() && row.iter().all(|&t| !std::mem::replace(&mut seen[t as usize], true))
        }) && self.a.len() == self.b.len();
        let r = self.relation();
        let disjoint = r.windows(2).all(|w| w[0] != w[1]);
        let params = relation_bound(&self.function, &self.a, &self.b, &r)?;
        Ok(MatchingCheck {
            bijective,
            disjoint,
            params,
        })
    }

    /// One `"x y"` line per pair, in the set's orientation.
    pub fn export(&self, k: usize) -> String {
        let mut out = String::new();
        for (x, y) in self.pairs(k) {
            let _ = match self.set {
                SetId::First => writeln!(out, "{x} {y}"),
                SetId::Second => writeln!(out, "{y} {x}"),
            };
        }
        out
    }

    /// The first level-1 matching in the listing's order and format.
    pub fn render_first(&self) -> Option<String> {
        if self.d != 1 {
            return None;
        }
        let pairs = self.pairs(0);
        let parts: Vec<String> = LISTED_FIRST_MATCHING
            .iter()
            .map(|&(one, _)| {
                let y = parse_bits(one);
                let x = pairs.iter().find(|p| p.1 == y).expect("perfect matching").0;
                format!("({}, {})", bit_string(y, 4), bit_string(x, 4))
            })
            .collect();
        Some(parts.join(", "))
    }
}

/// The listing verbatim, in the same format as [`MatchingSet::render_first`].
pub fn listed_first_matching() -> String {
    LISTED_FIRST_MATCHING
        .iter()
        .map(|(a, b)| format!("({a}, {b})"))
        .collect::<Vec<_>>()
        .join(", ")
}
