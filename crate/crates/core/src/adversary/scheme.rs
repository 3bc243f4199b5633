use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::boolfn::{mask_vars, BooleanFunction};
use crate::error::{Error, Result};
use crate::weight::{ExactWeight, Weight};

/// Violations beyond this count are dropped from reports.
pub const MAX_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

/// One related pair as supplied by the caller: `wp` lists
/// `(i, w'(x, y, i), w'(y, x, i))` for every index where `x` and `y` differ.
#[derive(Debug, Clone)]
pub struct PairSpec {
    pub x: u64,
    pub y: u64,
    pub w: Weight,
    pub wp: Vec<(usize, Weight, Weight)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair {
    pub x: u64,
    pub y: u64,
    pub w: Weight,
}

/// Where the directional weights of a scheme come from.
#[derive(Debug, Clone)]
pub(crate) enum Directional {
    /// Per pair, `(i, forward, backward)` sorted by `i`.
    Explicit(Vec<Vec<(u32, Weight, Weight)>>),
    /// `w'(x, y, i) = w'(y, x, i) = w(x, y)` for every differing `i`.
    Uniform,
    Composed(Box<ComposedFactors>),
}

/// Factors of a product scheme; directional weights are evaluated on demand.
#[derive(Debug, Clone)]
pub(crate) struct ComposedFactors {
    pub outer: Arc<WeightScheme>,
    pub inner: Arc<WeightScheme>,
    /// Outer arity `n` and inner arity `m`.
    pub n: usize,
    pub m: usize,
    pub outer_pair: Vec<u32>,
    /// `n` entries per composed pair; `u32::MAX` marks an equal block.
    pub inner_pairs: Vec<u32>,
    /// Per outer pair and differing index: `sqrt(fwd / bwd)` and its inverse.
    pub outer_ratio: Vec<Vec<(Weight, Weight)>>,
    pub inner_ratio: Vec<Vec<(Weight, Weight)>>,
}

/// Pairs touching each element, for per-element sums.
#[derive(Debug, Clone)]
pub struct Incidence {
    /// `A` then `B`, each sorted.
    pub elements: Vec<(u64, Side)>,
    start: Vec<usize>,
    pairs: Vec<u32>,
}

impl Incidence {
    pub fn pairs_of(&self, k: usize) -> &[u32] {
        &self.pairs[self.start[k]..self.start[k + 1]]
    }
}

#[derive(Debug)]
pub struct WeightScheme {
    function: Arc<BooleanFunction>,
    a: Vec<u64>,
    b: Vec<u64>,
    pairs: Vec<Pair>,
    pub(crate) directional: Directional,
    incidence: OnceLock<Incidence>,
}

impl Clone for WeightScheme {
    fn clone(&self) -> Self {
        Self {
            function: self.function.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            pairs: self.pairs.clone(),
            directional: self.directional.clone(),
            incidence: OnceLock::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub x: u64,
    pub y: u64,
    /// `None` for problems with the pair itself rather than one index.
    pub index: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.index {
            Some(i) => write!(f, "pair ({}, {}) index {}: {}", self.x, self.y, i, self.message),
            None => write!(f, "pair ({}, {}): {}", self.x, self.y, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
    /// Total count, including those beyond [`MAX_VIOLATIONS`].
    pub total: usize,
    pub pairs_checked: usize,
    pub exact: bool,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.total == 0
    }
}

fn sorted_set(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v.dedup();
    v
}

impl WeightScheme {
    /// Builds a scheme after structural checks: endpoints in `A` and `B`,
    /// no repeated pair, and directional weights given on exactly the
    /// differing indices. Value constraints are left to [`Self::verify`].
    pub fn new(
        function: Arc<BooleanFunction>,
        a: Vec<u64>,
        b: Vec<u64>,
        mut pairs: Vec<PairSpec>,
    ) -> Result<Self> {
        let n = function.arity();
        let (a, b) = (sorted_set(a), sorted_set(b));
        Self::check_sets(&function, &a, &b)?;
        pairs.sort_by_key(|p| (p.x, p.y));
        let mut wps = Vec::with_capacity(pairs.len());
        let mut out = Vec::with_capacity(pairs.len());
        for (k, mut p) in pairs.into_iter().enumerate() {
            if k > 0 && out.last().map(|q: &Pair| (q.x, q.y)) == Some((p.x, p.y)) {
                return Err(Error::MalformedScheme(format!(
                    "pair ({}, {}) listed twice",
                    p.x, p.y
                )));
            }
            Self::check_pair(&a, &b, p.x, p.y)?;
            p.wp.sort_by_key(|t| t.0);
            let keys: Vec<usize> = p.wp.iter().map(|t| t.0).collect();
            if keys != mask_vars(n, p.x ^ p.y) {
                return Err(Error::MalformedScheme(format!(
                    "pair ({}, {}): directional weights on {:?}, differing indices {:?}",
                    p.x,
                    p.y,
                    keys,
                    mask_vars(n, p.x ^ p.y)
                )));
            }
            out.push(Pair {
                x: p.x,
                y: p.y,
                w: p.w,
            });
            wps.push(p.wp.into_iter().map(|(i, f, g)| (i as u32, f, g)).collect());
        }
        Ok(Self {
            function,
            a,
            b,
            pairs: out,
            directional: Directional::Explicit(wps),
            incidence: OnceLock::new(),
        })
    }

    /// Scheme with `w'(x, y, i) = w'(y, x, i) = w(x, y)` on every pair.
    pub fn uniform(
        function: Arc<BooleanFunction>,
        a: Vec<u64>,
        b: Vec<u64>,
        mut pairs: Vec<Pair>,
    ) -> Result<Self> {
        let (a, b) = (sorted_set(a), sorted_set(b));
        Self::check_sets(&function, &a, &b)?;
        pairs.sort_by_key(|p| (p.x, p.y));
        for (k, p) in pairs.iter().enumerate() {
            if k > 0 && (pairs[k - 1].x, pairs[k - 1].y) == (p.x, p.y) {
                return Err(Error::MalformedScheme(format!(
                    "pair ({}, {}) listed twice",
                    p.x, p.y
                )));
            }
            Self::check_pair(&a, &b, p.x, p.y)?;
        }
        Ok(Self {
            function,
            a,
            b,
            pairs,
            directional: Directional::Uniform,
            incidence: OnceLock::new(),
        })
    }

    /// Assembles a composed scheme; pairs must already be sorted and unique.
    pub(crate) fn from_composed(
        function: Arc<BooleanFunction>,
        a: Vec<u64>,
        b: Vec<u64>,
        pairs: Vec<Pair>,
        factors: ComposedFactors,
    ) -> Self {
        debug_assert!(pairs.windows(2).all(|w| (w[0].x, w[0].y) < (w[1].x, w[1].y)));
        Self {
            function,
            a,
            b,
            pairs,
            directional: Directional::Composed(Box::new(factors)),
            incidence: OnceLock::new(),
        }
    }

    fn check_sets(f: &BooleanFunction, a: &[u64], b: &[u64]) -> Result<()> {
        if let Some(&x) = a.iter().chain(b).find(|&&x| x >= f.size()) {
            return Err(Error::AssignmentOutOfRange {
                bits: x,
                arity: f.arity(),
            });
        }
        if let Some(x) = a.iter().find(|x| b.binary_search(x).is_ok()) {
            return Err(Error::MalformedScheme(format!("{x} is in both A and B")));
        }
        Ok(())
    }

    fn check_pair(a: &[u64], b: &[u64], x: u64, y: u64) -> Result<()> {
        if a.binary_search(&x).is_err() {
            return Err(Error::MalformedScheme(format!("pair ({x}, {y}): {x} not in A")));
        }
        if b.binary_search(&y).is_err() {
            return Err(Error::MalformedScheme(format!("pair ({x}, {y}): {y} not in B")));
        }
        Ok(())
    }

    pub fn function(&self) -> &Arc<BooleanFunction> {
        &self.function
    }

    pub fn arity(&self) -> usize {
        self.function.arity()
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_composed(&self) -> bool {
        matches!(self.directional, Directional::Composed(_))
    }

    /// Index of the pair `(x, y)`, if related.
    pub fn find_pair(&self, x: u64, y: u64) -> Option<usize> {
        self.pairs.binary_search_by_key(&(x, y), |p| (p.x, p.y)).ok()
    }

    /// Calls `visit(i, w'(x, y, i), w'(y, x, i))` for every differing index
    /// of pair `p`, in increasing `i`.
    pub fn for_each_directional(&self, p: usize, mut visit: impl FnMut(usize, Weight, Weight)) {
        match &self.directional {
            Directional::Explicit(wps) => {
                for &(i, f, g) in &wps[p] {
                    visit(i as usize, f, g);
                }
            }
            Directional::Uniform => {
                let pair = &self.pairs[p];
                for i in mask_vars(self.arity(), pair.x ^ pair.y) {
                    visit(i, pair.w, pair.w);
                }
            }
            Directional::Composed(c) => {
                let pair = &self.pairs[p];
                let big = self.arity();
                let op = c.outer_pair[p] as usize;
                let outer = &c.outer.pairs[op];
                let omask = outer.x ^ outer.y;
                let xt = outer.x;
                let mut diff = pair.x ^ pair.y;
                while diff != 0 {
                    let bit = 63 - diff.leading_zeros() as usize;
                    diff &= !(1u64 << bit);
                    let i = big - bit;
                    let i1 = (i - 1) / c.m + 1;
                    let i2 = (i - 1) % c.m + 1;
                    let k1 = (omask >> (c.n - i1 + 1)).count_ones() as usize;
                    let (r1, r1_inv) = c.outer_ratio[op][k1];
                    let ip = c.inner_pairs[p * c.n + i1 - 1] as usize;
                    let inner = &c.inner.pairs[ip];
                    let k2 = ((inner.x ^ inner.y) >> (c.m - i2 + 1)).count_ones() as usize;
                    let (mut r2, mut r2_inv) = c.inner_ratio[ip][k2];
                    // A 1-block of the A-side element sits on the B side of
                    // its inner pair, so the inner ratio flips.
                    if xt >> (c.n - i1) & 1 == 1 {
                        std::mem::swap(&mut r2, &mut r2_inv);
                    }
                    visit(i, pair.w * r1 * r2, pair.w * r1_inv * r2_inv);
                }
            }
        }
    }

    pub fn directional(&self, p: usize) -> Vec<(usize, Weight, Weight)> {
        let mut out = Vec::new();
        self.for_each_directional(p, |i, f, g| out.push((i, f, g)));
        out
    }

    /// `(w'(x, y, i), w'(y, x, i))` for pair `(x, y)` at index `i`.
    pub fn directional_at(&self, x: u64, y: u64, i: usize) -> Option<(Weight, Weight)> {
        let p = self.find_pair(x, y)?;
        let mut found = None;
        self.for_each_directional(p, |j, f, g| {
            if j == i {
                found = Some((f, g));
            }
        });
        found
    }

    pub fn incidence(&self) -> &Incidence {
        self.incidence.get_or_init(|| {
            let elements: Vec<(u64, Side)> = self
                .a
                .iter()
                .map(|&x| (x, Side::A))
                .chain(self.b.iter().map(|&y| (y, Side::B)))
                .collect();
            let na = self.a.len();
            let slot = |x: u64, side: Side| match side {
                Side::A => self.a.binary_search(&x).unwrap(),
                Side::B => na + self.b.binary_search(&x).unwrap(),
            };
            let mut count = vec![0usize; elements.len() + 1];
            let ends: Vec<(usize, usize)> = self
                .pairs
                .par_iter()
                .map(|p| (slot(p.x, Side::A), slot(p.y, Side::B)))
                .collect();
            for &(s, t) in &ends {
                count[s + 1] += 1;
                count[t + 1] += 1;
            }
            for k in 1..count.len() {
                count[k] += count[k - 1];
            }
            let start = count.clone();
            let mut fill = count;
            let mut pairs = vec![0u32; 2 * self.pairs.len()];
            for (p, &(s, t)) in ends.iter().enumerate() {
                pairs[fill[s]] = p as u32;
                fill[s] += 1;
                pairs[fill[t]] = p as u32;
                fill[t] += 1;
            }
            Incidence {
                elements,
                start,
                pairs,
            }
        })
    }

    /// Checks preimage membership, positivity and
    /// `w'(x, y, i) * w'(y, x, i) >= w(x, y)^2` on every pair and index.
    pub fn verify(&self) -> VerifyReport {
        let f = &self.function;
        let mut set_violations: Vec<Violation> = Vec::new();
        for &x in &self.a {
            if f.value(x) {
                set_violations.push(Violation {
                    x,
                    y: x,
                    index: None,
                    message: format!("{x} in A but f = 1"),
                });
            }
        }
        for &y in &self.b {
            if !f.value(y) {
                set_violations.push(Violation {
                    x: y,
                    y,
                    index: None,
                    message: format!("{y} in B but f = 0"),
                });
            }
        }
        let per_pair: Vec<(Vec<Violation>, usize, bool)> = (0..self.pairs.len())
            .into_par_iter()
            .map(|p| {
                let pair = self.pairs[p];
                let mut found = Vec::new();
                let mut exact = pair.w.is_exact();
                if !pair.w.is_positive() {
                    found.push(Violation {
                        x: pair.x,
                        y: pair.y,
                        index: None,
                        message: format!("w = {} is not positive", pair.w),
                    });
                }
                let w2 = pair.w * pair.w;
                self.for_each_directional(p, |i, fwd, bwd| {
                    exact &= fwd.is_exact() && bwd.is_exact();
                    if !fwd.is_positive() || !bwd.is_positive() {
                        found.push(Violation {
                            x: pair.x,
                            y: pair.y,
                            index: Some(i),
                            message: format!("directional weights {fwd}, {bwd} not positive"),
                        });
                    } else if !(fwd * bwd).ge_tol(&w2) {
                        found.push(Violation {
                            x: pair.x,
                            y: pair.y,
                            index: Some(i),
                            message: format!("{fwd} * {bwd} < ({})^2", pair.w),
                        });
                    }
                });
                let total = found.len();
                found.truncate(MAX_VIOLATIONS);
                (found, total, exact)
            })
            .collect();
        let mut total = set_violations.len();
        let mut violations = set_violations;
        violations.truncate(MAX_VIOLATIONS);
        let mut exact = true;
        for (found, count, ex) in per_pair {
            total += count;
            exact &= ex;
            for v in found {
                if violations.len() < MAX_VIOLATIONS {
                    violations.push(v);
                }
            }
        }
        VerifyReport {
            violations,
            total,
            pairs_checked: self.pairs.len(),
            exact,
        }
    }

    /// Replaces the directional weights of `(x, y)` at `i`; for building
    /// deliberately broken schemes in tests and experiments.
    pub fn with_directional(
        &self,
        x: u64,
        y: u64,
        i: usize,
        fwd: Weight,
        bwd: Weight,
    ) -> Result<Self> {
        let p = self
            .find_pair(x, y)
            .ok_or_else(|| Error::MalformedScheme(format!("({x}, {y}) is not related")))?;
        let mut out = self.to_explicit();
        let Directional::Explicit(wps) = &mut out.directional else {
            unreachable!()
        };
        let slot = wps[p]
            .iter_mut()
            .find(|t| t.0 as usize == i)
            .ok_or_else(|| Error::IndexOutOfRange {
                index: i,
                arity: self.arity(),
            })?;
        slot.1 = fwd;
        slot.2 = bwd;
        Ok(out)
    }

    /// Same scheme with every directional weight stored per pair.
    pub fn to_explicit(&self) -> Self {
        let wps: Vec<Vec<(u32, Weight, Weight)>> = (0..self.pairs.len())
            .into_par_iter()
            .map(|p| {
                let mut v = Vec::new();
                self.for_each_directional(p, |i, f, g| v.push((i as u32, f, g)));
                v
            })
            .collect();
        Self {
            function: self.function.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            pairs: self.pairs.clone(),
            directional: Directional::Explicit(wps),
            incidence: OnceLock::new(),
        }
    }

    /// Multiplies every `w'(x, y, i)` by `fwd` and every `w'(y, x, i)` by
    /// `bwd`, keeping `w`.
    pub fn scale_directional(&self, fwd: Weight, bwd: Weight) -> Self {
        let mut out = self.to_explicit();
        if let Directional::Explicit(wps) = &mut out.directional {
            for list in wps.iter_mut() {
                for t in list.iter_mut() {
                    t.1 = t.1 * fwd;
                    t.2 = t.2 * bwd;
                }
            }
        }
        out
    }

    /// Multiplies `w` and both directional weights by `c`.
    pub fn scale_all(&self, c: ExactWeight) -> Self {
        let mut out = self.to_explicit();
        let c = Weight::Exact(c);
        for p in out.pairs.iter_mut() {
            p.w = p.w * c;
        }
        if let Directional::Explicit(wps) = &mut out.directional {
            for list in wps.iter_mut() {
                for t in list.iter_mut() {
                    t.1 = t.1 * c;
                    t.2 = t.2 * c;
                }
            }
        }
        out
    }
}
