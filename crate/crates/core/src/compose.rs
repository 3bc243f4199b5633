//! Product construction of weight schemes for iterated functions.
//!
//! Given a scheme for `g` (arity `n`) and one for `g^(d-1)` (arity `m`),
//! builds the scheme for `g^d` on `n * m` variables. An input `x` splits
//! into blocks `x^1 .. x^n`; its reduced input `x~` holds the inner values
//! of the blocks. Related pairs copy the blocks where `x~` and `y~` agree
//! and take an inner pair on each block where they differ.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::adversary::loads::{loads, LoadReport};
use crate::adversary::scheme::{ComposedFactors, Pair, Side, WeightScheme};
use crate::boolfn::{block_bits, BooleanFunction};
use crate::error::{Error, Result};
use crate::weight::{ExactWeight, RadicalSum, Weight};

/// Largest composed arity that is materialized.
pub const MAX_COMPOSE_ARITY: usize = 16;

/// `(i1, i2)`: the block holding global index `i` and the position inside it.
pub fn block_index(i: usize, n: usize, d: usize) -> Result<(usize, usize)> {
    let inner = n.checked_pow(d as u32 - 1).ok_or(Error::DepthOverflow {
        depth: d,
        limit: 0,
    })?;
    if d == 0 || i == 0 || i > inner * n {
        return Err(Error::IndexOutOfRange {
            index: i,
            arity: inner.saturating_mul(n),
        });
    }
    Ok(((i - 1) / inner + 1, (i - 1) % inner + 1))
}

/// `bound^d`, the bound predicted for the `d`-th iterate.
pub fn predicted_bound(bound: Weight, d: usize) -> Weight {
    (1..d).fold(bound, |acc, _| acc * bound)
}

/// Per-element adjacency of a small scheme, indexed by assignment.
struct Dense {
    wt: Vec<Option<Weight>>,
    /// `(partner, pair index, w)`.
    partners: Vec<Vec<(u64, u32, Weight)>>,
}

impl Dense {
    fn new(s: &WeightScheme) -> Self {
        let size = s.function().size() as usize;
        let mut partners = vec![Vec::new(); size];
        for (p, pair) in s.pairs().iter().enumerate() {
            partners[pair.x as usize].push((pair.y, p as u32, pair.w));
            partners[pair.y as usize].push((pair.x, p as u32, pair.w));
        }
        let wt = partners
            .iter()
            .map(|list| {
                (!list.is_empty()).then(|| {
                    let mut sum = RadicalSum::new();
                    for t in list {
                        sum.add(t.2);
                    }
                    sum.value()
                })
            })
            .collect();
        Self { wt, partners }
    }
}

fn ratio_table(s: &WeightScheme) -> Vec<Vec<(Weight, Weight)>> {
    (0..s.len())
        .map(|p| {
            s.directional(p)
                .into_iter()
                .map(|(_, fwd, bwd)| ((fwd / bwd).sqrt(), (bwd / fwd).sqrt()))
                .collect()
        })
        .collect()
}

fn require_balanced(name: &str, r: &LoadReport) -> Result<()> {
    if r.v_a.eq_tol(&r.v_b) {
        Ok(())
    } else {
        Err(Error::Unbalanced {
            v_a: format!("{} (v_A of {name})", r.v_a),
            v_b: r.v_b.to_string(),
        })
    }
}

/// The composed scheme together with its factors, for the identity checks.
pub struct ComposedScheme {
    pub scheme: Arc<WeightScheme>,
    pub outer: Arc<WeightScheme>,
    pub inner: Arc<WeightScheme>,
    pub outer_loads: LoadReport,
    pub inner_loads: LoadReport,
    inner_dense: Dense,
    outer_dense: Dense,
}

/// Builds the scheme for `g^d` from balanced schemes for `g` and `g^(d-1)`.
pub fn compose_scheme(
    outer: Arc<WeightScheme>,
    inner: Arc<WeightScheme>,
) -> Result<ComposedScheme> {
    let outer_loads = loads(&outer)?;
    let inner_loads = loads(&inner)?;
    require_balanced("outer scheme", &outer_loads)?;
    require_balanced("inner scheme", &inner_loads)?;
    let n = outer.arity();
    let m = inner.arity();
    if n * m > MAX_COMPOSE_ARITY {
        return Err(Error::ArityOverflow {
            arity: n * m,
            limit: MAX_COMPOSE_ARITY,
            operation: "scheme composition",
        });
    }
    let g = outer.function().clone();
    let inner_f = inner.function().clone();
    let function = Arc::new(BooleanFunction::compose(&g, &vec![(*inner_f).clone(); n])?);
    let od = Dense::new(&outer);
    let id = Dense::new(&inner);

    let expand = |reduced: &[u64]| -> Vec<u64> {
        let mut out = Vec::new();
        for &r in reduced {
            let mut acc = vec![0u64];
            for j in 1..=n {
                let set = if r >> (n - j) & 1 == 0 { inner.a() } else { inner.b() };
                acc = acc
                    .iter()
                    .flat_map(|&prefix| set.iter().map(move |&e| (prefix << m) | e))
                    .collect();
            }
            out.extend(acc);
        }
        out.sort_unstable();
        out
    };
    let a = expand(outer.a());
    let b = expand(outer.b());

    type Row = (u64, Weight, u32, Vec<u32>);
    let rows: Vec<Vec<Row>> = a
        .par_iter()
        .map(|&x| {
            let xt = g.reduced(&inner_f, x);
            let mut out: Vec<Row> = Vec::new();
            for &(z, op, w1) in &od.partners[xt as usize] {
                // (y prefix, weight, inner pair per block)
                let mut partial: Vec<(u64, Weight, Vec<u32>)> = vec![(0, w1, Vec::new())];
                for j in 1..=n {
                    let xj = block_bits(x, n, m, j);
                    let same = (xt ^ z) >> (n - j) & 1 == 0;
                    let mut next = Vec::new();
                    for (prefix, w, ips) in partial {
                        if same {
                            let wt = id.wt[xj as usize].expect("block lies in the inner scheme");
                            let mut ips = ips;
                            ips.push(u32::MAX);
                            next.push(((prefix << m) | xj, w * wt, ips));
                        } else {
                            for &(yj, ip, wi) in &id.partners[xj as usize] {
                                let mut ips = ips.clone();
                                ips.push(ip);
                                next.push(((prefix << m) | yj, w * wi, ips));
                            }
                        }
                    }
                    partial = next;
                }
                out.extend(partial.into_iter().map(|(y, w, ips)| (y, w, op, ips)));
            }
            out.sort_unstable_by_key(|r| r.0);
            out
        })
        .collect();

    let total: usize = rows.iter().map(|r| r.len()).sum();
    let mut pairs = Vec::with_capacity(total);
    let mut outer_pair = Vec::with_capacity(total);
    let mut inner_pairs = Vec::with_capacity(total * n);
    for (&x, list) in a.iter().zip(rows) {
        for (y, w, op, ips) in list {
            pairs.push(Pair { x, y, w });
            outer_pair.push(op);
            inner_pairs.extend(ips);
        }
    }
    let factors = ComposedFactors {
        outer: outer.clone(),
        inner: inner.clone(),
        n,
        m,
        outer_pair,
        inner_pairs,
        outer_ratio: ratio_table(&outer),
        inner_ratio: ratio_table(&inner),
    };
    let scheme = WeightScheme::from_composed(function, a, b, pairs, factors);
    Ok(ComposedScheme {
        scheme: Arc::new(scheme),
        outer,
        inner,
        outer_loads,
        inner_loads,
        inner_dense: id,
        outer_dense: od,
    })
}

/// Tally of an identity checked over many slices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdentityCheck {
    pub checked: usize,
    pub failures: usize,
    /// True when every comparison was between exact values.
    pub exact: bool,
    /// First few failing slices, as text.
    pub examples: Vec<String>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }

    fn record(&mut self, ok: bool, exact: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        self.exact &= exact;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 10 {
                self.examples.push(describe());
            }
        }
    }

    fn merge(mut self, other: IdentityCheck) -> Self {
        self.checked += other.checked;
        self.failures += other.failures;
        self.exact &= other.exact;
        for e in other.examples {
            if self.examples.len() < 10 {
                self.examples.push(e);
            }
        }
        self
    }

    fn fresh() -> Self {
        Self {
            exact: true,
            ..Self::default()
        }
    }
}

impl ComposedScheme {
    fn n(&self) -> usize {
        self.outer.arity()
    }

    fn m(&self) -> usize {
        self.inner.arity()
    }

    pub fn reduced(&self, x: u64) -> u64 {
        self.outer.function().reduced(self.inner.function(), x)
    }

    fn block_wt_product(&self, x: u64) -> Weight {
        let (n, m) = (self.n(), self.m());
        (1..=n).fold(Weight::Exact(ExactWeight::one()), |acc, j| {
            acc * self.inner_dense.wt[block_bits(x, n, m, j) as usize].expect("block in scheme")
        })
    }

    fn element_index(&self, x: u64) -> Option<(usize, Side)> {
        let s = &self.scheme;
        if let Ok(k) = s.a().binary_search(&x) {
            Some((k, Side::A))
        } else {
            s.b().binary_search(&x).ok().map(|k| (s.a().len() + k, Side::B))
        }
    }

    /// Both sides of the block-sum identity for composed element `x` and
    /// reduced partner `z`: the sum of `w_d(x, y)` over `y` with `y~ = z`,
    /// and `w_1(x~, z)` times the product of `wt_(d-1)` over the blocks of `x`.
    pub fn block_sum(&self, x: u64, z: u64) -> Option<(Weight, Weight)> {
        let (k, side) = self.element_index(x)?;
        let xt = self.reduced(x);
        let w1 = self.outer_dense.partners[xt as usize]
            .iter()
            .find(|t| t.0 == z)
            .map(|t| t.2)?;
        let s = &self.scheme;
        let mut lhs = RadicalSum::new();
        for &p in s.incidence().pairs_of(k) {
            let pair = s.pairs()[p as usize];
            let other = if side == Side::A { pair.y } else { pair.x };
            if self.reduced(other) == z {
                lhs.add(pair.w);
            }
        }
        Some((lhs.value(), w1 * self.block_wt_product(x)))
    }

    /// The block-sum identity on every element and every reduced partner.
    pub fn check_block_sums(&self) -> IdentityCheck {
        let inc = self.scheme.incidence();
        inc.elements
            .par_iter()
            .map(|&(x, _)| {
                let mut check = IdentityCheck::fresh();
                let xt = self.reduced(x);
                for &(z, _, _) in &self.outer_dense.partners[xt as usize] {
                    let (lhs, rhs) = self.block_sum(x, z).expect("z is related to x~");
                    check.record(lhs.eq_tol(&rhs), lhs.is_exact() && rhs.is_exact(), || {
                        format!("x = {x}, z = {z}: {lhs} vs {rhs}")
                    });
                }
                check
            })
            .reduce(IdentityCheck::fresh, IdentityCheck::merge)
    }

    /// `wt_d(x) = wt_1(x~) * prod_j wt_(d-1)(x^j)` on every element.
    pub fn check_weight_products(&self) -> IdentityCheck {
        let s = &self.scheme;
        let inc = s.incidence();
        inc.elements
            .par_iter()
            .enumerate()
            .map(|(k, &(x, _))| {
                let mut check = IdentityCheck::fresh();
                let mut wt = RadicalSum::new();
                for &p in inc.pairs_of(k) {
                    wt.add(s.pairs()[p as usize].w);
                }
                let wt = wt.value();
                let xt = self.reduced(x);
                let rhs = self.outer_dense.wt[xt as usize].expect("x~ in outer scheme")
                    * self.block_wt_product(x);
                check.record(wt.eq_tol(&rhs), wt.is_exact() && rhs.is_exact(), || {
                    format!("x = {x}: wt {wt} vs {rhs}")
                });
                check
            })
            .reduce(IdentityCheck::fresh, IdentityCheck::merge)
    }

    /// The per-block load inequality: for element `x`, reduced partner `z`,
    /// a block `i1` where `x~` and `z` differ and fixed values of `y`
    /// outside that block, `V <= v_(d-1) * sqrt(w'_1(x~, z, i1) / w'_1(z, x~, i1)) * W`
    /// where `W` sums `w_d(x, y)` and `V` sums `w'_d(x, y, i)` over the
    /// slice. Checks every `stride`-th element.
    pub fn check_slice_loads(&self, stride: usize) -> IdentityCheck {
        let (n, m) = (self.n(), self.m());
        let s = &self.scheme;
        let inc = s.incidence();
        let v_inner = self.inner_loads.v_max;
        let stride = stride.max(1);
        (0..inc.elements.len())
            .into_par_iter()
            .step_by(stride)
            .map(|k| {
                let (x, side) = inc.elements[k];
                let xt = self.reduced(x);
                let mut slices: HashMap<(u64, usize, u64), (RadicalSum, Vec<RadicalSum>)> =
                    HashMap::new();
                for &p in inc.pairs_of(k) {
                    let p = p as usize;
                    let pair = s.pairs()[p];
                    let y = if side == Side::A { pair.y } else { pair.x };
                    let z = self.reduced(y);
                    let mut per_index: Vec<(usize, Weight)> = Vec::new();
                    s.for_each_directional(p, |i, fwd, bwd| {
                        per_index.push((i, if side == Side::A { fwd } else { bwd }));
                    });
                    for i1 in (1..=n).filter(|&j| (xt ^ z) >> (n - j) & 1 == 1) {
                        let block = ((1u64 << m) - 1) << (m * (n - i1));
                        let entry = slices
                            .entry((z, i1, y & !block))
                            .or_insert_with(|| (RadicalSum::new(), vec![RadicalSum::new(); m]));
                        entry.0.add(pair.w);
                        for &(i, wp) in &per_index {
                            if (i - 1) / m + 1 == i1 {
                                entry.1[(i - 1) % m].add(wp);
                            }
                        }
                    }
                }
                let mut check = IdentityCheck::fresh();
                let mut keys: Vec<_> = slices.keys().copied().collect();
                keys.sort_unstable();
                for key in keys {
                    let (z, i1, _) = key;
                    let (w_sum, v_sums) = &slices[&key];
                    let (ax, ay) = if side == Side::A { (xt, z) } else { (z, xt) };
                    let (fwd, bwd) = self
                        .outer
                        .directional_at(ax, ay, i1)
                        .expect("outer pair differs at i1");
                    let r1 = if side == Side::A { fwd / bwd } else { bwd / fwd }.sqrt();
                    let limit = v_inner * r1 * w_sum.value();
                    for (i2, v) in v_sums.iter().enumerate() {
                        let v = v.value();
                        check.record(limit.ge_tol(&v), limit.is_exact() && v.is_exact(), || {
                            format!("x = {x}, z = {z}, block {i1}, index {}: {v} > {limit}", i2 + 1)
                        });
                    }
                }
                check
            })
            .reduce(IdentityCheck::fresh, IdentityCheck::merge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::builtin::{scheme_f, scheme_g, scheme_h};

    #[test]
    fn block_indices() {
        assert_eq!(block_index(5, 4, 2).unwrap(), (2, 1));
        assert_eq!(block_index(1, 4, 2).unwrap(), (1, 1));
        assert_eq!(block_index(16, 4, 2).unwrap(), (4, 4));
        assert!(block_index(17, 4, 2).is_err());
        assert!(block_index(0, 4, 2).is_err());
        for i in 1..=64 {
            let (i1, i2) = block_index(i, 4, 3).unwrap();
            assert_eq!((i1 - 1) * 16 + i2, i);
        }
    }

    #[test]
    fn nae_square() {
        let g = Arc::new(scheme_g());
        let c = compose_scheme(g.clone(), g).unwrap();
        assert!(c.scheme.verify().is_valid());
        let r = loads(&c.scheme).unwrap();
        assert_eq!(r.bound, Weight::Exact("9/2".parse().unwrap()));
        assert!(c.check_block_sums().holds());
        assert!(c.check_weight_products().holds());
        let slice_loads = c.check_slice_loads(1);
        assert!(slice_loads.holds(), "{:?}", slice_loads.examples);
    }

    #[test]
    fn rejects_unbalanced_and_oversized() {
        let h = Arc::new(scheme_h());
        assert!(matches!(
            compose_scheme(h.clone(), h),
            Err(Error::Unbalanced { .. })
        ));
        let f = Arc::new(scheme_f());
        let g = Arc::new(scheme_g());
        assert!(compose_scheme(g.clone(), g.clone()).is_ok());
        // 4 * 9 variables
        let g2 = compose_scheme(g.clone(), g).unwrap().scheme;
        assert!(matches!(
            compose_scheme(f, g2),
            Err(Error::ArityOverflow { .. })
        ));
    }

    #[test]
    fn predicted_powers() {
        let b = Weight::Exact("5/2".parse().unwrap());
        assert_eq!(predicted_bound(b, 2).to_string(), "25/4");
        let g = Weight::Exact("3/2*sqrt(2)".parse().unwrap());
        assert_eq!(predicted_bound(g, 2).to_string(), "9/2");
    }
}
