use rayon::prelude::*;

use crate::adversary::scheme::{Side, WeightScheme};
use crate::error::{Error, Result};
use crate::weight::{RadicalSum, Weight};

/// Weight and per-variable loads of one element of `A` or `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementLoad {
    pub x: u64,
    pub side: Side,
    pub wt: Weight,
    /// `v(x, i)` at position `i - 1`.
    pub v: Vec<Weight>,
    /// `max_i v(x, i) / wt(x)`; `None` for an element without partners.
    pub ratio: Option<Weight>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadReport {
    pub elements: Vec<ElementLoad>,
    pub v_a: Weight,
    pub v_b: Weight,
    pub v_max: Weight,
    pub bound: Weight,
    /// `(x, i)` attaining `v_a` and `v_b`.
    pub argmax_a: (u64, usize),
    pub argmax_b: (u64, usize),
}

impl LoadReport {
    pub fn side(&self, side: Side) -> impl Iterator<Item = &ElementLoad> {
        self.elements.iter().filter(move |e| e.side == side)
    }

    pub fn get(&self, x: u64) -> Option<&ElementLoad> {
        self.elements.iter().find(|e| e.x == x)
    }

    /// Smallest and largest `wt` on one side.
    pub fn wt_range(&self, side: Side) -> Option<(Weight, Weight)> {
        extremes(self.side(side).map(|e| e.wt))
    }

    /// Smallest and largest nonzero `v(x, i)` on one side.
    pub fn v_range(&self, side: Side) -> Option<(Weight, Weight)> {
        extremes(
            self.side(side)
                .flat_map(|e| e.v.iter().copied())
                .filter(|v| v.is_positive()),
        )
    }

    pub fn is_balanced(&self) -> bool {
        self.v_a.eq_tol(&self.v_b)
    }
}

fn extremes(it: impl Iterator<Item = Weight>) -> Option<(Weight, Weight)> {
    it.fold(None, |acc, w| match acc {
        None => Some((w, w)),
        Some((lo, hi)) => Some((
            if lo.gt(&w) { w } else { lo },
            if w.gt(&hi) { w } else { hi },
        )),
    })
}

/// Computes `wt`, `v`, `v_A`, `v_B`, `v_max = sqrt(v_A v_B)` and the bound
/// `1 / v_max`.
pub fn loads(scheme: &WeightScheme) -> Result<LoadReport> {
    if scheme.a().is_empty() {
        return Err(Error::EmptyRelation("A is empty"));
    }
    if scheme.b().is_empty() {
        return Err(Error::EmptyRelation("B is empty"));
    }
    if scheme.is_empty() {
        return Err(Error::EmptyRelation("no related pairs"));
    }
    let n = scheme.arity();
    let inc = scheme.incidence();
    let pairs = scheme.pairs();
    let elements: Vec<ElementLoad> = inc
        .elements
        .par_iter()
        .enumerate()
        .map(|(k, &(x, side))| {
            let mut wt = RadicalSum::new();
            let mut v = vec![RadicalSum::new(); n];
            for &p in inc.pairs_of(k) {
                let p = p as usize;
                wt.add(pairs[p].w);
                scheme.for_each_directional(p, |i, fwd, bwd| {
                    v[i - 1].add(if side == Side::A { fwd } else { bwd });
                });
            }
            let wt = wt.value();
            let v: Vec<Weight> = v.iter().map(|s| s.value()).collect();
            let ratio = wt.is_positive().then(|| {
                let mut best = Weight::Exact(crate::weight::ExactWeight::zero());
                for vi in &v {
                    let r = *vi / wt;
                    if r.gt(&best) {
                        best = r;
                    }
                }
                best
            });
            ElementLoad {
                x,
                side,
                wt,
                v,
                ratio,
            }
        })
        .collect();
    let side_max = |side: Side| -> Result<(Weight, (u64, usize))> {
        let mut best: Option<(Weight, (u64, usize))> = None;
        for e in elements.iter().filter(|e| e.side == side) {
            if !e.wt.is_positive() {
                continue;
            }
            for (i, vi) in e.v.iter().enumerate() {
                let r = *vi / e.wt;
                if best.as_ref().is_none_or(|(b, _)| r.gt(b)) {
                    best = Some((r, (e.x, i + 1)));
                }
            }
        }
        best.ok_or(Error::EmptyRelation("a side has no related element"))
    };
    let (v_a, argmax_a) = side_max(Side::A)?;
    let (v_b, argmax_b) = side_max(Side::B)?;
    let v_max = (v_a * v_b).sqrt();
    let bound = v_max.recip();
    Ok(LoadReport {
        elements,
        v_a,
        v_b,
        v_max,
        bound,
        argmax_a,
        argmax_b,
    })
}

/// Rescales directional weights so that `v_A = v_B`: `w'(x, y, i)` by
/// `sqrt(v_B / v_A)` and `w'(y, x, i)` by `sqrt(v_A / v_B)`.
pub fn balance(scheme: &WeightScheme) -> Result<WeightScheme> {
    let report = loads(scheme)?;
    if !report.v_a.is_positive() || !report.v_b.is_positive() {
        return Err(Error::Unbalanced {
            v_a: report.v_a.to_string(),
            v_b: report.v_b.to_string(),
        });
    }
    if report.v_a == report.v_b {
        return Ok(scheme.clone());
    }
    let up = (report.v_b / report.v_a).sqrt();
    let down = (report.v_a / report.v_b).sqrt();
    Ok(scheme.scale_directional(up, down))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::builtin::{scheme_f, scheme_g, scheme_h};
    use crate::weight::ExactWeight;

    fn ex(s: &str) -> Weight {
        Weight::Exact(s.parse().unwrap())
    }

    #[test]
    fn scheme_f_loads() {
        let r = loads(&scheme_f()).unwrap();
        for e in &r.elements {
            assert_eq!(e.wt, ex("10/3"));
            assert!(e.v.iter().all(|v| *v == ex("4/3")));
        }
        assert_eq!(r.v_a, ex("2/5"));
        assert_eq!(r.bound, ex("5/2"));
        assert!(r.is_balanced());
    }

    #[test]
    fn scheme_g_loads() {
        let r = loads(&scheme_g()).unwrap();
        assert_eq!(r.wt_range(Side::A), Some((ex("9"), ex("9"))));
        assert_eq!(r.wt_range(Side::B), Some((ex("3"), ex("3"))));
        assert_eq!(r.v_range(Side::A), Some((ex("3*sqrt(2)"), ex("3*sqrt(2)"))));
        assert_eq!(r.v_range(Side::B), Some((ex("sqrt(2)"), ex("sqrt(2)"))));
        assert_eq!(r.v_max, ex("1/3*sqrt(2)"));
        assert_eq!(r.bound, ex("3/2*sqrt(2)"));
    }

    #[test]
    fn scheme_h_balance() {
        let s = scheme_h();
        let r = loads(&s).unwrap();
        assert_eq!((r.v_a, r.v_b), (ex("1/6"), ex("8/13")));
        assert_eq!(r.v_max, ex("2/39*sqrt(39)"));
        let b = balance(&s).unwrap();
        let rb = loads(&b).unwrap();
        assert_eq!(rb.v_a, r.v_max);
        assert_eq!(rb.v_b, r.v_max);
        assert_eq!(rb.bound, r.bound);
        for p in 0..s.len() {
            let before = s.directional(p);
            let after = b.directional(p);
            for (u, v) in before.iter().zip(&after) {
                assert_eq!(u.1 * u.2, v.1 * v.2);
            }
        }
    }

    #[test]
    fn uniform_scaling_keeps_bound() {
        let s = scheme_g();
        let scaled = s.scale_all(ExactWeight::frac(7, 2));
        assert!(scaled.verify().is_valid());
        assert_eq!(loads(&scaled).unwrap().bound, loads(&s).unwrap().bound);
    }
}
