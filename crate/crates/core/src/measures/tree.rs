use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::measures::ternary::{decode, Subcubes, MIXED};

/// Largest arity for the exact minimax search (3^N memo entries).
pub const MAX_DT_ARITY: usize = 12;

/// A deterministic decision tree over 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    Query {
        var: usize,
        if_zero: Box<DecisionTree>,
        if_one: Box<DecisionTree>,
    },
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query {
                if_zero, if_one, ..
            } => 1 + if_zero.depth().max(if_one.depth()),
        }
    }

    /// Runs the tree on `x` (encoded with `x_1` most significant) and
    /// returns the output together with the number of queries made.
    pub fn run(&self, x: u64, arity: usize) -> (bool, usize) {
        let mut node = self;
        let mut queries = 0;
        loop {
            match node {
                DecisionTree::Leaf(v) => return (*v, queries),
                DecisionTree::Query {
                    var,
                    if_zero,
                    if_one,
                } => {
                    queries += 1;
                    node = if x >> (arity - var) & 1 == 1 {
                        if_one
                    } else {
                        if_zero
                    };
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Query {
                if_zero, if_one, ..
            } => 1 + if_zero.node_count() + if_one.node_count(),
        }
    }

    /// Tree for the composition `outer(inner(x^1), ..., inner(x^n))`: each
    /// outer query of block `j` is replaced by the inner tree on that block,
    /// whose leaves continue into the matching outer subtree.
    pub fn compose(outer: &DecisionTree, inner: &DecisionTree, inner_arity: usize) -> DecisionTree {
        match outer {
            DecisionTree::Leaf(v) => DecisionTree::Leaf(*v),
            DecisionTree::Query {
                var,
                if_zero,
                if_one,
            } => {
                let zero = Self::compose(if_zero, inner, inner_arity);
                let one = Self::compose(if_one, inner, inner_arity);
                inner.graft((var - 1) * inner_arity, &zero, &one)
            }
        }
    }

    fn graft(&self, offset: usize, zero: &DecisionTree, one: &DecisionTree) -> DecisionTree {
        match self {
            DecisionTree::Leaf(false) => zero.clone(),
            DecisionTree::Leaf(true) => one.clone(),
            DecisionTree::Query {
                var,
                if_zero,
                if_one,
            } => DecisionTree::Query {
                var: var + offset,
                if_zero: Box::new(if_zero.graft(offset, zero, one)),
                if_one: Box::new(if_one.graft(offset, zero, one)),
            },
        }
    }
}

/// Deterministic query complexity `D(f)` and an optimal tree, by memoized
/// minimax over all restrictions:
/// `D(rho) = 0` if `f` is constant on `rho`, else
/// `min_i 1 + max(D(rho, x_i = 0), D(rho, x_i = 1))`.
pub fn det_complexity(f: &BooleanFunction) -> Result<(usize, DecisionTree)> {
    let n = f.arity();
    if n > MAX_DT_ARITY {
        return Err(Error::ArityOverflow {
            arity: n,
            limit: MAX_DT_ARITY,
            operation: "decision-tree search",
        });
    }
    let cubes = Subcubes::new(f);
    let total = cubes.len();
    let mut depth = vec![0u8; total];
    let mut choice = vec![u8::MAX; total];
    let mut digits = vec![0u8; n];
    for t in 0..total {
        if t > 0 {
            crate::measures::ternary::increment(&mut digits);
        }
        if cubes.class[t] != MIXED {
            continue;
        }
        let mut best = u8::MAX;
        let mut arg = u8::MAX;
        // scan from the most significant bit so ties prefer low variable indices
        for k in (0..n).rev() {
            if digits[k] != 2 {
                continue;
            }
            let d0 = depth[t - 2 * cubes.pow3[k]];
            let d1 = depth[t - cubes.pow3[k]];
            let d = 1 + d0.max(d1);
            if d < best {
                best = d;
                arg = k as u8;
            }
        }
        depth[t] = best;
        choice[t] = arg;
    }
    let root = cubes.root();
    let tree = build_tree(&cubes, &choice, root, n);
    Ok((depth[root] as usize, tree))
}

fn build_tree(cubes: &Subcubes, choice: &[u8], t: usize, n: usize) -> DecisionTree {
    if cubes.class[t] != MIXED {
        return DecisionTree::Leaf(cubes.class[t] == 1);
    }
    let k = choice[t] as usize;
    debug_assert_eq!(decode(t, n)[k], 2);
    DecisionTree::Query {
        var: n - k,
        if_zero: Box::new(build_tree(cubes, choice, t - 2 * cubes.pow3[k], n)),
        if_one: Box::new(build_tree(cubes, choice, t - cubes.pow3[k], n)),
    }
}

/// Checks that `tree` computes `f` on every assignment within `bound` queries.
pub fn tree_computes(tree: &DecisionTree, f: &BooleanFunction, bound: usize) -> bool {
    (0..f.size()).all(|x| {
        let (v, q) = tree.run(x, f.arity());
        v == f.value(x) && q <= bound
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_depths() {
        let f = BooleanFunction::base_f();
        let (d, tree) = det_complexity(&f).unwrap();
        assert_eq!(d, 3);
        assert!(tree_computes(&tree, &f, 3));
        assert_eq!(det_complexity(&BooleanFunction::nae_g()).unwrap().0, 3);
        let h = BooleanFunction::kushilevitz_h();
        let (dh, th) = det_complexity(&h).unwrap();
        assert_eq!(dh, 6);
        assert!(tree_computes(&th, &h, 6));
        assert_eq!(det_complexity(&BooleanFunction::constant(3, true).unwrap()).unwrap().0, 0);
        assert_eq!(det_complexity(&BooleanFunction::or(5).unwrap()).unwrap().0, 5);
    }

    #[test]
    fn base_tree_queries_x1_x3_first() {
        // querying x1 and x3 leaves a function of a single remaining variable
        let f = BooleanFunction::base_f();
        for a in 0..2u64 {
            for c in 0..2u64 {
                let fixed = a << 3 | c << 1;
                let deps = [0b0100u64, 0b0001]
                    .iter()
                    .filter(|&&m| (0..16).any(|x| {
                        x & 0b1010 == fixed && f.value(x) != f.value(x ^ m)
                    }))
                    .count();
                assert_eq!(deps, 1);
            }
        }
    }

    #[test]
    fn composed_tree() {
        let f = BooleanFunction::base_f();
        let (_, t) = det_complexity(&f).unwrap();
        let t2 = DecisionTree::compose(&t, &t, 4);
        assert_eq!(t2.depth(), 9);
        let f2 = f.iterate(2).unwrap();
        assert!(tree_computes(&t2, &f2, 9));
    }

    #[test]
    fn overflow() {
        let p = BooleanFunction::parity(13).unwrap();
        assert!(det_complexity(&p).is_err());
    }
}
