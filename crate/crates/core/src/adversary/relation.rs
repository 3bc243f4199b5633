use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::adversary::scheme::{Pair, WeightScheme};
use crate::boolfn::{mask_vars, BooleanFunction};
use crate::error::{Error, Result};
use crate::measures::sensitivity::sensitive_mask;
use crate::weight::{ExactWeight, Rational, Weight};

/// Parameters of the unweighted adversary bound for a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationBound {
    pub m: u64,
    pub m_prime: u64,
    pub l: u64,
    pub l_prime: u64,
    /// `sqrt(m m' / (l l'))`.
    pub bound: ExactWeight,
}

/// `m`, `m'`: least partner counts in `A` and `B`. `l`, `l'`: most partners
/// of one element that differ from it at one fixed index.
pub fn relation_bound(
    f: &BooleanFunction,
    a: &[u64],
    b: &[u64],
    r: &[(u64, u64)],
) -> Result<RelationBound> {
    check_relation(f, a, b, r)?;
    let n = f.arity();
    let mut per_a: BTreeMap<u64, (u64, Vec<u64>)> =
        a.iter().map(|&x| (x, (0, vec![0; n]))).collect();
    let mut per_b: BTreeMap<u64, (u64, Vec<u64>)> =
        b.iter().map(|&y| (y, (0, vec![0; n]))).collect();
    for &(x, y) in r {
        for (z, table) in [(x, &mut per_a), (y, &mut per_b)] {
            let entry = table.get_mut(&z).expect("checked membership");
            entry.0 += 1;
            for i in mask_vars(n, x ^ y) {
                entry.1[i - 1] += 1;
            }
        }
    }
    let min_count = |t: &BTreeMap<u64, (u64, Vec<u64>)>| t.values().map(|e| e.0).min().unwrap();
    let max_l = |t: &BTreeMap<u64, (u64, Vec<u64>)>| {
        t.values()
            .flat_map(|e| e.1.iter().copied())
            .max()
            .unwrap()
    };
    let (m, m_prime) = (min_count(&per_a), min_count(&per_b));
    let (l, l_prime) = (max_l(&per_a), max_l(&per_b));
    let bound = ExactWeight::new(
        Rational::one(),
        Rational::new((m * m_prime) as i128, (l * l_prime) as i128),
    )
    .unwrap_or_else(|_| ExactWeight::zero());
    Ok(RelationBound {
        m,
        m_prime,
        l,
        l_prime,
        bound,
    })
}

fn check_relation(f: &BooleanFunction, a: &[u64], b: &[u64], r: &[(u64, u64)]) -> Result<()> {
    if a.is_empty() || b.is_empty() || r.is_empty() {
        return Err(Error::EmptyRelation("relation has no pairs"));
    }
    for &x in a.iter().chain(b) {
        if x >= f.size() {
            return Err(Error::AssignmentOutOfRange {
                bits: x,
                arity: f.arity(),
            });
        }
    }
    if let Some(x) = a.iter().find(|&&x| f.value(x)) {
        return Err(Error::MalformedScheme(format!("{x} in A but f = 1")));
    }
    if let Some(y) = b.iter().find(|&&y| !f.value(y)) {
        return Err(Error::MalformedScheme(format!("{y} in B but f = 0")));
    }
    let (sa, sb): (std::collections::BTreeSet<_>, std::collections::BTreeSet<_>) =
        (a.iter().collect(), b.iter().collect());
    if let Some(&(x, y)) = r.iter().find(|(x, y)| !sa.contains(x) || !sb.contains(y)) {
        return Err(Error::MalformedScheme(format!("({x}, {y}) not in A x B")));
    }
    Ok(())
}

/// The scheme with every weight 1 on the relation.
pub fn unit_scheme(
    f: Arc<BooleanFunction>,
    a: &[u64],
    b: &[u64],
    r: &[(u64, u64)],
) -> Result<WeightScheme> {
    check_relation(&f, a, b, r)?;
    let one = Weight::Exact(ExactWeight::one());
    let pairs = r.iter().map(|&(x, y)| Pair { x, y, w: one }).collect();
    WeightScheme::uniform(f, a.to_vec(), b.to_vec(), pairs)
}

/// Sensitive and insensitive variables of `f` at `x`, 1-based.
pub fn sensitive_partition(f: &BooleanFunction, x: u64) -> (Vec<usize>, Vec<usize>) {
    let n = f.arity();
    let mask = sensitive_mask(f, x);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (mask_vars(n, mask), mask_vars(n, !mask & full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::loads::loads;

    #[test]
    fn or4_star() {
        let f = BooleanFunction::or(4).unwrap();
        let b: Vec<u64> = vec![1, 2, 4, 8];
        let r: Vec<(u64, u64)> = b.iter().map(|&y| (0, y)).collect();
        let rb = relation_bound(&f, &[0], &b, &r).unwrap();
        assert_eq!((rb.m, rb.m_prime, rb.l, rb.l_prime), (4, 1, 1, 1));
        assert_eq!(rb.bound, ExactWeight::integer(2));
        let s = unit_scheme(f.into_shared(), &[0], &b, &r).unwrap();
        assert!(s.verify().is_valid());
        assert_eq!(loads(&s).unwrap().bound, Weight::Exact(ExactWeight::integer(2)));
    }

    #[test]
    fn parity2_distance_one() {
        let f = BooleanFunction::parity(2).unwrap();
        let r = vec![(0, 1), (0, 2), (3, 1), (3, 2)];
        let rb = relation_bound(&f, &[0, 3], &[1, 2], &r).unwrap();
        assert_eq!((rb.m, rb.m_prime, rb.l, rb.l_prime), (2, 2, 1, 1));
        assert_eq!(rb.bound.to_string(), "2");
    }

    #[test]
    fn rejects_bad_relations() {
        let f = BooleanFunction::parity(2).unwrap();
        assert!(relation_bound(&f, &[0], &[1], &[]).is_err());
        assert!(relation_bound(&f, &[1], &[0], &[(1, 0)]).is_err());
        assert!(relation_bound(&f, &[0], &[1], &[(0, 2)]).is_err());
    }

    #[test]
    fn partition_of_base_function() {
        let f = BooleanFunction::base_f();
        assert_eq!(sensitive_partition(&f, 0), (vec![1, 2], vec![3, 4]));
        for x in 0..16u64 {
            let (s, ins) = sensitive_partition(&f, x);
            assert_eq!(s.len(), 2);
            let y = x ^ crate::boolfn::set_mask(4, &ins).unwrap();
            assert_eq!(sensitive_partition(&f, y).0, ins);
        }
    }
}
