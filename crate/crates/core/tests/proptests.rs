use std::sync::Arc;

use advwb::adversary::{balance, scheme_f, scheme_g, scheme_h, loads, unit_scheme, WeightScheme};
use advwb::measures::{exact_polynomial, sensitivity, ComplexityReport, ReportOptions};
use advwb::qsim::{check_drop_bound, progress_trace, QueryAlgorithm};
use advwb::{BooleanFunction, ExactWeight, Weight};
use proptest::prelude::*;

fn function(max_arity: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_arity).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1usize << n)
            .prop_map(move |t| BooleanFunction::from_table(n, &t).unwrap())
    })
}

fn balanced_builtins() -> Vec<WeightScheme> {
    [scheme_f(), scheme_g(), scheme_h()]
        .iter()
        .map(|s| balance(s).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_round_trip(f in function(8)) {
        let p = exact_polynomial(&f).unwrap();
        for (x, v) in p.values().into_iter().enumerate() {
            prop_assert_eq!(v, f.value(x as u64) as i64);
        }
    }

    #[test]
    fn order_relations(f in function(5)) {
        let r = ComplexityReport::compute(&f, &ReportOptions::default()).unwrap();
        prop_assert!(r.order_relations_hold(), "{:?}", r);
    }

    #[test]
    fn negation_keeps_sensitivity(f in function(6)) {
        let n = f.arity();
        let g = BooleanFunction::from_fn(n, |x| !f.value(x)).unwrap();
        prop_assert_eq!(sensitivity(&f).unwrap(), sensitivity(&g).unwrap());
    }

    #[test]
    fn drop_bound_on_random_algorithms(seed in any::<u64>(), queries in 1usize..4, k in 0usize..3) {
        let s = &balanced_builtins()[k];
        let alg = QueryAlgorithm::random(s.arity(), 2, queries, seed).unwrap();
        let t = progress_trace(&alg, s).unwrap();
        prop_assert!(check_drop_bound(&t), "seed {}: {:?} vs {}", seed, t.drops(), t.drop_limit());
    }

    #[test]
    fn scaling_keeps_bound(p in 1i128..20, q in 1i128..20, k in 0usize..3) {
        let s = [scheme_f(), scheme_g(), scheme_h()][k].clone();
        let c = Weight::Exact(ExactWeight::frac(p, q));
        let scaled = s.scale_directional(c, c.recip());
        prop_assert!(scaled.verify().is_valid());
        prop_assert_eq!(loads(&scaled).unwrap().v_max, loads(&s).unwrap().v_max);
    }

    #[test]
    fn unit_scheme_on_random_relation(f in function(4), pick in prop::collection::vec(any::<bool>(), 256)) {
        let a = f.preimage(false);
        let b = f.preimage(true);
        prop_assume!(!a.is_empty() && !b.is_empty());
        let r: Vec<(u64, u64)> = a.iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .enumerate()
            .filter(|(k, _)| pick[k % 256])
            .map(|(_, p)| p)
            .collect();
        prop_assume!(!r.is_empty());
        let s = unit_scheme(Arc::new(f), &a, &b, &r).unwrap();
        prop_assert!(s.verify().is_valid());
    }
}
