//! The progress measure `W_t = sum w(x, y) |<psi_x^t | psi_y^t>|`.

use rayon::prelude::*;
use std::collections::HashMap;

use super::{inner, QueryAlgorithm, MAX_INPUTS};
use crate::adversary::{loads, WeightScheme};
use crate::error::{Error, Result};
use crate::weight::TOLERANCE;

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressTrace {
    /// `W_0, ..., W_T`.
    pub w: Vec<f64>,
    pub v_max: f64,
}

impl ProgressTrace {
    pub fn w0(&self) -> f64 {
        self.w[0]
    }

    /// `|W_j - W_(j-1)|` for `j = 1..=T`.
    pub fn drops(&self) -> Vec<f64> {
        self.w.windows(2).map(|p| (p[1] - p[0]).abs()).collect()
    }

    /// `2 v_max W_0`.
    pub fn drop_limit(&self) -> f64 {
        2.0 * self.v_max * self.w0()
    }

    pub fn max_drop(&self) -> f64 {
        self.drops().into_iter().fold(0.0, f64::max)
    }
}

fn states_for(alg: &QueryAlgorithm, scheme: &WeightScheme) -> Result<HashMap<u64, Vec<Vec<num_complex::Complex64>>>> {
    if scheme.arity() != alg.arity() {
        return Err(Error::ArityMismatch {
            expected: alg.arity(),
            actual: scheme.arity(),
        });
    }
    let inputs: Vec<u64> = scheme.a().iter().chain(scheme.b()).copied().collect();
    if inputs.len() > MAX_INPUTS {
        return Err(Error::SimulationTooLarge(format!(
            "{} inputs exceed {MAX_INPUTS}",
            inputs.len()
        )));
    }
    Ok(inputs.into_par_iter().map(|x| (x, alg.states(x))).collect())
}

pub fn progress_trace(alg: &QueryAlgorithm, scheme: &WeightScheme) -> Result<ProgressTrace> {
    let states = states_for(alg, scheme)?;
    let v_max = loads(scheme)?.v_max.to_f64();
    let w = (0..=alg.queries())
        .map(|t| {
            scheme
                .pairs()
                .par_iter()
                .map(|p| p.w.to_f64() * inner(&states[&p.x][t], &states[&p.y][t]).norm())
                .sum()
        })
        .collect();
    Ok(ProgressTrace { w, v_max })
}

/// Every drop is at most `2 v_max W_0`, up to the tolerance.
pub fn check_drop_bound(trace: &ProgressTrace) -> bool {
    let limit = trace.drop_limit() + TOLERANCE;
    trace.drops().iter().all(|&d| d <= limit)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinalCheck {
    pub w_final: f64,
    pub w0: f64,
    /// `2 sqrt(eps (1 - eps)) W_0`.
    pub limit: f64,
    /// Inputs where the error exceeds `eps`, with that error.
    pub precondition_failures: Vec<(u64, f64)>,
    /// `(1 - 2 sqrt(eps (1 - eps))) / (2 v_max)`.
    pub query_lower_bound: f64,
}

impl FinalCheck {
    pub fn holds(&self) -> bool {
        self.precondition_failures.is_empty() && self.w_final <= self.limit + TOLERANCE
    }
}

pub fn check_final_bound(alg: &QueryAlgorithm, scheme: &WeightScheme, eps: f64) -> Result<FinalCheck> {
    let trace = progress_trace(alg, scheme)?;
    let f = scheme.function();
    let mut precondition_failures: Vec<(u64, f64)> = scheme
        .a()
        .iter()
        .chain(scheme.b())
        .filter_map(|&x| {
            let p = alg.run(x).1;
            let err = if f.value(x) { 1.0 - p } else { p };
            (err > eps + TOLERANCE).then_some((x, err))
        })
        .collect();
    precondition_failures.sort_by_key(|e| e.0);
    let s = 2.0 * (eps * (1.0 - eps)).max(0.0).sqrt();
    Ok(FinalCheck {
        w_final: *trace.w.last().expect("W_0"),
        w0: trace.w0(),
        limit: s * trace.w0(),
        precondition_failures,
        query_lower_bound: (1.0 - s) / (2.0 * trace.v_max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{balance, scheme_f, unit_scheme};
    use crate::boolfn::BooleanFunction;
    use std::sync::Arc;

    fn parity_unit() -> WeightScheme {
        let f = BooleanFunction::parity(2).unwrap();
        let r = [(0, 1), (0, 2), (3, 1), (3, 2)];
        unit_scheme(Arc::new(f), &[0, 3], &[1, 2], &r).unwrap()
    }

    #[test]
    fn parity_trace() {
        let t = progress_trace(&QueryAlgorithm::parity2(), &parity_unit()).unwrap();
        assert!((t.w0() - 4.0).abs() < 1e-12);
        assert!(t.w[1] < 1e-9);
        assert!((t.v_max - 0.5).abs() < 1e-12);
        assert!(check_drop_bound(&t));
        let c = check_final_bound(&QueryAlgorithm::parity2(), &parity_unit(), 0.0).unwrap();
        assert!(c.holds());
        assert!((c.query_lower_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_has_no_drops() {
        let s = scheme_f();
        let t = progress_trace(&QueryAlgorithm::identity(4, 2, 3).unwrap(), &s).unwrap();
        assert!(t.drops().iter().all(|&d| d == 0.0));
        assert_eq!(t.w[3], t.w0());
    }

    #[test]
    fn random_drops_bounded() {
        let s = balance(&scheme_f()).unwrap();
        for seed in 0..10 {
            let alg = QueryAlgorithm::random(4, 2, 2, seed).unwrap();
            let t = progress_trace(&alg, &s).unwrap();
            assert!(check_drop_bound(&t), "seed {seed}: {:?}", t.drops());
        }
    }

    #[test]
    fn zero_query_fails_precondition() {
        let alg = QueryAlgorithm::identity(2, 2, 0).unwrap();
        let c = check_final_bound(&alg, &parity_unit(), 0.25).unwrap();
        assert_eq!(c.precondition_failures.len(), 2);
        assert!(!c.holds());
        let c = check_final_bound(&alg, &parity_unit(), 0.5).unwrap();
        assert!((c.limit - c.w0).abs() < 1e-12);
        assert!(progress_trace(&alg, &scheme_f()).is_err());
    }
}
