//! Approximate degree by linear programming.
//!
//! For each candidate degree `k` the program
//! `minimize t s.t. |p(x) - f(x)| <= t for all x, deg p <= k`
//! is solved; the approximate degree is the smallest `k` whose optimum is at
//! most `eps`. Writing `p = 1/2 + p'` and `t = 1/2 + s` turns every
//! constraint into `A z <= b` with `b >= 0`, so the origin is feasible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::lp::{maximize, LpScalar};
use crate::measures::polynomial::exact_polynomial;

/// Exact rational LP up to this arity, `f64` above it.
pub const EXACT_LP_ARITY: usize = 8;
pub const MAX_APPROX_ARITY: usize = 12;

/// Polynomial of degree at most `degree` within `error` of `f` everywhere.
#[derive(Debug, Clone)]
pub struct ApproxWitness {
    pub degree: usize,
    /// Monomial masks with their coefficients (constant term under mask 0).
    pub coefs: Vec<(u64, WitnessCoef)>,
    pub error: WitnessCoef,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessCoef {
    Exact(BigRational),
    Float(f64),
}

impl WitnessCoef {
    pub fn to_f64(&self) -> f64 {
        match self {
            WitnessCoef::Exact(q) => LpScalar::to_f64(q),
            WitnessCoef::Float(v) => *v,
        }
    }
}

impl ApproxWitness {
    pub fn evaluate_f64(&self, x: u64) -> f64 {
        self.coefs
            .iter()
            .filter(|(m, _)| m & x == *m)
            .map(|(_, c)| c.to_f64())
            .sum()
    }

    /// Checks `|p(x) - f(x)| <= eps` at every assignment; exactly when all
    /// coefficients are rational, else with a 1e-9 slack.
    pub fn within(&self, f: &BooleanFunction, eps: &BigRational) -> bool {
        let exact: Option<Vec<(u64, &BigRational)>> = self
            .coefs
            .iter()
            .map(|(m, c)| match c {
                WitnessCoef::Exact(q) => Some((*m, q)),
                WitnessCoef::Float(_) => None,
            })
            .collect();
        match exact {
            Some(cs) => (0..f.size()).all(|x| {
                let p: BigRational = cs
                    .iter()
                    .filter(|(m, _)| m & x == *m)
                    .fold(<BigRational as Zero>::zero(), |acc, (_, c)| acc + *c);
                let fx = BigRational::from_integer(BigInt::from(f.value(x) as i64));
                (p - fx).abs() <= *eps
            }),
            None => {
                let e = LpScalar::to_f64(eps);
                (0..f.size())
                    .all(|x| (self.evaluate_f64(x) - f.value(x) as u8 as f64).abs() <= e + 1e-9)
            }
        }
    }
}

fn monomials(arity: usize, k: usize) -> Vec<u64> {
    (0..1u64 << arity)
        .filter(|m| m.count_ones() as usize <= k)
        .collect()
}

/// Best uniform approximation error achievable with degree `k`.
fn best_error<T: LpScalar>(f: &BooleanFunction, k: usize) -> Result<(T, Vec<(u64, T)>)> {
    let monos = monomials(f.arity(), k);
    let nm = monos.len();
    // columns: c+_S (nm), c-_S (nm), s+, s-
    let ncols = 2 * nm + 2;
    let mut a = Vec::with_capacity(2 * f.size() as usize);
    let mut b = Vec::with_capacity(2 * f.size() as usize);
    for x in 0..f.size() {
        let fx = f.value(x) as i64;
        let mut upper = vec![T::zero(); ncols];
        let mut lower = vec![T::zero(); ncols];
        for (j, &m) in monos.iter().enumerate() {
            if m & x == m {
                upper[j] = T::one();
                upper[nm + j] = T::one().neg();
                lower[j] = T::one().neg();
                lower[nm + j] = T::one();
            }
        }
        for row in [&mut upper, &mut lower] {
            row[2 * nm] = T::one().neg();
            row[2 * nm + 1] = T::one();
        }
        // p' - s <= f(x);  -p' - s <= 1 - f(x)
        a.push(upper);
        b.push(T::from_ratio(fx, 1));
        a.push(lower);
        b.push(T::from_ratio(1 - fx, 1));
    }
    let mut c = vec![T::zero(); ncols];
    c[2 * nm] = T::one().neg();
    c[2 * nm + 1] = T::one();
    let sol = maximize(&a, &b, &c)?;
    let half = T::from_ratio(1, 2);
    // t = 1/2 + s = 1/2 - objective
    let t = half.sub(&sol.objective);
    let coefs = monos
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            let mut v = sol.x[j].sub(&sol.x[nm + j]);
            if m == 0 {
                v = v.add(&half);
            }
            (m, v)
        })
        .collect();
    Ok((t, coefs))
}

/// Float counterpart of [`best_error`], solved with a revised simplex. The
/// returned error is recomputed from the coefficients, not read off the LP.
fn best_error_float(f: &BooleanFunction, k: usize) -> Result<(f64, Vec<(u64, f64)>)> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let monos = monomials(f.arity(), k);
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = monos
        .iter()
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    for x in 0..f.size() {
        let fx = f.value(x) as u8 as f64;
        let p: Vec<_> = monos
            .iter()
            .zip(&vars)
            .filter(|(&m, _)| m & x == m)
            .map(|(_, &v)| (v, 1.0))
            .collect();
        let mut upper = p.clone();
        upper.push((t, -1.0));
        lp.add_constraint(upper, ComparisonOp::Le, fx);
        let mut lower = p;
        lower.push((t, 1.0));
        lp.add_constraint(lower, ComparisonOp::Ge, fx);
    }
    let sol = lp
        .solve()
        .map_err(|e| Error::Lp(e.to_string()))?
        .into_solution()
        .map_err(|_| Error::Lp("interrupted".into()))?;
    let coefs: Vec<(u64, f64)> = monos
        .iter()
        .zip(&vars)
        .map(|(&m, &v)| (m, sol.var_value(v)))
        .collect();
    let err = (0..f.size())
        .map(|x| {
            let p: f64 = coefs.iter().filter(|(m, _)| m & x == *m).map(|c| c.1).sum();
            (p - f.value(x) as u8 as f64).abs()
        })
        .fold(0.0, f64::max);
    Ok((err, coefs))
}

/// Smallest degree of a polynomial within `eps` of `f` on every input, with
/// a witness. `eps = 0` asks for exact representation.
pub fn approx_degree(f: &BooleanFunction, eps: &BigRational) -> Result<(usize, ApproxWitness)> {
    let n = f.arity();
    if n > MAX_APPROX_ARITY {
        return Err(Error::ArityOverflow {
            arity: n,
            limit: MAX_APPROX_ARITY,
            operation: "approximate degree",
        });
    }
    let half = BigRational::new(1.into(), 2.into());
    if eps.is_negative() || *eps > half {
        return Err(Error::Lp(format!("eps {eps} outside [0, 1/2]")));
    }
    let exact = exact_polynomial(f)?;
    let deg = exact.degree();
    let exact_witness = || ApproxWitness {
        degree: deg,
        coefs: exact
            .coefs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(m, &c)| {
                (
                    m as u64,
                    WitnessCoef::Exact(BigRational::from_integer(BigInt::from(c))),
                )
            })
            .collect(),
        error: WitnessCoef::Exact(<BigRational as Zero>::zero()),
    };
    if Zero::is_zero(eps) {
        return Ok((deg, exact_witness()));
    }
    for k in 0..deg {
        let witness = if n <= EXACT_LP_ARITY {
            let (t, coefs) = best_error::<BigRational>(f, k)?;
            if t > *eps {
                continue;
            }
            ApproxWitness {
                degree: k,
                coefs: coefs
                    .into_iter()
                    .filter(|(_, c)| !Zero::is_zero(c))
                    .map(|(m, c)| (m, WitnessCoef::Exact(c)))
                    .collect(),
                error: WitnessCoef::Exact(t),
            }
        } else {
            let (t, coefs) = best_error_float(f, k)?;
            if t > LpScalar::to_f64(eps) + 1e-9 {
                continue;
            }
            ApproxWitness {
                degree: k,
                coefs: coefs
                    .into_iter()
                    .filter(|(_, c)| *c != 0.0)
                    .map(|(m, c)| (m, WitnessCoef::Float(c)))
                    .collect(),
                error: WitnessCoef::Float(t),
            }
        };
        return Ok((k, witness));
    }
    Ok((deg, exact_witness()))
}

pub fn default_eps() -> BigRational {
    BigRational::new(1.into(), 3.into())
}
