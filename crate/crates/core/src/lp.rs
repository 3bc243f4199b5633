//! Dense simplex for small linear programs.
//!
//! Solves `maximize c.x subject to A x <= b, x >= 0` with `b >= 0`, so the
//! origin is a feasible starting vertex and a single phase suffices. The
//! tableau is kept in condensed (Tucker) form. Pivots take the largest
//! reduced cost until a run of degenerate pivots appears, then switch to
//! Bland's rule for good. The solver is generic over
//! the scalar field: exact rationals and `f64` both implement [`LpScalar`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub trait LpScalar: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_pos(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn lt(&self, o: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl LpScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Pivot and optimality tolerance for the floating-point solver.
pub const FLOAT_EPS: f64 = 1e-9;

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub objective: T,
    pub x: Vec<T>,
}

const STALL_LIMIT: usize = 64;

/// `maximize c.x s.t. A x <= b, x >= 0`; requires every `b_i >= 0`.
pub fn maximize<T: LpScalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> Result<LpSolution<T>> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Lp("inconsistent dimensions".into()));
    }
    if b.iter().any(|v| v.lt(&T::zero())) {
        return Err(Error::Lp("negative right-hand side".into()));
    }
    // Labels: 0..n are structural variables, n..n+m are slacks.
    let mut tab: Vec<Vec<T>> = a.to_vec();
    let mut rhs: Vec<T> = b.to_vec();
    let mut obj: Vec<T> = c.to_vec();
    let mut value = T::zero();
    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut nonbasic: Vec<usize> = (0..n).collect();

    let max_iter = 200 * (m + n) + 10_000;
    let mut bland = false;
    let mut stall = 0usize;
    for _ in 0..max_iter {
        let improving = (0..n).filter(|&j| obj[j].is_pos());
        let entering = if bland {
            improving.min_by_key(|&j| nonbasic[j])
        } else {
            improving.fold(None, |best: Option<usize>, j| match best {
                Some(b) if !obj[b].lt(&obj[j]) => Some(b),
                _ => Some(j),
            })
        };
        let Some(s) = entering else {
            let mut x = vec![T::zero(); n];
            for (r, &lab) in basic.iter().enumerate() {
                if lab < n {
                    x[lab] = rhs[r].clone();
                }
            }
            return Ok(LpSolution {
                objective: value,
                x,
            });
        };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..m {
            if !tab[r][s].is_pos() {
                continue;
            }
            let ratio = rhs[r].div(&tab[r][s]);
            leave = match leave {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let smaller = ratio.sub(&bratio).neg().is_pos();
                    let tied = !smaller && !ratio.sub(&bratio).is_pos();
                    // Among tied rows Bland wants the smallest label, otherwise
                    // the largest pivot keeps the float solver stable.
                    let better_tie = if bland {
                        basic[r] < basic[br]
                    } else {
                        tab[br][s].lt(&tab[r][s])
                    };
                    if smaller || (tied && better_tie) {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        let Some((r, ratio)) = leave else {
            return Err(Error::Lp("unbounded".into()));
        };
        if ratio.is_pos() {
            stall = 0;
        } else {
            stall += 1;
            if stall > STALL_LIMIT {
                bland = true;
            }
        }
        pivot(&mut tab, &mut rhs, &mut obj, &mut value, r, s);
        std::mem::swap(&mut basic[r], &mut nonbasic[s]);
    }
    Err(Error::Lp("iteration limit reached".into()))
}

fn pivot<T: LpScalar>(
    tab: &mut [Vec<T>],
    rhs: &mut [T],
    obj: &mut [T],
    value: &mut T,
    r: usize,
    s: usize,
) {
    let p = tab[r][s].clone();
    let n = obj.len();
    for j in 0..n {
        tab[r][j] = if j == s {
            T::one().div(&p)
        } else {
            tab[r][j].div(&p)
        };
    }
    rhs[r] = rhs[r].div(&p);
    let pivot_row = tab[r].clone();
    let pivot_rhs = rhs[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = row[s].clone();
        if f.is_zero() {
            continue;
        }
        for j in 0..n {
            row[j] = if j == s {
                f.neg().mul(&pivot_row[s])
            } else {
                row[j].sub(&f.mul(&pivot_row[j]))
            };
        }
        rhs[i] = rhs[i].sub(&f.mul(&pivot_rhs));
    }
    let f = obj[s].clone();
    for j in 0..n {
        obj[j] = if j == s {
            f.neg().mul(&pivot_row[s])
        } else {
            obj[j].sub(&f.mul(&pivot_row[j]))
        };
    }
    *value = value.add(&f.mul(&pivot_rhs));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn textbook_problem_exact() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let a = vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(2, 1)],
            vec![q(3, 1), q(2, 1)],
        ];
        let b = vec![q(4, 1), q(12, 1), q(18, 1)];
        let c = vec![q(3, 1), q(5, 1)];
        let sol = maximize(&a, &b, &c).unwrap();
        assert_eq!(sol.objective, q(36, 1));
        assert_eq!(sol.x, vec![q(2, 1), q(6, 1)]);
    }

    #[test]
    fn float_matches_exact() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 3.0]];
        let b = vec![4.0, 6.0];
        let c = vec![1.0, 2.0];
        let sol = maximize(&a, &b, &c).unwrap();
        assert!((sol.objective - 5.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_and_bad_input() {
        let a = vec![vec![-1.0f64]];
        assert!(matches!(
            maximize(&a, &[1.0], &[1.0]),
            Err(Error::Lp(msg)) if msg == "unbounded"
        ));
        assert!(maximize(&a, &[-1.0], &[1.0]).is_err());
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Classic cycling example for the largest-coefficient rule.
        let a = vec![
            vec![q(1, 4), q(-8, 1), q(-1, 1), q(9, 1)],
            vec![q(1, 2), q(-12, 1), q(-1, 2), q(3, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)],
        ];
        let b = vec![q(0, 1), q(0, 1), q(1, 1)];
        let c = vec![q(3, 4), q(-20, 1), q(1, 2), q(-6, 1)];
        let sol = maximize(&a, &b, &c).unwrap();
        assert_eq!(sol.objective, q(5, 4));
    }
}
