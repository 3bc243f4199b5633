use std::fmt;

use crate::boolfn::{mask_vars, BooleanFunction, MAX_TABLE_ARITY};
use crate::error::{Error, Result};

/// The unique multilinear polynomial agreeing with a Boolean function on
/// `{0,1}^N`. Coefficients are indexed by monomial masks in the same bit
/// encoding as assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPolynomial {
    arity: usize,
    coefs: Vec<i64>,
}

impl MultilinearPolynomial {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Coefficient of the monomial whose variables are the set bits of `mask`.
    pub fn coef(&self, mask: u64) -> i64 {
        self.coefs[mask as usize]
    }

    pub fn coefs(&self) -> &[i64] {
        &self.coefs
    }

    /// Largest monomial size with a nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coefs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, _)| (s as u64).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, x: u64) -> i64 {
        // sum over submasks of x
        let mut total = self.coefs[0];
        let mut s = x;
        while s != 0 {
            total += self.coefs[s as usize];
            s = (s - 1) & x;
        }
        total
    }

    /// Values at every assignment, via the inverse (zeta) transform.
    pub fn values(&self) -> Vec<i64> {
        let mut v = self.coefs.clone();
        for bit in 0..self.arity {
            let step = 1usize << bit;
            for s in 0..v.len() {
                if s & step != 0 {
                    v[s] += v[s ^ step];
                }
            }
        }
        v
    }

    /// Nonzero terms as (1-based variable list, coefficient), ordered by
    /// degree and then lexicographically.
    pub fn terms(&self) -> Vec<(Vec<usize>, i64)> {
        let mut t: Vec<(Vec<usize>, i64)> = self
            .coefs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, &c)| (mask_vars(self.arity, s as u64), c))
            .collect();
        t.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        t
    }
}

impl fmt::Display for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (vars, c)) in terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let mag = c.unsigned_abs();
            let mono: String = vars.iter().map(|i| format!("x{i}")).collect();
            match (mag, mono.is_empty()) {
                (_, true) => write!(f, "{sign}{mag}")?,
                (1, false) => write!(f, "{sign}{mono}")?,
                _ => write!(f, "{sign}{mag}{mono}")?,
            }
        }
        Ok(())
    }
}

/// Möbius transform of the truth table.
pub fn exact_polynomial(f: &BooleanFunction) -> Result<MultilinearPolynomial> {
    let n = f.arity();
    if n > MAX_TABLE_ARITY {
        return Err(Error::ArityOverflow {
            arity: n,
            limit: MAX_TABLE_ARITY,
            operation: "exact polynomial",
        });
    }
    let mut coefs: Vec<i64> = (0..f.size()).map(|x| f.value(x) as i64).collect();
    for bit in 0..n {
        let step = 1usize << bit;
        for s in 0..coefs.len() {
            if s & step != 0 {
                coefs[s] -= coefs[s ^ step];
            }
        }
    }
    Ok(MultilinearPolynomial { arity: n, coefs })
}

pub fn degree(f: &BooleanFunction) -> Result<usize> {
    Ok(exact_polynomial(f)?.degree())
}
