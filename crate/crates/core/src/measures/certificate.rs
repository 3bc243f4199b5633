use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::measures::ternary::{Subcubes, MIXED};

/// Default arity cap for certificate complexity.
pub const DEFAULT_CERT_ARITY: usize = 8;
/// Hard cap, reachable with the override flag.
pub const MAX_CERT_ARITY: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificates {
    pub c0: usize,
    pub c1: usize,
}

/// Certificate complexity `C(f, x)` at every assignment.
pub fn certificate_sizes(f: &BooleanFunction, allow_large: bool) -> Result<Vec<usize>> {
    let n = f.arity();
    let limit = if allow_large {
        MAX_CERT_ARITY
    } else {
        DEFAULT_CERT_ARITY
    };
    if n > limit {
        return Err(Error::ArityOverflow {
            arity: n,
            limit,
            operation: "certificate complexity",
        });
    }
    let cubes = Subcubes::new(f);
    let total = cubes.len();
    let inf = usize::MAX;
    // best[t] = smallest fixed-variable count over constant subcubes containing t
    let mut best = vec![inf; total];
    let mut digits = vec![2u8; n];
    for t in (0..total).rev() {
        if t + 1 < total {
            decrement(&mut digits);
        }
        let mut b = if cubes.class[t] != MIXED {
            digits.iter().filter(|&&d| d != 2).count()
        } else {
            inf
        };
        for (k, &d) in digits.iter().enumerate() {
            if d != 2 {
                let up = t + (2 - d as usize) * cubes.pow3[k];
                b = b.min(best[up]);
            }
        }
        best[t] = b;
    }
    Ok((0..f.size()).map(|x| best[cubes.state_of(x)]).collect())
}

fn decrement(digits: &mut [u8]) {
    for d in digits.iter_mut() {
        if *d > 0 {
            *d -= 1;
            return;
        }
        *d = 2;
    }
}

/// `(C_0, C_1)`: largest certificate size over 0-inputs and over 1-inputs.
/// A side with no inputs (constant functions) reports 0.
pub fn certificate_complexity(f: &BooleanFunction, allow_large: bool) -> Result<Certificates> {
    let sizes = certificate_sizes(f, allow_large)?;
    let side = |v: bool| {
        (0..f.size())
            .filter(|&x| f.value(x) == v)
            .map(|x| sizes[x as usize])
            .max()
            .unwrap_or(0)
    };
    Ok(Certificates {
        c0: side(false),
        c1: side(true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smallest S such that fixing x on S forces f, by trying all subsets.
    fn cert_brute(f: &BooleanFunction, x: u64) -> usize {
        let n = f.arity();
        let full = (1u64 << n) - 1;
        (0..=full)
            .filter(|&s| (0..=full).all(|y| (y & s) != (x & s) || f.value(y) == f.value(x)))
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn examples() {
        let or4 = BooleanFunction::or(4).unwrap();
        assert_eq!(
            certificate_complexity(&or4, false).unwrap(),
            Certificates { c0: 4, c1: 1 }
        );
        let and4 = BooleanFunction::and(4).unwrap();
        assert_eq!(
            certificate_complexity(&and4, false).unwrap(),
            Certificates { c0: 1, c1: 4 }
        );
        let f = BooleanFunction::base_f();
        assert_eq!(
            certificate_complexity(&f, false).unwrap(),
            Certificates { c0: 3, c1: 3 }
        );
    }

    #[test]
    fn cap_and_override() {
        let p9 = BooleanFunction::parity(9).unwrap();
        assert!(certificate_complexity(&p9, false).is_err());
        assert_eq!(
            certificate_complexity(&p9, true).unwrap(),
            Certificates { c0: 9, c1: 9 }
        );
    }

    #[test]
    fn agrees_with_brute_force() {
        for f in [
            BooleanFunction::nae_g(),
            BooleanFunction::base_f(),
            BooleanFunction::from_fn(5, |x| (x * 11 + 5) % 7 < 3).unwrap(),
        ] {
            let sizes = certificate_sizes(&f, false).unwrap();
            for x in 0..f.size() {
                assert_eq!(sizes[x as usize], cert_brute(&f, x), "{f:?} at {x}");
            }
        }
    }
}
