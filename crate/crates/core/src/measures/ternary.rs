//! Subcube (partial assignment) tables indexed in base 3.
//!
//! Digit `k` of a state describes the variable stored at bit `k` of an
//! assignment index: 0 or 1 when fixed, 2 when free. Replacing a free digit
//! by 0 or 1 lowers the index, so increasing index order visits every
//! restriction after all of its refinements.

use crate::boolfn::BooleanFunction;

pub const MIXED: u8 = 2;

pub struct Subcubes {
    pub arity: usize,
    pub pow3: Vec<usize>,
    /// 0 or 1 when the function is constant on the subcube, [`MIXED`] otherwise.
    pub class: Vec<u8>,
}

impl Subcubes {
    pub fn new(f: &BooleanFunction) -> Self {
        let n = f.arity();
        let pow3: Vec<usize> = (0..=n).map(|k| 3usize.pow(k as u32)).collect();
        let total = pow3[n];
        let mut class = vec![0u8; total];
        let mut digits = vec![0u8; n];
        for t in 0..total {
            if t > 0 {
                increment(&mut digits);
            }
            class[t] = match digits.iter().position(|&d| d == 2) {
                None => {
                    let idx = digits
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (k, &d)| acc | (d as u64) << k);
                    f.value(idx) as u8
                }
                Some(k) => {
                    let c0 = class[t - 2 * pow3[k]];
                    let c1 = class[t - pow3[k]];
                    if c0 == c1 {
                        c0
                    } else {
                        MIXED
                    }
                }
            };
        }
        Self { arity: n, pow3, class }
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    /// State of a full assignment.
    pub fn state_of(&self, x: u64) -> usize {
        (0..self.arity)
            .filter(|&k| x >> k & 1 == 1)
            .map(|k| self.pow3[k])
            .sum()
    }

    /// The all-free state.
    pub fn root(&self) -> usize {
        self.pow3[self.arity] - 1
    }
}

pub fn increment(digits: &mut [u8]) {
    for d in digits.iter_mut() {
        if *d < 2 {
            *d += 1;
            return;
        }
        *d = 0;
    }
}

pub fn decode(mut t: usize, n: usize) -> Vec<u8> {
    (0..n)
        .map(|_| {
            let d = (t % 3) as u8;
            t /= 3;
            d
        })
        .collect()
}
