//! Boolean functions as explicit truth tables.
//!
//! Assignments are encoded as integers with `x_1` in the most significant
//! position: `index = sum_j x_j * 2^(N - j)`. With this convention the
//! block decomposition `x = x^1 x^2 ... x^n` of an iterated function is a
//! contiguous bit slice, block 1 being the most significant one.
//!
//! Variable indices in the public API are 1-based.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest arity for which a truth table is materialized.
pub const MAX_TABLE_ARITY: usize = 24;

/// Largest arity an [`Assignment`] can carry.
pub const MAX_ASSIGNMENT_ARITY: usize = 63;

/// A point of `{0,1}^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    arity: usize,
    bits: u64,
}

impl Assignment {
    pub fn new(arity: usize, bits: u64) -> Result<Self> {
        if arity == 0 || arity > MAX_ASSIGNMENT_ARITY {
            return Err(Error::ArityOverflow {
                arity,
                limit: MAX_ASSIGNMENT_ARITY,
                operation: "assignment",
            });
        }
        if bits >> arity != 0 {
            return Err(Error::AssignmentOutOfRange { bits, arity });
        }
        Ok(Self { arity, bits })
    }

    /// Parses a bit string such as `"0011"`, leftmost character being `x_1`.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (pos, c) in s.chars().enumerate() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        position: pos + 1,
                        message: format!("expected 0 or 1, found {c:?}"),
                    })
                }
            }
        }
        Self::new(s.chars().count(), bits)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Value of variable `i` (1-based).
    pub fn get(&self, i: usize) -> Result<bool> {
        Ok(self.bits & var_mask(self.arity, i)? != 0)
    }

    /// Returns `x^(S)`: the assignment with every variable in `block` flipped.
    pub fn flip_block(&self, block: &[usize]) -> Result<Self> {
        let mut mask = 0;
        for &i in block {
            mask |= var_mask(self.arity, i)?;
        }
        Ok(Self {
            arity: self.arity,
            bits: self.bits ^ mask,
        })
    }

    /// Flips the variables selected by a raw bit mask (same encoding as `bits`).
    pub fn flip_mask(&self, mask: u64) -> Result<Self> {
        if mask >> self.arity != 0 {
            return Err(Error::AssignmentOutOfRange {
                bits: mask,
                arity: self.arity,
            });
        }
        Ok(Self {
            arity: self.arity,
            bits: self.bits ^ mask,
        })
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", bit_string(self.bits, self.arity))
    }
}

/// Renders the low `arity` bits of `bits`, `x_1` first.
pub fn bit_string(bits: u64, arity: usize) -> String {
    (0..arity)
        .map(|k| {
            if bits >> (arity - 1 - k) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Bit mask of variable `i` (1-based) in an assignment of the given arity.
pub fn var_mask(arity: usize, i: usize) -> Result<u64> {
    if i == 0 || i > arity {
        return Err(Error::IndexOutOfRange { index: i, arity });
    }
    Ok(1u64 << (arity - i))
}

/// Bit mask of a set of 1-based variable indices.
pub fn set_mask(arity: usize, set: &[usize]) -> Result<u64> {
    set.iter().try_fold(0u64, |m, &i| Ok(m | var_mask(arity, i)?))
}

/// 1-based variable indices contained in a mask.
pub fn mask_vars(arity: usize, mask: u64) -> Vec<usize> {
    (1..=arity).filter(|&i| mask >> (arity - i) & 1 == 1).collect()
}

/// Value of block `j` (1-based) when an assignment of `blocks * width`
/// variables is split into contiguous blocks of `width` variables.
#[inline]
pub fn block_bits(bits: u64, blocks: usize, width: usize, j: usize) -> u64 {
    let shift = width * (blocks - j);
    (bits >> shift) & ((1u64 << width) - 1)
}

/// A total Boolean function stored as a bit table over all `2^N` assignments.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 6 {
            write!(f, "BooleanFunction({}, {})", self.arity, self.table_string())
        } else {
            write!(f, "BooleanFunction({}, {} ones)", self.arity, self.count_ones())
        }
    }
}

impl BooleanFunction {
    fn check_arity(arity: usize) -> Result<()> {
        if arity == 0 || arity > MAX_TABLE_ARITY {
            return Err(Error::ArityOverflow {
                arity,
                limit: MAX_TABLE_ARITY,
                operation: "truth table",
            });
        }
        Ok(())
    }

    /// Builds a function by evaluating `f` at every assignment index.
    pub fn from_fn<F>(arity: usize, f: F) -> Result<Self>
    where
        F: Fn(u64) -> bool + Sync,
    {
        Self::check_arity(arity)?;
        let size = 1u64 << arity;
        let n_words = size.div_ceil(64) as usize;
        let words = (0..n_words)
            .into_par_iter()
            .map(|w| {
                let base = (w as u64) * 64;
                let end = (base + 64).min(size);
                (base..end).fold(0u64, |acc, idx| {
                    if f(idx) {
                        acc | 1 << (idx - base)
                    } else {
                        acc
                    }
                })
            })
            .collect();
        Ok(Self { arity, words })
    }

    /// Builds a function from an explicit table of `2^arity` bits.
    pub fn from_table(arity: usize, table: &[bool]) -> Result<Self> {
        Self::check_arity(arity)?;
        if table.len() != 1usize << arity {
            return Err(Error::Parse {
                line: 2,
                position: table.len().min(1 << arity) + 1,
                message: format!(
                    "table has {} entries, expected {}",
                    table.len(),
                    1usize << arity
                ),
            });
        }
        Self::from_fn(arity, |idx| table[idx as usize])
    }

    /// The function whose 1-set is exactly `ones`.
    pub fn from_ones(arity: usize, ones: &[u64]) -> Result<Self> {
        Self::check_arity(arity)?;
        let mut table = vec![false; 1 << arity];
        for &o in ones {
            if o >> arity != 0 {
                return Err(Error::AssignmentOutOfRange { bits: o, arity });
            }
            table[o as usize] = true;
        }
        Self::from_table(arity, &table)
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of assignments, `2^N`.
    pub fn size(&self) -> u64 {
        1u64 << self.arity
    }

    /// Table lookup by raw index; `idx` must be below `2^N`.
    #[inline]
    pub fn value(&self, idx: u64) -> bool {
        self.words[(idx >> 6) as usize] >> (idx & 63) & 1 == 1
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        if x.arity != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                actual: x.arity,
            });
        }
        Ok(self.value(x.bits))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        let c = self.count_ones();
        c == 0 || c == self.size()
    }

    /// Sorted indices `x` with `f(x) = value`.
    pub fn preimage(&self, value: bool) -> Vec<u64> {
        (0..self.size()).filter(|&i| self.value(i) == value).collect()
    }

    pub fn table_string(&self) -> String {
        (0..self.size())
            .map(|i| if self.value(i) { '1' } else { '0' })
            .collect()
    }

    /// Serializes into the two-line truth-table text format.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", self.arity, self.table_string())
    }

    /// Parses the two-line truth-table text format: the decimal arity on
    /// line 1 and exactly `2^N` characters from `{0,1}` on line 2. A single
    /// final newline is accepted; anything else after line 2 is rejected.
    pub fn from_text(text: &str) -> Result<Self> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let body = body.strip_suffix('\r').unwrap_or(body);
        let mut lines = body.split('\n');
        let first = lines.next().unwrap_or("").trim_end_matches('\r');
        let arity: usize = first.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            position: 1,
            message: format!("expected a decimal arity, found {first:?}"),
        })?;
        if arity == 0 || arity > MAX_TABLE_ARITY {
            return Err(Error::Parse {
                line: 1,
                position: 1,
                message: format!("arity {arity} outside 1..={MAX_TABLE_ARITY}"),
            });
        }
        let second = lines.next().ok_or_else(|| Error::Parse {
            line: 2,
            position: 1,
            message: "missing table line".into(),
        })?;
        let second = second.trim_end_matches('\r');
        if let Some(extra) = lines.next() {
            let _ = extra;
            return Err(Error::Parse {
                line: 3,
                position: 1,
                message: "trailing content after table".into(),
            });
        }
        let expected = 1usize << arity;
        let mut table = Vec::with_capacity(expected);
        for (pos, c) in second.chars().enumerate() {
            match c {
                '0' => table.push(false),
                '1' => table.push(true),
                _ => {
                    return Err(Error::Parse {
                        line: 2,
                        position: pos + 1,
                        message: format!("expected 0 or 1, found {c:?}"),
                    })
                }
            }
            if table.len() > expected {
                return Err(Error::Parse {
                    line: 2,
                    position: pos + 1,
                    message: format!("table longer than {expected} entries"),
                });
            }
        }
        if table.len() != expected {
            return Err(Error::Parse {
                line: 2,
                position: table.len() + 1,
                message: format!("table has {} entries, expected {expected}", table.len()),
            });
        }
        Self::from_table(arity, &table)
    }

    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| x.count_ones() % 2 == 1)
    }

    pub fn or(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| x != 0)
    }

    pub fn and(n: usize) -> Result<Self> {
        Self::from_fn(n, move |x| x == (1u64 << n) - 1)
    }

    /// The 4-bit base function whose iterates separate degree from
    /// bounded-error quantum query complexity.
    pub fn base_f() -> Self {
        let ones: Vec<u64> = BASE_F_ONES
            .iter()
            .map(|s| u64::from_str_radix(s, 2).unwrap())
            .collect();
        Self::from_ones(4, &ones).unwrap()
    }

    /// Not-all-equal on three bits: 0 iff all variables are equal.
    pub fn nae_g() -> Self {
        Self::from_fn(3, |x| x != 0 && x != 7).unwrap()
    }

    /// Kushilevitz's 6-variable function of degree 3.
    pub fn kushilevitz_h() -> Self {
        Self::from_fn(6, |x| match x.count_ones() {
            0 | 4 | 5 => false,
            1 | 2 | 6 => true,
            _ => !KUSHILEVITZ_ZERO_TRIPLES
                .iter()
                .any(|t| set_mask(6, t).unwrap() == x),
        })
        .unwrap()
    }

    /// Looks up a built-in by name: `base_f`, `nae_g`, `kushilevitz_h`,
    /// `parity(N)`, `or(N)`, `and(N)`. Short names `f`, `g`, `h` are accepted.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "base_f" | "f" => return Ok(Self::base_f()),
            "nae_g" | "g" => return Ok(Self::nae_g()),
            "kushilevitz_h" | "h" => return Ok(Self::kushilevitz_h()),
            _ => {}
        }
        let unknown = || Error::UnknownBuiltin(name.to_string());
        let open = name.find('(').ok_or_else(unknown)?;
        let inner = name[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
        let n: usize = inner.trim().parse().map_err(|_| unknown())?;
        match &name[..open] {
            "parity" => Self::parity(n),
            "or" => Self::or(n),
            "and" => Self::and(n),
            _ => Err(unknown()),
        }
    }

    /// `outer(inner_1(x^1), ..., inner_n(x^n))` with `x^j` the j-th
    /// contiguous block of `m` variables.
    pub fn compose(outer: &BooleanFunction, inners: &[BooleanFunction]) -> Result<Self> {
        let n = outer.arity;
        if inners.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                actual: inners.len(),
            });
        }
        let m = inners[0].arity;
        if let Some(bad) = inners.iter().find(|g| g.arity != m) {
            return Err(Error::ArityMismatch {
                expected: m,
                actual: bad.arity,
            });
        }
        let total = n * m;
        if total > MAX_TABLE_ARITY {
            return Err(Error::ArityOverflow {
                arity: total,
                limit: MAX_TABLE_ARITY,
                operation: "composition",
            });
        }
        Self::from_fn(total, |x| {
            let reduced = (1..=n).fold(0u64, |acc, j| {
                (acc << 1) | inners[j - 1].value(block_bits(x, n, m, j)) as u64
            });
            outer.value(reduced)
        })
    }

    /// The `d`-fold self-composition `f^d` (`f^1 = f`).
    pub fn iterate(&self, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::DepthOverflow { depth: 0, limit: 0 });
        }
        let arity = (self.arity as u32)
            .checked_pow(d as u32)
            .map(|a| a as usize)
            .unwrap_or(usize::MAX);
        if arity > MAX_TABLE_ARITY {
            return Err(Error::ArityOverflow {
                arity,
                limit: MAX_TABLE_ARITY,
                operation: "iteration",
            });
        }
        let mut current = self.clone();
        for _ in 1..d {
            let inners = vec![current; self.arity];
            current = Self::compose(self, &inners)?;
        }
        Ok(current)
    }

    /// Reduced assignment `x~` of an iterate: the inner values of every
    /// block of `x`.
    pub fn reduced(&self, inner: &BooleanFunction, x: u64) -> u64 {
        let n = self.arity;
        let m = inner.arity;
        (1..=n).fold(0u64, |acc, j| {
            (acc << 1) | inner.value(block_bits(x, n, m, j)) as u64
        })
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }
}

const BASE_F_ONES: [&str; 8] = [
    "0011", "0100", "0101", "0111", "1000", "1010", "1011", "1100",
];

/// Weight-3 inputs on which the Kushilevitz function is 0.
pub const KUSHILEVITZ_ZERO_TRIPLES: [[usize; 3]; 10] = [
    [1, 2, 3],
    [2, 3, 4],
    [3, 4, 5],
    [4, 5, 1],
    [5, 1, 2],
    [1, 3, 6],
    [1, 4, 6],
    [2, 4, 6],
    [2, 5, 6],
    [3, 5, 6],
];

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Assignment {
        Assignment::from_bit_str(s).unwrap()
    }

    #[test]
    fn evaluate_base_function() {
        let f = BooleanFunction::base_f();
        assert!(f.evaluate(&a("0011")).unwrap());
        assert!(!f.evaluate(&a("0000")).unwrap());
        let ones: Vec<String> = f.preimage(true).iter().map(|&x| bit_string(x, 4)).collect();
        assert_eq!(
            ones,
            ["0011", "0100", "0101", "0111", "1000", "1010", "1011", "1100"]
        );
        assert!(matches!(
            f.evaluate(&a("001")),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn flip_block_examples() {
        assert_eq!(a("0000").flip_block(&[1]).unwrap(), a("1000"));
        assert_eq!(a("0011").flip_block(&[1, 2]).unwrap(), a("1111"));
        assert_eq!(a("0011").flip_block(&[]).unwrap(), a("0011"));
        assert!(matches!(
            a("0011").flip_block(&[5]),
            Err(Error::IndexOutOfRange { index: 5, arity: 4 })
        ));
        assert!(a("0011").flip_block(&[0]).is_err());
    }

    #[test]
    fn nae_and_kushilevitz() {
        let g = BooleanFunction::nae_g();
        assert!(!g.evaluate(&a("000")).unwrap());
        assert!(g.evaluate(&a("001")).unwrap());
        assert!(!g.evaluate(&a("111")).unwrap());

        let h = BooleanFunction::kushilevitz_h();
        assert!(!h.evaluate(&a("111000")).unwrap());
        let weight3: Vec<u64> = (0..64u64).filter(|x| x.count_ones() == 3).collect();
        assert_eq!(weight3.len(), 20);
        assert_eq!(weight3.iter().filter(|&&x| !h.value(x)).count(), 10);
        assert!(!h.value(0));
        assert!(h.value(63));
        assert!((0..64u64)
            .filter(|x| matches!(x.count_ones(), 4 | 5))
            .all(|x| !h.value(x)));
    }

    #[test]
    fn builtin_names() {
        assert_eq!(
            BooleanFunction::builtin("parity(3)").unwrap(),
            BooleanFunction::parity(3).unwrap()
        );
        assert_eq!(BooleanFunction::builtin("f").unwrap().arity(), 4);
        assert!(matches!(
            BooleanFunction::builtin("majority(3)"),
            Err(Error::UnknownBuiltin(_))
        ));
        assert!(BooleanFunction::builtin("or(").is_err());
        let and4 = BooleanFunction::builtin("and(4)").unwrap();
        assert_eq!(and4.preimage(true), vec![15]);
    }

    #[test]
    fn iterate_and_compose() {
        let f = BooleanFunction::base_f();
        assert_eq!(f.iterate(1).unwrap(), f);
        let f2 = f.iterate(2).unwrap();
        assert_eq!(f2.arity(), 16);
        let x = u64::from_str_radix("0011010010001100", 2).unwrap();
        let expected = f.value(
            (f.value(0b0011) as u64) << 3
                | (f.value(0b0100) as u64) << 2
                | (f.value(0b1000) as u64) << 1
                | f.value(0b1100) as u64,
        );
        assert_eq!(f.value(0b1111), expected);
        assert!(!f2.value(x));
        assert_eq!(f2.reduced(&f, x), 0b1111);
        assert!(matches!(
            f.iterate(3),
            Err(Error::ArityOverflow { arity: 64, .. })
        ));
    }

    #[test]
    fn text_format() {
        let f = BooleanFunction::base_f();
        let text = f.to_text();
        assert_eq!(text, "4\n0001110110111000\n");
        assert_eq!(BooleanFunction::from_text(&text).unwrap(), f);
        assert_eq!(BooleanFunction::from_text("4\n0001110110111000").unwrap(), f);

        let short = BooleanFunction::from_text("2\n010\n").unwrap_err();
        assert_eq!(
            short,
            Error::Parse {
                line: 2,
                position: 4,
                message: "table has 3 entries, expected 4".into()
            }
        );
        assert!(matches!(
            BooleanFunction::from_text("2\n01x0\n"),
            Err(Error::Parse { line: 2, position: 3, .. })
        ));
        assert!(matches!(
            BooleanFunction::from_text("2\n0100\nextra"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            BooleanFunction::from_text("two\n0100\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(BooleanFunction::from_text("2\n01001\n").is_err());
    }

    #[test]
    fn base_f_structure() {
        let f = BooleanFunction::base_f();
        for x in 0..16u64 {
            let sens: Vec<u64> = (0..4)
                .map(|k| 1u64 << k)
                .filter(|&m| f.value(x ^ m) != f.value(x))
                .collect();
            assert_eq!(sens.len(), 2, "x = {}", bit_string(x, 4));
            let both_sens = sens[0] | sens[1];
            let both_insens = 0b1111 ^ both_sens;
            assert_ne!(f.value(x ^ both_sens), f.value(x));
            assert_ne!(f.value(x ^ both_insens), f.value(x));
        }
    }
}
