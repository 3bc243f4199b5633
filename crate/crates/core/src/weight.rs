//! Exact nonnegative weights of the form `q * sqrt(r)`.
//!
//! `q` is a rational and `r` a square-free positive integer. Every weight
//! used by the built-in schemes and by their compositions fits this form.
//! Products, quotients and comparisons are exact; sums are exact only when
//! the radicands agree, so aggregates go through [`RadicalSum`], which keeps
//! one exact coefficient per radicand and falls back to `f64` only for
//! values that were already approximate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Absolute tolerance for every comparison that involves an approximate value.
pub const TOLERANCE: f64 = 1e-9;

/// `coef * sqrt(radicand)` with `coef >= 0` and `radicand` square-free.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactWeight {
    coef: Rational,
    radicand: u64,
}

impl ExactWeight {
    /// `q * sqrt(r)` for rationals `q >= 0`, `r > 0`.
    pub fn new(q: Rational, r: Rational) -> Result<Self> {
        if q.is_negative() || !r.is_positive() {
            return Err(Error::InvalidWeight(format!("{q}*sqrt({r})")));
        }
        // q*sqrt(a/b) = (q/b)*sqrt(a*b)
        let a = *r.numer() as u128;
        let b = *r.denom() as u128;
        Ok(normalize(q / Rational::from_integer(b as i128), a * b))
    }

    pub fn rational(q: Rational) -> Self {
        assert!(!q.is_negative(), "weights are nonnegative");
        Self {
            coef: q,
            radicand: 1,
        }
    }

    pub fn integer(n: i128) -> Self {
        Self::rational(Rational::from_integer(n))
    }

    pub fn frac(p: i128, q: i128) -> Self {
        Self::rational(Rational::new(p, q))
    }

    /// `q * sqrt(r)` from integer parts.
    pub fn surd(p: i128, q: i128, r: u64) -> Self {
        normalize(Rational::new(p, q), r as u128)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn coef(&self) -> Rational {
        self.coef
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    /// `q^2 * r`, the exact square.
    pub fn square(&self) -> Rational {
        self.coef * self.coef * Rational::from_integer(self.radicand as i128)
    }

    /// Exact square root, available when the value is rational.
    pub fn sqrt(&self) -> Option<Self> {
        if self.radicand != 1 {
            return None;
        }
        Self::new(Rational::one(), self.coef).ok()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(q sqrt r) = (1/(q r)) sqrt r
        Some(Self {
            coef: (self.coef * Rational::from_integer(self.radicand as i128)).recip(),
            radicand: self.radicand,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| *self * r)
    }

    /// Exact sum when the radicands agree (or either side is zero).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(*other);
        }
        if other.is_zero() {
            return Some(*self);
        }
        (self.radicand == other.radicand).then(|| Self {
            coef: self.coef + other.coef,
            radicand: self.radicand,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.coef.to_f64().unwrap_or(f64::NAN) * (self.radicand as f64).sqrt()
    }
}

fn normalize(coef: Rational, mut n: u128) -> ExactWeight {
    if coef.is_zero() {
        return ExactWeight::zero();
    }
    if n == 1 {
        return ExactWeight { coef, radicand: 1 };
    }
    let mut outside: u128 = 1;
    let mut p: u128 = 2;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
            outside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    ExactWeight {
        coef: coef * Rational::from_integer(outside as i128),
        radicand: u64::try_from(n).expect("radicand overflow"),
    }
}

impl std::ops::Mul for ExactWeight {
    type Output = ExactWeight;

    fn mul(self, rhs: ExactWeight) -> ExactWeight {
        if self.is_zero() || rhs.is_zero() {
            return ExactWeight::zero();
        }
        if self.radicand == rhs.radicand {
            // q1 sqrt(r) * q2 sqrt(r) = q1 q2 r
            let coef = self.coef * rhs.coef;
            return ExactWeight {
                coef: if self.radicand == 1 {
                    coef
                } else {
                    coef * Rational::from_integer(self.radicand as i128)
                },
                radicand: 1,
            };
        }
        if self.radicand == 1 || rhs.radicand == 1 {
            return ExactWeight {
                coef: self.coef * rhs.coef,
                radicand: self.radicand.max(rhs.radicand),
            };
        }
        let g = self.radicand.gcd(&rhs.radicand);
        let coef = self.coef * rhs.coef * Rational::from_integer(g as i128);
        normalize(
            coef,
            (self.radicand / g) as u128 * (rhs.radicand / g) as u128,
        )
    }
}

impl Ord for ExactWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.radicand == other.radicand {
            return self.coef.cmp(&other.coef);
        }
        self.square().cmp(&other.square())
    }
}

impl PartialOrd for ExactWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactWeight {
    /// `p/q`, `p/q*sqrt(r)` or `sqrt(r)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.radicand, self.coef.is_one()) {
            (1, _) => f.write_str(&fmt_rational(&self.coef)),
            (r, true) => write!(f, "sqrt({r})"),
            (r, false) => write!(f, "{}*sqrt({r})", fmt_rational(&self.coef)),
        }
    }
}

impl fmt::Debug for ExactWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<Rational> {
    let bad = || Error::InvalidWeight(whole.to_string());
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: i128 = p.parse().map_err(|_| bad())?;
    let q: i128 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

impl FromStr for ExactWeight {
    type Err = Error;

    /// Accepts `p`, `p/q`, `p/q*sqrt(u/v)`, `p/q*sqrt(u)` and `sqrt(u/v)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWeight(s.to_string());
        let t = s.trim();
        let (coef, rad) = if let Some(start) = t.find("sqrt(") {
            let inner = t[start + 5..].strip_suffix(')').ok_or_else(bad)?;
            let head = t[..start].trim();
            let coef = if head.is_empty() {
                Rational::one()
            } else {
                parse_rational(head.strip_suffix('*').ok_or_else(bad)?, s)?
            };
            (coef, parse_rational(inner, s)?)
        } else {
            (parse_rational(t, s)?, Rational::one())
        };
        ExactWeight::new(coef, rad)
    }
}

/// A weight that is exact when possible and a float otherwise.
#[derive(Clone, Copy, PartialEq)]
pub enum Weight {
    Exact(ExactWeight),
    Approx(f64),
}

impl Weight {
    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(e) => e.to_f64(),
            Weight::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<ExactWeight> {
        match self {
            Weight::Exact(e) => Some(*e),
            Weight::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Weight::Exact(e) => !e.is_zero(),
            Weight::Approx(v) => *v > 0.0,
        }
    }

    pub fn sqrt(&self) -> Weight {
        match self {
            Weight::Exact(e) => e
                .sqrt()
                .map(Weight::Exact)
                .unwrap_or_else(|| Weight::Approx(e.to_f64().sqrt())),
            Weight::Approx(v) => Weight::Approx(v.sqrt()),
        }
    }

    pub fn recip(&self) -> Weight {
        match self {
            Weight::Exact(e) => e
                .recip()
                .map(Weight::Exact)
                .unwrap_or(Weight::Approx(f64::INFINITY)),
            Weight::Approx(v) => Weight::Approx(1.0 / v),
        }
    }

    /// `self >= other`, exactly when both are exact, else within [`TOLERANCE`].
    pub fn ge_tol(&self, other: &Weight) -> bool {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a >= b,
            _ => self.to_f64() >= other.to_f64() - TOLERANCE,
        }
    }

    /// Equality, exact when both are exact, else within [`TOLERANCE`].
    pub fn eq_tol(&self, other: &Weight) -> bool {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= TOLERANCE,
        }
    }

    /// Strict `self > other`, used for maxima. Approximate values compare
    /// as floats.
    pub fn gt(&self, other: &Weight) -> bool {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a > b,
            _ => self.to_f64() > other.to_f64(),
        }
    }

    /// Display string: exact form followed by the decimal value.
    pub fn pretty(&self) -> String {
        match self {
            Weight::Exact(e) if e.is_rational() && e.coef().is_integer() => e.to_string(),
            Weight::Exact(e) => format!("{e} ({:.6})", e.to_f64()),
            Weight::Approx(v) => format!("{v:.6}"),
        }
    }
}

impl From<ExactWeight> for Weight {
    fn from(e: ExactWeight) -> Self {
        Weight::Exact(e)
    }
}

impl std::ops::Mul for Weight {
    type Output = Weight;

    fn mul(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(a * b),
            _ => Weight::Approx(self.to_f64() * rhs.to_f64()),
        }
    }
}

impl std::ops::Div for Weight {
    type Output = Weight;

    fn div(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Exact(a), Weight::Exact(b)) => match a.checked_div(&b) {
                Some(q) => Weight::Exact(q),
                None => Weight::Approx(a.to_f64() / b.to_f64()),
            },
            _ => Weight::Approx(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(e) => fmt::Display::fmt(e, f),
            Weight::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A sum of weights kept as one exact coefficient per radicand, plus a float
/// part for terms that were approximate to begin with.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RadicalSum {
    terms: Vec<ExactWeight>,
    approx: f64,
    has_approx: bool,
}

impl RadicalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: Weight) {
        match w {
            Weight::Exact(e) => self.add_exact(e),
            Weight::Approx(v) => {
                self.approx += v;
                self.has_approx = true;
            }
        }
    }

    pub fn add_exact(&mut self, e: ExactWeight) {
        if e.is_zero() {
            return;
        }
        match self
            .terms
            .binary_search_by_key(&e.radicand(), |t| t.radicand())
        {
            Ok(k) => self.terms[k] = self.terms[k].checked_add(&e).unwrap(),
            Err(k) => self.terms.insert(k, e),
        }
    }

    pub fn merge(&mut self, other: &RadicalSum) {
        for t in &other.terms {
            self.add_exact(*t);
        }
        if other.has_approx {
            self.approx += other.approx;
            self.has_approx = true;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && (!self.has_approx || self.approx == 0.0)
    }

    /// The total as a single weight: exact when at most one radicand is
    /// present and nothing approximate was added.
    pub fn value(&self) -> Weight {
        if !self.has_approx {
            match self.terms.len() {
                0 => return Weight::Exact(ExactWeight::zero()),
                1 => return Weight::Exact(self.terms[0]),
                _ => {}
            }
        }
        Weight::Approx(self.to_f64())
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|t| t.to_f64()).sum::<f64>() + self.approx
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() && !self.has_approx {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        if self.has_approx {
            parts.push(format!("{}", self.approx));
        }
        f.write_str(&parts.join(" + "))
    }
}
