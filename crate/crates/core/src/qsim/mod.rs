//! State-vector simulation of the query model.
//!
//! The basis is `|i, z>` with query label `i` in `0..=N` and work index `z`
//! in `0..work`, stored at `i * work + z`. The oracle `O_x` multiplies
//! `|i, z>` by `(-1)^(x_i)` for `i >= 1`. An algorithm applies
//! `U_0, O_x, U_1, ..., O_x, U_T` to `|0, 0>` and accepts on the basis
//! states picked by its output selector (by default: `z` odd).

mod file;
mod trace;

pub use file::AlgorithmFile;
pub use trace::{check_drop_bound, check_final_bound, progress_trace, FinalCheck, ProgressTrace};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Unitarity and norm tolerance.
pub const UNITARY_TOLERANCE: f64 = 1e-9;
pub const MAX_DIMENSION: usize = 64;
pub const MAX_INPUTS: usize = 4096;
pub const DEFAULT_WORK: usize = 2;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Real orthogonal matrix from its columns.
    pub fn from_real_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let dim = cols.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (c, col) in cols.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: col.len(),
                });
            }
            for (r, &v) in col.iter().enumerate() {
                data[r * dim + c] = Complex64::new(v, 0.0);
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        Self { dim: d, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    data[r * d + c] += a * other.data[k * d + c];
                }
            }
        }
        Matrix { dim: d, data }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|r| self.data[r * d..(r + 1) * d].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise deviation of `U^dagger U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Matrix::identity(self.dim);
        p.data
            .iter()
            .zip(&id.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Haar-like random unitary: a complex Gaussian matrix orthonormalized
    /// column by column.
    pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        while cols.len() < dim {
            let mut v: Vec<Complex64> = (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                })
                .collect();
            for u in &cols {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vk, uk) in v.iter_mut().zip(u) {
                    *vk -= proj * uk;
                }
            }
            let norm = norm(&v);
            if norm < 1e-6 {
                continue;
            }
            v.iter_mut().for_each(|c| *c /= norm);
            cols.push(v);
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                data[r * dim + c] = v;
            }
        }
        Matrix { dim, data }
    }
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `U_0, ..., U_T` over `(N + 1) * work` basis states.
#[derive(Debug, Clone)]
pub struct QueryAlgorithm {
    n: usize,
    work: usize,
    unitaries: Vec<Matrix>,
    accept: Vec<bool>,
}

impl QueryAlgorithm {
    /// Checks dimensions, the size cap and unitarity of every matrix.
    pub fn new(n: usize, work: usize, unitaries: Vec<Matrix>) -> Result<Self> {
        if work == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        let dim = (n + 1) * work;
        if dim > MAX_DIMENSION {
            return Err(Error::SimulationTooLarge(format!(
                "dimension {dim} exceeds {MAX_DIMENSION}"
            )));
        }
        if unitaries.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        for (index, u) in unitaries.iter().enumerate() {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: u.dim(),
                });
            }
            let deviation = u.unitarity_deviation();
            if deviation > UNITARY_TOLERANCE {
                return Err(Error::NotUnitary { index, deviation });
            }
        }
        let accept = (0..dim).map(|k| (k % work) & 1 == 1).collect();
        Ok(Self {
            n,
            work,
            unitaries,
            accept,
        })
    }

    /// Replaces the output selector; `accept(i, z)` marks accepting states.
    pub fn with_selector(mut self, accept: impl Fn(usize, usize) -> bool) -> Self {
        let w = self.work;
        self.accept = (0..self.dim()).map(|k| accept(k / w, k % w)).collect();
        self
    }

    pub fn identity(n: usize, work: usize, queries: usize) -> Result<Self> {
        let dim = (n + 1) * work;
        Self::new(n, work, vec![Matrix::identity(dim); queries + 1])
    }

    /// `queries` queries with independent random unitaries from `seed`.
    pub fn random(n: usize, work: usize, queries: usize, seed: u64) -> Result<Self> {
        let dim = (n + 1) * work;
        if dim > MAX_DIMENSION {
            return Err(Error::SimulationTooLarge(format!(
                "dimension {dim} exceeds {MAX_DIMENSION}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let us = (0..=queries).map(|_| Matrix::random_unitary(dim, &mut rng)).collect();
        Self::new(n, work, us)
    }

    /// One query computing the parity of two bits exactly.
    ///
    /// `U_0` sends `|0,0>` to `(|1,0> + |2,0>)/sqrt(2)`; after the query
    /// `U_1` sends the even combination back to `|0,0>` and the odd one to
    /// `|0,1>`.
    pub fn parity2() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let e = |k: usize| {
            let mut v = vec![0.0; 6];
            v[k] = 1.0;
            v
        };
        let (s00, s01, s10, s20) = (0, 1, 2, 4);
        let mut plus = vec![0.0; 6];
        plus[s10] = h;
        plus[s20] = h;
        let mut minus = plus.clone();
        minus[s20] = -h;
        let mut cols0 = vec![Vec::new(); 6];
        cols0[s00] = plus;
        cols0[s10] = minus;
        cols0[s20] = e(s00);
        for k in [s01, 3, 5] {
            cols0[k] = e(k);
        }
        let u0 = Matrix::from_real_columns(&cols0).expect("6x6");
        // swap |1,0> and |0,1> after undoing U_0
        let mut swap = vec![Vec::new(); 6];
        for (k, col) in swap.iter_mut().enumerate() {
            *col = e(match k {
                _ if k == s10 => s01,
                _ if k == s01 => s10,
                _ => k,
            });
        }
        let u1 = Matrix::from_real_columns(&swap).expect("6x6").mul(&u0.adjoint());
        Self::new(2, 2, vec![u0, u1]).expect("parity algorithm is unitary")
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn work(&self) -> usize {
        self.work
    }

    pub fn dim(&self) -> usize {
        (self.n + 1) * self.work
    }

    pub fn queries(&self) -> usize {
        self.unitaries.len() - 1
    }

    pub fn unitaries(&self) -> &[Matrix] {
        &self.unitaries
    }

    pub fn initial_state(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// `O_x` in place; `x_i` is bit `N - i` of `x`.
    pub fn apply_oracle(&self, state: &mut [Complex64], x: u64) -> Result<()> {
        if state.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: state.len(),
            });
        }
        for i in 1..=self.n {
            if x >> (self.n - i) & 1 == 1 {
                for amp in &mut state[i * self.work..(i + 1) * self.work] {
                    *amp = -*amp;
                }
            }
        }
        Ok(())
    }

    /// States after `0, 1, ..., T` queries, each followed by its unitary.
    pub fn states(&self, x: u64) -> Vec<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.unitaries.len());
        let mut state = self.unitaries[0].apply(&self.initial_state());
        out.push(state.clone());
        for u in &self.unitaries[1..] {
            self.apply_oracle(&mut state, x).expect("own dimension");
            state = u.apply(&state);
            out.push(state.clone());
        }
        out
    }

    /// Final state and acceptance probability on input `x`.
    pub fn run(&self, x: u64) -> (Vec<Complex64>, f64) {
        let state = self.states(x).pop().expect("at least U_0");
        let p = state
            .iter()
            .zip(&self.accept)
            .filter(|(_, &a)| a)
            .map(|(c, _)| c.norm_sqr())
            .sum();
        (state, p)
    }
}
