//! Exhaustive maximisation of a quadratic form over sign vectors.
//!
//! The form is `sum_{i<j} J_ij s_i s_j` with `s in {-1,+1}^n`. Because it is
//! invariant under the global flip `s -> -s`, the first variable is pinned to
//! `+1` and the remaining `n - 1` variables are walked in reflected Gray-code
//! order. Each step flips one variable, so the running value and the local
//! fields `h_k = sum_j J_kj s_j` are updated in `O(n)`.
//!
//! The walk is cut into fixed-size blocks. Every block re-seeds its state from
//! scratch, so the float rounding of a block does not depend on how blocks are
//! scheduled across worker threads.

use std::ops::{Add, Mul, Neg, Sub};

/// Number of Gray-code steps per independently seeded block.
const BLOCK_LEN: u64 = 1 << 16;

pub(crate) trait Scalar:
    Copy
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn two() -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn two() -> Self {
        2.0
    }
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn two() -> Self {
        2
    }
}

/// Dense symmetric coupling matrix with zero diagonal.
#[derive(Debug, Clone)]
pub(crate) struct QuadraticForm<T> {
    n: usize,
    coupling: Vec<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct Maximum<T> {
    pub value: T,
    pub signs: Vec<i8>,
    /// Position of the maximiser in the Gray-code walk.
    #[cfg_attr(not(test), allow(dead_code))]
    pub gray_index: u64,
    pub evaluations: u64,
}

impl<T: Scalar> QuadraticForm<T> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            coupling: vec![T::zero(); n * n],
        }
    }

    /// Adds `w` to the coupling of the unordered pair `{i, j}`.
    pub fn add(&mut self, i: usize, j: usize, w: T) {
        debug_assert!(i != j);
        let (a, b) = (i * self.n + j, j * self.n + i);
        self.coupling[a] = self.coupling[a] + w;
        self.coupling[b] = self.coupling[b] + w;
    }

    fn at(&self, i: usize, j: usize) -> T {
        self.coupling[i * self.n + j]
    }

    pub fn value(&self, signs: &[i8]) -> T {
        let mut total = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.at(i, j);
                total = if signs[i] == signs[j] {
                    total + w
                } else {
                    total - w
                };
            }
        }
        total
    }

    /// Maximum over all sign vectors, ties going to the earliest Gray index.
    pub fn maximize(&self) -> Maximum<T> {
        if self.n <= 1 {
            return Maximum {
                value: T::zero(),
                signs: vec![1; self.n],
                gray_index: 0,
                evaluations: 1,
            };
        }
        let total: u64 = 1u64 << (self.n - 1);
        let blocks = total.div_ceil(BLOCK_LEN);
        let best = self.scan_blocks(blocks, total);
        Maximum {
            value: best.0,
            signs: self.signs_at(best.1),
            gray_index: best.1,
            evaluations: total,
        }
    }

    #[cfg(feature = "parallel")]
    fn scan_blocks(&self, blocks: u64, total: u64) -> (T, u64) {
        use rayon::prelude::*;
        (0..blocks)
            .into_par_iter()
            .map(|b| self.scan_block(b * BLOCK_LEN, ((b + 1) * BLOCK_LEN).min(total)))
            .reduce_with(pick_better)
            .expect("at least one block")
    }

    #[cfg(not(feature = "parallel"))]
    fn scan_blocks(&self, blocks: u64, total: u64) -> (T, u64) {
        (0..blocks)
            .map(|b| self.scan_block(b * BLOCK_LEN, ((b + 1) * BLOCK_LEN).min(total)))
            .reduce(pick_better)
            .expect("at least one block")
    }

    fn signs_at(&self, t: u64) -> Vec<i8> {
        let gray = t ^ (t >> 1);
        let mut signs = vec![1i8; self.n];
        for (k, s) in signs.iter_mut().enumerate().skip(1) {
            if (gray >> (k - 1)) & 1 == 1 {
                *s = -1;
            }
        }
        signs
    }

    fn scan_block(&self, start: u64, end: u64) -> (T, u64) {
        let n = self.n;
        let mut signs = self.signs_at(start);
        let mut fields = vec![T::zero(); n];
        for (k, field) in fields.iter_mut().enumerate() {
            let mut h = T::zero();
            for (j, &s) in signs.iter().enumerate() {
                if j != k {
                    h = if s > 0 {
                        h + self.at(k, j)
                    } else {
                        h - self.at(k, j)
                    };
                }
            }
            *field = h;
        }
        let mut value = self.value(&signs);
        let mut best = (value, start);
        for t in (start + 1)..end {
            let k = t.trailing_zeros() as usize + 1;
            // flipping s_k changes the value by -2 s_k h_k
            let old = signs[k];
            value = if old > 0 {
                value - T::two() * fields[k]
            } else {
                value + T::two() * fields[k]
            };
            signs[k] = -old;
            let row = &self.coupling[k * n..(k + 1) * n];
            for (j, field) in fields.iter_mut().enumerate() {
                if j != k {
                    let delta = T::two() * row[j];
                    *field = if old > 0 {
                        *field - delta
                    } else {
                        *field + delta
                    };
                }
            }
            if value > best.0 {
                best = (value, t);
            }
        }
        best
    }
}

fn pick_better<T: Scalar>(a: (T, u64), b: (T, u64)) -> (T, u64) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}
