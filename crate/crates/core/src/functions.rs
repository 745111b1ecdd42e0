//! Locally constant real functions on the one-sided shift.
//!
//! A function of memory `m` depends only on coordinates `0..m` and is stored as
//! a table over the admissible words of length `m`, in lexicographic order.
//! Every seminorm is an exact finite max/min scan over that table.
//!
//! General Hölder functions are not representable directly. A caller can
//! truncate such an `f` to memory `d` by fixing it on each cylinder of length
//! `d`; the sup error of the truncation is at most `|f|_θ θ^(d-1)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbolic::{TransitionMatrix, Word};

/// Hölder seminorm, sup norm and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport {
    pub holder_seminorm: f64,
    pub sup_norm: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct LocallyConstantFn {
    matrix: Arc<TransitionMatrix>,
    theta: f64,
    memory: usize,
    words: Arc<Vec<Word>>,
    values: Vec<f64>,
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTheta(theta))
    }
}

impl LocallyConstantFn {
    /// Values are given in the canonical (lexicographic) word order.
    pub fn from_values(
        matrix: Arc<TransitionMatrix>,
        theta: f64,
        memory: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_theta(theta)?;
        if memory == 0 {
            return Err(Error::InvalidTable("memory must be at least 1".into()));
        }
        let words = Arc::new(matrix.admissible_words(memory)?);
        if values.len() != words.len() {
            return Err(Error::InvalidTable(format!(
                "expected {} values for memory {memory}, got {}",
                words.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidTable(format!(
                "value at word {} is not finite",
                words[i]
            )));
        }
        Ok(LocallyConstantFn {
            matrix,
            theta,
            memory,
            words,
            values,
        })
    }

    pub fn from_fn(
        matrix: Arc<TransitionMatrix>,
        theta: f64,
        memory: usize,
        mut f: impl FnMut(&Word) -> f64,
    ) -> Result<Self> {
        if memory == 0 {
            return Err(Error::InvalidTable("memory must be at least 1".into()));
        }
        let words = matrix.admissible_words(memory)?;
        let values = words.iter().map(&mut f).collect();
        Self::from_values(matrix, theta, memory, values)
    }

    /// Builds a function from an unordered word/value table. Every admissible
    /// word of length `memory` must appear exactly once.
    pub fn from_table(
        matrix: Arc<TransitionMatrix>,
        theta: f64,
        memory: usize,
        entries: impl IntoIterator<Item = (Word, f64)>,
    ) -> Result<Self> {
        if memory == 0 {
            return Err(Error::InvalidTable("memory must be at least 1".into()));
        }
        let words = matrix.admissible_words(memory)?;
        let mut values: Vec<Option<f64>> = vec![None; words.len()];
        for (word, value) in entries {
            matrix.check_symbols(word.symbols())?;
            if word.len() != memory {
                return Err(Error::InvalidTable(format!(
                    "word {word} has length {}, expected {memory}",
                    word.len()
                )));
            }
            let idx = words
                .binary_search(&word)
                .map_err(|_| Error::InadmissibleWord(word.clone()))?;
            if values[idx].replace(value).is_some() {
                return Err(Error::InvalidTable(format!("duplicate word {word}")));
            }
        }
        let values = values
            .into_iter()
            .zip(words.iter())
            .map(|(v, w)| v.ok_or_else(|| Error::InvalidTable(format!("missing word {w}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(matrix, theta, memory, values)
    }

    pub fn constant(matrix: Arc<TransitionMatrix>, theta: f64, c: f64) -> Result<Self> {
        let q = matrix.q();
        Self::from_values(matrix, theta, 1, vec![c; q])
    }

    /// Indicator of the cylinder labelled by `w`; memory `|w|`.
    pub fn indicator(matrix: Arc<TransitionMatrix>, theta: f64, w: &Word) -> Result<Self> {
        if !matrix.is_admissible(w.symbols()) {
            return Err(Error::InadmissibleWord(w.clone()));
        }
        Self::from_fn(matrix, theta, w.len(), |u| (u == w) as u8 as f64)
    }

    pub fn matrix(&self) -> &Arc<TransitionMatrix> {
        &self.matrix
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.words.iter().zip(self.values.iter().copied())
    }

    /// Same shift and same theta.
    pub fn same_space(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.matrix, &other.matrix) || *self.matrix == *other.matrix)
            && self.theta == other.theta
    }

    fn ensure_same_space(&self, other: &Self) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Table lookup on the first `memory` symbols. The caller guarantees that
    /// the slice is admissible and long enough; returns `None` otherwise.
    pub fn value_of(&self, symbols: &[usize]) -> Option<f64> {
        if symbols.len() < self.memory {
            return None;
        }
        let key = &symbols[..self.memory];
        self.words
            .binary_search_by(|w| w.symbols().cmp(key))
            .ok()
            .map(|i| self.values[i])
    }

    pub fn evaluate(&self, w: &Word) -> Result<f64> {
        self.matrix.check_symbols(w.symbols())?;
        if !self.matrix.is_admissible(w.symbols()) {
            return Err(Error::InadmissibleWord(w.clone()));
        }
        if w.len() < self.memory {
            return Err(Error::WordTooShort {
                word: w.clone(),
                len: w.len(),
                needed: self.memory,
            });
        }
        self.value_of(w.symbols())
            .ok_or_else(|| Error::InadmissibleWord(w.clone()))
    }

    /// Largest oscillation of the function over points agreeing on
    /// coordinates `0..=k`. Zero for `k >= memory - 1`.
    pub fn var_k(&self, k: usize) -> f64 {
        if k + 1 >= self.memory {
            return 0.0;
        }
        let prefix = k + 1;
        let mut worst = 0.0f64;
        let mut start = 0;
        // words sharing a prefix are contiguous in lexicographic order
        while start < self.words.len() {
            let head = self.words[start].prefix(prefix);
            let mut end = start;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            while end < self.words.len() && self.words[end].prefix(prefix) == head {
                lo = lo.min(self.values[end]);
                hi = hi.max(self.values[end]);
                end += 1;
            }
            worst = worst.max(hi - lo);
            start = end;
        }
        worst
    }

    /// `|g|_θ = max_k var_k g / θ^k`, exact since only `k <= memory - 2` contribute.
    pub fn holder_seminorm(&self) -> f64 {
        (0..self.memory.saturating_sub(1))
            .map(|k| self.var_k(k) / self.theta.powi(k as i32))
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn holder_norms(&self) -> NormReport {
        let holder_seminorm = self.holder_seminorm();
        let sup_norm = self.sup_norm();
        NormReport {
            holder_seminorm,
            sup_norm,
            total: holder_seminorm + sup_norm,
        }
    }

    /// `‖g‖_θ = |g|_θ + |g|_∞`.
    pub fn norm(&self) -> f64 {
        self.holder_norms().total
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `f(w) + f(σw) + ... + f(σ^(n-1) w)`.
    pub fn birkhoff_sum(&self, w: &Word, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        self.matrix.check_symbols(w.symbols())?;
        if !self.matrix.is_admissible(w.symbols()) {
            return Err(Error::InadmissibleWord(w.clone()));
        }
        let needed = n + self.memory - 1;
        if w.len() < needed {
            return Err(Error::WordTooShort {
                word: w.clone(),
                len: w.len(),
                needed,
            });
        }
        Ok(self.birkhoff_sum_unchecked(w.symbols(), n))
    }

    /// Birkhoff sum on a slice already known to be admissible and long enough.
    pub(crate) fn birkhoff_sum_unchecked(&self, symbols: &[usize], n: usize) -> f64 {
        (0..n)
            .map(|j| {
                self.value_of(&symbols[j..])
                    .expect("admissible window of sufficient length")
            })
            .sum()
    }

    /// Re-expresses the function with a larger memory; values are unchanged.
    pub fn extend_to(&self, memory: usize) -> Result<Self> {
        if memory <= self.memory {
            return Ok(self.clone());
        }
        self.map_words(memory, |g, w| g.value_of(w.symbols()).unwrap())
    }

    fn map_words(&self, memory: usize, mut f: impl FnMut(&Self, &Word) -> f64) -> Result<Self> {
        let words = if memory == self.memory {
            self.words.clone()
        } else {
            Arc::new(self.matrix.admissible_words(memory)?)
        };
        let values = words.iter().map(|w| f(self, w)).collect();
        Ok(LocallyConstantFn {
            matrix: self.matrix.clone(),
            theta: self.theta,
            memory,
            words,
            values,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("mapped value is not finite".into()));
        }
        Ok(LocallyConstantFn {
            values,
            ..self.clone()
        })
    }

    /// Pointwise combination; the result has the larger of the two memories.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_same_space(other)?;
        let memory = self.memory.max(other.memory);
        let out = if memory == self.memory {
            self.map_words(memory, |g, w| {
                f(g.values_at_word(w), other.value_of(w.symbols()).unwrap())
            })?
        } else {
            other.map_words(memory, |h, w| {
                f(self.value_of(w.symbols()).unwrap(), h.values_at_word(w))
            })?
        };
        if out.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("combined value is not finite".into()));
        }
        Ok(out)
    }

    fn values_at_word(&self, w: &Word) -> f64 {
        self.value_of(w.symbols()).unwrap()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    pub fn exp(&self) -> Result<Self> {
        self.map(f64::exp)
    }

    /// `scale * g + shift`.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self> {
        self.map(|v| scale * v + shift)
    }
}
