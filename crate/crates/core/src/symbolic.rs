//! Subshifts of finite type: the transition matrix, admissible words and
//! cylinder refinement.
//!
//! Symbols are 1-based everywhere in the public API, so the alphabet of a
//! `q`-symbol shift is `1..=q`. A [`Word`] of length `L` labels the cylinder
//! that fixes coordinates `0..L`, which means the cylinder `C_m[x]` (coordinates
//! `0..=m` fixed) corresponds to a word of length `m + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of words any single enumeration may produce.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// A finite sequence of 1-based symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// The word with its first symbol dropped (the shift map on prefixes).
    pub fn shifted(&self) -> Word {
        Word(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn prefix(&self, len: usize) -> &[usize] {
        &self.0[..len.min(self.0.len())]
    }

    pub fn prepend(&self, symbol: usize) -> Word {
        let mut symbols = Vec::with_capacity(self.0.len() + 1);
        symbols.push(symbol);
        symbols.extend_from_slice(&self.0);
        Word(symbols)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }
}

impl From<&[usize]> for Word {
    fn from(symbols: &[usize]) -> Self {
        Word(symbols.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// An aperiodic 0/1 transition matrix together with its primitivity exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    q: usize,
    entries: Vec<bool>,
    primitivity: usize,
}

/// Validates a 0/1 matrix and finds the least `M` with `A^M > 0`.
pub fn check_aperiodic(rows: &[Vec<u8>]) -> Result<TransitionMatrix> {
    TransitionMatrix::new(rows)
}

impl TransitionMatrix {
    /// Builds the matrix from rows of 0/1 entries. Fails with `NotAperiodic`
    /// when no power up to the Wielandt bound `(q-1)^2 + 1` is positive.
    pub fn new(rows: &[Vec<u8>]) -> Result<Self> {
        let q = rows.len();
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        let mut entries = Vec::with_capacity(q * q);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(Error::MalformedMatrix {
                    q,
                    detail: format!("row {} has {} entries", i + 1, row.len()),
                });
            }
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => entries.push(false),
                    1 => entries.push(true),
                    other => {
                        return Err(Error::MalformedMatrix {
                            q,
                            detail: format!("entry ({}, {}) is {other}", i + 1, j + 1),
                        })
                    }
                }
            }
        }
        for i in 0..q {
            if !(0..q).any(|j| entries[i * q + j]) {
                return Err(Error::DegenerateRow(i + 1));
            }
        }
        for j in 0..q {
            if !(0..q).any(|i| entries[i * q + j]) {
                return Err(Error::DegenerateColumn(j + 1));
            }
        }
        let primitivity = primitivity_exponent(q, &entries)?;
        Ok(TransitionMatrix {
            q,
            entries,
            primitivity,
        })
    }

    pub fn full_shift(q: usize) -> Result<Self> {
        Self::new(&vec![vec![1; q]; q])
    }

    /// `[[1, 1], [1, 0]]`: the word `22` is forbidden.
    pub fn golden_mean() -> Self {
        Self::new(&[vec![1, 1], vec![1, 0]]).expect("golden mean matrix is aperiodic")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Least `M >= 1` with every entry of `A^M` positive.
    pub fn primitivity_exponent(&self) -> usize {
        self.primitivity
    }

    /// `A(a, b) == 1` for 1-based symbols. Out-of-range symbols are never allowed.
    pub fn allows(&self, a: usize, b: usize) -> bool {
        a >= 1 && b >= 1 && a <= self.q && b <= self.q && self.entries[(a - 1) * self.q + (b - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.entries
            .chunks(self.q)
            .map(|r| r.iter().map(|&e| e as u8).collect())
            .collect()
    }

    pub fn check_symbols(&self, symbols: &[usize]) -> Result<()> {
        match symbols.iter().find(|&&s| s == 0 || s > self.q) {
            Some(&symbol) => Err(Error::InvalidSymbol { symbol, q: self.q }),
            None => Ok(()),
        }
    }

    pub fn is_admissible(&self, symbols: &[usize]) -> bool {
        !symbols.is_empty()
            && symbols.iter().all(|&s| s >= 1 && s <= self.q)
            && symbols.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    /// Symbols `a` with `A(a, b) = 1`, ascending.
    pub fn predecessors(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.q).filter(move |&a| self.allows(a, b))
    }

    /// Symbols `c` with `A(a, c) = 1`, ascending.
    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.q).filter(move |&c| self.allows(a, c))
    }

    /// Number of admissible words of length `m`, saturating.
    pub fn count_words(&self, m: usize) -> u128 {
        if m == 0 {
            return 0;
        }
        let mut ending: Vec<u128> = vec![1; self.q];
        for _ in 1..m {
            let mut next = vec![0u128; self.q];
            for (a, &count) in ending.iter().enumerate() {
                for c in 0..self.q {
                    if self.entries[a * self.q + c] {
                        next[c] = next[c].saturating_add(count);
                    }
                }
            }
            ending = next;
        }
        ending.into_iter().fold(0u128, |acc, c| acc.saturating_add(c))
    }

    /// All admissible words of length `m` in lexicographic order, capped at
    /// [`DEFAULT_WORD_CAP`].
    pub fn admissible_words(&self, m: usize) -> Result<Vec<Word>> {
        self.admissible_words_capped(m, DEFAULT_WORD_CAP)
    }

    pub fn admissible_words_capped(&self, m: usize, cap: usize) -> Result<Vec<Word>> {
        if m == 0 {
            return Err(Error::InvalidArgument("word length must be at least 1".into()));
        }
        let count = self.count_words(m);
        if count > cap as u128 {
            return Err(Error::SizeLimit {
                what: "admissible word list",
                count,
                cap,
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut stack = Vec::with_capacity(m);
        self.push_words(m, &mut stack, &mut out);
        Ok(out)
    }

    fn push_words(&self, m: usize, stack: &mut Vec<usize>, out: &mut Vec<Word>) {
        if stack.len() == m {
            out.push(Word(stack.clone()));
            return;
        }
        for s in 1..=self.q {
            if stack.last().is_none_or(|&prev| self.allows(prev, s)) {
                stack.push(s);
                self.push_words(m, stack, out);
                stack.pop();
            }
        }
    }

    /// Prepend-extensions `(a, w_0, ...)` of an admissible word, i.e. the
    /// words labelling the preimage cylinders under the shift.
    pub fn extend_word(&self, w: &Word) -> Vec<Word> {
        match w.first() {
            Some(head) => self.predecessors(head).map(|a| w.prepend(a)).collect(),
            None => (1..=self.q).map(|a| Word(vec![a])).collect(),
        }
    }
}

fn primitivity_exponent(q: usize, entries: &[bool]) -> Result<usize> {
    let bound = (q - 1) * (q - 1) + 1;
    let mut power = entries.to_vec();
    for m in 1..=bound {
        if power.iter().all(|&e| e) {
            return Ok(m);
        }
        let mut next = vec![false; q * q];
        for i in 0..q {
            for k in 0..q {
                if power[i * q + k] {
                    for j in 0..q {
                        next[i * q + j] |= entries[k * q + j];
                    }
                }
            }
        }
        power = next;
    }
    Err(Error::NotAperiodic { bound })
}
