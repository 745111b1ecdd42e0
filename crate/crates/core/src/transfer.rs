//! The Ruelle transfer operator `(L_f g)(x) = Σ_{σy = x} e^{f(y)} g(y)` on
//! locally constant functions, its finite matrix lift, and the Perron
//! eigendata `(λ, h, ν)`.

use std::sync::Arc;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::LocallyConstantFn;
use crate::symbolic::{TransitionMatrix, Word, DEFAULT_WORD_CAP};

/// Largest lift handed to the dense eigensolver.
pub const DENSE_EIGEN_LIMIT: usize = 2000;
/// Default relative width of the Collatz–Wielandt bracket at termination.
pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_POWER_ITERATIONS: usize = 1_000_000;

/// `L_f` with the weights `e^f` tabulated once.
#[derive(Debug, Clone)]
pub struct TransferOperator {
    potential: LocallyConstantFn,
    weights: LocallyConstantFn,
}

impl TransferOperator {
    pub fn new(potential: &LocallyConstantFn) -> Result<Self> {
        Ok(TransferOperator {
            potential: potential.clone(),
            weights: potential.exp()?,
        })
    }

    pub fn potential(&self) -> &LocallyConstantFn {
        &self.potential
    }

    /// Smallest memory `ℓ` such that memory-`ℓ` functions are mapped to
    /// memory-`ℓ` functions.
    pub fn canonical_level(&self) -> usize {
        self.potential.memory().saturating_sub(1).max(1)
    }

    pub fn apply(&self, g: &LocallyConstantFn) -> Result<LocallyConstantFn> {
        self.apply_scaled(g, 1.0)
    }

    /// `(1/λ) L_f g`.
    pub fn apply_normalized(&self, g: &LocallyConstantFn, lambda: f64) -> Result<LocallyConstantFn> {
        self.apply_scaled(g, 1.0 / lambda)
    }

    fn apply_scaled(&self, g: &LocallyConstantFn, factor: f64) -> Result<LocallyConstantFn> {
        if !self.potential.same_space(g) {
            return Err(Error::AlphabetMismatch);
        }
        let matrix = self.potential.matrix();
        let memory = self.potential.memory().max(g.memory()).saturating_sub(1).max(1);
        let mut buf = Vec::with_capacity(memory + 1);
        LocallyConstantFn::from_fn(matrix.clone(), g.theta(), memory, |x| {
            let mut sum = 0.0;
            for a in matrix.predecessors(x.symbols()[0]) {
                buf.clear();
                buf.push(a);
                buf.extend_from_slice(x.symbols());
                sum += self.weights.value_of(&buf).unwrap() * g.value_of(&buf).unwrap();
            }
            factor * sum
        })
    }

    /// `λ^{-n} L_f^n g`, dividing by `λ` at every step.
    pub fn iterate_normalized(
        &self,
        g: &LocallyConstantFn,
        n: usize,
        lambda: f64,
    ) -> Result<LocallyConstantFn> {
        let mut current = g.clone();
        for _ in 0..n {
            current = self.apply_normalized(&current, lambda)?;
        }
        Ok(current)
    }
}

/// Exact action of `L_f` on the stored tables. The result has memory
/// `max(f.memory, g.memory) - 1`, floored at 1.
pub fn apply_transfer(f: &LocallyConstantFn, g: &LocallyConstantFn) -> Result<LocallyConstantFn> {
    TransferOperator::new(f)?.apply(g)
}

/// `T^n g = λ^{-n} L_f^n g` with `λ` taken from `pd`.
pub fn iterate_normalized(
    f: &LocallyConstantFn,
    g: &LocallyConstantFn,
    n: usize,
    pd: &PerronData,
) -> Result<LocallyConstantFn> {
    TransferOperator::new(f)?.iterate_normalized(g, n, pd.lambda)
}

/// `(e^{-|f|_∞}, q e^{|f|_∞})`, which always brackets `λ`.
pub fn lambda_bounds(f: &LocallyConstantFn, q: usize) -> (f64, f64) {
    let sup = f.sup_norm();
    ((-sup).exp(), q as f64 * sup.exp())
}

/// Matrix of `L_f` acting on memory-`level` functions, indexed by the
/// admissible words of length `level` in lexicographic order. Stored by rows:
/// row `u` holds the sources `(a, u_0, ..., u_{ℓ-2})` with weight `e^{f(a u)}`.
#[derive(Debug, Clone)]
pub struct TransferLift {
    level: usize,
    words: Arc<Vec<Word>>,
    rows: Vec<Vec<(usize, f64)>>,
    potential: LocallyConstantFn,
}

/// Builds the lift at `level >= max(1, f.memory - 1)`.
pub fn lift_matrix(f: &LocallyConstantFn, level: usize) -> Result<TransferLift> {
    let minimum = f.memory().saturating_sub(1).max(1);
    if level < minimum {
        return Err(Error::LevelTooSmall { level, minimum });
    }
    let matrix: &Arc<TransitionMatrix> = f.matrix();
    let words = Arc::new(matrix.admissible_words_capped(level, DEFAULT_WORD_CAP)?);
    let mut buf = Vec::with_capacity(level + 1);
    let rows = words
        .iter()
        .map(|u| {
            matrix
                .predecessors(u.symbols()[0])
                .map(|a| {
                    buf.clear();
                    buf.push(a);
                    buf.extend_from_slice(u.symbols());
                    let source = words
                        .binary_search_by(|w| w.symbols().cmp(&buf[..level]))
                        .expect("prefix of an admissible word is admissible");
                    (source, f.value_of(&buf).unwrap().exp())
                })
                .collect()
        })
        .collect();
    Ok(TransferLift {
        level,
        words,
        rows,
        potential: f.clone(),
    })
}

impl TransferLift {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dimension(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn potential(&self) -> &LocallyConstantFn {
        &self.potential
    }

    /// Entry (target row, source column).
    pub fn entry(&self, target: usize, source: usize) -> f64 {
        self.rows[target]
            .iter()
            .find(|(s, _)| *s == source)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dimension();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                m[(i, j)] += w;
            }
        }
        m
    }

    /// `M v`: the action of `L_f` on value vectors.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, w)| w * v[j]).sum())
            .collect()
    }

    /// `Mᵀ v`: the dual action on cylinder masses.
    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                out[j] += w * v[i];
            }
        }
        out
    }
}

/// Leading eigenvalue `λ`, eigenfunction `h` normalized by `∫ h dν = 1`, and
/// the eigenmeasure `ν` on cylinders of length `level`.
#[derive(Debug, Clone)]
pub struct PerronData {
    pub level: usize,
    pub lambda: f64,
    pub h: LocallyConstantFn,
    /// Masses of the length-`level` cylinders, in canonical word order.
    pub nu: Vec<f64>,
    /// Largest modulus among the remaining eigenvalues of the lift.
    pub second_modulus: f64,
    /// `max |M h - λ h| / max h` at the returned eigendata.
    pub residual: f64,
    /// Final Collatz–Wielandt bracket `[min (Mv)_i/v_i, max (Mv)_i/v_i]`.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

impl PerronData {
    /// Topological pressure `log λ`.
    pub fn pressure(&self) -> f64 {
        self.lambda.ln()
    }

    pub fn words(&self) -> &[Word] {
        self.h.words()
    }
}

struct PowerResult {
    vector: Vec<f64>,
    bracket: (f64, f64),
    iterations: usize,
}

/// Power iteration from the all-ones vector, stopping once the
/// Collatz–Wielandt bracket has relative width at most `tol`.
fn power_iterate(apply: impl Fn(&[f64]) -> Vec<f64>, n: usize, tol: f64) -> Result<PowerResult> {
    let mut v = vec![1.0; n];
    let mut bracket = (0.0, f64::INFINITY);
    for it in 1..=MAX_POWER_ITERATIONS {
        let w = apply(&v);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (wi, vi) in w.iter().zip(&v) {
            let r = wi / vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        bracket = (lo, hi);
        let scale = w.iter().copied().fold(0.0, f64::max);
        v = w.into_iter().map(|x| x / scale).collect();
        if hi - lo <= tol * hi {
            return Ok(PowerResult {
                vector: v,
                bracket,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_POWER_ITERATIONS,
        width: bracket.1 - bracket.0,
    })
}

/// Perron eigendata of `L_f` on memory-`level` functions.
pub fn perron_data(f: &LocallyConstantFn, level: usize, tol: f64) -> Result<PerronData> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let lift = lift_matrix(f, level)?;
    perron_data_of_lift(&lift, tol)
}

pub fn perron_data_of_lift(lift: &TransferLift, tol: f64) -> Result<PerronData> {
    let n = lift.dimension();
    let right = power_iterate(|v| lift.apply(v), n, tol)?;
    let left = power_iterate(|v| lift.apply_transpose(v), n, tol)?;
    let lambda = 0.5 * (right.bracket.0 + right.bracket.1);

    let total: f64 = left.vector.iter().sum();
    let nu: Vec<f64> = left.vector.iter().map(|x| x / total).collect();
    let pairing: f64 = right.vector.iter().zip(&nu).map(|(h, m)| h * m).sum();
    let h_values: Vec<f64> = right.vector.iter().map(|x| x / pairing).collect();

    let mh = lift.apply(&h_values);
    let h_max = h_values.iter().copied().fold(0.0, f64::max);
    let residual = mh
        .iter()
        .zip(&h_values)
        .map(|(a, b)| (a - lambda * b).abs())
        .fold(0.0, f64::max)
        / h_max;

    let second_modulus = if n <= DENSE_EIGEN_LIMIT {
        second_from_spectrum(&spectrum_of_lift(lift)?, lambda)
    } else {
        deflated_second_modulus(lift, lambda, &h_values, &nu)
    };

    let f = lift.potential();
    let h = LocallyConstantFn::from_values(f.matrix().clone(), f.theta(), lift.level(), h_values)?;
    Ok(PerronData {
        level: lift.level(),
        lambda,
        h,
        nu,
        second_modulus,
        residual,
        bracket: right.bracket,
        iterations: right.iterations.max(left.iterations),
    })
}

/// Drops the eigenvalue closest to `λ` and returns the largest remaining modulus.
fn second_from_spectrum(spectrum: &[Complex64], lambda: f64) -> f64 {
    let lead = spectrum
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1 - lambda).norm();
            let db = (b.1 - lambda).norm();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i);
    spectrum
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != lead)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max)
}

/// Growth rate of `M` restricted to the complement of the Perron direction,
/// estimated by power iteration on `M - λ h νᵀ`.
fn deflated_second_modulus(lift: &TransferLift, lambda: f64, h: &[f64], nu: &[f64]) -> f64 {
    const STEPS: usize = 4000;
    const WINDOW: usize = 500;
    let n = h.len();
    let project = |x: &mut Vec<f64>| {
        let c: f64 = x.iter().zip(nu).map(|(a, b)| a * b).sum();
        for (xi, hi) in x.iter_mut().zip(h) {
            *xi -= c * hi;
        }
    };
    // deterministic, not aligned with any coordinate pattern
    let mut x: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * 0.618_033_988_7).fract() - 0.5).collect();
    project(&mut x);
    let mut log_growth = 0.0;
    for step in 0..STEPS {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        let mut y = lift.apply(&x);
        project(&mut y);
        let grown = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if grown == 0.0 {
            return 0.0;
        }
        if step >= STEPS - WINDOW {
            log_growth += grown.ln();
        }
        x = y;
    }
    (log_growth / WINDOW as f64).exp().min(lambda)
}

/// All eigenvalues of the lift, sorted by descending modulus.
pub fn spectrum_of_lift(lift: &TransferLift) -> Result<Vec<Complex64>> {
    let n = lift.dimension();
    if n > DENSE_EIGEN_LIMIT {
        return Err(Error::SizeLimit {
            what: "dense eigendecomposition",
            count: n as u128,
            cap: DENSE_EIGEN_LIMIT,
        });
    }
    let schur = Schur::try_new(lift.to_dense(), f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailure(n))?;
    let mut eigenvalues: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    Ok(eigenvalues)
}
