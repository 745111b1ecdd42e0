//! The eigenmeasure `ν` and the Gibbs measure `ν̂ = hν` as queryable measures.
//!
//! Masses of cylinders longer than the lift level `ℓ` follow from the dual
//! eigen-relation: for a word `w` with `|w| = ℓ + k`,
//! `ν([w]) = λ^{-k} e^{f_k(w)} ν([w_k ... w_{|w|-1}])`. These products are
//! evaluated in log space.
//!
//! Orbit sampling uses ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`), so a
//! 64-bit seed fully determines the output.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::LocallyConstantFn;
use crate::symbolic::{TransitionMatrix, Word};
use crate::transfer::{PerronData, TransferOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Nu,
    NuHat,
}

#[derive(Debug, Clone)]
pub struct GibbsMeasure {
    operator: TransferOperator,
    level: usize,
    lambda: f64,
    h: LocallyConstantFn,
    nu: Vec<f64>,
    nu_hat: Vec<f64>,
}

impl GibbsMeasure {
    pub fn new(f: &LocallyConstantFn, pd: &PerronData) -> Result<Self> {
        Self::from_parts(f, pd.lambda, pd.h.clone(), pd.nu.clone())
    }

    /// Assembles a measure from raw eigendata without checking the
    /// eigen-relations, which lets tests feed in deliberately broken data.
    pub fn from_parts(
        f: &LocallyConstantFn,
        lambda: f64,
        h: LocallyConstantFn,
        nu: Vec<f64>,
    ) -> Result<Self> {
        if !f.same_space(&h) {
            return Err(Error::AlphabetMismatch);
        }
        let level = h.memory();
        let minimum = f.memory().saturating_sub(1).max(1);
        if level < minimum {
            return Err(Error::LevelTooSmall { level, minimum });
        }
        if nu.len() != h.values().len() {
            return Err(Error::InvalidArgument(format!(
                "{} masses for {} cylinders",
                nu.len(),
                h.values().len()
            )));
        }
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
        }
        let nu_hat = nu.iter().zip(h.values()).map(|(m, hv)| m * hv).collect();
        Ok(GibbsMeasure {
            operator: TransferOperator::new(f)?,
            level,
            lambda,
            h,
            nu,
            nu_hat,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn h(&self) -> &LocallyConstantFn {
        &self.h
    }

    pub fn potential(&self) -> &LocallyConstantFn {
        self.operator.potential()
    }

    pub fn matrix(&self) -> &Arc<TransitionMatrix> {
        self.h.matrix()
    }

    pub fn words(&self) -> &[Word] {
        self.h.words()
    }

    pub fn nu_masses(&self) -> &[f64] {
        &self.nu
    }

    pub fn nu_hat_masses(&self) -> &[f64] {
        &self.nu_hat
    }

    fn masses(&self, which: Which) -> &[f64] {
        match which {
            Which::Nu => &self.nu,
            Which::NuHat => &self.nu_hat,
        }
    }

    pub fn cylinder_mass(&self, w: &Word, which: Which) -> Result<f64> {
        let matrix = self.matrix();
        matrix.check_symbols(w.symbols())?;
        if !matrix.is_admissible(w.symbols()) {
            return Err(Error::InadmissibleWord(w.clone()));
        }
        Ok(self.mass_unchecked(w.symbols(), which))
    }

    fn index_of(&self, symbols: &[usize]) -> usize {
        self.words()
            .binary_search_by(|u| u.symbols().cmp(symbols))
            .expect("admissible word of lift length")
    }

    /// Natural log of the mass, usable for cylinders whose mass underflows.
    pub fn log_cylinder_mass(&self, w: &Word, which: Which) -> Result<f64> {
        let matrix = self.matrix();
        matrix.check_symbols(w.symbols())?;
        if !matrix.is_admissible(w.symbols()) {
            return Err(Error::InadmissibleWord(w.clone()));
        }
        Ok(self.log_mass_unchecked(w.symbols(), which))
    }

    /// Mass of an admissible word given as a slice.
    fn mass_unchecked(&self, symbols: &[usize], which: Which) -> f64 {
        if symbols.len() <= self.level {
            self.short_mass(symbols, which)
        } else {
            self.log_mass_unchecked(symbols, which).exp()
        }
    }

    fn short_mass(&self, symbols: &[usize], which: Which) -> f64 {
        let len = symbols.len();
        // words with a given prefix are contiguous in lexicographic order
        let words = self.words();
        let start = words.partition_point(|u| u.prefix(len) < symbols);
        let end = words.partition_point(|u| u.prefix(len) <= symbols);
        self.masses(which)[start..end].iter().sum()
    }

    fn log_mass_unchecked(&self, symbols: &[usize], which: Which) -> f64 {
        let len = symbols.len();
        if len <= self.level {
            return self.short_mass(symbols, which).ln();
        }
        let k = len - self.level;
        let tail = self.index_of(&symbols[k..]);
        let mut log_mass = self.potential().birkhoff_sum_unchecked(symbols, k)
            - k as f64 * self.lambda.ln()
            + self.nu[tail].ln();
        if which == Which::NuHat {
            log_mass += self.h.values()[self.index_of(&symbols[..self.level])].ln();
        }
        log_mass
    }

    /// `∫ g d(measure)` as a finite sum over words of length `max(g.memory, ℓ)`.
    pub fn integrate(&self, g: &LocallyConstantFn, which: Which) -> Result<f64> {
        if !g.same_space(&self.h) {
            return Err(Error::AlphabetMismatch);
        }
        if g.memory() <= self.level {
            let g = g.extend_to(self.level)?;
            return Ok(g
                .values()
                .iter()
                .zip(self.masses(which))
                .map(|(a, b)| a * b)
                .sum());
        }
        Ok(g.iter()
            .map(|(w, v)| v * self.mass_unchecked(w.symbols(), which))
            .sum())
    }

    /// Worst `|ν̂(σ^{-1}[w]) - ν̂([w])|` over admissible words of length `1..=depth`.
    pub fn check_shift_invariance(&self, depth: usize) -> Result<f64> {
        let matrix = self.matrix();
        let mut worst = 0.0f64;
        let mut buf = Vec::with_capacity(depth + 1);
        for len in 1..=depth {
            for w in matrix.admissible_words(len)? {
                let direct = self.mass_unchecked(w.symbols(), Which::NuHat);
                let preimage: f64 = matrix
                    .predecessors(w.symbols()[0])
                    .map(|a| {
                        buf.clear();
                        buf.push(a);
                        buf.extend_from_slice(w.symbols());
                        self.mass_unchecked(&buf, Which::NuHat)
                    })
                    .sum();
                worst = worst.max((preimage - direct).abs());
            }
        }
        Ok(worst)
    }

    /// `C(n) = ∫ u·(v∘σⁿ) dν̂ - ∫u dν̂ ∫v dν̂`, computed exactly as
    /// `∫ v · λ^{-n} L_f^n(u h) dν` minus the product of means.
    pub fn correlation(&self, u: &LocallyConstantFn, v: &LocallyConstantFn, n: usize) -> Result<f64> {
        let uh = u.mul(&self.h)?;
        let pushed = self.operator.iterate_normalized(&uh, n, self.lambda)?;
        let joint = self.integrate(&v.mul(&pushed)?, Which::Nu)?;
        let mean_u = self.integrate(u, Which::NuHat)?;
        let mean_v = self.integrate(v, Which::NuHat)?;
        Ok(joint - mean_u * mean_v)
    }

    /// Probabilities of prepending each admissible symbol to an orbit segment
    /// starting with `x` (length at least `ℓ`):
    /// `p(x → a x) = e^{f(a x)} h(a x) / (λ h(x))`. Rows sum to one because
    /// `L_f h = λ h`.
    pub fn preimage_kernel(&self, x: &[usize]) -> Vec<(usize, f64)> {
        let matrix = self.matrix();
        let f = self.potential();
        let hx = self.h.value_of(x).expect("window of lift length");
        let mut buf = Vec::with_capacity(x.len() + 1);
        matrix
            .predecessors(x[0])
            .map(|a| {
                buf.clear();
                buf.push(a);
                buf.extend_from_slice(&x[..self.level]);
                let weight = f.value_of(&buf).unwrap().exp() * self.h.value_of(&buf).unwrap();
                (a, weight / (self.lambda * hx))
            })
            .collect()
    }

    /// A `ν̂`-distributed orbit segment `(ξ_0, ..., ξ_{length-1})`.
    ///
    /// The last `ℓ` symbols are drawn from the level-`ℓ` marginal of `ν̂` and
    /// earlier symbols are prepended one at a time with [`Self::preimage_kernel`];
    /// by stationarity the finished segment has law `ν̂`, with no burn-in.
    pub fn sample_orbit(&self, length: usize, seed: u64) -> Result<Vec<usize>> {
        if length < self.level {
            return Err(Error::InvalidArgument(format!(
                "orbit length {length} is below the lift level {}",
                self.level
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = draw(&mut rng, self.nu_hat.iter().copied());
        let mut orbit: VecDeque<usize> = self.words()[start].symbols().iter().copied().collect();
        let mut window = Vec::with_capacity(self.level);
        while orbit.len() < length {
            window.clear();
            window.extend(orbit.iter().take(self.level));
            let kernel = self.preimage_kernel(&window);
            let pick = draw(&mut rng, kernel.iter().map(|&(_, p)| p));
            orbit.push_front(kernel[pick].0);
        }
        Ok(orbit.into())
    }
}

/// Index drawn from unnormalized weights by inversion; the last positive
/// weight absorbs rounding.
fn draw(rng: &mut ChaCha8Rng, weights: impl Iterator<Item = f64> + Clone) -> usize {
    let total: f64 = weights.clone().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            last = i;
        }
        acc += w;
        if target < acc {
            return i;
        }
    }
    last
}

/// Mean of `g` over every length-`g.memory` window of the orbit.
pub fn empirical_average(orbit: &[usize], g: &LocallyConstantFn) -> Result<f64> {
    let memory = g.memory();
    if orbit.len() <= memory {
        return Err(Error::OrbitTooShort {
            len: orbit.len(),
            memory,
        });
    }
    let mut sum = 0.0;
    for window in orbit.windows(memory) {
        sum += g
            .value_of(window)
            .ok_or_else(|| Error::InadmissibleWord(Word::from(window)))?;
    }
    Ok(sum / (orbit.len() - memory + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{perron_data, DEFAULT_TOL};
    use approx::assert_relative_eq;

    fn full2() -> Arc<TransitionMatrix> {
        Arc::new(TransitionMatrix::full_shift(2).unwrap())
    }

    fn measure(f: &LocallyConstantFn) -> GibbsMeasure {
        let level = f.memory().saturating_sub(1).max(1);
        GibbsMeasure::new(f, &perron_data(f, level, DEFAULT_TOL).unwrap()).unwrap()
    }

    fn bernoulli(p: f64) -> LocallyConstantFn {
        LocallyConstantFn::from_values(full2(), 0.5, 1, vec![p.ln(), (1.0 - p).ln()]).unwrap()
    }

    fn x0_is_1(a: &Arc<TransitionMatrix>) -> LocallyConstantFn {
        LocallyConstantFn::from_fn(a.clone(), 0.5, 1, |w| (w.symbols()[0] == 1) as u8 as f64).unwrap()
    }

    fn markov_potential() -> LocallyConstantFn {
        let a = Arc::new(
            TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap(),
        );
        let n = a.count_words(3) as usize;
        let values = (0..n).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.3).collect();
        LocallyConstantFn::from_values(a, 0.5, 3, values).unwrap()
    }

    #[test]
    fn uniform_masses() {
        let gm = measure(&LocallyConstantFn::constant(full2(), 0.5, 0.0).unwrap());
        for len in 1..=6 {
            for w in full2().admissible_words(len).unwrap() {
                let m = gm.cylinder_mass(&w, Which::NuHat).unwrap();
                assert_relative_eq!(m, 0.5f64.powi(len as i32), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn bernoulli_masses() {
        let p = 0.3;
        let gm = measure(&bernoulli(p));
        let m = gm.cylinder_mass(&Word::from(vec![1, 2]), Which::NuHat).unwrap();
        assert_relative_eq!(m, p * (1.0 - p), max_relative = 1e-12);
        let m = gm.cylinder_mass(&Word::from(vec![2, 2, 1]), Which::Nu).unwrap();
        assert_relative_eq!(m, (1.0 - p) * (1.0 - p) * p, max_relative = 1e-12);
    }

    #[test]
    fn masses_form_probability_vectors_and_refine() {
        let gm = measure(&markov_potential());
        let a = gm.matrix().clone();
        for which in [Which::Nu, Which::NuHat] {
            for len in 1..=6 {
                let words = a.admissible_words(len).unwrap();
                let total: f64 = words.iter().map(|w| gm.cylinder_mass(w, which).unwrap()).sum();
                assert_relative_eq!(total, 1.0, max_relative = 1e-12);
                for w in &words {
                    let whole = gm.cylinder_mass(w, which).unwrap();
                    let children: f64 = a
                        .successors(*w.symbols().last().unwrap())
                        .map(|c| {
                            let mut s = w.symbols().to_vec();
                            s.push(c);
                            gm.cylinder_mass(&Word::from(s), which).unwrap()
                        })
                        .sum();
                    assert_relative_eq!(whole, children, max_relative = 1e-11);
                }
            }
        }
    }

    #[test]
    fn long_cylinders_stay_finite_when_weights_overflow() {
        // e^{f_k} = e^{5k} overflows and λ^{-k} underflows past k ≈ 140,
        // but the mass itself is 2^{-|w|}
        let gm = measure(&LocallyConstantFn::constant(full2(), 0.5, 5.0).unwrap());
        let w = Word::from(vec![2; 300]);
        let m = gm.cylinder_mass(&w, Which::NuHat).unwrap();
        assert_relative_eq!(m.ln(), -300.0 * 2f64.ln(), max_relative = 1e-12);
        let w = Word::from(vec![1; 2000]);
        let log_m = gm.log_cylinder_mass(&w, Which::Nu).unwrap();
        assert_relative_eq!(log_m, -2000.0 * 2f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn integration_examples() {
        let f = markov_potential();
        let gm = measure(&f);
        assert_relative_eq!(gm.integrate(gm.h(), Which::Nu).unwrap(), 1.0, max_relative = 1e-10);
        let one = LocallyConstantFn::constant(f.matrix().clone(), 0.5, 1.0).unwrap();
        assert_relative_eq!(gm.integrate(&one, Which::NuHat).unwrap(), 1.0, max_relative = 1e-12);
        let uniform = measure(&LocallyConstantFn::constant(full2(), 0.5, 0.0).unwrap());
        assert_relative_eq!(
            uniform.integrate(&x0_is_1(&full2()), Which::NuHat).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        let other = LocallyConstantFn::constant(full2(), 0.3, 1.0).unwrap();
        assert!(matches!(uniform.integrate(&other, Which::Nu), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn invariance_and_corrupted_fixture() {
        let gm = measure(&bernoulli(0.3));
        assert!(gm.check_shift_invariance(4).unwrap() < 1e-12);
        let f = markov_potential();
        let gm = measure(&f);
        assert!(gm.check_shift_invariance(4).unwrap() < 1e-10);
        let mut nu = gm.nu_masses().to_vec();
        nu[0] += 0.01;
        nu[1] -= 0.01;
        let broken = GibbsMeasure::from_parts(&f, gm.lambda(), gm.h().clone(), nu).unwrap();
        assert!(broken.check_shift_invariance(4).unwrap() > 1e-4);
    }

    #[test]
    fn correlation_examples() {
        let gm = measure(&bernoulli(0.3));
        let u = x0_is_1(&full2());
        for n in 1..6 {
            assert!(gm.correlation(&u, &u, n).unwrap().abs() < 1e-12);
        }
        assert_relative_eq!(gm.correlation(&u, &u, 0).unwrap(), 0.3 * 0.7, max_relative = 1e-12);
        let gm = measure(&markov_potential());
        let a = gm.matrix().clone();
        let u = LocallyConstantFn::from_fn(a, 0.5, 2, |w| w.symbols()[1] as f64 - 1.5).unwrap();
        assert!(gm.correlation(&u, &u, 0).unwrap() >= 0.0);
    }

    #[test]
    fn kernel_rows_sum_to_one() {
        let gm = measure(&markov_potential());
        for w in gm.words() {
            let total: f64 = gm.preimage_kernel(w.symbols()).iter().map(|(_, p)| p).sum();
            assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn sampling_is_reproducible_and_admissible() {
        let gm = measure(&markov_potential());
        let a = gm.matrix().clone();
        let x = gm.sample_orbit(2000, 7).unwrap();
        assert_eq!(x, gm.sample_orbit(2000, 7).unwrap());
        assert_ne!(x, gm.sample_orbit(2000, 8).unwrap());
        assert_eq!(x.len(), 2000);
        assert!(a.is_admissible(&x));
        let g = LocallyConstantFn::constant(a, 0.5, 2.5).unwrap();
        assert_eq!(empirical_average(&x, &g).unwrap(), 2.5);
        assert!(matches!(
            empirical_average(&x[..1], &g),
            Err(Error::OrbitTooShort { len: 1, memory: 1 })
        ));
    }

    #[test]
    fn golden_mean_orbit_avoids_forbidden_word() {
        let a = Arc::new(TransitionMatrix::golden_mean());
        let gm = measure(&LocallyConstantFn::constant(a, 0.5, 0.0).unwrap());
        let x = gm.sample_orbit(10_000, 3).unwrap();
        assert!(x.windows(2).all(|p| p != [2, 2]));
    }

    #[test]
    fn bernoulli_empirical_frequency() {
        let p = 0.3;
        let gm = measure(&bernoulli(p));
        let x = gm.sample_orbit(100_000, 11).unwrap();
        let avg = empirical_average(&x, &x0_is_1(&full2())).unwrap();
        assert!((avg - p).abs() <= 4.0 * (p * (1.0 - p) / 1e5).sqrt(), "{avg}");
    }
}
