//! Seeded generators for randomized verification: aperiodic shifts, bounded
//! potentials, observables and members of the cone `Λ`.
//!
//! Every generator is a pure function of its RNG state, so a seed fixes the
//! whole corpus. [`run_corpus`] evaluates cases in parallel and returns the
//! results in case order.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certificate::{normalize_into_cone, ConeSpec};
use crate::error::Result;
use crate::functions::LocallyConstantFn;
use crate::gibbs::GibbsMeasure;
use crate::symbolic::{check_aperiodic, TransitionMatrix};
use crate::transfer::TransferOperator;

pub const CORPUS_THETAS: [f64; 3] = [0.3, 0.5, 0.8];
pub const CORPUS_ALPHABETS: [usize; 3] = [2, 3, 4];
pub const CORPUS_MAX_MEMORY: usize = 3;
pub const CORPUS_VALUE_RANGE: f64 = 2.0;
/// Cone members are kept below this many table entries.
pub const MEMBER_WORD_CAP: u128 = 20_000;

#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub index: usize,
    pub seed: u64,
    pub matrix: Arc<TransitionMatrix>,
    pub potential: LocallyConstantFn,
}

impl CorpusCase {
    /// Fresh RNG for drawing observables tied to this case.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Random 0/1 matrix over `q` symbols, resampled until it is aperiodic.
pub fn random_aperiodic_matrix<R: Rng>(rng: &mut R, q: usize) -> TransitionMatrix {
    loop {
        let density = rng.random_range(0.5..0.9);
        let rows: Vec<Vec<u8>> = (0..q)
            .map(|_| (0..q).map(|_| u8::from(rng.random_bool(density))).collect())
            .collect();
        if let Ok(matrix) = check_aperiodic(&rows) {
            return matrix;
        }
    }
}

/// Table of i.i.d. uniform values in `[lo, hi)` over the admissible words.
pub fn random_function<R: Rng>(
    rng: &mut R,
    matrix: &Arc<TransitionMatrix>,
    theta: f64,
    memory: usize,
    lo: f64,
    hi: f64,
) -> Result<LocallyConstantFn> {
    let count = matrix.count_words(memory) as usize;
    let values = (0..count).map(|_| rng.random_range(lo..hi)).collect();
    LocallyConstantFn::from_values(matrix.clone(), theta, memory, values)
}

/// One corpus case: `q ∈ {2,3,4}`, memory `1..=3`, values in `[-2, 2]`,
/// `θ ∈ {0.3, 0.5, 0.8}`.
pub fn random_case(index: usize, seed: u64) -> Result<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = *CORPUS_ALPHABETS.choose(&mut rng).unwrap();
    let theta = *CORPUS_THETAS.choose(&mut rng).unwrap();
    let memory = rng.random_range(1..=CORPUS_MAX_MEMORY);
    let matrix = Arc::new(random_aperiodic_matrix(&mut rng, q));
    let potential = random_function(
        &mut rng,
        &matrix,
        theta,
        memory,
        -CORPUS_VALUE_RANGE,
        CORPUS_VALUE_RANGE,
    )?;
    Ok(CorpusCase {
        index,
        seed,
        matrix,
        potential,
    })
}

/// `count` cases; case `i` is generated from a seed drawn from `seed`.
pub fn corpus(seed: u64, count: usize) -> Result<Vec<CorpusCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..count).map(|_| rng.random()).collect();
    seeds
        .into_iter()
        .enumerate()
        .map(|(i, s)| random_case(i, s))
        .collect()
}

/// Applies `check` to every case in parallel; results keep case order.
pub fn run_corpus<T, F>(cases: &[CorpusCase], check: F) -> Vec<T>
where
    T: Send,
    F: Fn(&CorpusCase) -> T + Sync,
{
    cases.par_iter().map(&check).collect()
}

/// `count` members of the cone. Odd-indexed members are strictly positive
/// tables of memory at most `m0 + 1`, normalized; such functions satisfy
/// every cone condition vacuously. Even-indexed members are images of those
/// under `T = L/λ`, renormalized and re-verified.
pub fn random_cone_members<R: Rng>(
    rng: &mut R,
    gm: &GibbsMeasure,
    cone: &ConeSpec,
    count: usize,
) -> Result<Vec<LocallyConstantFn>> {
    let matrix = gm.matrix().clone();
    let theta = gm.potential().theta();
    let op = TransferOperator::new(gm.potential())?;
    let mut deepest = cone.m0 + 1;
    while deepest > 1 && matrix.count_words(deepest) > MEMBER_WORD_CAP {
        deepest -= 1;
    }
    let mut members = Vec::with_capacity(count);
    for i in 0..count {
        let memory = rng.random_range(1..=deepest);
        let raw = random_function(rng, &matrix, theta, memory, 0.1, 10.0)?;
        let candidate = if i % 2 == 0 {
            let steps = rng.random_range(1..=3);
            op.iterate_normalized(&raw, steps, gm.lambda())?
        } else {
            raw
        };
        members.push(normalize_into_cone(&candidate, cone, gm)?);
    }
    Ok(members)
}
