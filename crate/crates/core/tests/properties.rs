use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ruelle::certificate::{verify_basic_inequalities, verify_convergence, verify_perron_bounds};
use ruelle::corpus::{random_aperiodic_matrix, random_function};
use ruelle::transfer::{spectrum_of_lift, DEFAULT_TOL};
use ruelle::{
    compute_constants, lift_matrix, perron_data, GibbsMeasure, LocallyConstantFn, TransferOperator,
    Which,
};

fn random_setup(seed: u64, q: usize, memory: usize, theta: f64) -> LocallyConstantFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Arc::new(random_aperiodic_matrix(&mut rng, q));
    random_function(&mut rng, &a, theta, memory, -2.0, 2.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transfer_is_linear_and_positive(seed in any::<u64>(), q in 2usize..=4, mem in 1usize..=3) {
        let f = random_setup(seed, q, mem, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let g1 = random_function(&mut rng, f.matrix(), 0.5, 2, 0.0, 1.0).unwrap();
        let g2 = random_function(&mut rng, f.matrix(), 0.5, 3, -1.0, 1.0).unwrap();
        let op = TransferOperator::new(&f).unwrap();
        let lhs = op.apply(&g1.scale(2.0).unwrap().add(&g2).unwrap()).unwrap();
        let rhs = op.apply(&g1).unwrap().scale(2.0).unwrap().add(&op.apply(&g2).unwrap()).unwrap();
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
        prop_assert!(op.apply(&g1).unwrap().min_value() >= 0.0);
    }

    #[test]
    fn eigenmeasure_and_eigenfunction(seed in any::<u64>(), q in 2usize..=4, mem in 1usize..=3) {
        let f = random_setup(seed, q, mem, 0.5);
        let pd = perron_data(&f, f.memory().saturating_sub(1).max(1), DEFAULT_TOL).unwrap();
        let gm = GibbsMeasure::new(&f, &pd).unwrap();
        let op = TransferOperator::new(&f).unwrap();
        let lh = op.apply(&pd.h).unwrap();
        for (x, y) in lh.values().iter().zip(pd.h.extend_to(lh.memory()).unwrap().values()) {
            prop_assert!((x - pd.lambda * y).abs() <= 1e-9 * pd.lambda * y);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let g = random_function(&mut rng, f.matrix(), 0.5, 3, -1.0, 1.0).unwrap();
        let lhs = gm.integrate(&op.apply(&g).unwrap(), Which::Nu).unwrap();
        let rhs = pd.lambda * gm.integrate(&g, Which::Nu).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        prop_assert!(gm.check_shift_invariance(4).unwrap() <= 1e-10);
    }

    #[test]
    fn perron_data_is_level_independent(seed in any::<u64>(), q in 2usize..=3, mem in 1usize..=2) {
        let f = random_setup(seed, q, mem, 0.5);
        let low = perron_data(&f, 1, DEFAULT_TOL).unwrap();
        let high = perron_data(&f, 3, DEFAULT_TOL).unwrap();
        prop_assert!((low.lambda - high.lambda).abs() <= 1e-10 * low.lambda);
        let gm_low = GibbsMeasure::new(&f, &low).unwrap();
        let gm_high = GibbsMeasure::new(&f, &high).unwrap();
        for w in f.matrix().admissible_words(4).unwrap() {
            let a = gm_low.cylinder_mass(&w, Which::NuHat).unwrap();
            let b = gm_high.cylinder_mass(&w, Which::NuHat).unwrap();
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn spectrum_leads_with_lambda(seed in any::<u64>(), q in 2usize..=4, mem in 1usize..=3) {
        let f = random_setup(seed, q, mem, 0.3);
        let lift = lift_matrix(&f, f.memory().saturating_sub(1).max(1)).unwrap();
        let spectrum = spectrum_of_lift(&lift).unwrap();
        let pd = perron_data(&f, lift.level(), DEFAULT_TOL).unwrap();
        prop_assert!((spectrum[0].re - pd.lambda).abs() <= 1e-9 * pd.lambda);
        prop_assert!(spectrum[0].im.abs() <= 1e-9 * pd.lambda);
        prop_assert!(pd.second_modulus < pd.lambda);
    }

    #[test]
    fn certificate_checks_pass(seed in any::<u64>(), q in 2usize..=4, mem in 1usize..=3, t in 0usize..3) {
        let theta = [0.3, 0.5, 0.8][t];
        let f = random_setup(seed, q, mem, theta);
        let pd = perron_data(&f, f.memory().saturating_sub(1).max(1), DEFAULT_TOL).unwrap();
        let c = compute_constants(&f, f.matrix(), pd.lambda).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let g = random_function(&mut rng, f.matrix(), theta, 2, -1.0, 1.0).unwrap();
        prop_assert!(verify_perron_bounds(&pd, &c, &f, &[]).is_ok());
        prop_assert!(verify_basic_inequalities(&f, &g, &pd, &c, 10).is_ok());
        let conv = verify_convergence(&f, &g, &pd, &c, 20).unwrap();
        prop_assert!(conv.checks.all_pass());
    }
}

#[test]
fn correlations_vanish_for_independent_coordinates() {
    let a = Arc::new(ruelle::TransitionMatrix::full_shift(3).unwrap());
    let f = LocallyConstantFn::from_values(a.clone(), 0.5, 1, vec![0.1, -0.4, 0.7]).unwrap();
    let pd = perron_data(&f, 1, DEFAULT_TOL).unwrap();
    let gm = GibbsMeasure::new(&f, &pd).unwrap();
    let u = LocallyConstantFn::from_values(a.clone(), 0.5, 1, vec![1.0, 2.0, -1.0]).unwrap();
    let v = LocallyConstantFn::from_values(a, 0.5, 1, vec![0.5, 0.0, 3.0]).unwrap();
    for n in 1..6 {
        assert!(gm.correlation(&u, &v, n).unwrap().abs() < 1e-12);
    }
    assert!(gm.correlation(&u, &v, 0).unwrap().abs() > 1e-3);
}
