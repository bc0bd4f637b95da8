mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use absreg::channels::{apply, apply_local, global_depolarize, make_channel, ChannelKind};
use absreg::classify::{is_acrenn, majorizes};
use absreg::entropy::{renyi, von_neumann};
use absreg::linalg::{eig_hermitian, haar_unitary, partial_trace};
use absreg::swap::swap_conditionals;
use absreg::sweep::find_boundary;
use absreg::DensityMatrix;

use common::{birkhoff_mix, random_probabilities, random_state};

fn kind() -> impl Strategy<Value = ChannelKind> {
    prop::sample::select(ChannelKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn channels_preserve_trace_and_positivity(seed in any::<u64>(), k in kind(), p in 0.0..=1.0f64, side in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(vec![2, 2], &mut rng);
        let ch = make_channel(k, p).unwrap();
        let out = apply_local(&ch, &rho, side).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(*out.eigenvalues().last().unwrap() > -1e-12);
        let single = apply(&ch, &random_state(vec![2], &mut rng)).unwrap();
        prop_assert!((single.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn global_depolarizing_interpolates_to_mixed(seed in any::<u64>(), p in 0.0..=1.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(vec![3, 3], &mut rng);
        let out = global_depolarize(&rho, p).unwrap();
        let s_in = von_neumann(&rho).value;
        prop_assert!(von_neumann(&out).value >= s_in - 1e-9);
        prop_assert!(out.max_eigenvalue() <= rho.max_eigenvalue() + 1e-12);
    }

    #[test]
    fn spectrum_reconstructs_matrix(seed in any::<u64>(), d in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(vec![d], &mut rng);
        let spec = eig_hermitian(rho.matrix()).unwrap();
        prop_assert!(spec.reconstruct().max_abs_diff(rho.matrix()) < 1e-12);
        prop_assert!(spec.eigenvectors.unitarity_defect() < 1e-12);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn partial_trace_of_product_returns_factor(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(vec![da], &mut rng);
        let b = random_state(vec![db], &mut rng);
        let ab = a.tensor(&b);
        let back_a = partial_trace(ab.matrix(), &[da, db], &[0]).unwrap();
        let back_b = partial_trace(ab.matrix(), &[da, db], &[1]).unwrap();
        prop_assert!(back_a.max_abs_diff(a.matrix()) < 1e-12);
        prop_assert!(back_b.max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn entropies_invariant_under_unitaries(seed in any::<u64>(), alpha in 0.2..6.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(vec![2, 2], &mut rng);
        let rotated = rho.conjugate_by(&haar_unitary(4, seed ^ 0x5eed)).unwrap();
        prop_assert!((von_neumann(&rho).value - von_neumann(&rotated).value).abs() < 1e-9);
        let (r1, r2) = (renyi(&rho, alpha).unwrap().value, renyi(&rotated, alpha).unwrap().value);
        prop_assert!((r1 - r2).abs() < 1e-9);
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&r1));
    }

    #[test]
    fn birkhoff_mixtures_are_majorized(seed in any::<u64>(), n in 2usize..10, sharp in 0.0..4.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_probabilities(n, sharp, &mut rng);
        let s = birkhoff_mix(&r, &mut rng);
        prop_assert!(majorizes(&r, &s).unwrap());
        let uniform = vec![1.0 / n as f64; n];
        prop_assert!(majorizes(&r, &uniform).unwrap());
    }

    #[test]
    fn acrenn_transfers_down_majorization(seed in any::<u64>(), alpha in 0.2..6.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_probabilities(4, 0.5, &mut rng);
        let s = birkhoff_mix(&r, &mut rng);
        let rho = DensityMatrix::diagonal(&r, vec![2, 2]).unwrap();
        let sigma = DensityMatrix::diagonal(&s, vec![2, 2]).unwrap();
        if is_acrenn(&rho, alpha).unwrap().member {
            prop_assert!(is_acrenn(&sigma, alpha).unwrap().member);
        }
    }

    #[test]
    fn swap_outcomes_normalized(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ab = random_state(vec![2, 2], &mut rng);
        let bc = random_state(vec![2, 2], &mut rng);
        let outs = swap_conditionals(&ab, &bc).unwrap();
        let total: f64 = outs.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for o in &outs {
            prop_assert!(o.probability >= -1e-12);
            if let Some(c) = &o.conditional_state {
                prop_assert!((c.matrix().trace().re - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bisection_is_orientation_independent(root in 0.05..0.95f64, slope in 0.5..5.0f64, flip in any::<bool>()) {
        let sign = if flip { -1.0 } else { 1.0 };
        let f = |x: f64| sign * slope * (x - root) + 1.0;
        let x = find_boundary(f, 0.0, 1.0, 1.0, 1e-12).unwrap();
        let y = find_boundary(f, 1.0, 0.0, 1.0, 1e-12).unwrap();
        prop_assert!((x - root).abs() < 1e-10);
        prop_assert!((y - root).abs() < 1e-10);
    }
}
