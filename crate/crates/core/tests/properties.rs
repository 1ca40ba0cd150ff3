use cvtele_core::sampling;
use cvtele_core::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

fn swap_modes(v: &CovarianceMatrix) -> CovarianceMatrix {
    let mut p = DMatrix::zeros(4, 4);
    for (i, j) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
        p[(i, j)] = 1.0;
    }
    CovarianceMatrix::new(&p * v.as_matrix() * p.transpose()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bk_output_matches_heisenberg_picture(seed in any::<u64>(), g in 0.01f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let resource = sampling::physical_covariance(&mut rng, 2, 1.0, 1.5);
        let input = sampling::coherent(&mut rng, 3.0);
        let gain = Gain::new(g).unwrap();
        let a = bk_output(&resource, gain, &input).unwrap();
        let b = heisenberg_oracle(&resource, gain, &input).unwrap();
        prop_assert!(max_abs(a.covariance().as_matrix(), b.covariance().as_matrix()) <= 1e-12);
        prop_assert!((a.displacement().as_vector() - b.displacement().as_vector()).amax() <= 1e-12);
        prop_assert!(is_physical(a.covariance(), DEFAULT_TOL));
    }

    #[test]
    fn induced_channel_is_completely_positive(seed in any::<u64>(), g in 0.01f64..=2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sf = sampling::standard_form(&mut rng, 6.0);
        let ch = induced_pi_channel(&sf, Gain::new(g).unwrap());
        prop_assert!(pi_is_cp(&ch), "({}, {}) from {:?}", ch.tau(), ch.y(), sf);
    }

    #[test]
    fn log_negativity_ignores_mode_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sampling::physical_covariance(&mut rng, 2, 1.2, 1.0);
        let e = log_negativity(&v).unwrap();
        let swapped = log_negativity(&swap_modes(&v)).unwrap();
        prop_assert!((e - swapped).abs() <= 1e-9 * (1.0 + e));
    }

    #[test]
    fn product_states_are_separable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v1 = sampling::physical_covariance(&mut rng, 1, 1.5, 2.0);
        let v2 = sampling::physical_covariance(&mut rng, 1, 1.5, 2.0);
        prop_assert_eq!(log_negativity(&v1.direct_sum(&v2)).unwrap(), 0.0);
    }

    #[test]
    fn physical_states_have_spectrum_above_one(seed in any::<u64>(), modes in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sampling::physical_covariance(&mut rng, modes, 1.0, 3.0);
        prop_assert!(is_physical(&v, DEFAULT_TOL));
        let nu = symplectic_eigenvalues(&v).unwrap();
        prop_assert_eq!(nu.len(), modes);
        prop_assert!(nu.iter().all(|&x| x >= 1.0 - 1e-9));
        prop_assert!(nu.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_transpose_is_an_involution(entries in proptest::collection::vec(-8i32..=8, 10)) {
        // Small integers keep the arithmetic exact.
        let mut m = DMatrix::zeros(4, 4);
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                m[(i, j)] = entries[k] as f64;
                m[(j, i)] = entries[k] as f64;
                k += 1;
            }
        }
        let v = CovarianceMatrix::new(m).unwrap();
        let back = partial_transpose_cm(&partial_transpose_cm(&v).unwrap()).unwrap();
        prop_assert_eq!(back.as_matrix(), v.as_matrix());
    }

    #[test]
    fn cp_channels_keep_states_physical(seed in any::<u64>(), modes in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sampling::physical_covariance(&mut rng, modes, 1.0, 1.0);
        let state = GaussianState::centered(v).unwrap();
        let ch = sampling::cp_channel(&mut rng, 4.0, 2.0);
        let target = (seed as usize) % modes;
        let out = apply(&ch, &state, &[target]).unwrap();
        prop_assert!(is_physical(out.covariance(), DEFAULT_TOL));
    }

    #[test]
    fn fidelity_between_zero_and_one(tau in 0.0f64..6.0, extra in 0.0f64..4.0, lambda in 1e-4f64..50.0) {
        let y = (1.0 - tau).abs() + extra;
        let f = avg_fidelity(tau, y, InputEnsemble::new(lambda).unwrap()).unwrap();
        prop_assert!(f > 0.0 && f <= 1.0);
        if (tau, y) != (1.0, 0.0) {
            prop_assert!(f < 1.0);
        }
    }
}

#[test]
fn tmss_invariants_over_range() {
    for k in 0..=50 {
        let r = 0.1 * k as f64;
        let sf = tmss(r).unwrap();
        let v = sf.covariance();
        // E_N = 2r to 1e-10 is only reachable while cosh 2r stays moderate;
        // the tolerance grows with the matrix scale past that.
        let tol = 1e-10 * (2.0 * r).cosh().max(1.0);
        assert!((log_negativity(&v).unwrap() - 2.0 * r).abs() <= tol, "r={r}");
        let e = mean_energy(&v);
        assert!((e - r.sinh().powi(2)).abs() <= 1e-10 * (1.0 + e), "r={r}");
    }
}
