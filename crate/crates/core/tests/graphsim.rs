use cpm_core::graphsim::{deviation_experiment, run_trials, trial_rng, union_bound, GraphSimConfig, WeightSampler};
use proptest::prelude::*;

#[test]
fn sampler_moments_match_model() {
    let samplers = [
        WeightSampler::Unit,
        WeightSampler::Normal { v2: 2.0 },
        WeightSampler::Gamma { shape: 2.0, scale: 0.5 },
        WeightSampler::Rademacher,
        WeightSampler::Exponential,
    ];
    let n = 1_000_000;
    for (i, s) in samplers.iter().enumerate() {
        let model = s.model().unwrap();
        let w = s.draw_weights(&mut trial_rng(5, i), n).unwrap();
        let v: Vec<f64> = (1..=4).map(|l| model.moment_f64(l).unwrap()).collect();
        let mean1 = w.iter().sum::<f64>() / n as f64;
        let mean2 = w.iter().map(|x| x * x).sum::<f64>() / n as f64;
        // standard errors from the model's own higher moments
        let se1 = ((v[1] - v[0] * v[0]) / n as f64).sqrt();
        let se2 = ((v[3] - v[1] * v[1]) / n as f64).sqrt();
        assert!(
            (mean1 - v[0]).abs() <= 4.0 * se1.max(1e-300),
            "{s:?} V1: {mean1} vs {}",
            v[0]
        );
        assert!(
            (mean2 - v[1]).abs() <= 4.0 * se2.max(1e-300),
            "{s:?} V2: {mean2} vs {}",
            v[1]
        );
    }
}

#[test]
fn same_seed_same_samples() {
    let c = GraphSimConfig::with_kappa(500, 2.0, WeightSampler::Normal { v2: 1.0 }, vec![0.3], 40, 123);
    let a = run_trials(&c).unwrap();
    let b = run_trials(&c).unwrap();
    assert_eq!(
        a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
    let other = run_trials(&GraphSimConfig { seed: 124, ..c }).unwrap();
    assert_ne!(a, other);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn exceedance_is_monotone_in_s(seed in any::<u64>(), kappa in 0.5f64..4.0) {
        let s = vec![0.05, 0.1, 0.2, 0.4, 0.8, 1.6];
        let c = GraphSimConfig::with_kappa(200, kappa, WeightSampler::Exponential, s, 50, seed);
        let r = deviation_experiment(&c).unwrap();
        prop_assert!(r.cells.windows(2).all(|w| w[1].p_hat <= w[0].p_hat));
        prop_assert!(r.cells.iter().all(|c| (0.0..=1.0).contains(&c.p_hat) && c.ci_half_width > 0.0));
    }

    #[test]
    fn bound_is_decreasing_in_s(kappa in 0.5f64..8.0, n in 10usize..100_000, s in 0.01f64..5.0) {
        let m = cpm_core::WeightModel::exponential();
        let a = union_bound(&m, n, kappa, s).unwrap();
        let b = union_bound(&m, n, kappa, s * 1.1).unwrap();
        prop_assert!(b.raw < a.raw);
        prop_assert!(a.value <= 1.0 && a.vacuous == (a.raw >= 1.0));
    }
}
