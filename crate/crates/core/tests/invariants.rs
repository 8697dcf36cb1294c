use cpm_core::asymptotics::{rate_function, regime_b_prediction, saddle_tolerance, solve_saddle, solve_saddle_traced};
use cpm_core::auxdist::{build_aux, gaussian_shape_discrepancy, DEFAULT_MASS_TOLERANCE, MASS_FLOOR};
use cpm_core::moments::{
    bell_number, centered_moment_tilde, even_partition_number, finite_n_moment, log_moment, moment_partition_oracle,
    moment_recurrence,
};
use cpm_core::{Number, WeightModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn builtin(i: usize) -> WeightModel {
    match i % 6 {
        0 => WeightModel::unit(),
        1 => WeightModel::gaussian_centered(Number::ratio(3, 2)).unwrap(),
        2 => WeightModel::gamma(Number::from_int(2), Number::ratio(1, 2)).unwrap(),
        3 => WeightModel::bernoulli_centered(),
        4 => WeightModel::exponential(),
        _ => WeightModel::log_factorial(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_matches_partition_sum(i in 0usize..6, k in 0usize..=10, p in 1i64..20, q in 1i64..7) {
        let m = builtin(i);
        let x = Number::ratio(p, q);
        let a = moment_recurrence(&m, k, &x).unwrap();
        let b = moment_partition_oracle(&m, k, &x).unwrap();
        prop_assert!(a.exact.is_some());
        prop_assert_eq!(a.exact, b.exact);
    }

    #[test]
    fn odd_moments_of_symmetric_weights_vanish(j in 0usize..8, v in 1i64..9, p in 1i64..30, q in 1i64..5) {
        let x = Number::ratio(p, q);
        for m in [WeightModel::gaussian_centered(Number::ratio(v, 3)).unwrap(), WeightModel::bernoulli_centered()] {
            let r = moment_recurrence(&m, 2 * j + 1, &x).unwrap().exact.unwrap();
            prop_assert_eq!(r, BigRational::from_integer(BigInt::from(0)));
        }
    }

    #[test]
    fn second_centered_moment_is_lambda_v2(i in 0usize..6, p in 1i64..50, q in 1i64..9) {
        let m = builtin(i);
        let lam = Number::ratio(p, q);
        let got = centered_moment_tilde(&m, 2, &lam).unwrap().exact.unwrap();
        let want = lam.to_rational().unwrap() * m.moment(2).unwrap().to_rational().unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn saddle_residual_and_monotone_trace(i in 0usize..6, e in -3.0f64..6.0) {
        let m = builtin(i);
        let chi = 10f64.powf(e);
        let (s, trace) = solve_saddle_traced(&m, chi).unwrap();
        prop_assert!(s.residual <= saddle_tolerance(chi), "residual {}", s.residual);
        let mut pts: Vec<_> = trace.iter().map(|t| (t.u, t.g)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        prop_assert!(pts.windows(2).all(|w| w[1].1 > w[0].1));
        let r = rate_function(&m, chi).unwrap();
        prop_assert!(r.prefactor > 0.0 && r.prefactor <= 1.0 && r.psi.is_finite());
    }

    #[test]
    fn tilde_shifts_egf(i in 0usize..6, t in 0.01f64..0.95) {
        let m = builtin(i);
        let u = t * m.radius().unwrap_or(3.0);
        let v1 = m.moment_f64(1).unwrap();
        let lhs = m.tilde_transform().egf(u) + u * v1;
        prop_assert!((lhs / m.egf(u) - 1.0).abs() < 1e-13);
        prop_assert!(m.hat_transform().moment(1).unwrap().is_zero());
    }

    #[test]
    fn aux_normalization_mean_variance(i in 0usize..6, x in 0.2f64..40.0, t in 0.05f64..0.9) {
        let m = builtin(i);
        let u = t * m.radius().unwrap_or(4.0);
        let mean = x * u * m.egf_d1(u);
        let var = x * (u * m.egf_d1(u) + u * u * m.egf_d2(u));
        // rounding in the log-moment recurrence drifts with the support
        // length; past a few 10^4 terms the mass floor is no longer met
        prop_assume!(mean <= 5e3);
        let aux = build_aux(&m, x, u, DEFAULT_MASS_TOLERANCE).unwrap();
        prop_assert!(aux.mass() >= 1.0 - MASS_FLOOR && aux.mass() <= 1.0 + 1e-12, "mass {}", aux.mass());
        prop_assert!((aux.pmf_mean() - mean).abs() <= 1e-8 * mean.max(1.0));
        prop_assert!((aux.pmf_variance() - var).abs() <= 1e-7 * var.max(1.0));
    }
}

#[test]
fn gaussian_moments_are_double_factorials() {
    let v2 = BigRational::new(BigInt::from(5), BigInt::from(3));
    let m = WeightModel::gaussian_centered(Number::Exact(v2.clone())).unwrap();
    let mut dfact = BigInt::from(1);
    for k in 1..=8u32 {
        dfact *= BigInt::from(2 * k - 1);
        let want = num_traits::Pow::pow(&v2, k) * BigRational::from_integer(dfact.clone());
        assert_eq!(m.moment(2 * k as usize).unwrap().to_rational().unwrap(), want);
    }
}

#[test]
fn even_partitions_below_bell() {
    for k in 0..=10 {
        assert!(even_partition_number(2 * k).unwrap() <= bell_number(2 * k));
    }
}

#[test]
fn finite_n_error_scales_like_k_squared_over_n() {
    let m = WeightModel::gamma(Number::from_int(2), Number::ratio(1, 2)).unwrap();
    let lam = Number::ratio(3, 2);
    for k in [2usize, 5, 8] {
        let limit = moment_recurrence(&m, k, &lam).unwrap().approx;
        let mut last = f64::INFINITY;
        for n in [1_000u64, 10_000, 100_000] {
            let gap = (finite_n_moment(&m, k, n, &lam).unwrap().approx / limit - 1.0).abs();
            assert!(gap < last);
            assert!(gap * n as f64 / (k * k) as f64 <= 5.0, "k={k} n={n} gap={gap}");
            last = gap;
        }
    }
}

#[test]
fn regime_b_gap_shrinks_in_x_over_k() {
    let m = WeightModel::exponential();
    let k = 20;
    let gaps: Vec<f64> = [1e2, 1e3, 1e4]
        .iter()
        .map(|r| {
            let x = r * k as f64;
            ((log_moment(&m, k, x).unwrap() - regime_b_prediction(&m, k, x).unwrap()) / k as f64).abs()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn prefactor_tends_to_one() {
    // with V_1 = 0 the limit is 1/sqrt(2) instead
    for m in [0, 2, 4, 5].map(builtin) {
        let p = rate_function(&m, 1e6).unwrap().prefactor;
        assert!((p - 1.0).abs() < 1e-2, "{} {p}", m.name());
    }
}

#[test]
fn aux_pmf_is_close_to_normal_at_chi_one() {
    let unit = WeightModel::unit();
    let s = solve_saddle(&unit, 1.0).unwrap();
    let aux = build_aux(&unit, 200.0, s.u, DEFAULT_MASS_TOLERANCE).unwrap();
    assert!((aux.mean() - 200.0).abs() < 1e-6);
    let d = gaussian_shape_discrepancy(&aux);
    assert!(d <= 0.10, "{d}");
}
