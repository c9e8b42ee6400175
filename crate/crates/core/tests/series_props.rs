use multideg::series::{random_spec_41, random_spec_42};
use multideg::{sum_with_bounds_41, sum_with_bounds_42, Error, Spec41, Spec42};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `Σ_{i=0}^{N} Π_{t≤i} r_t`, accumulated with each product formed afresh.
fn direct_sum(ratios: &[f64]) -> f64 {
    (0..=ratios.len()).map(|i| ratios[..i].iter().product::<f64>()).sum()
}

#[test]
fn envelopes_hold_41() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x41);
    for _ in 0..3000 {
        let spec = random_spec_41(&mut rng);
        let env = sum_with_bounds_41(&spec).unwrap();
        assert!(env.contains_sum(), "{env:?}");
        let ratios: Vec<f64> = (1..=spec.n)
            .map(|i| spec.a[i - 1] * (1.0 - (i - 1) as f64 * spec.b[i - 1]) * (1.0 + spec.delta[i - 1]) / i as f64)
            .collect();
        let d = direct_sum(&ratios);
        assert!((d - env.sum).abs() <= 1e-12 * d.max(1.0));
    }
}

#[test]
fn envelopes_hold_42() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x42);
    for _ in 0..3000 {
        let spec = random_spec_42(&mut rng);
        let env = sum_with_bounds_42(&spec).unwrap();
        assert!(env.contains_sum(), "{env:?}");
        let ratios: Vec<f64> = (1..=spec.n)
            .map(|i| (spec.a[i - 1] - (i - 1) as f64 * spec.c[i - 1]) / i as f64)
            .collect();
        let d = direct_sum(&ratios);
        assert!((d - env.sum).abs() <= 1e-12 * d.max(1.0));
    }
}

#[test]
fn out_of_contract_inputs_fail() {
    // A_2 c ≥ N − K + 1.
    let spec = Spec41::from_fns(4, 0, 6.0, |_| 1.0, |_| 0.0, |_| 0.0, vec![0.0]);
    assert!(matches!(sum_with_bounds_41(&spec), Err(Error::PreconditionViolation(_))));
    // Cumulative |δ| beyond Σ γ_j [i]_j.
    let spec = Spec41::from_fns(5, 1, 6.0, |_| 0.1, |_| 0.0, |_| 0.01, vec![0.0, 0.001]);
    assert!(matches!(sum_with_bounds_41(&spec), Err(Error::PreconditionViolation(_))));
    // A(i) − (i−1)C(i) < 0.
    let spec = Spec42::from_fns(4, 0.3, |_| 0.1, |_| 0.2);
    assert!(matches!(sum_with_bounds_42(&spec), Err(Error::PreconditionViolation(_))));
    // A_2/N above ĉ.
    let spec = Spec42::from_fns(3, 0.1, |_| 0.5, |_| 0.0);
    assert!(matches!(sum_with_bounds_42(&spec), Err(Error::PreconditionViolation(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constant_a_without_corrections_is_truncated_exp(n in 2usize..40, x in 0.0f64..1.0) {
        let c = 2.0 * std::f64::consts::E * 1.5;
        prop_assume!(x * c < n as f64 + 1.0);
        let spec = Spec41::from_fns(n, 0, c, |_| x, |_| 0.0, |_| 0.0, vec![0.0]);
        let env = sum_with_bounds_41(&spec).unwrap();
        let mut term = 1.0;
        let mut want = 1.0;
        for i in 1..=n {
            term *= x / i as f64;
            want += term;
        }
        prop_assert!((env.sum - want).abs() < 1e-13);
        prop_assert!(env.sigma1 <= x.exp() && x.exp() <= env.sigma2);
    }

    #[test]
    fn zero_c_reduces_to_the_exponential(n in 2usize..40, chat in 0.01f64..0.33) {
        let a = chat * n as f64 * 0.5;
        let spec = Spec42::from_fns(n, chat, |_| a, |_| 0.0);
        let env = sum_with_bounds_42(&spec).unwrap();
        prop_assert!(env.contains_sum());
        prop_assert!(env.sigma1 <= a.exp() * (1.0 + 1e-12));
    }
}
