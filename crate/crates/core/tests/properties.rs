use proptest::prelude::*;
use siegel_core::discrete_series::Weight;
use siegel_core::nonvanishing::{big_m, integral_phi, phi_lm, SimplexRegion, ThresholdSettings};
use siegel_core::sampling::{random_siegel_point, random_symplectic, seeded_rng};
use siegel_core::symplectic::{act, cayley, cayley_inv, j_factor, sp_check};
use statrs::function::beta::beta;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_undoes_action(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let g = random_symplectic(n, 0.6, &mut rng);
        let z = random_siegel_point(n, &mut rng);
        prop_assert!(sp_check(g.matrix(), 1e-9).unwrap());
        let back = act(&g.inverse(), &act(&g, &z).unwrap()).unwrap();
        prop_assert!((back.z() - z.z()).norm() <= 1e-8 * (1.0 + z.z().norm()));
    }

    #[test]
    fn inverse_factor_is_reciprocal(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let g = random_symplectic(n, 0.6, &mut rng);
        let z = random_siegel_point(n, &mut rng);
        let gz = act(&g, &z).unwrap();
        let prod = j_factor(&g.inverse(), &gz).unwrap() * j_factor(&g, &z).unwrap();
        prop_assert!((prod - 1.0).norm() <= 1e-9);
    }

    #[test]
    fn cayley_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let z = random_siegel_point(n, &mut rng);
        let back = cayley_inv(&cayley(&z));
        prop_assert!((back.z() - z.z()).norm() <= 1e-9 * (1.0 + z.z().norm()));
    }

    #[test]
    fn threshold_constant_decreases(level in 1u64..10_000, n in 1usize..=4) {
        let a = big_m(level, n).unwrap();
        let b = big_m(level + 1, n).unwrap();
        prop_assert!(a > 0.0 && a < 1.0 && b > a);
    }

    #[test]
    fn integrand_is_bounded_by_one(l in 0u32..6, m in 4i64..20, x in 1e-6f64..0.999999) {
        let v = phi_lm(l, Weight::new(m, 1), &[x]).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn integral_over_full_interval_matches_beta() {
    // integral of x^(l/2) (1-x)^(m/2-2) over [0,1] is B(l/2+1, m/2-1)
    let settings = ThresholdSettings::default();
    for (l, m) in [(0u32, 3i64), (2, 6), (5, 12), (3, 17)] {
        let region = SimplexRegion::new(1, 1.0).unwrap();
        let got = integral_phi(l, Weight::new(m, 1), region, &settings)
            .unwrap()
            .value;
        let expect = beta(l as f64 / 2.0 + 1.0, m as f64 / 2.0 - 1.0);
        assert!(
            (got - expect).abs() <= 1e-10 * expect,
            "l={l} m={m}: {got} vs {expect}"
        );
    }
}
