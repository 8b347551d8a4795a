//! End-to-end checks of the occupation-counting layer: the closed-form
//! laws against the brute-force coproduct oracle, plus distributional
//! properties (exchangeability, marginals, normalization) over randomized
//! shapes.

use bosonalg::{
    compositions, coproduct_state, dist_su11, dist_weyl, distribution_from_state, Algebra,
};
use proptest::prelude::*;

/// Entrywise agreement between the closed forms and the operator oracle
/// across the whole tractable grid, both algebras.
#[test]
fn closed_forms_match_the_coproduct_oracle_on_the_grid() {
    for n in 0..=6 {
        for m in 2..=4 {
            for algebra in [Algebra::Weyl, Algebra::Su11] {
                let closed = match algebra {
                    Algebra::Weyl => dist_weyl(n, m).unwrap(),
                    Algebra::Su11 => dist_su11(n, m).unwrap(),
                };
                let state = coproduct_state(n, m, algebra).unwrap();
                let brute = distribution_from_state(&state).unwrap();
                let dev = closed.max_abs_diff(&brute).unwrap();
                assert!(dev < 1e-10, "n={n} m={m} {algebra}: {dev}");
            }
        }
    }
}

#[test]
fn su11_uniformity_has_no_spread_on_the_grid() {
    for n in 0..=6 {
        for m in 2..=4 {
            let spread = dist_su11(n, m).unwrap().spread();
            assert!(spread < 1e-14, "n={n} m={m}: {spread}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_laws_are_normalized(n in 0usize..40, m in 1usize..7) {
        let w = dist_weyl(n, m).unwrap();
        let s = dist_su11(n, m).unwrap();
        prop_assert!((w.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!((s.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn both_laws_are_exchangeable(
        n in 0usize..12,
        m in 2usize..5,
        rotation in 0usize..4,
        reverse in proptest::bool::ANY,
    ) {
        for dist in [dist_weyl(n, m).unwrap(), dist_su11(n, m).unwrap()] {
            for (k, p) in dist.entries() {
                let mut permuted = k.parts().to_vec();
                permuted.rotate_left(rotation % m);
                if reverse {
                    permuted.reverse();
                }
                let q = dist.prob_of(&permuted).unwrap();
                prop_assert!((q - p).abs() < 1e-14, "{:?} -> {:?}: {p} vs {q}", k.parts(), permuted);
            }
        }
    }

    #[test]
    fn boson_marginal_is_binomial(n in 0usize..15, m in 2usize..6) {
        let w = dist_weyl(n, m).unwrap();
        // independent route: ln C(n, k) + k ln(1/m) + (n-k) ln(1-1/m)
        let ln_fact: Vec<f64> = std::iter::once(0.0)
            .chain((1..=n).scan(0.0, |acc, k| {
                *acc += (k as f64).ln();
                Some(*acc)
            }))
            .collect();
        for k1 in 0..=n {
            let marginal: f64 = w
                .entries()
                .iter()
                .filter(|(k, _)| k.parts()[0] == k1)
                .map(|(_, p)| p)
                .sum();
            let ln_binom = ln_fact[n] - ln_fact[k1] - ln_fact[n - k1];
            let expected = (ln_binom
                + k1 as f64 * (1.0 / m as f64).ln()
                + (n - k1) as f64 * (1.0 - 1.0 / m as f64).ln())
            .exp();
            prop_assert!((marginal - expected).abs() < 1e-12, "k1={k1}: {marginal} vs {expected}");
        }
    }

    #[test]
    fn su11_two_mode_marginal_is_uniform(n in 0usize..25) {
        let s = dist_su11(n, 2).unwrap();
        let target = 1.0 / (n + 1) as f64;
        for (_, p) in s.entries() {
            prop_assert!((p - target).abs() < 1e-14);
        }
    }

    #[test]
    fn composition_count_is_stars_and_bars(n in 0usize..12, m in 1usize..6) {
        // C(n + m - 1, m - 1) by direct product formula
        let mut expected = 1.0f64;
        for j in 1..m {
            expected *= (n + j) as f64 / j as f64;
        }
        let count = compositions(n, m).unwrap().len();
        prop_assert_eq!(count, expected.round() as usize);
    }

    #[test]
    fn oracle_matches_closed_forms_at_random_small_shapes(
        n in 0usize..5,
        m in 2usize..4,
    ) {
        let state = coproduct_state(n, m, Algebra::Su11).unwrap();
        let brute = distribution_from_state(&state).unwrap();
        let dev = dist_su11(n, m).unwrap().max_abs_diff(&brute).unwrap();
        prop_assert!(dev < 1e-10);
    }
}
