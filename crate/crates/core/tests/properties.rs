//! Randomized invariant checks over the library's core algebra.

use ldp_core::dist::{hellinger_sq, kl_divergence, tv_distance};
use ldp_core::hypotest::{debias, laplace_density};
use ldp_core::randomizer::decompose;
use ldp_core::{FiniteDist, Randomizer};
use proptest::prelude::*;

fn dist_strategy(k: usize) -> impl Strategy<Value = FiniteDist> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(move |w| {
        let support: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        let total: f64 = w.iter().sum();
        FiniteDist::new(support, w.iter().map(|v| v / total).collect()).unwrap()
    })
}

fn randomizer_strategy(k: usize, r: usize) -> impl Strategy<Value = Randomizer> {
    prop::collection::vec(prop::collection::vec(0.01f64..1.0, r), k).prop_map(move |rows| {
        let domain: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        let range: Vec<String> = (0..r).map(|i| format!("y{i}")).collect();
        let rows: Vec<Vec<f64>> = rows
            .into_iter()
            .map(|row| {
                let total: f64 = row.iter().sum();
                row.into_iter().map(|v| v / total).collect()
            })
            .collect();
        Randomizer::from_rows(domain, range, rows, 50.0, 0.0).unwrap()
    })
}

proptest! {
    #[test]
    fn metric_sandwich(p in dist_strategy(4), q in dist_strategy(4)) {
        let tv = tv_distance(&p, &q);
        let h2 = hellinger_sq(&p, &q);
        let kl = kl_divergence(&p, &q).unwrap();
        prop_assert!(h2 <= tv + 1e-9);
        prop_assert!(tv <= 2.0f64.sqrt() * h2.sqrt() + 1e-9);
        prop_assert!(tv <= (kl / 2.0).sqrt() + 1e-9);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&tv));
    }

    #[test]
    fn tv_is_a_metric(
        p in dist_strategy(3),
        q in dist_strategy(3),
        r in dist_strategy(3),
    ) {
        prop_assert!((tv_distance(&p, &q) - tv_distance(&q, &p)).abs() < 1e-12);
        prop_assert!(tv_distance(&p, &p) < 1e-12);
        prop_assert!(
            tv_distance(&p, &r) <= tv_distance(&p, &q) + tv_distance(&q, &r) + 1e-12
        );
    }

    #[test]
    fn decompose_round_trip(
        r in randomizer_strategy(3, 2),
        bump in 0.0f64..2.0,
    ) {
        let eps = r.minimal_eps() + bump;
        let anchor = r.domain()[0].clone();
        let dec = decompose(&r, eps, &anchor).unwrap();
        prop_assert!(dec.reconstruction_error(&r) <= 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&dec.gamma));
        prop_assert!(dec.r_tilde.minimal_eps() <= 2.0 * eps + 1e-9);
        // the anchor row of the private part equals mu
        let anchor_row = dec.r_tilde.row(&anchor).unwrap();
        for (a, b) in anchor_row.probs().iter().zip(dec.mu.probs()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn randomized_response_minimal_eps_is_exact(
        k in 2usize..6,
        eps in 0.05f64..5.0,
    ) {
        let r = Randomizer::randomized_response(k, eps).unwrap();
        prop_assert!((r.minimal_eps() - eps).abs() <= 1e-9);
        prop_assert!(r.passes_table_check(eps + 1e-6, 0.0));
        prop_assert!(!r.passes_table_check(eps - 1e-3, 0.0));
    }

    #[test]
    fn table_check_agrees_with_minimal_eps(r in randomizer_strategy(3, 3)) {
        let me = r.minimal_eps();
        prop_assert!(r.passes_table_check(me, 0.0));
        prop_assert!(r.passes_table_check(me + 0.5, 0.0));
        if me > 1e-3 {
            prop_assert!(!r.passes_table_check(me - 1e-3, 0.0));
        }
    }

    #[test]
    fn debias_inverts_the_expectation_map(
        n in 1u64..200,
        frac in 0.0f64..=1.0,
        eps in 0.1f64..5.0,
    ) {
        let true_count = (frac * n as f64).round();
        let e = eps.exp();
        let expected_hat = (true_count * (e - 1.0) + n as f64) / (e + 1.0);
        prop_assert!((debias(expected_hat, n, eps) - true_count).abs() <= 1e-9);
    }

    #[test]
    fn debias_preserves_count_argmax(n in 1u64..100, ones in 0u64..100, eps in 0.1f64..5.0) {
        let ones = ones.min(n);
        let zeros = n - ones;
        let d1 = debias(ones as f64, n, eps);
        let d0 = debias(zeros as f64, n, eps);
        prop_assert_eq!(d1 > d0, ones > zeros);
    }

    #[test]
    fn laplace_channel_is_eps_private_on_unit_scores(
        y in 0.0f64..=1.0,
        y2 in 0.0f64..=1.0,
        at in -3.0f64..4.0,
        eps in 0.1f64..4.0,
    ) {
        let a = laplace_density(at, y, 1.0 / eps);
        let b = laplace_density(at, y2, 1.0 / eps);
        prop_assert!(a / b <= ((y - y2).abs() * eps).exp() + 1e-9);
        prop_assert!(a / b <= eps.exp() + 1e-9);
    }

    #[test]
    fn reweight_is_order_invariant(
        p in dist_strategy(3),
        l1 in prop::collection::vec(0.01f64..1.0, 3),
        l2 in prop::collection::vec(0.01f64..1.0, 3),
    ) {
        // sequential reweighting by two likelihoods commutes
        let a = p.reweight(&l1).unwrap().reweight(&l2).unwrap();
        let b = p.reweight(&l2).unwrap().reweight(&l1).unwrap();
        for (x, y) in a.probs().iter().zip(b.probs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn dist_normalizes_and_samples_in_support(
        p in dist_strategy(5),
        seed in 0u64..1000,
    ) {
        prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        let mut rng = ldp_core::SeededRng::new(seed);
        let i = p.sample_index(&mut rng);
        prop_assert!(i < p.len());
    }
}
