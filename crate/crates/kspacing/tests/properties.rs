//! Property tests of the structural invariants.

use kspacing::summation::compensated_total;
use kspacing::{
    all_k_spacings, gumbel_cdf, gumbel_quantile, ks_two_sample, max_k_spacing, moving_sums,
    naive_max_k_spacing, order_statistics, sample_uniform_sorted, Ecdf, InnovationDraw, StreamKey,
};
use proptest::prelude::*;

fn unit_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 0..max_len)
}

proptest! {
    // The single-pass scan and the materialize-then-scan oracle share the
    // same window subtraction, so they must agree bitwise.
    #[test]
    fn scan_matches_naive_oracle(raw in unit_vec(200)) {
        let s = order_statistics(&raw).unwrap();
        for k in 1..=s.n() + 1 {
            let fast = max_k_spacing(&s, k).unwrap();
            let slow = naive_max_k_spacing(&s, k).unwrap();
            prop_assert_eq!(fast.m_value.to_bits(), slow.m_value.to_bits());
            prop_assert_eq!(fast.start_index, slow.start_index);
        }
    }

    #[test]
    fn max_spacing_is_monotone_in_k(raw in unit_vec(120)) {
        let s = order_statistics(&raw).unwrap();
        let mut prev = 0.0f64;
        for k in 1..=s.n() + 1 {
            let m = max_k_spacing(&s, k).unwrap().m_value;
            prop_assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn max_spacing_bounds(raw in unit_vec(120)) {
        let s = order_statistics(&raw).unwrap();
        let single = max_k_spacing(&s, 1).unwrap().m_value;
        for k in 1..=s.n() + 1 {
            let m = max_k_spacing(&s, k).unwrap().m_value;
            prop_assert!(m > 0.0 && m <= 1.0);
            prop_assert!(m >= single);
        }
    }

    #[test]
    fn unit_spacings_telescope_to_one(raw in unit_vec(400)) {
        let s = order_statistics(&raw).unwrap();
        let gaps = all_k_spacings(&s, 1).unwrap();
        let total: f64 = gaps.iter().sum();
        let budget = (s.n() + 2) as f64 * f64::EPSILON;
        prop_assert!((total - 1.0).abs() <= budget, "total {} over budget {}", total, budget);
    }

    #[test]
    fn sliding_sums_match_direct_windows(
        x in prop::collection::vec(1e-3f64..10.0, 1..400),
        k_frac in 0.0f64..1.0,
    ) {
        let k = 1 + (k_frac * (x.len() - 1) as f64) as usize;
        let d = InnovationDraw::from_values(x.clone()).unwrap();
        let series = moving_sums(&d, k).unwrap();
        prop_assert_eq!(series.values().len(), x.len() - k + 1);
        for (j, &v) in series.values().iter().enumerate() {
            let direct = compensated_total(&x[j..j + k]);
            prop_assert!((v - direct).abs() <= 1e-12 * direct.abs().max(1.0),
                "window {}: sliding {} vs direct {}", j, v, direct);
        }
    }

    #[test]
    fn ecdf_is_a_right_continuous_step_cdf(values in prop::collection::vec(-50.0f64..50.0, 1..200)) {
        let e = Ecdf::from_unsorted(values.clone()).unwrap();
        prop_assert_eq!(e.eval(f64::NEG_INFINITY), 0.0);
        prop_assert_eq!(e.eval(f64::INFINITY), 1.0);
        let mut prev = 0.0;
        for &v in e.sorted() {
            let here = e.eval(v);
            // monotone, right-continuous, with the left limit strictly below
            prop_assert!(here >= prev);
            prop_assert!(e.eval_left(v) < here);
            prop_assert_eq!(e.eval(v.next_up()), here);
            prev = here;
        }
    }

    #[test]
    fn two_sample_ks_is_symmetric_and_bounded(
        a in prop::collection::vec(-10.0f64..10.0, 1..80),
        b in prop::collection::vec(-10.0f64..10.0, 1..80),
    ) {
        let ea = Ecdf::from_unsorted(a).unwrap();
        let eb = Ecdf::from_unsorted(b).unwrap();
        let ab = ks_two_sample(&ea, &eb, 1e-3);
        let ba = ks_two_sample(&eb, &ea, 1e-3);
        prop_assert_eq!(ab.statistic.to_bits(), ba.statistic.to_bits());
        prop_assert!((0.0..=1.0).contains(&ab.statistic));
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
    }

    #[test]
    fn gumbel_cdf_of_quantile_is_identity(p in 1e-6f64..0.999999) {
        let t = gumbel_quantile(p).unwrap();
        prop_assert!((gumbel_cdf(t) - p).abs() <= 1e-12);
    }
}

#[test]
fn gumbel_quantile_of_cdf_is_identity() {
    // Strict 1e-10 up to t = 13; beyond that the probability sits so close
    // to 1 that its f64 representation alone moves the round trip by about
    // eps * e^t, which dominates the budget.
    let mut t = -3.0f64;
    while t <= 20.0 {
        let p = gumbel_cdf(t);
        let back = gumbel_quantile(p).unwrap();
        let budget = 1e-10 + 4.0 * f64::EPSILON * t.exp().max(0.0);
        assert!(
            (back - t).abs() <= budget,
            "t = {t}: round trip {back}, budget {budget}"
        );
        t += 0.01;
    }
}

#[test]
fn uniform_path_is_deterministic_and_schedule_free() {
    let key = StreamKey::new(7, 3);
    let a = sample_uniform_sorted(4096, key);
    let b = sample_uniform_sorted(4096, key);
    assert_eq!(a, b);
}
