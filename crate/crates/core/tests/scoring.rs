use ennbo_core::harness::{fractional_ranks, loglog_slope, rank_scores};
use proptest::prelude::*;

fn series(rows: &[(&str, Vec<f64>)]) -> Vec<(String, Vec<f64>)> {
    rows.iter().map(|(n, v)| (n.to_string(), v.clone())).collect()
}

#[test]
fn strict_order_scores() {
    let base: Vec<f64> = (0..25).map(|n| n as f64).collect();
    let shift = |c: f64| base.iter().map(|y| y + c).collect::<Vec<f64>>();
    let t = rank_scores(&series(&[
        ("turbo-1", shift(3.0)),
        ("turbo-enn-10", shift(2.0)),
        ("optuna", shift(1.0)),
        ("random", shift(0.0)),
    ]))
    .unwrap();
    assert_eq!(t.scores, [1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0]);
}

#[test]
fn loglog_fixtures() {
    let lin: Vec<(f64, f64)> = (1..100).map(|n| (n as f64, 3e-4 * n as f64)).collect();
    assert!((loglog_slope(&lin).unwrap() - 1.0).abs() < 1e-6);
    let quad: Vec<(f64, f64)> = (1..100).map(|n| (n as f64, 2.5 * (n * n) as f64)).collect();
    assert!((loglog_slope(&quad).unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(loglog_slope(&[(1.0, 0.0), (2.0, 0.0)]), None);
}

proptest! {
    #[test]
    fn total_orders_give_the_lattice(m in 2usize..7, rounds in 1usize..20, seed in any::<u64>()) {
        // A fixed permutation of distinct offsets keeps the order strict every round.
        let mut order: Vec<usize> = (0..m).collect();
        let mut s = seed;
        for i in (1..m).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let rows: Vec<(String, Vec<f64>)> = order
            .iter()
            .map(|&o| (format!("m{o}"), (0..rounds).map(|n| (n * 10 + o) as f64).collect()))
            .collect();
        let t = rank_scores(&rows).unwrap();
        let mut got = t.scores.clone();
        got.sort_by(f64::total_cmp);
        let want: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn ranks_sum_is_fixed(values in prop::collection::vec((0u8..6).prop_map(f64::from), 1..30)) {
        let n = values.len() as f64;
        let sum: f64 = fractional_ranks(&values).iter().sum();
        prop_assert!((sum - n * (n + 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn scores_average_to_one_half(rows in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 8), 2..6)) {
        let named: Vec<(String, Vec<f64>)> = rows.into_iter().enumerate().map(|(i, v)| (format!("m{i}"), v)).collect();
        let t = rank_scores(&named).unwrap();
        let mean = t.scores.iter().sum::<f64>() / t.scores.len() as f64;
        prop_assert!((mean - 0.5).abs() < 1e-12);
        prop_assert!(t.scores.iter().all(|s| (0.0..=1.0).contains(s)));
    }
}
