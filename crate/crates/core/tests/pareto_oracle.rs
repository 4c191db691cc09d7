use ennbo_core::pareto::{first_front, pareto_partition};
use ennbo_core::{dominates, select_arm_indices, RngStream};
use proptest::prelude::*;

fn all_pairs_front(mus: &[f64], sigmas: &[f64], alive: &[usize]) -> Vec<usize> {
    alive
        .iter()
        .copied()
        .filter(|&i| {
            !alive
                .iter()
                .any(|&j| dominates((mus[j], sigmas[j]), (mus[i], sigmas[i])))
        })
        .collect()
}

fn peel(mus: &[f64], sigmas: &[f64]) -> Vec<Vec<usize>> {
    let mut alive: Vec<usize> = (0..mus.len()).collect();
    let mut layers = Vec::new();
    while !alive.is_empty() {
        let front = all_pairs_front(mus, sigmas, &alive);
        alive.retain(|i| !front.contains(i));
        layers.push(front);
    }
    layers
}

fn pool() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..250).prop_flat_map(|n| {
        prop_oneof![
            (
                prop::collection::vec(-5.0..5.0f64, n),
                prop::collection::vec(0.0..3.0f64, n)
            ),
            // Coarse grid values force many exact ties.
            (
                prop::collection::vec((0u8..5).prop_map(f64::from), n),
                prop::collection::vec((0u8..5).prop_map(f64::from), n)
            ),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn front_matches_all_pairs((mus, sigmas) in pool()) {
        let alive: Vec<usize> = (0..mus.len()).collect();
        prop_assert_eq!(first_front(&mus, &sigmas).unwrap(), all_pairs_front(&mus, &sigmas, &alive));
    }

    #[test]
    fn full_partition_matches_iterated_peeling((mus, sigmas) in pool()) {
        let part = pareto_partition(&mus, &sigmas, mus.len()).unwrap();
        prop_assert_eq!(part.layers().to_vec(), peel(&mus, &sigmas));
        prop_assert_eq!(part.covered(), mus.len());
    }

    #[test]
    fn partial_partition_is_a_prefix((mus, sigmas) in pool(), frac in 0.0..1.0f64) {
        let needed = ((mus.len() as f64 * frac) as usize).max(1);
        let part = pareto_partition(&mus, &sigmas, needed).unwrap();
        let full = peel(&mus, &sigmas);
        prop_assert!(part.covered() >= needed);
        prop_assert_eq!(part.layers(), &full[..part.layers().len()]);
        let before_last: usize = part.layers()[..part.layers().len() - 1].iter().map(Vec::len).sum();
        prop_assert!(before_last < needed);
    }

    #[test]
    fn monotone_transforms_leave_layers_unchanged(
        (mus, sigmas) in pool(),
        a in 0.1..5.0f64,
        b in -3.0..3.0f64,
        c in 0.1..2.0f64,
    ) {
        let mus2: Vec<f64> = mus.iter().map(|m| a * m + b).collect();
        let sig2: Vec<f64> = sigmas.iter().map(|s| (c * s).exp()).collect();
        let n = mus.len();
        prop_assert_eq!(
            pareto_partition(&mus, &sigmas, n).unwrap(),
            pareto_partition(&mus2, &sig2, n).unwrap()
        );
    }

    #[test]
    fn selection_takes_layers_in_order((mus, sigmas) in pool(), seed in any::<u64>(), frac in 0.0..1.0f64) {
        let n = ((mus.len() as f64 * frac) as usize).max(1);
        let picks = select_arm_indices(&mus, &sigmas, n, &mut RngStream::new(seed, 0)).unwrap();
        prop_assert_eq!(picks.len(), n);
        let layers = peel(&mus, &sigmas);
        let layer_of = |i: usize| layers.iter().position(|l| l.contains(&i)).unwrap();
        let depths: Vec<usize> = picks.iter().map(|&i| layer_of(i)).collect();
        prop_assert!(depths.windows(2).all(|w| w[0] <= w[1]));
        // Every layer before the deepest one touched is used in full.
        let deepest = *depths.last().unwrap();
        let full: usize = layers[..deepest].iter().map(Vec::len).sum();
        prop_assert_eq!(depths.iter().filter(|&&d| d < deepest).count(), full);
        let mut sorted = picks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), n);
    }
}
