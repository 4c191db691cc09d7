use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::Design;

/// `n` designs in which, along every dimension, each stratum
/// `[i/n, (i+1)/n)` holds exactly one point, jittered uniformly within it.
pub fn latin_hypercube(dimension: usize, n: usize, rng: &mut RngStream) -> Result<Vec<Design>> {
    if dimension == 0 {
        return Err(Error::ZeroDimension);
    }
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    let width = n as f64;
    let mut coords = vec![vec![0.0; dimension]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for j in 0..dimension {
        for i in (1..n).rev() {
            strata.swap(i, rng.random_range(0..=i));
        }
        for (point, &s) in coords.iter_mut().zip(&strata) {
            let u: f64 = rng.random();
            let upper = (s + 1) as f64 / width;
            let c = (s as f64 + u) / width;
            // Rounding can land on the open upper edge.
            point[j] = if c >= upper { upper.next_down() } else { c };
        }
    }
    Ok(coords.into_iter().map(Design::from_unchecked).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let mut rng = RngStream::new(1, 1);
        let pts = latin_hypercube(5, 1, &mut rng).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].coords().iter().all(|c| (0.0..1.0).contains(c)));
    }

    #[test]
    fn four_points_fill_quartiles() {
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 0);
            let pts = latin_hypercube(6, 4, &mut rng).unwrap();
            for j in 0..6 {
                let mut col: Vec<f64> = pts.iter().map(|p| p.coords()[j]).collect();
                col.sort_by(f64::total_cmp);
                for (i, c) in col.iter().enumerate() {
                    assert!(i as f64 * 0.25 <= *c && *c < (i + 1) as f64 * 0.25);
                }
            }
        }
    }

    #[test]
    fn marginals_are_flat() {
        // 1000 points, 20 bins: every bin must hold exactly 50, well inside a
        // 3-sigma multinomial band of 50 +/- 3 * sqrt(1000 * 0.05 * 0.95).
        let n = 1000;
        let bins = 20;
        let mut rng = RngStream::new(77, 0);
        let pts = latin_hypercube(3, n, &mut rng).unwrap();
        let expected = n as f64 / bins as f64;
        let band = 3.0 * (n as f64 * (1.0 / bins as f64) * (1.0 - 1.0 / bins as f64)).sqrt();
        for j in 0..3 {
            let mut counts = vec![0usize; bins];
            for p in &pts {
                counts[(p.coords()[j] * bins as f64) as usize] += 1;
            }
            let chi2: f64 = counts
                .iter()
                .map(|&c| (c as f64 - expected).powi(2) / expected)
                .sum();
            assert!(counts.iter().all(|&c| (c as f64 - expected).abs() <= band));
            assert!(chi2 < 1e-9, "chi2 {chi2}");
        }
    }

    #[test]
    fn reproducible() {
        let a = latin_hypercube(4, 9, &mut RngStream::new(5, 5)).unwrap();
        let b = latin_hypercube(4, 9, &mut RngStream::new(5, 5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_degenerate_sizes() {
        let mut rng = RngStream::new(0, 0);
        assert!(latin_hypercube(0, 3, &mut rng).is_err());
        assert!(latin_hypercube(3, 0, &mut rng).is_err());
    }
}
