//! Designs, observations and the dataset they accumulate in.

use crate::error::{Error, Result};

/// A point in the unit hypercube `[0, 1]^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Design(Vec<f64>);

impl Design {
    /// Validates that `coords` is nonempty and every coordinate lies in `[0, 1]`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some((index, &value)) = coords
            .iter()
            .enumerate()
            .find(|(_, c)| !(0.0..=1.0).contains(*c))
        {
            return Err(Error::OutsideUnitCube { index, value });
        }
        Ok(Design(coords))
    }

    /// Caller guarantees the coordinates are valid.
    pub(crate) fn from_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        debug_assert!(coords.iter().all(|c| (0.0..=1.0).contains(c)));
        Design(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Design {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A design paired with its finite objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub design: Design,
    pub value: f64,
}

impl Observation {
    pub fn new(design: Design, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFiniteValue(value));
        }
        Ok(Observation { design, value })
    }
}

/// Surrogate output at a query design. `sigma2` is uncalibrated and carries
/// squared-distance units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mu: f64,
    pub sigma2: f64,
}

impl Estimate {
    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

/// Squared Euclidean distance between two designs.
pub fn squared_distance(a: &Design, b: &Design) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(sq_dist(a.coords(), b.coords()))
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Append-only store of observations sharing one dimension.
///
/// Coordinates are kept in one row-major buffer so the nearest-neighbor scan
/// walks contiguous memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dimension: usize,
    coords: Vec<f64>,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Dataset {
            dimension,
            coords: Vec::new(),
            values: Vec::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Appends an observation, preserving insertion order.
    pub fn push(&mut self, obs: Observation) -> Result<()> {
        self.push_parts(&obs.design, obs.value)
    }

    pub(crate) fn push_parts(&mut self, design: &Design, value: f64) -> Result<()> {
        if design.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: design.dim(),
            });
        }
        if !value.is_finite() {
            return Err(Error::NonFiniteValue(value));
        }
        self.coords.extend_from_slice(design.coords());
        self.values.push(value);
        Ok(())
    }

    /// Coordinates of observation `i`.
    pub fn design(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Clones observation `i` out of the flat storage.
    pub fn observation(&self, i: usize) -> Observation {
        Observation {
            design: Design::from_unchecked(self.design(i).to_vec()),
            value: self.values[i],
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[f64], f64)> + '_ {
        self.coords
            .chunks_exact(self.dimension)
            .zip(self.values.iter().copied())
    }

    /// Index of the largest value; the earliest wins ties.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &v) in self.values.iter().enumerate() {
            match best {
                Some(b) if self.values[b] >= v => {}
                _ => best = Some(i),
            }
        }
        best
    }

    pub fn clear(&mut self) {
        self.coords.clear();
        self.values.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(c: &[f64]) -> Design {
        Design::new(c.to_vec()).unwrap()
    }

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(&d(&[0.0, 0.0]), &d(&[0.0, 0.0])), Ok(0.0));
        assert_eq!(squared_distance(&d(&[0.0, 0.0]), &d(&[1.0, 1.0])), Ok(2.0));
        // 0.2^2 + 0.5^2 + 0.8^2 = 0.04 + 0.25 + 0.64
        let v = squared_distance(&d(&[0.3, 0.7, 0.1]), &d(&[0.5, 0.2, 0.9])).unwrap();
        assert!((v - 0.93).abs() < 1e-15, "{v}");
    }

    #[test]
    fn squared_distance_rejects_mismatch() {
        assert_eq!(
            squared_distance(&d(&[0.1]), &d(&[0.1, 0.2])),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn design_validation() {
        assert_eq!(Design::new(vec![]), Err(Error::ZeroDimension));
        assert!(matches!(
            Design::new(vec![0.5, 1.5]),
            Err(Error::OutsideUnitCube { index: 1, .. })
        ));
        assert!(Design::new(vec![f64::NAN]).is_err());
        assert!(Design::new(vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn append_grows_and_preserves_order() {
        let mut ds = Dataset::new(2).unwrap();
        assert!(ds.is_empty());
        ds.push(Observation::new(d(&[0.1, 0.2]), 1.0).unwrap()).unwrap();
        assert_eq!(ds.len(), 1);
        for i in 0..4 {
            ds.push_parts(&d(&[0.5, i as f64 / 4.0]), i as f64).unwrap();
        }
        assert_eq!(ds.len(), 5);
        let before: Vec<(Vec<f64>, f64)> = ds.iter().map(|(x, y)| (x.to_vec(), y)).collect();
        ds.push_parts(&d(&[0.9, 0.9]), -3.0).unwrap();
        assert_eq!(ds.len(), 6);
        for (i, (x, y)) in before.iter().enumerate() {
            assert_eq!(ds.design(i), &x[..]);
            assert_eq!(ds.value(i), *y);
        }
    }

    #[test]
    fn append_rejects_bad_observations() {
        let mut ds = Dataset::new(2).unwrap();
        assert!(matches!(
            ds.push_parts(&d(&[0.1, 0.2]), f64::NAN),
            Err(Error::NonFiniteValue(v)) if v.is_nan()
        ));
        assert!(ds.push_parts(&d(&[0.1, 0.2]), f64::INFINITY).is_err());
        assert!(matches!(
            ds.push_parts(&d(&[0.1]), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Observation::new(d(&[0.1]), f64::NAN).is_err());
        assert!(ds.is_empty());
    }

    #[test]
    fn best_index_prefers_earliest() {
        let mut ds = Dataset::new(1).unwrap();
        assert_eq!(ds.best_index(), None);
        for v in [1.0, 3.0, 2.0, 3.0] {
            ds.push_parts(&d(&[0.5]), v).unwrap();
        }
        assert_eq!(ds.best_index(), Some(1));
    }
}
