use serde::{Deserialize, Serialize};

/// A sparse feature vector over a space of `dim` columns.
///
/// Indices are strictly increasing and no explicit zeros are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a vector from unordered `(index, value)` pairs. Duplicate
    /// indices are summed and zeros dropped.
    ///
    /// Panics if an index is out of range or a value is not finite.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut pairs: Vec<(usize, f64)> = pairs.into_iter().collect();
        pairs.sort_by_key(|p| p.0);
        let mut indices = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            assert!(v.is_finite(), "non-finite value at index {i}");
            if indices.last() == Some(&(i as u32)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(i as u32);
                values.push(v);
            }
        }
        let mut out = Self { dim, indices, values };
        out.prune_zeros();
        out
    }

    pub fn from_dense(values: &[f64]) -> Self {
        Self::from_pairs(values.len(), values.iter().copied().enumerate())
    }

    fn prune_zeros(&mut self) {
        if self.values.iter().all(|&v| v != 0.0) {
            return;
        }
        let (indices, values) = self
            .indices
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v != 0.0)
            .map(|(&i, &v)| (i, v))
            .unzip();
        self.indices = indices;
        self.values = values;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().zip(&self.values).map(|(&i, &v)| (i as usize, v))
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.indices.binary_search(&(index as u32)) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b) = (0, 0);
        let mut sum = 0.0;
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    sum += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        sum
    }

    /// ||self - other||²
    pub fn squared_distance(&self, other: &SparseVector) -> f64 {
        (self.norm_sq() + other.norm_sq() - 2.0 * self.dot(other)).max(0.0)
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
        self.prune_zeros();
    }

    /// Returns a copy living in a space of `dim + extra.len()` columns with
    /// `extra` appended after the original columns.
    pub fn augmented(&self, extra: &[f64]) -> SparseVector {
        let mut out = SparseVector {
            dim: self.dim + extra.len(),
            indices: self.indices.clone(),
            values: self.values.clone(),
        };
        for (k, &v) in extra.iter().enumerate() {
            if v != 0.0 {
                out.indices.push((self.dim + k) as u32);
                out.values.push(v);
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            dense[i] = v;
        }
        dense
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pairs_sorts_merges_and_prunes() {
        let v = SparseVector::from_pairs(5, [(3, 1.0), (0, 2.0), (3, -1.0), (1, 0.0), (4, 0.5)]);
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(0, 2.0), (4, 0.5)]);
        assert_eq!(v.get(3), 0.0);
        assert_eq!(v.dim(), 5);
    }

    #[test]
    fn products() {
        let a = SparseVector::from_dense(&[1.0, 0.0, 2.0]);
        let b = SparseVector::from_dense(&[0.0, 3.0, 4.0]);
        assert_eq!(a.dot(&b), 8.0);
        assert_eq!(a.dot_dense(&[1.0, 1.0, 1.0]), 3.0);
        assert_eq!(a.squared_distance(&b), 1.0 + 9.0 + 4.0);
    }

    #[test]
    fn augmentation_appends_columns() {
        let a = SparseVector::from_dense(&[0.5, 0.0]);
        let aug = a.augmented(&[1.0, 0.0, 1.0]);
        assert_eq!(aug.dim(), 5);
        assert_eq!(aug.iter().collect::<Vec<_>>(), vec![(0, 0.5), (2, 1.0), (4, 1.0)]);
    }

    #[test]
    #[should_panic]
    fn out_of_range_index_panics() {
        SparseVector::from_pairs(2, [(2, 1.0)]);
    }
}
