use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{train_binary, BinaryModel, SvmError, TrainConfig};
use crate::par;
use crate::sparse::SparseVector;

/// One-vs-rest over integer class ids.
///
/// `classes` is sorted by training frequency (most frequent first, ties by
/// class id); `models[k]` separates `classes[k]` from the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticlassModel {
    pub classes: Vec<usize>,
    pub frequencies: Vec<usize>,
    pub models: Vec<BinaryModel>,
}

impl MulticlassModel {
    pub fn decision_values(&self, x: &SparseVector) -> Result<Vec<f64>, SvmError> {
        self.models.iter().map(|m| m.decision(x)).collect()
    }

    /// Argmax over per-class margins; on equal margins the more frequent
    /// class wins.
    pub fn predict(&self, x: &SparseVector) -> Result<usize, SvmError> {
        let values = self.decision_values(x)?;
        let mut best = 0;
        for (k, &v) in values.iter().enumerate().skip(1) {
            if v > values[best] {
                best = k;
            }
        }
        Ok(self.classes[best])
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }
}

pub fn train_multiclass(x: &[SparseVector], y: &[usize], cfg: &TrainConfig) -> Result<MulticlassModel, SvmError> {
    if x.len() != y.len() {
        return Err(SvmError::LengthMismatch {
            features: x.len(),
            labels: y.len(),
        });
    }
    if x.is_empty() {
        return Err(SvmError::EmptyTrainingSet);
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in y {
        *counts.entry(c).or_insert(0) += 1;
    }
    let mut ranked: Vec<(usize, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let classes: Vec<usize> = ranked.iter().map(|r| r.0).collect();
    let frequencies = ranked.iter().map(|r| r.1).collect();

    let models = par::try_map_indexed(classes.len(), |k| {
        let target = classes[k];
        let yk: Vec<f64> = y.iter().map(|&c| if c == target { 1.0 } else { -1.0 }).collect();
        train_binary(x, &yk, cfg)
    })?;
    Ok(MulticlassModel {
        classes,
        frequencies,
        models,
    })
}

pub fn predict_multiclass(model: &MulticlassModel, x: &SparseVector) -> Result<usize, SvmError> {
    model.predict(x)
}
