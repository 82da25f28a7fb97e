use serde::{Deserialize, Serialize};

use super::{binary_column, validate_training, LabelSet, MultiLabelError};
use crate::par;
use crate::sparse::SparseVector;
use crate::svm::{predict_from_margin, train_binary, BinaryModel, TrainConfig};

/// One independent binary classifier per label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrModel {
    pub models: Vec<BinaryModel>,
}

impl BrModel {
    pub fn n_labels(&self) -> usize {
        self.models.len()
    }
}

pub fn br_fit(
    x: &[SparseVector],
    y: &[LabelSet],
    n_labels: usize,
    cfg: &TrainConfig,
) -> Result<BrModel, MultiLabelError> {
    validate_training(x, y, n_labels)?;
    let models = par::try_map_indexed(n_labels, |label| train_binary(x, &binary_column(y, label), cfg))?;
    Ok(BrModel { models })
}

/// Labels whose binary classifier votes positive, plus every margin.
pub fn br_predict(model: &BrModel, x: &SparseVector) -> Result<(LabelSet, Vec<f64>), MultiLabelError> {
    let margins = model
        .models
        .iter()
        .map(|m| m.decision(x))
        .collect::<Result<Vec<f64>, _>>()?;
    let labels = margins
        .iter()
        .enumerate()
        .filter(|(_, &m)| predict_from_margin(m) > 0)
        .map(|(l, _)| l)
        .collect();
    Ok((labels, margins))
}
