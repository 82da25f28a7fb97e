use serde::{Deserialize, Serialize};

use super::{validate_training, LabelSet, LabelsetRegistry, MultiLabelError};
use crate::sparse::SparseVector;
use crate::svm::{train_multiclass, MulticlassModel, TrainConfig};

/// Every distinct training label set becomes one class of a one-vs-rest
/// multiclass SVM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub registry: LabelsetRegistry,
    pub classifier: MulticlassModel,
    pub n_labels: usize,
}

pub fn lp_fit(
    x: &[SparseVector],
    y: &[LabelSet],
    n_labels: usize,
    cfg: &TrainConfig,
) -> Result<LpModel, MultiLabelError> {
    validate_training(x, y, n_labels)?;
    let registry = LabelsetRegistry::from_training(y)?;
    let classes: Vec<usize> = y
        .iter()
        .map(|s| registry.class_of(s).expect("registered above"))
        .collect();
    let classifier = train_multiclass(x, &classes, cfg)?;
    Ok(LpModel {
        registry,
        classifier,
        n_labels,
    })
}

/// Always one of the registered (nonempty) training label sets.
pub fn lp_predict(model: &LpModel, x: &SparseVector) -> Result<LabelSet, MultiLabelError> {
    let class = model.classifier.predict(x)?;
    Ok(model.registry.get(class).clone())
}
