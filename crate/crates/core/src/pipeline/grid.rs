use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Dataset, ExperimentConfig, PipelineError, Split};
use crate::eval::{zero_one_loss, PredictionRecord};
use crate::features::TfidfModel;
use crate::multilabel::{fit, Algorithm, EccConfig, LabelSet};
use crate::par;
use crate::sparse::SparseVector;
use crate::svm::{Kernel, TrainConfig};
use crate::textprep::{Preprocessor, RawAnswer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Rbf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub kernels: Vec<KernelKind>,
    pub c_values: Vec<f64>,
    /// Only used for the RBF kernel.
    pub gamma_values: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            kernels: vec![KernelKind::Linear, KernelKind::Rbf],
            c_values: vec![0.1, 1.0, 10.0, 100.0, 1000.0],
            gamma_values: vec![0.01, 0.1, 0.5, 1.0],
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let positive = |v: &[f64]| v.iter().all(|x| x.is_finite() && *x > 0.0);
        if self.kernels.is_empty() || self.c_values.is_empty() {
            return Err(PipelineError::Config(
                "grid needs at least one kernel and one C value".into(),
            ));
        }
        if !positive(&self.c_values) || !positive(&self.gamma_values) {
            return Err(PipelineError::Config("grid values must be positive".into()));
        }
        if self.kernels.contains(&KernelKind::Rbf) && self.gamma_values.is_empty() {
            return Err(PipelineError::Config("rbf kernel needs gamma candidates".into()));
        }
        Ok(())
    }

    /// All cells, each as a full training config derived from `base`.
    pub fn cells(&self, base: &TrainConfig) -> Vec<TrainConfig> {
        let mut out = Vec::new();
        for kernel in &self.kernels {
            for &c in &self.c_values {
                match kernel {
                    KernelKind::Linear => out.push(TrainConfig {
                        c,
                        kernel: Kernel::Linear,
                        ..*base
                    }),
                    KernelKind::Rbf => out.extend(self.gamma_values.iter().map(|&gamma| TrainConfig {
                        c,
                        kernel: Kernel::Rbf { gamma },
                        ..*base
                    })),
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub config: TrainConfig,
    pub validation_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub algorithm: Algorithm,
    pub best: TrainConfig,
    pub best_loss: f64,
    pub cells: Vec<CellResult>,
}

/// Lower loss first; ties go to smaller C, then smaller gamma, with the
/// linear kernel before any RBF cell.
fn cell_order(a: &CellResult, b: &CellResult) -> Ordering {
    let gamma = |k: &Kernel| match k {
        Kernel::Linear => None,
        Kernel::Rbf { gamma } => Some(*gamma),
    };
    let by_gamma = match (gamma(&a.config.kernel), gamma(&b.config.kernel)) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(&y),
    };
    a.validation_loss
        .total_cmp(&b.validation_loss)
        .then(a.config.c.total_cmp(&b.config.c))
        .then(by_gamma)
}

/// Trains one model per grid cell on the training data and picks the cell
/// with the lowest validation 0/1 loss. Cells run concurrently.
#[allow(clippy::too_many_arguments)]
pub fn grid_search(
    algorithm: Algorithm,
    train_x: &[SparseVector],
    train_y: &[LabelSet],
    val_x: &[SparseVector],
    val_y: &[LabelSet],
    n_labels: usize,
    grid: &GridSpec,
    base: &TrainConfig,
    ecc: &EccConfig,
) -> Result<GridResult, PipelineError> {
    grid.validate()?;
    let configs = grid.cells(base);
    let cells = par::try_map_indexed(configs.len(), |i| {
        let cfg = configs[i];
        let model = fit(algorithm, train_x, train_y, n_labels, &cfg, ecc)?;
        let records = val_x
            .iter()
            .zip(val_y)
            .enumerate()
            .map(|(k, (x, y))| {
                Ok(
                    PredictionRecord::new(k.to_string(), algorithm.tag(), model.predict(x)?.labels)
                        .with_truth(y.clone()),
                )
            })
            .collect::<Result<Vec<_>, PipelineError>>()?;
        Ok::<_, PipelineError>(CellResult {
            config: cfg,
            validation_loss: zero_one_loss(&records)?,
        })
    })?;
    let best = cells
        .iter()
        .min_by(|a, b| cell_order(a, b))
        .expect("grid has at least one cell")
        .clone();
    Ok(GridResult {
        algorithm,
        best: best.config,
        best_loss: best.validation_loss,
        cells,
    })
}

/// Grid search on a dataset split: preprocessing and TF-IDF are fitted on
/// the training part, losses measured on the validation part.
pub fn tune(
    dataset: &Dataset,
    split: &Split,
    algorithm: Algorithm,
    grid: &GridSpec,
    cfg: &ExperimentConfig,
) -> Result<GridResult, PipelineError> {
    split.check_against(dataset)?;
    let pre = Preprocessor::new(cfg.rules.clone(), cfg.lemmatizer.clone())?;
    let part = |ids: &[String]| -> Result<_, PipelineError> {
        let records = dataset.select(ids)?;
        let docs = par::map_indexed(records.len(), |i| {
            pre.process(&RawAnswer::new(records[i].id.as_str(), records[i].text.as_str()))
        });
        let labels: Vec<LabelSet> = records.iter().map(|r| r.labels.clone()).collect();
        Ok((docs, labels))
    };
    let (train_docs, train_y) = part(&split.train)?;
    let (val_docs, val_y) = part(&split.validation)?;
    let features = TfidfModel::fit(&train_docs, cfg.features)?;
    grid_search(
        algorithm,
        &features.transform_all(&train_docs),
        &train_y,
        &features.transform_all(&val_docs),
        &val_y,
        dataset.space.len(),
        grid,
        &cfg.svm,
        &cfg.ecc,
    )
}
