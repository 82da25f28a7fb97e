//! Multi-label meta-algorithms over the SVM base learner.

mod br;
mod chain;
mod fallback;
mod labels;
mod lp;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::sparse::SparseVector;
use crate::svm::SvmError;

pub use br::{br_fit, br_predict, BrModel};
pub use chain::{
    cc_fit, cc_predict, ecc_fit, ecc_predict, ChainModel, ChainPrediction, ChainSpec, ChainTraining, EccConfig,
    EccModel,
};
pub use fallback::force_min_one_label;
pub use labels::{label_frequencies, LabelSet, LabelSpace, LabelsetRegistry};
pub use lp::{lp_fit, lp_predict, LpModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MultiLabelError {
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("{features} feature vectors but {labels} label sets")]
    LengthMismatch { features: usize, labels: usize },
    #[error("training example {0} has an empty label set")]
    EmptyLabelSet(usize),
    #[error("label index {index} outside label space of size {n_labels}")]
    LabelOutOfRange { index: usize, n_labels: usize },
    #[error("chain order is not a permutation of 0..{0}")]
    InvalidChainOrder(usize),
    #[error("duplicate label code {0:?}")]
    DuplicateCode(String),
    #[error("unknown label code {0:?}")]
    UnknownCode(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Svm(#[from] SvmError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Br,
    Lp,
    Cc,
    Ecc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Br, Algorithm::Lp, Algorithm::Cc, Algorithm::Ecc];

    pub fn tag(&self) -> &'static str {
        match self {
            Algorithm::Br => "br",
            Algorithm::Lp => "lp",
            Algorithm::Cc => "cc",
            Algorithm::Ecc => "ecc",
        }
    }

    pub fn display_name(&self) -> &'static str {
        match self {
            Algorithm::Br => "Binary Relevance",
            Algorithm::Lp => "Label Powerset",
            Algorithm::Cc => "Classifier Chain",
            Algorithm::Ecc => "ECC",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "br" => Ok(Algorithm::Br),
            "lp" => Ok(Algorithm::Lp),
            "cc" => Ok(Algorithm::Cc),
            "ecc" => Ok(Algorithm::Ecc),
            other => Err(format!("unknown algorithm {other:?} (expected br, lp, cc or ecc)")),
        }
    }
}

/// A predicted label set with optional per-label scores.
///
/// Scores are margins for BR and CC and vote fractions for ECC; LP has none.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub labels: LabelSet,
    pub scores: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum TrainedModel {
    Br(BrModel),
    Lp(LpModel),
    Cc(ChainModel),
    Ecc(EccModel),
}

impl TrainedModel {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            TrainedModel::Br(_) => Algorithm::Br,
            TrainedModel::Lp(_) => Algorithm::Lp,
            TrainedModel::Cc(_) => Algorithm::Cc,
            TrainedModel::Ecc(_) => Algorithm::Ecc,
        }
    }

    pub fn n_labels(&self) -> usize {
        match self {
            TrainedModel::Br(m) => m.n_labels(),
            TrainedModel::Lp(m) => m.n_labels,
            TrainedModel::Cc(m) => m.n_labels(),
            TrainedModel::Ecc(m) => m.n_labels(),
        }
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Prediction, MultiLabelError> {
        Ok(match self {
            TrainedModel::Br(m) => {
                let (labels, margins) = br_predict(m, x)?;
                Prediction {
                    labels,
                    scores: Some(margins),
                }
            }
            TrainedModel::Lp(m) => Prediction {
                labels: lp_predict(m, x)?,
                scores: None,
            },
            TrainedModel::Cc(m) => {
                let p = cc_predict(m, x)?;
                Prediction {
                    labels: p.labels,
                    scores: Some(p.margins),
                }
            }
            TrainedModel::Ecc(m) => {
                let (labels, fractions) = ecc_predict(m, x)?;
                Prediction {
                    labels,
                    scores: Some(fractions),
                }
            }
        })
    }
}

/// Fits the chosen meta-algorithm. A standalone classifier chain uses the
/// label-space order.
pub fn fit(
    algorithm: Algorithm,
    x: &[SparseVector],
    y: &[LabelSet],
    n_labels: usize,
    svm: &crate::svm::TrainConfig,
    ecc: &EccConfig,
) -> Result<TrainedModel, MultiLabelError> {
    Ok(match algorithm {
        Algorithm::Br => TrainedModel::Br(br_fit(x, y, n_labels, svm)?),
        Algorithm::Lp => TrainedModel::Lp(lp_fit(x, y, n_labels, svm)?),
        Algorithm::Cc => {
            let spec = ChainSpec::identity(n_labels);
            TrainedModel::Cc(cc_fit(x, y, n_labels, &spec, svm, ecc.chain_training)?)
        }
        Algorithm::Ecc => TrainedModel::Ecc(ecc_fit(x, y, n_labels, ecc, svm)?),
    })
}

pub(crate) fn validate_training(x: &[SparseVector], y: &[LabelSet], n_labels: usize) -> Result<(), MultiLabelError> {
    if x.len() != y.len() {
        return Err(MultiLabelError::LengthMismatch {
            features: x.len(),
            labels: y.len(),
        });
    }
    if x.is_empty() {
        return Err(MultiLabelError::EmptyTrainingSet);
    }
    for set in y {
        if let Some(index) = set.iter().find(|&i| i >= n_labels) {
            return Err(MultiLabelError::LabelOutOfRange { index, n_labels });
        }
    }
    Ok(())
}

/// ±1 column for one label.
pub(crate) fn binary_column(y: &[LabelSet], label: usize) -> Vec<f64> {
    y.iter().map(|s| if s.contains(label) { 1.0 } else { -1.0 }).collect()
}
