//! Classifier chains and ensembles of chains.
//!
//! Classifier k of a chain sees the document features followed by k
//! indicator columns, one per earlier label in chain order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{binary_column, validate_training, LabelSet, MultiLabelError};
use crate::par;
use crate::sparse::SparseVector;
use crate::svm::{predict_from_margin, train_binary, BinaryModel, TrainConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub order: Vec<usize>,
    pub bootstrap_seed: u64,
}

impl ChainSpec {
    pub fn identity(n_labels: usize) -> Self {
        Self {
            order: (0..n_labels).collect(),
            bootstrap_seed: 0,
        }
    }

    pub fn validate(&self, n_labels: usize) -> Result<(), MultiLabelError> {
        let mut seen = vec![false; n_labels];
        if self.order.len() != n_labels {
            return Err(MultiLabelError::InvalidChainOrder(n_labels));
        }
        for &l in &self.order {
            if l >= n_labels || std::mem::replace(&mut seen[l], true) {
                return Err(MultiLabelError::InvalidChainOrder(n_labels));
            }
        }
        Ok(())
    }
}

/// Source of the earlier-label indicators while training.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainTraining {
    /// True labels of the training example.
    #[default]
    GroundTruth,
    /// The chain's own predictions on the training example.
    Predicted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    pub order: Vec<usize>,
    /// `models[k]` predicts label `order[k]`.
    pub models: Vec<BinaryModel>,
    pub base_dim: usize,
}

impl ChainModel {
    pub fn n_labels(&self) -> usize {
        self.order.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainPrediction {
    pub labels: LabelSet,
    /// 0/1 per label index.
    pub binary: Vec<u8>,
    /// Margin per label index.
    pub margins: Vec<f64>,
}

pub fn cc_fit(
    x: &[SparseVector],
    y: &[LabelSet],
    n_labels: usize,
    spec: &ChainSpec,
    cfg: &TrainConfig,
    training: ChainTraining,
) -> Result<ChainModel, MultiLabelError> {
    validate_training(x, y, n_labels)?;
    spec.validate(n_labels)?;
    let base_dim = x[0].dim();
    // indicator values of earlier labels, per example, in chain order
    let mut history: Vec<Vec<f64>> = vec![Vec::with_capacity(n_labels); x.len()];
    let mut models = Vec::with_capacity(n_labels);
    for &label in &spec.order {
        let augmented: Vec<SparseVector> = x.iter().zip(&history).map(|(xi, h)| xi.augmented(h)).collect();
        let target = binary_column(y, label);
        let model = train_binary(&augmented, &target, cfg)?;
        for (i, h) in history.iter_mut().enumerate() {
            let value = match training {
                ChainTraining::GroundTruth => y[i].contains(label),
                ChainTraining::Predicted => model.predict(&augmented[i])? > 0,
            };
            h.push(if value { 1.0 } else { 0.0 });
        }
        models.push(model);
    }
    Ok(ChainModel {
        order: spec.order.clone(),
        models,
        base_dim,
    })
}

pub fn cc_predict(chain: &ChainModel, x: &SparseVector) -> Result<ChainPrediction, MultiLabelError> {
    let n = chain.n_labels();
    let mut history = Vec::with_capacity(n);
    let mut binary = vec![0u8; n];
    let mut margins = vec![0.0; n];
    for (model, &label) in chain.models.iter().zip(&chain.order) {
        let margin = model.decision(&x.augmented(&history))?;
        let on = predict_from_margin(margin) > 0;
        history.push(if on { 1.0 } else { 0.0 });
        binary[label] = u8::from(on);
        margins[label] = margin;
    }
    let labels = binary
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(l, _)| l)
        .collect();
    Ok(ChainPrediction {
        labels,
        binary,
        margins,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EccConfig {
    pub n_chains: usize,
    /// A label is predicted when at least this fraction of chains vote for it.
    pub vote_threshold: f64,
    pub seed: u64,
    /// Train each chain on a bootstrap resample of the training set.
    pub bootstrap: bool,
    pub chain_training: ChainTraining,
}

impl Default for EccConfig {
    fn default() -> Self {
        Self {
            n_chains: 10,
            vote_threshold: 0.5,
            seed: 0,
            bootstrap: true,
            chain_training: ChainTraining::GroundTruth,
        }
    }
}

impl EccConfig {
    pub fn validate(&self) -> Result<(), MultiLabelError> {
        if self.n_chains == 0 {
            return Err(MultiLabelError::InvalidConfig("n_chains must be at least 1".into()));
        }
        if !(self.vote_threshold > 0.0 && self.vote_threshold <= 1.0) {
            return Err(MultiLabelError::InvalidConfig(format!(
                "vote_threshold must lie in (0, 1], got {}",
                self.vote_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EccModel {
    pub config: EccConfig,
    pub specs: Vec<ChainSpec>,
    pub chains: Vec<ChainModel>,
}

impl EccModel {
    pub fn n_labels(&self) -> usize {
        self.chains.first().map_or(0, ChainModel::n_labels)
    }
}

/// SplitMix64 finalizer, used to derive independent per-chain seeds.
fn mix_seed(seed: u64, chain: u64) -> u64 {
    let mut z = seed.wrapping_add(chain.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Chain `m`'s label order and bootstrap row indices (None when bootstrap
/// is off), both drawn from the same per-chain generator.
pub(crate) fn chain_plan(
    config: &EccConfig,
    m: usize,
    n_labels: usize,
    n_rows: usize,
) -> (ChainSpec, Option<Vec<usize>>) {
    let chain_seed = mix_seed(config.seed, m as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(chain_seed);
    let mut order: Vec<usize> = (0..n_labels).collect();
    order.shuffle(&mut rng);
    let rows = config
        .bootstrap
        .then(|| (0..n_rows).map(|_| rng.gen_range(0..n_rows)).collect());
    (
        ChainSpec {
            order,
            bootstrap_seed: chain_seed,
        },
        rows,
    )
}

pub fn ecc_fit(
    x: &[SparseVector],
    y: &[LabelSet],
    n_labels: usize,
    config: &EccConfig,
    cfg: &TrainConfig,
) -> Result<EccModel, MultiLabelError> {
    config.validate()?;
    validate_training(x, y, n_labels)?;
    let results = par::try_map_indexed(config.n_chains, |m| {
        let (spec, rows) = chain_plan(config, m, n_labels, x.len());
        let chain = match rows {
            Some(rows) => {
                let xs: Vec<SparseVector> = rows.iter().map(|&r| x[r].clone()).collect();
                let ys: Vec<LabelSet> = rows.iter().map(|&r| y[r].clone()).collect();
                cc_fit(&xs, &ys, n_labels, &spec, cfg, config.chain_training)?
            }
            None => cc_fit(x, y, n_labels, &spec, cfg, config.chain_training)?,
        };
        Ok::<_, MultiLabelError>((spec, chain))
    })?;
    let (specs, chains) = results.into_iter().unzip();
    Ok(EccModel {
        config: *config,
        specs,
        chains,
    })
}

/// Majority vote over chains; returns the label set and per-label vote
/// fractions (multiples of 1/n_chains).
pub fn ecc_predict(model: &EccModel, x: &SparseVector) -> Result<(LabelSet, Vec<f64>), MultiLabelError> {
    let n_labels = model.n_labels();
    let mut votes = vec![0usize; n_labels];
    for chain in &model.chains {
        let p = cc_predict(chain, x)?;
        for (v, b) in votes.iter_mut().zip(&p.binary) {
            *v += usize::from(*b);
        }
    }
    let n = model.chains.len() as f64;
    let fractions: Vec<f64> = votes.iter().map(|&v| v as f64 / n).collect();
    let labels = fractions
        .iter()
        .enumerate()
        .filter(|(_, &f)| f >= model.config.vote_threshold)
        .map(|(l, _)| l)
        .collect();
    Ok((labels, fractions))
}
