//! Multi-label evaluation: 0/1 loss, Hamming loss, breakdowns and kappa.

mod kappa;
mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::multilabel::{LabelSet, LabelSpace};

pub use kappa::{cohen_kappa, kappa_answer_level, kappa_label_level};
pub use report::{evaluate, render_table, EvalReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no records to evaluate")]
    Empty,
    #[error("record {0:?} has no ground truth")]
    MissingTruth(String),
    #[error("record {0:?} has an empty ground-truth label set")]
    EmptyTruth(String),
    #[error("codings differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("degenerate marginals: chance agreement is 1 but observed agreement is {0}")]
    DegenerateMarginals(f64),
    #[error("label space is empty")]
    EmptyLabelSpace,
}

/// One answer's prediction, optionally with its true labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub record_id: String,
    pub model_tag: String,
    pub predicted: LabelSet,
    pub truth: Option<LabelSet>,
    /// One score per label index.
    pub scores: Option<Vec<f64>>,
}

impl PredictionRecord {
    pub fn new(record_id: impl Into<String>, model_tag: impl Into<String>, predicted: LabelSet) -> Self {
        Self {
            record_id: record_id.into(),
            model_tag: model_tag.into(),
            predicted,
            truth: None,
            scores: None,
        }
    }

    pub fn with_truth(mut self, truth: LabelSet) -> Self {
        self.truth = Some(truth);
        self
    }

    pub fn with_scores(mut self, scores: Vec<f64>) -> Self {
        self.scores = Some(scores);
        self
    }

    pub fn is_correct(&self) -> Option<bool> {
        self.truth.as_ref().map(|t| t == &self.predicted)
    }
}

/// Pairs of (predicted, truth); fails on empty input or missing/empty truth.
fn labelled(records: &[PredictionRecord]) -> Result<Vec<(&LabelSet, &LabelSet)>, EvalError> {
    if records.is_empty() {
        return Err(EvalError::Empty);
    }
    records
        .iter()
        .map(|r| match &r.truth {
            None => Err(EvalError::MissingTruth(r.record_id.clone())),
            Some(t) if t.is_empty() => Err(EvalError::EmptyTruth(r.record_id.clone())),
            Some(t) => Ok((&r.predicted, t)),
        })
        .collect()
}

/// Fraction of records whose predicted set differs from the true set.
pub fn zero_one_loss(records: &[PredictionRecord]) -> Result<f64, EvalError> {
    let pairs = labelled(records)?;
    let wrong = pairs.iter().filter(|(p, t)| p != t).count();
    Ok(wrong as f64 / pairs.len() as f64)
}

/// Mean over records of |predicted △ true| / L.
pub fn hamming_loss(records: &[PredictionRecord], space: &LabelSpace) -> Result<f64, EvalError> {
    if space.is_empty() {
        return Err(EvalError::EmptyLabelSpace);
    }
    let pairs = labelled(records)?;
    let l = space.len() as f64;
    let total: f64 = pairs
        .iter()
        .map(|(p, t)| p.symmetric_difference_len(t) as f64 / l)
        .sum();
    Ok(total / pairs.len() as f64)
}

/// 0/1 loss within each true-cardinality stratum. Absent strata are omitted.
pub fn loss_by_true_count(records: &[PredictionRecord]) -> Result<BTreeMap<usize, f64>, EvalError> {
    Ok(strata(&labelled(records)?)
        .into_iter()
        .map(|(k, (n, wrong))| (k, wrong as f64 / n as f64))
        .collect())
}

/// cardinality -> (records, wrong)
fn strata(pairs: &[(&LabelSet, &LabelSet)]) -> BTreeMap<usize, (usize, usize)> {
    let mut out: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (p, t) in pairs {
        let e = out.entry(t.len()).or_default();
        e.0 += 1;
        e.1 += usize::from(p != t);
    }
    out
}

/// Percent of records predicted with exactly k labels.
pub fn predicted_count_distribution(records: &[PredictionRecord]) -> BTreeMap<usize, f64> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for r in records {
        *counts.entry(r.predicted.len()).or_default() += 1;
    }
    let n = records.len() as f64;
    counts.into_iter().map(|(k, c)| (k, 100.0 * c as f64 / n)).collect()
}
