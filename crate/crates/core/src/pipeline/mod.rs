//! Data ingestion, splitting, grid search, experiments, interchange files
//! and triage.

mod config;
mod dataset;
mod experiment;
mod grid;
mod interchange;
mod split;
mod triage;

use std::path::{Path, PathBuf};

pub use config::ToolkitConfig;
pub use dataset::{
    dataset_stats, load_answers, load_dataset, read_dataset, write_dataset, AnswerRecord, Dataset, DatasetSpec,
    DatasetStats, LabelCount,
};
pub use experiment::{predict_records, run_experiment, train_model, ExperimentConfig, ExperimentOutcome, ModelBundle};
pub use grid::{grid_search, tune, CellResult, GridResult, GridSpec, KernelKind};
pub use interchange::{attach_truth, import_predictions, parse_predictions, render_predictions, write_predictions};
pub use split::{split, split_ids, Split, SplitConfig, SplitFractions, SplitMix64};
pub use triage::{triage, AutoCoded, ManualItem, TriageReport};

use crate::eval::EvalError;
use crate::features::FeatureError;
use crate::multilabel::MultiLabelError;
use crate::textprep::TextprepError;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Csv { path: String, message: String },
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("line {line}: empty label field for record {id:?}")]
    EmptyLabels { line: u64, id: String },
    #[error("line {line}: empty record id")]
    EmptyId { line: u64 },
    #[error("duplicate record id {id:?} on lines {first} and {second}")]
    DuplicateId { id: String, first: u64, second: u64 },
    #[error("line {line}: unknown label code {code:?}")]
    UnknownCode { line: u64, code: String },
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("{n} records are too few for a {train}/{validation}/{test} split")]
    TooFewRecords {
        n: usize,
        train: f64,
        validation: f64,
        test: f64,
    },
    #[error("record {0:?} not found in dataset")]
    UnknownRecord(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("model bundle: {0}")]
    Bundle(String),
    #[error(transparent)]
    Textprep(#[from] TextprepError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    MultiLabel(#[from] MultiLabelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn read_file(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, contents: &[u8]) -> Result<(), PipelineError> {
    crate::io::write_atomic(path, contents).map_err(|source| PipelineError::Io {
        path: path.to_owned(),
        source,
    })
}
