//! Line-oriented prediction files shared with external models.
//!
//! One JSON object per line:
//! `{"id": "...", "model_tag": "...", "predicted": ["2400"], "scores": {"2400": 0.7, ...}}`.
//! `scores` is optional but, when present, must cover every label code.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, write_file, Dataset, PipelineError};
use crate::eval::PredictionRecord;
use crate::multilabel::{LabelSet, LabelSpace};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Line {
    id: String,
    model_tag: String,
    predicted: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scores: Option<BTreeMap<String, f64>>,
}

/// Serializes records, one line each, in the given order.
pub fn render_predictions(records: &[PredictionRecord], space: &LabelSpace) -> Result<String, PipelineError> {
    let mut out = String::new();
    for r in records {
        let scores = match &r.scores {
            None => None,
            Some(s) => {
                if s.len() != space.len() {
                    return Err(PipelineError::Config(format!(
                        "record {:?} has {} scores for {} labels",
                        r.record_id,
                        s.len(),
                        space.len()
                    )));
                }
                if let Some(bad) = s.iter().find(|v| !v.is_finite()) {
                    return Err(PipelineError::Config(format!(
                        "record {:?} has non-finite score {bad}",
                        r.record_id
                    )));
                }
                Some(
                    s.iter()
                        .enumerate()
                        .map(|(l, &v)| (space.code(l).to_owned(), v))
                        .collect(),
                )
            }
        };
        let line = Line {
            id: r.record_id.clone(),
            model_tag: r.model_tag.clone(),
            predicted: space.decode(&r.predicted),
            scores,
        };
        out.push_str(&serde_json::to_string(&line)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_predictions(path: &Path, records: &[PredictionRecord], space: &LabelSpace) -> Result<(), PipelineError> {
    write_file(path, render_predictions(records, space)?.as_bytes())
}

/// Parses interchange text. Blank lines are skipped; errors carry 1-based
/// line numbers.
pub fn parse_predictions(text: &str, space: &LabelSpace) -> Result<Vec<PredictionRecord>, PipelineError> {
    let mut records = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(raw).map_err(|e| PipelineError::Malformed {
            line,
            message: e.to_string(),
        })?;
        if let Some(&first) = seen.get(&parsed.id) {
            return Err(PipelineError::DuplicateId {
                id: parsed.id,
                first,
                second: line,
            });
        }
        let index = |code: &str| {
            space.index_of(code).ok_or_else(|| PipelineError::UnknownCode {
                line,
                code: code.to_owned(),
            })
        };
        let mut predicted = LabelSet::new();
        for code in &parsed.predicted {
            if !predicted.insert(index(code)?) {
                return Err(PipelineError::Malformed {
                    line,
                    message: format!("code {code:?} listed twice"),
                });
            }
        }
        let scores = match parsed.scores {
            None => None,
            Some(map) => {
                let mut v = vec![f64::NAN; space.len()];
                for (code, s) in &map {
                    v[index(code)?] = *s;
                }
                if map.len() != space.len() {
                    return Err(PipelineError::Malformed {
                        line,
                        message: format!("scores cover {} of {} labels", map.len(), space.len()),
                    });
                }
                Some(v)
            }
        };
        seen.insert(parsed.id.clone(), line);
        records.push(PredictionRecord {
            record_id: parsed.id,
            model_tag: parsed.model_tag,
            predicted,
            truth: None,
            scores,
        });
    }
    Ok(records)
}

pub fn import_predictions(path: &Path, space: &LabelSpace) -> Result<Vec<PredictionRecord>, PipelineError> {
    parse_predictions(&read_file(path)?, space)
}

/// Fills in ground truth from the dataset; every record id must exist.
pub fn attach_truth(records: &mut [PredictionRecord], dataset: &Dataset) -> Result<(), PipelineError> {
    let truth: HashMap<&str, &LabelSet> = dataset.records.iter().map(|r| (r.id.as_str(), &r.labels)).collect();
    for r in records {
        let t = truth
            .get(r.record_id.as_str())
            .ok_or_else(|| PipelineError::UnknownRecord(r.record_id.clone()))?;
        r.truth = Some((*t).clone());
    }
    Ok(())
}
