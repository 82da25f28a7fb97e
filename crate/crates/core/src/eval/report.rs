use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{
    hamming_loss, loss_by_true_count, predicted_count_distribution, zero_one_loss, EvalError, PredictionRecord,
};
use crate::multilabel::LabelSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model_tag: String,
    pub n_records: usize,
    pub overall_zero_one: f64,
    /// True number of labels -> 0/1 loss within that group.
    pub zero_one_by_true_count: BTreeMap<usize, f64>,
    pub hamming: f64,
    /// Predicted number of labels -> percent of records.
    pub predicted_count_distribution: BTreeMap<usize, f64>,
}

pub fn evaluate(records: &[PredictionRecord], space: &LabelSpace) -> Result<EvalReport, EvalError> {
    let model_tag = records.first().map(|r| r.model_tag.clone()).unwrap_or_default();
    Ok(EvalReport {
        model_tag,
        n_records: records.len(),
        overall_zero_one: zero_one_loss(records)?,
        zero_one_by_true_count: loss_by_true_count(records)?,
        hamming: hamming_loss(records, space)?,
        predicted_count_distribution: predicted_count_distribution(records),
    })
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, "{cell:<w$}", w = widths[0]);
            } else {
                let _ = write!(line, "  {cell:>w$}", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Two plain-text tables: 0/1 loss by true label count (losses to four
/// decimals) and the predicted label-count distribution (percent, one
/// decimal). Reports are listed in the given order.
pub fn render_table(reports: &[EvalReport]) -> String {
    let true_counts: BTreeSet<usize> = reports
        .iter()
        .flat_map(|r| r.zero_one_by_true_count.keys().copied())
        .collect();
    let mut loss_rows = vec![{
        let mut h = vec!["model".to_owned(), "overall".to_owned()];
        h.extend(true_counts.iter().map(|k| k.to_string()));
        h.push("hamming".to_owned());
        h
    }];
    for r in reports {
        let mut row = vec![r.model_tag.clone(), format!("{:.4}", r.overall_zero_one)];
        row.extend(true_counts.iter().map(|k| {
            r.zero_one_by_true_count
                .get(k)
                .map_or_else(|| "-".to_owned(), |v| format!("{v:.4}"))
        }));
        row.push(format!("{:.4}", r.hamming));
        loss_rows.push(row);
    }

    let max_pred = reports
        .iter()
        .filter_map(|r| r.predicted_count_distribution.keys().max().copied())
        .max()
        .unwrap_or(0);
    let mut dist_rows = vec![{
        let mut h = vec!["model".to_owned()];
        h.extend((0..=max_pred).map(|k| k.to_string()));
        h
    }];
    for r in reports {
        let mut row = vec![r.model_tag.clone()];
        row.extend(
            (0..=max_pred).map(|k| format!("{:.1}", r.predicted_count_distribution.get(&k).copied().unwrap_or(0.0))),
        );
        dist_rows.push(row);
    }

    format!(
        "0/1 loss by true number of labels\n{}\npredicted number of labels (%)\n{}",
        aligned(&loss_rows),
        aligned(&dist_rows)
    )
}
