use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::eval::PredictionRecord;
use crate::multilabel::LabelSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoCoded {
    pub id: String,
    pub code: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManualItem {
    pub id: String,
    pub predicted: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<BTreeMap<String, f64>>,
}

/// Singleton predictions are accepted automatically; everything else goes
/// to human coders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriageReport {
    pub auto: Vec<AutoCoded>,
    pub manual: Vec<ManualItem>,
    pub auto_fraction: f64,
    /// 0/1 loss within the automatic subset, when every record has truth.
    pub auto_zero_one: Option<f64>,
}

pub fn triage(records: &[PredictionRecord], space: &LabelSpace) -> TriageReport {
    let mut auto = Vec::new();
    let mut manual = Vec::new();
    let mut auto_wrong = 0usize;
    for r in records {
        if r.predicted.len() == 1 {
            let label = r.predicted.iter().next().expect("one label");
            auto.push(AutoCoded {
                id: r.record_id.clone(),
                code: space.code(label).to_owned(),
            });
            auto_wrong += usize::from(r.is_correct() == Some(false));
        } else {
            manual.push(ManualItem {
                id: r.record_id.clone(),
                predicted: space.decode(&r.predicted),
                scores: r.scores.as_ref().map(|s| {
                    s.iter()
                        .enumerate()
                        .map(|(l, &v)| (space.code(l).to_owned(), v))
                        .collect()
                }),
            });
        }
    }
    let all_truth = records.iter().all(|r| r.truth.is_some());
    let auto_zero_one = (all_truth && !auto.is_empty()).then(|| auto_wrong as f64 / auto.len() as f64);
    let auto_fraction = if records.is_empty() {
        0.0
    } else {
        auto.len() as f64 / records.len() as f64
    };
    TriageReport {
        auto,
        manual,
        auto_fraction,
        auto_zero_one,
    }
}

impl TriageReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "automatic     {} ({:.1}%)",
            self.auto.len(),
            100.0 * self.auto_fraction
        );
        let _ = writeln!(s, "manual queue  {}", self.manual.len());
        if let Some(loss) = self.auto_zero_one {
            let _ = writeln!(s, "automatic 0/1 loss  {loss:.4}");
        }
        s
    }
}
