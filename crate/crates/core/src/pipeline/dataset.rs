use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{write_file, PipelineError};
use crate::eval::{kappa_answer_level, kappa_label_level};
use crate::multilabel::{label_frequencies, LabelSet, LabelSpace};
use crate::textprep::RawAnswer;

/// Where the answers live and how to read them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub id_column: String,
    pub text_column: String,
    pub labels_column: String,
    pub label_delimiter: String,
    /// Optional column holding a second coder's labels, used for kappa.
    pub second_coder_column: Option<String>,
    /// Fixed label space; when absent the observed codes are used.
    pub codes: Option<Vec<String>>,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            path: PathBuf::new(),
            id_column: "id".into(),
            text_column: "text".into(),
            labels_column: "labels".into(),
            label_delimiter: ";".into(),
            second_coder_column: None,
            codes: None,
        }
    }
}

impl DatasetSpec {
    pub fn at(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerRecord {
    pub id: String,
    pub text: String,
    pub labels: LabelSet,
    pub second_coder: Option<LabelSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<AnswerRecord>,
    pub space: LabelSpace,
}

impl Dataset {
    pub fn ids(&self) -> Vec<String> {
        self.records.iter().map(|r| r.id.clone()).collect()
    }

    /// Records with the given ids, in the order given.
    pub fn select(&self, ids: &[String]) -> Result<Vec<&AnswerRecord>, PipelineError> {
        let index: HashMap<&str, usize> = self
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.id.as_str(), i))
            .collect();
        ids.iter()
            .map(|id| {
                index
                    .get(id.as_str())
                    .map(|&i| &self.records[i])
                    .ok_or_else(|| PipelineError::UnknownRecord(id.clone()))
            })
            .collect()
    }
}

fn split_codes<'a>(field: &'a str, delimiter: &'a str) -> impl Iterator<Item = &'a str> {
    field.split(delimiter).map(str::trim).filter(|c| !c.is_empty())
}

pub fn load_dataset(spec: &DatasetSpec) -> Result<Dataset, PipelineError> {
    let file = std::fs::File::open(&spec.path).map_err(|source| PipelineError::Io {
        path: spec.path.clone(),
        source,
    })?;
    read_dataset(file, spec, &spec.path.display().to_string())
}

/// Parses a CSV answers table. `source` names the input in error messages.
pub fn read_dataset<R: Read>(reader: R, spec: &DatasetSpec, source: &str) -> Result<Dataset, PipelineError> {
    let csv_err = |e: csv::Error| PipelineError::Csv {
        path: source.to_owned(),
        message: e.to_string(),
    };
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| PipelineError::MissingColumn(name.to_owned()))
    };
    let id_col = column(&spec.id_column)?;
    let text_col = column(&spec.text_column)?;
    let labels_col = column(&spec.labels_column)?;
    let coder2_col = spec.second_coder_column.as_deref().map(column).transpose()?;

    struct Row {
        line: u64,
        id: String,
        text: String,
        codes: Vec<String>,
        coder2: Option<Vec<String>>,
    }
    let mut rows = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for result in rdr.records() {
        let record = result.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record[id_col].trim().to_owned();
        if id.is_empty() {
            return Err(PipelineError::EmptyId { line });
        }
        if let Some(&first) = seen.get(&id) {
            return Err(PipelineError::DuplicateId {
                id,
                first,
                second: line,
            });
        }
        seen.insert(id.clone(), line);
        let codes: Vec<String> = split_codes(&record[labels_col], &spec.label_delimiter)
            .map(str::to_owned)
            .collect();
        if codes.is_empty() {
            return Err(PipelineError::EmptyLabels { line, id });
        }
        let coder2 = coder2_col.map(|c| {
            split_codes(&record[c], &spec.label_delimiter)
                .map(str::to_owned)
                .collect()
        });
        rows.push(Row {
            line,
            id,
            text: record[text_col].to_owned(),
            codes,
            coder2,
        });
    }

    let space = match &spec.codes {
        Some(codes) => LabelSpace::from_codes(codes.iter().cloned())?,
        None => LabelSpace::from_observed(
            rows.iter()
                .flat_map(|r| r.codes.iter().chain(r.coder2.iter().flatten()))
                .map(String::as_str),
        ),
    };
    let encode = |codes: &[String], line: u64| -> Result<LabelSet, PipelineError> {
        codes
            .iter()
            .map(|c| {
                space
                    .index_of(c)
                    .ok_or_else(|| PipelineError::UnknownCode { line, code: c.clone() })
            })
            .collect()
    };
    let records = rows
        .iter()
        .map(|r| {
            Ok(AnswerRecord {
                id: r.id.clone(),
                text: r.text.clone(),
                labels: encode(&r.codes, r.line)?,
                second_coder: r.coder2.as_deref().map(|c| encode(c, r.line)).transpose()?,
            })
        })
        .collect::<Result<_, PipelineError>>()?;
    Ok(Dataset { records, space })
}

/// Reads only the id and text columns, for answers that are not coded yet.
pub fn load_answers(spec: &DatasetSpec) -> Result<Vec<RawAnswer>, PipelineError> {
    let path = spec.path.display().to_string();
    let csv_err = |e: csv::Error| PipelineError::Csv {
        path: path.clone(),
        message: e.to_string(),
    };
    let file = std::fs::File::open(&spec.path).map_err(|source| PipelineError::Io {
        path: spec.path.clone(),
        source,
    })?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| PipelineError::MissingColumn(name.to_owned()))
    };
    let (id_col, text_col) = (column(&spec.id_column)?, column(&spec.text_column)?);
    let mut seen: HashMap<String, u64> = HashMap::new();
    let mut out = Vec::new();
    for result in rdr.records() {
        let record = result.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record[id_col].trim().to_owned();
        if id.is_empty() {
            return Err(PipelineError::EmptyId { line });
        }
        if let Some(first) = seen.insert(id.clone(), line) {
            return Err(PipelineError::DuplicateId {
                id,
                first,
                second: line,
            });
        }
        out.push(RawAnswer::new(id, &record[text_col]));
    }
    Ok(out)
}

/// Writes `id,text,labels` (plus `labels_coder2` when present) with ";"
/// between codes.
pub fn write_dataset(path: &Path, dataset: &Dataset) -> Result<(), PipelineError> {
    let with_coder2 = dataset.records.iter().any(|r| r.second_coder.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| PipelineError::Csv {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut header = vec!["id", "text", "labels"];
    if with_coder2 {
        header.push("labels_coder2");
    }
    w.write_record(&header).map_err(csv_err)?;
    for r in &dataset.records {
        let mut row = vec![r.id.clone(), r.text.clone(), dataset.space.decode(&r.labels).join(";")];
        if with_coder2 {
            row.push(
                r.second_coder
                    .as_ref()
                    .map(|s| dataset.space.decode(s).join(";"))
                    .unwrap_or_default(),
            );
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| PipelineError::Csv {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    write_file(path, &bytes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelCount {
    pub code: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n_records: usize,
    pub n_labels: usize,
    /// Mean number of labels per record.
    pub cardinality: f64,
    pub multi_label_percent: f64,
    pub max_labels: usize,
    pub top_labels: Vec<LabelCount>,
    pub kappa_label_level: Option<f64>,
    pub kappa_answer_level: Option<f64>,
}

pub fn dataset_stats(dataset: &Dataset, top_k: usize) -> Result<DatasetStats, PipelineError> {
    let records = &dataset.records;
    let n = records.len();
    let total: usize = records.iter().map(|r| r.labels.len()).sum();
    let multi = records.iter().filter(|r| r.labels.len() > 1).count();
    let labels: Vec<LabelSet> = records.iter().map(|r| r.labels.clone()).collect();
    let freq = label_frequencies(&labels, dataset.space.len());
    let mut order: Vec<usize> = (0..freq.len()).collect();
    order.sort_by(|&a, &b| freq[b].cmp(&freq[a]).then(a.cmp(&b)));
    let top_labels = order
        .into_iter()
        .take(top_k)
        .map(|l| LabelCount {
            code: dataset.space.code(l).to_owned(),
            count: freq[l],
        })
        .collect();

    let second: Option<Vec<LabelSet>> = records.iter().map(|r| r.second_coder.clone()).collect();
    let (kl, ka) = match second.filter(|s| !s.is_empty()) {
        Some(second) => (
            Some(kappa_label_level(&labels, &second, dataset.space.len())?),
            Some(kappa_answer_level(&labels, &second)?),
        ),
        None => (None, None),
    };
    let ratio = |num: usize| if n == 0 { 0.0 } else { num as f64 / n as f64 };
    Ok(DatasetStats {
        n_records: n,
        n_labels: dataset.space.len(),
        cardinality: ratio(total),
        multi_label_percent: 100.0 * ratio(multi),
        max_labels: records.iter().map(|r| r.labels.len()).max().unwrap_or(0),
        top_labels,
        kappa_label_level: kl,
        kappa_answer_level: ka,
    })
}

impl DatasetStats {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "records            {}", self.n_records);
        let _ = writeln!(s, "labels             {}", self.n_labels);
        let _ = writeln!(s, "cardinality        {:.2}", self.cardinality);
        let _ = writeln!(s, "multi-label        {:.1}%", self.multi_label_percent);
        let _ = writeln!(s, "max labels/record  {}", self.max_labels);
        if let (Some(kl), Some(ka)) = (self.kappa_label_level, self.kappa_answer_level) {
            let _ = writeln!(s, "kappa (labels)     {kl:.2}");
            let _ = writeln!(s, "kappa (answers)    {ka:.2}");
        }
        if !self.top_labels.is_empty() {
            let _ = writeln!(s, "most frequent labels");
            let width = self.top_labels.iter().map(|c| c.code.len()).max().unwrap_or(0);
            for c in &self.top_labels {
                let _ = writeln!(s, "  {:<width$}  {}", c.code, c.count);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(csv: &str) -> Result<Dataset, PipelineError> {
        read_dataset(csv.as_bytes(), &DatasetSpec::default(), "test.csv")
    }

    #[test]
    fn parses_labels() {
        let d =
            parse("id,text,labels\n7,egoismus,2400\n8,integration der fluechtlinge und alterung,3750;3740\n").unwrap();
        assert_eq!(d.space.codes(), ["2400", "3740", "3750"]);
        assert_eq!(d.space.decode(&d.records[0].labels), vec!["2400"]);
        assert_eq!(d.space.decode(&d.records[1].labels), vec!["3740", "3750"]);
    }

    #[test]
    fn keeps_empty_text() {
        let d = parse("id,text,labels\n1,,-99\n").unwrap();
        assert_eq!(d.records[0].text, "");
    }

    #[test]
    fn duplicate_id_names_both_lines() {
        let err = parse("id,text,labels\n1,a,2400\n2,b,2400\n1,c,2400\n").unwrap_err();
        match err {
            PipelineError::DuplicateId { id, first, second } => {
                assert_eq!((id.as_str(), first, second), ("1", 2, 4));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn empty_labels_and_missing_column() {
        assert!(matches!(
            parse("id,text,labels\n1,a,2400\n2,b, ; \n"),
            Err(PipelineError::EmptyLabels { line: 3, .. })
        ));
        assert!(matches!(parse("id,answer,labels\n"), Err(PipelineError::MissingColumn(c)) if c == "text"));
    }

    #[test]
    fn supplied_codes_reject_unknowns() {
        let spec = DatasetSpec {
            codes: Some(vec!["2400".into()]),
            ..DatasetSpec::default()
        };
        let err = read_dataset("id,text,labels\n1,a,2400\n2,b,9999\n".as_bytes(), &spec, "x").unwrap_err();
        assert!(matches!(err, PipelineError::UnknownCode { line: 3, code } if code == "9999"));
    }

    #[test]
    fn five_record_stats() {
        // cardinalities 1,2,1,3,1
        let d = parse("id,text,labels\n1,a,10\n2,b,10;20\n3,c,30\n4,d,10;20;30\n5,e,20\n").unwrap();
        let s = dataset_stats(&d, 2).unwrap();
        assert_eq!(s.n_records, 5);
        assert_eq!(s.n_labels, 3);
        assert!((s.cardinality - 8.0 / 5.0).abs() < 1e-12);
        assert!((s.multi_label_percent - 40.0).abs() < 1e-12);
        assert_eq!(s.max_labels, 3);
        assert_eq!(
            s.top_labels,
            vec![
                LabelCount {
                    code: "10".into(),
                    count: 3
                },
                LabelCount {
                    code: "20".into(),
                    count: 3
                }
            ]
        );
        assert_eq!(s.kappa_label_level, None);
    }

    #[test]
    fn single_label_stats() {
        let d = parse("id,text,labels\n1,a,10\n2,b,20\n").unwrap();
        let s = dataset_stats(&d, 5).unwrap();
        assert_eq!(s.cardinality, 1.0);
        assert_eq!(s.multi_label_percent, 0.0);
    }

    #[test]
    fn second_coder_kappa() {
        let spec = DatasetSpec {
            second_coder_column: Some("coder2".into()),
            ..DatasetSpec::default()
        };
        let csv = "id,text,labels,coder2\n1,a,10,10\n2,b,20,20\n3,c,10;20,10;20\n";
        let d = read_dataset(csv.as_bytes(), &spec, "x").unwrap();
        let s = dataset_stats(&d, 0).unwrap();
        assert_eq!(s.kappa_label_level, Some(1.0));
        assert_eq!(s.kappa_answer_level, Some(1.0));
    }

    #[test]
    fn answers_without_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("new.csv");
        std::fs::write(&path, "text,id\n\"egoismus, gier\",7\n,8\n").unwrap();
        let answers = load_answers(&DatasetSpec::at(&path)).unwrap();
        assert_eq!(
            answers,
            vec![RawAnswer::new("7", "egoismus, gier"), RawAnswer::new("8", "")]
        );
        std::fs::write(&path, "id,text\n7,a\n7,b\n").unwrap();
        assert!(matches!(
            load_answers(&DatasetSpec::at(&path)),
            Err(PipelineError::DuplicateId {
                first: 2,
                second: 3,
                ..
            })
        ));
    }

    #[test]
    fn write_read_round_trip() {
        let d = parse("id,text,labels\n1,\"hallo, welt\",10;20\n2,,30\n").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_dataset(&path, &d).unwrap();
        let back = load_dataset(&DatasetSpec::at(&path)).unwrap();
        assert_eq!(back, d);
    }
}
