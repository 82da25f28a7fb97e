//! Browser demo: text normalization, a 2-D SVM decision field and a small
//! BR/ECC comparison on a synthetic corpus.
//!
//! The plain functions return JSON strings and are usable natively; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use serde::{Deserialize, Serialize};
use surveycode::eval::render_table;
use surveycode::multilabel::Algorithm;
use surveycode::pipeline::{run_experiment, split, ExperimentConfig, SplitConfig};
use surveycode::sparse::SparseVector;
use surveycode::svm::{train_binary, Kernel, TrainConfig};
use surveycode::synthetic::{correlated_corpus, CorrelatedCorpusConfig};
use surveycode::textprep::{NormalizationRules, Normalizer};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Normalized {
    normalized: String,
    tokens: Vec<String>,
}

pub fn normalize_json(text: &str) -> Result<String, String> {
    let norm = Normalizer::new(NormalizationRules::default()).map_err(|e| e.to_string())?;
    let normalized = norm.normalize(text);
    let tokens = norm.tokenize(&normalized);
    serde_json::to_string(&Normalized { normalized, tokens }).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
struct Point {
    x: f64,
    y: f64,
    label: i8,
}

#[derive(Serialize)]
struct Field {
    resolution: usize,
    /// Row-major decision values over [-1, 1]^2, first row at y = 1.
    values: Vec<f64>,
    training_errors: usize,
}

/// Trains a binary SVM on clicked points and samples its decision function.
/// `gamma <= 0` selects the linear kernel.
pub fn decision_field_json(points: &str, c: f64, gamma: f64, resolution: usize) -> Result<String, String> {
    let points: Vec<Point> = serde_json::from_str(points).map_err(|e| e.to_string())?;
    if points.is_empty() {
        return Err("no points".into());
    }
    if !(2..=200).contains(&resolution) {
        return Err("resolution must be between 2 and 200".into());
    }
    let x: Vec<SparseVector> = points.iter().map(|p| SparseVector::from_dense(&[p.x, p.y])).collect();
    let y: Vec<f64> = points.iter().map(|p| if p.label > 0 { 1.0 } else { -1.0 }).collect();
    let kernel = if gamma > 0.0 {
        Kernel::Rbf { gamma }
    } else {
        Kernel::Linear
    };
    let cfg = TrainConfig {
        c,
        kernel,
        ..TrainConfig::default()
    };
    let model = train_binary(&x, &y, &cfg).map_err(|e| e.to_string())?;
    let step = 2.0 / (resolution - 1) as f64;
    let mut values = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        for col in 0..resolution {
            let p = SparseVector::from_dense(&[-1.0 + col as f64 * step, 1.0 - row as f64 * step]);
            values.push(model.decision(&p).map_err(|e| e.to_string())?);
        }
    }
    let mut training_errors = 0;
    for (xi, &yi) in x.iter().zip(&y) {
        let m = model.decision(xi).map_err(|e| e.to_string())?;
        training_errors += usize::from((m >= 0.0) != (yi > 0.0));
    }
    serde_json::to_string(&Field {
        resolution,
        values,
        training_errors,
    })
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Comparison {
    br: f64,
    ecc: f64,
    table: String,
}

/// BR against ECC on a seeded correlated-label corpus.
pub fn compare_json(n_records: usize, seed: u64) -> Result<String, String> {
    if !(50..=2000).contains(&n_records) {
        return Err("n_records must be between 50 and 2000".into());
    }
    let corpus = correlated_corpus(&CorrelatedCorpusConfig {
        n_records,
        seed,
        ..CorrelatedCorpusConfig::default()
    });
    let s = split(&corpus.dataset, &SplitConfig::default()).map_err(|e| e.to_string())?;
    let cfg = ExperimentConfig::default();
    let mut reports = Vec::new();
    for alg in [Algorithm::Br, Algorithm::Ecc] {
        let out = run_experiment(&corpus.dataset, &s, alg, &cfg).map_err(|e| e.to_string())?;
        reports.push(out.report);
    }
    serde_json::to_string(&Comparison {
        br: reports[0].overall_zero_one,
        ecc: reports[1].overall_zero_one,
        table: render_table(&reports),
    })
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn normalize(text: &str) -> Result<String, JsValue> {
    normalize_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decision_field(points: &str, c: f64, gamma: f64, resolution: usize) -> Result<String, JsValue> {
    decision_field_json(points, c, gamma, resolution).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn compare(n_records: usize, seed: u32) -> Result<String, JsValue> {
    compare_json(n_records, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}
