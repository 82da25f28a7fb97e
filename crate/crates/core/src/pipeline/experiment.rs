use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, write_file, AnswerRecord, Dataset, PipelineError, Split};
use crate::eval::{evaluate, EvalReport, PredictionRecord};
use crate::features::{FeatureOptions, TfidfModel};
use crate::multilabel::{
    fit, force_min_one_label, label_frequencies, Algorithm, EccConfig, LabelSet, LabelSpace, TrainedModel,
};
use crate::par;
use crate::svm::TrainConfig;
use crate::textprep::{LemmatizerSpec, NormalizationRules, Preprocessor, RawAnswer};

const BUNDLE_FORMAT: &str = "surveycode-model";
const BUNDLE_VERSION: u32 = 1;

/// Everything needed to train one model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub rules: NormalizationRules,
    pub lemmatizer: LemmatizerSpec,
    pub features: FeatureOptions,
    pub svm: TrainConfig,
    pub ecc: EccConfig,
    pub force_min_one: bool,
}

/// A trained model with its preprocessing and feature state; reloading it
/// reproduces predictions bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format: String,
    pub version: u32,
    pub model_tag: String,
    pub label_space: LabelSpace,
    pub label_frequencies: Vec<usize>,
    pub normalization: NormalizationRules,
    pub lemmatizer: LemmatizerSpec,
    pub features: TfidfModel,
    pub svm: TrainConfig,
    pub force_min_one: bool,
    pub model: TrainedModel,
}

fn model_tag(algorithm: Algorithm, force_min_one: bool) -> String {
    if force_min_one {
        format!("{}-min1", algorithm.tag())
    } else {
        algorithm.tag().to_owned()
    }
}

/// Fits preprocessing, TF-IDF and the meta-algorithm on `train_ids` only.
pub fn train_model(
    dataset: &Dataset,
    train_ids: &[String],
    algorithm: Algorithm,
    cfg: &ExperimentConfig,
) -> Result<ModelBundle, PipelineError> {
    let train = dataset.select(train_ids)?;
    let pre = Preprocessor::new(cfg.rules.clone(), cfg.lemmatizer.clone())?;
    let docs = par::map_indexed(train.len(), |i| {
        pre.process(&RawAnswer::new(train[i].id.as_str(), train[i].text.as_str()))
    });
    let features = TfidfModel::fit(&docs, cfg.features)?;
    let x = features.transform_all(&docs);
    let y: Vec<LabelSet> = train.iter().map(|r| r.labels.clone()).collect();
    let n_labels = dataset.space.len();
    let model = fit(algorithm, &x, &y, n_labels, &cfg.svm, &cfg.ecc)?;
    Ok(ModelBundle {
        format: BUNDLE_FORMAT.to_owned(),
        version: BUNDLE_VERSION,
        model_tag: model_tag(algorithm, cfg.force_min_one),
        label_space: dataset.space.clone(),
        label_frequencies: label_frequencies(&y, n_labels),
        normalization: cfg.rules.clone(),
        lemmatizer: cfg.lemmatizer.clone(),
        features,
        svm: cfg.svm,
        force_min_one: cfg.force_min_one,
        model,
    })
}

impl ModelBundle {
    pub fn algorithm(&self) -> Algorithm {
        self.model.algorithm()
    }

    /// Predictions for raw answers, in input order, without ground truth.
    pub fn predict(&self, answers: &[RawAnswer]) -> Result<Vec<PredictionRecord>, PipelineError> {
        let pre = Preprocessor::new(self.normalization.clone(), self.lemmatizer.clone())?;
        par::try_map_indexed(answers.len(), |i| {
            let x = self.features.transform(&pre.process(&answers[i]));
            let p = self.model.predict(&x)?;
            let labels = match (&p.scores, self.force_min_one) {
                (Some(scores), true) => force_min_one_label(&p.labels, scores, &self.label_frequencies),
                _ => p.labels,
            };
            Ok(PredictionRecord {
                record_id: answers[i].record_id.clone(),
                model_tag: self.model_tag.clone(),
                predicted: labels,
                truth: None,
                scores: p.scores,
            })
        })
    }

    pub fn to_json(&self) -> Result<String, PipelineError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let bundle: Self = serde_json::from_str(text)?;
        if bundle.format != BUNDLE_FORMAT || bundle.version != BUNDLE_VERSION {
            return Err(PipelineError::Bundle(format!(
                "unsupported format {:?} version {}",
                bundle.format, bundle.version
            )));
        }
        if bundle.model.n_labels() != bundle.label_space.len()
            || bundle.label_frequencies.len() != bundle.label_space.len()
        {
            return Err(PipelineError::Bundle("label space does not match the model".into()));
        }
        Ok(bundle)
    }

    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        write_file(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        Self::from_json(&read_file(path)?)
    }
}

/// Predicts dataset records and attaches their true labels.
pub fn predict_records(
    bundle: &ModelBundle,
    records: &[&AnswerRecord],
) -> Result<Vec<PredictionRecord>, PipelineError> {
    let answers: Vec<RawAnswer> = records
        .iter()
        .map(|r| RawAnswer::new(r.id.as_str(), r.text.as_str()))
        .collect();
    let mut out = bundle.predict(&answers)?;
    for (p, r) in out.iter_mut().zip(records) {
        p.truth = Some(r.labels.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub bundle: ModelBundle,
    pub predictions: Vec<PredictionRecord>,
    pub report: EvalReport,
}

/// Train on the split's training part, predict and evaluate its test part.
pub fn run_experiment(
    dataset: &Dataset,
    split: &Split,
    algorithm: Algorithm,
    cfg: &ExperimentConfig,
) -> Result<ExperimentOutcome, PipelineError> {
    split.check_against(dataset)?;
    let bundle = train_model(dataset, &split.train, algorithm, cfg)?;
    let test = dataset.select(&split.test)?;
    let predictions = predict_records(&bundle, &test)?;
    let report = evaluate(&predictions, &dataset.space)?;
    Ok(ExperimentOutcome {
        bundle,
        predictions,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{read_dataset, split, DatasetSpec, SplitConfig};

    fn toy() -> Dataset {
        let mut csv = String::from("id,text,labels\n");
        let rows = [
            ("krieg frieden", "10"),
            ("steuern geld", "20"),
            ("krieg steuern", "10;20"),
            ("umwelt klima", "30"),
        ];
        for i in 0..40 {
            let (t, l) = rows[i % rows.len()];
            csv.push_str(&format!("{i},{t} wort{},{l}\n", ["eins", "zwei", "drei"][i % 3]));
        }
        read_dataset(csv.as_bytes(), &DatasetSpec::default(), "toy").unwrap()
    }

    #[test]
    fn bundle_round_trip_predicts_identically() {
        let d = toy();
        let s = split(&d, &SplitConfig::default()).unwrap();
        for alg in Algorithm::ALL {
            let out = run_experiment(&d, &s, alg, &ExperimentConfig::default()).unwrap();
            assert_eq!(out.report.overall_zero_one, 0.0, "{alg}");
            let back = ModelBundle::from_json(&out.bundle.to_json().unwrap()).unwrap();
            assert_eq!(back, out.bundle);
            let again = predict_records(&back, &d.select(&s.test).unwrap()).unwrap();
            assert_eq!(again, out.predictions);
        }
    }

    #[test]
    fn min_one_tag() {
        assert_eq!(model_tag(Algorithm::Ecc, true), "ecc-min1");
        assert_eq!(model_tag(Algorithm::Br, false), "br");
    }
}
