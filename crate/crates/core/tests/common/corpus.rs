//! Turns a dataset split into feature matrices with the library's own
//! preprocessing, for tests that drive the meta-algorithms directly.

use surveycode::features::{FeatureOptions, TfidfModel};
use surveycode::multilabel::LabelSet;
use surveycode::pipeline::{AnswerRecord, Dataset};
use surveycode::sparse::SparseVector;
use surveycode::textprep::{Document, LemmatizerSpec, NormalizationRules, Preprocessor, RawAnswer};

pub struct Features {
    pub tfidf: TfidfModel,
    pub x_train: Vec<SparseVector>,
    pub y_train: Vec<LabelSet>,
    pub x_test: Vec<SparseVector>,
    pub y_test: Vec<LabelSet>,
    pub test_docs: Vec<Document>,
}

fn docs(records: &[&AnswerRecord]) -> Vec<Document> {
    let pre = Preprocessor::new(NormalizationRules::default(), LemmatizerSpec::Identity).unwrap();
    records
        .iter()
        .map(|r| pre.process(&RawAnswer::new(r.id.as_str(), r.text.as_str())))
        .collect()
}

pub fn featurize(dataset: &Dataset, train_ids: &[String], test_ids: &[String]) -> Features {
    let train = dataset.select(train_ids).unwrap();
    let test = dataset.select(test_ids).unwrap();
    let train_docs = docs(&train);
    let test_docs = docs(&test);
    let tfidf = TfidfModel::fit(&train_docs, FeatureOptions::default()).unwrap();
    Features {
        x_train: tfidf.transform_all(&train_docs),
        y_train: train.iter().map(|r| r.labels.clone()).collect(),
        x_test: tfidf.transform_all(&test_docs),
        y_test: test.iter().map(|r| r.labels.clone()).collect(),
        test_docs,
        tfidf,
    }
}
