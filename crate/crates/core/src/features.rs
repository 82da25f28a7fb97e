//! Bag-of-n-grams vocabulary and TF-IDF weighting.
//!
//! idf(t) = ln((1 + N) / (1 + df(t))) + 1 and a document's value for term t
//! is count(t) * idf(t), optionally L2-normalized per document.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::sparse::SparseVector;
use crate::textprep::Document;

pub const TFIDF_FORMAT: &str = "surveycode-tfidf";
pub const TFIDF_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("empty training corpus")]
    EmptyCorpus,
    #[error("invalid n-gram range ({0}, {1})")]
    BadNgramRange(usize, usize),
    #[error("feature model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramRange {
    pub min_n: usize,
    pub max_n: usize,
}

impl Default for NgramRange {
    fn default() -> Self {
        Self { min_n: 1, max_n: 1 }
    }
}

impl NgramRange {
    pub fn new(min_n: usize, max_n: usize) -> Result<Self, FeatureError> {
        if min_n == 0 || max_n < min_n {
            return Err(FeatureError::BadNgramRange(min_n, max_n));
        }
        Ok(Self { min_n, max_n })
    }

    /// All n-grams of the token sequence, joined by a single space.
    pub fn ngrams<'a>(&self, tokens: &'a [String]) -> impl Iterator<Item = String> + 'a {
        let (lo, hi) = (self.min_n, self.max_n);
        (lo..=hi).flat_map(move |n| tokens.windows(n).map(|w| w.join(" ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureOptions {
    pub ngram_range: NgramRange,
    pub l2_normalize: bool,
}

impl Default for FeatureOptions {
    fn default() -> Self {
        Self {
            ngram_range: NgramRange::default(),
            l2_normalize: true,
        }
    }
}

/// Terms are stored in lexicographic order; a term's column index is its
/// position in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    term_to_index: HashMap<String, usize>,
    ngram_range: NgramRange,
    n_documents: usize,
    document_frequencies: Vec<usize>,
}

impl Vocabulary {
    fn from_parts(
        terms: Vec<String>,
        document_frequencies: Vec<usize>,
        n_documents: usize,
        ngram_range: NgramRange,
    ) -> Self {
        let term_to_index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self {
            terms,
            term_to_index,
            ngram_range,
            n_documents,
            document_frequencies,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.term_to_index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.term_to_index.contains_key(term)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn document_frequency(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.document_frequencies[i])
    }

    pub fn document_frequencies(&self) -> &[usize] {
        &self.document_frequencies
    }

    pub fn n_documents(&self) -> usize {
        self.n_documents
    }

    pub fn ngram_range(&self) -> NgramRange {
        self.ngram_range
    }

    /// Per-column counts of in-vocabulary n-grams of one document.
    pub fn count(&self, doc: &Document) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for gram in self.ngram_range.ngrams(&doc.tokens) {
            if let Some(i) = self.index_of(&gram) {
                *counts.entry(i).or_insert(0) += 1;
            }
        }
        counts
    }
}

pub fn fit_vocabulary(docs: &[Document], ngram_range: NgramRange) -> Result<Vocabulary, FeatureError> {
    if docs.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let seen: HashSet<String> = ngram_range.ngrams(&doc.tokens).collect();
        for gram in seen {
            *df.entry(gram).or_insert(0) += 1;
        }
    }
    let (terms, dfs) = df.into_iter().unzip();
    Ok(Vocabulary::from_parts(terms, dfs, docs.len(), ngram_range))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfidfModel {
    vocabulary: Vocabulary,
    idf: Vec<f64>,
    l2_normalize: bool,
}

pub fn smooth_idf(n_documents: usize, df: usize) -> f64 {
    ((1.0 + n_documents as f64) / (1.0 + df as f64)).ln() + 1.0
}

impl TfidfModel {
    pub fn from_vocabulary(vocabulary: Vocabulary, l2_normalize: bool) -> Self {
        let n = vocabulary.n_documents;
        let idf = vocabulary
            .document_frequencies
            .iter()
            .map(|&df| smooth_idf(n, df))
            .collect();
        Self {
            vocabulary,
            idf,
            l2_normalize,
        }
    }

    pub fn fit(docs: &[Document], options: FeatureOptions) -> Result<Self, FeatureError> {
        let vocab = fit_vocabulary(docs, options.ngram_range)?;
        Ok(Self::from_vocabulary(vocab, options.l2_normalize))
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn l2_normalize(&self) -> bool {
        self.l2_normalize
    }

    pub fn options(&self) -> FeatureOptions {
        FeatureOptions {
            ngram_range: self.vocabulary.ngram_range,
            l2_normalize: self.l2_normalize,
        }
    }

    pub fn transform(&self, doc: &Document) -> SparseVector {
        let counts = self.vocabulary.count(doc);
        let mut v = SparseVector::from_pairs(self.dim(), counts.into_iter().map(|(i, c)| (i, c as f64 * self.idf[i])));
        if self.l2_normalize {
            let norm = v.norm();
            if norm > 0.0 {
                v.scale(1.0 / norm);
            }
        }
        v
    }

    pub fn transform_all(&self, docs: &[Document]) -> Vec<SparseVector> {
        docs.iter().map(|d| self.transform(d)).collect()
    }

    pub fn to_file_repr(&self) -> TfidfFile {
        TfidfFile {
            format: TFIDF_FORMAT.to_owned(),
            version: TFIDF_VERSION,
            ngram_range: self.vocabulary.ngram_range,
            n_documents: self.vocabulary.n_documents,
            l2_normalize: self.l2_normalize,
            terms: self.vocabulary.terms.clone(),
            document_frequencies: self.vocabulary.document_frequencies.clone(),
            idf: self.idf.clone(),
        }
    }

    pub fn from_file_repr(file: TfidfFile) -> Result<Self, FeatureError> {
        if file.format != TFIDF_FORMAT {
            return Err(FeatureError::Format(format!("unexpected format tag {:?}", file.format)));
        }
        if file.version != TFIDF_VERSION {
            return Err(FeatureError::Format(format!("unsupported version {}", file.version)));
        }
        let n = file.terms.len();
        if file.document_frequencies.len() != n || file.idf.len() != n {
            return Err(FeatureError::Format("term, df and idf lengths differ".into()));
        }
        if file.terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FeatureError::Format("terms must be strictly sorted".into()));
        }
        if file
            .document_frequencies
            .iter()
            .any(|&df| df == 0 || df > file.n_documents)
        {
            return Err(FeatureError::Format("document frequency outside 1..=N".into()));
        }
        let vocabulary = Vocabulary::from_parts(
            file.terms,
            file.document_frequencies,
            file.n_documents,
            file.ngram_range,
        );
        Ok(Self {
            vocabulary,
            idf: file.idf,
            l2_normalize: file.l2_normalize,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), FeatureError> {
        let json = serde_json::to_string(&self.to_file_repr())?;
        crate::io::write_atomic(path, json.as_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, FeatureError> {
        let file: TfidfFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        Self::from_file_repr(file)
    }
}

/// On-disk form of a fitted [`TfidfModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfFile {
    pub format: String,
    pub version: u32,
    pub ngram_range: NgramRange,
    pub n_documents: usize,
    pub l2_normalize: bool,
    pub terms: Vec<String>,
    pub document_frequencies: Vec<usize>,
    pub idf: Vec<f64>,
}

impl Serialize for TfidfModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_file_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TfidfModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = TfidfFile::deserialize(deserializer)?;
        TfidfModel::from_file_repr(file).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn doc(tokens: &[&str]) -> Document {
        Document::from_tokens("x", tokens)
    }

    #[test]
    fn vocabulary_counts_documents_not_occurrences() {
        let docs = [doc(&["krieg", "krieg", "frieden"]), doc(&["frieden"])];
        let v = fit_vocabulary(&docs, NgramRange::default()).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.n_documents(), 2);
        assert_eq!(v.document_frequency("krieg"), Some(1));
        assert_eq!(v.document_frequency("frieden"), Some(2));
    }

    #[test]
    fn single_document() {
        let v = fit_vocabulary(&[doc(&["a-less", "tokens"])], NgramRange::default()).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.document_frequencies().iter().all(|&d| d == 1));
    }

    #[test]
    fn bigrams() {
        let v = fit_vocabulary(&[doc(&["zu", "viele"])], NgramRange::new(1, 2).unwrap()).unwrap();
        let mut terms = v.terms().to_vec();
        terms.sort();
        assert_eq!(terms, vec!["viele", "zu", "zu viele"]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let err = fit_vocabulary(&[], NgramRange::default()).unwrap_err();
        assert_eq!(err.to_string(), "empty training corpus");
        assert!(NgramRange::new(2, 1).is_err());
        assert!(NgramRange::new(0, 1).is_err());
    }

    #[test]
    fn hand_computed_tfidf() {
        let docs = [doc(&["krieg", "krieg", "frieden"]), doc(&["frieden"])];
        let model = TfidfModel::fit(&docs, FeatureOptions::default()).unwrap();
        let raw_krieg: f64 = 2.0 * ((3.0f64 / 2.0).ln() + 1.0);
        assert_abs_diff_eq!(raw_krieg, 2.8110, epsilon = 1e-4);
        let v = model.transform(&docs[0]);
        let k = model.vocabulary().index_of("krieg").unwrap();
        let f = model.vocabulary().index_of("frieden").unwrap();
        assert_abs_diff_eq!(v.get(k), 0.9422, epsilon = 1e-4);
        assert_abs_diff_eq!(v.get(f), 0.3352, epsilon = 1e-4);

        let single = model.transform(&doc(&["frieden"]));
        assert_eq!(single.nnz(), 1);
        assert_abs_diff_eq!(single.get(f), 1.0, epsilon = 1e-12);

        assert!(model.transform(&doc(&["unbekannt"])).is_empty());
    }

    #[test]
    fn unnormalized_values_are_count_times_idf() {
        let docs = [doc(&["krieg", "krieg", "frieden"]), doc(&["frieden"])];
        let model = TfidfModel::fit(
            &docs,
            FeatureOptions {
                l2_normalize: false,
                ..Default::default()
            },
        )
        .unwrap();
        let v = model.transform(&docs[0]);
        let k = model.vocabulary().index_of("krieg").unwrap();
        assert_abs_diff_eq!(v.get(k), 2.0 * ((1.5f64).ln() + 1.0), epsilon = 1e-12);
    }

    #[test]
    fn file_round_trip() {
        let docs = [doc(&["krieg", "krieg", "frieden"]), doc(&["frieden", "steuern"])];
        let model = TfidfModel::fit(&docs, FeatureOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tfidf.json");
        model.save(&path).unwrap();
        let back = TfidfModel::load(&path).unwrap();
        assert_eq!(back, model);

        let mut bad = model.to_file_repr();
        bad.version = 99;
        assert!(TfidfModel::from_file_repr(bad).is_err());
    }

    fn corpus() -> impl Strategy<Value = Vec<Vec<String>>> {
        prop::collection::vec(
            prop::collection::vec(
                prop::sample::select(vec!["aa", "bb", "cc", "dd", "ee", "ff"]).prop_map(String::from),
                0..6,
            ),
            1..12,
        )
    }

    proptest! {
        #[test]
        fn refitting_reproduces_document_frequencies(tokens in corpus()) {
            let docs: Vec<Document> = tokens.into_iter().map(|t| Document::new("x", t)).collect();
            let model = TfidfModel::fit(&docs, FeatureOptions::default()).unwrap();
            let vocab = model.vocabulary();
            let mut df = vec![0usize; vocab.len()];
            for v in model.transform_all(&docs) {
                prop_assert!(v.norm() == 0.0 || (v.norm() - 1.0).abs() < 1e-12);
                for (i, _) in v.iter() {
                    df[i] += 1;
                }
            }
            prop_assert_eq!(df.as_slice(), vocab.document_frequencies());
            for &d in vocab.document_frequencies() {
                prop_assert!(d >= 1 && d <= vocab.n_documents());
            }
        }

        #[test]
        fn idf_is_strictly_decreasing_in_df(n in 1usize..1000, df in 1usize..1000) {
            prop_assume!(df < n);
            prop_assert!(smooth_idf(n, df) > smooth_idf(n, df + 1));
            prop_assert!(smooth_idf(n, df + 1) > 0.0);
        }
    }
}
