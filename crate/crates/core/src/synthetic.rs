//! Seeded synthetic survey corpora.
//!
//! Words are pronounceable letter strings built from a fixed syllable table,
//! so they survive normalization unchanged. Each label owns a disjoint set of
//! keywords; noise words are shared by all labels.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::multilabel::{LabelSet, LabelSpace};
use crate::pipeline::{AnswerRecord, Dataset};

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// The `i`-th synthetic word, three syllables long.
pub fn word(i: usize) -> String {
    let n_syll = CONSONANTS.len() * VOWELS.len();
    let mut rest = i;
    let mut w = String::with_capacity(6);
    for _ in 0..3 {
        let s = rest % n_syll;
        rest /= n_syll;
        w.push(CONSONANTS[s / VOWELS.len()] as char);
        w.push(VOWELS[s % VOWELS.len()] as char);
    }
    assert!(rest == 0, "word index {i} out of range");
    w
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorrelatedCorpusConfig {
    pub n_records: usize,
    pub n_labels: usize,
    pub keywords_per_label: usize,
    pub noise_words: usize,
    /// Label pairs (head, partner); the partner joins its head with
    /// probability `partner_prob`.
    pub pairs: Vec<(usize, usize)>,
    pub partner_prob: f64,
    /// Probability that a joined partner leaves any keyword in the text.
    pub partner_keyword_prob: f64,
    /// Probability that a non-pair record gets a second random label.
    pub extra_label_prob: f64,
    /// Probability that a record's text carries no keyword at all.
    pub vague_prob: f64,
    pub seed: u64,
}

impl Default for CorrelatedCorpusConfig {
    fn default() -> Self {
        Self {
            n_records: 1000,
            n_labels: 8,
            keywords_per_label: 5,
            noise_words: 300,
            pairs: vec![(0, 1), (2, 3)],
            partner_prob: 0.5,
            partner_keyword_prob: 0.5,
            extra_label_prob: 0.04,
            vague_prob: 0.08,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub dataset: Dataset,
    /// Keywords per label index.
    pub label_keywords: Vec<Vec<String>>,
}

fn label_codes(n_labels: usize) -> LabelSpace {
    LabelSpace::from_codes((0..n_labels).map(|i| (1000 + 100 * i).to_string())).expect("distinct codes")
}

fn keywords(n_labels: usize, per_label: usize) -> Vec<Vec<String>> {
    (0..n_labels)
        .map(|l| (0..per_label).map(|k| word(l * per_label + k)).collect())
        .collect()
}

fn noise(rng: &mut ChaCha8Rng, offset: usize, vocab: usize, tokens: &mut Vec<String>) {
    let k = rng.gen_range(2..=6);
    tokens.extend((0..k).map(|_| word(offset + rng.gen_range(0..vocab))));
}

/// Corpus with correlated label pairs, cardinality about 1.2.
///
/// Partner labels often co-occur with their head without leaving textual
/// evidence, and a share of answers is vague (noise words only).
pub fn correlated_corpus(cfg: &CorrelatedCorpusConfig) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let kw = keywords(cfg.n_labels, cfg.keywords_per_label);
    let noise_offset = cfg.n_labels * cfg.keywords_per_label;
    let partner_of = |l: usize| cfg.pairs.iter().find(|p| p.0 == l).map(|p| p.1);
    let mut records = Vec::with_capacity(cfg.n_records);
    for i in 0..cfg.n_records {
        let head = rng.gen_range(0..cfg.n_labels);
        let mut labels = LabelSet::singleton(head);
        let mut silent = None;
        match partner_of(head) {
            Some(p) => {
                if rng.gen_bool(cfg.partner_prob) {
                    labels.insert(p);
                    if !rng.gen_bool(cfg.partner_keyword_prob) {
                        silent = Some(p);
                    }
                }
            }
            None => {
                if rng.gen_bool(cfg.extra_label_prob) {
                    labels.insert(rng.gen_range(0..cfg.n_labels));
                }
            }
        }
        let vague = rng.gen_bool(cfg.vague_prob);
        let mut tokens = Vec::new();
        if !vague {
            for l in labels.iter().filter(|&l| Some(l) != silent) {
                let k = rng.gen_range(1..=2);
                tokens.extend((0..k).map(|_| kw[l].choose(&mut rng).expect("keywords").clone()));
            }
        }
        noise(&mut rng, noise_offset, cfg.noise_words, &mut tokens);
        tokens.shuffle(&mut rng);
        records.push(AnswerRecord {
            id: (i + 1).to_string(),
            text: tokens.join(" "),
            labels,
            second_coder: None,
        });
    }
    SyntheticCorpus {
        dataset: Dataset {
            records,
            space: label_codes(cfg.n_labels),
        },
        label_keywords: kw,
    }
}

/// Independent labels, each present with probability `label_prob`, whose
/// keywords always appear; a label is present exactly when one of its
/// keywords is.
pub fn disjoint_corpus(n_records: usize, n_labels: usize, label_prob: f64, seed: u64) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_label = 4;
    let kw = keywords(n_labels, per_label);
    let noise_offset = n_labels * per_label;
    let records = (0..n_records)
        .map(|i| {
            let mut labels: LabelSet = (0..n_labels).filter(|_| rng.gen_bool(label_prob)).collect();
            if labels.is_empty() {
                labels.insert(rng.gen_range(0..n_labels));
            }
            let mut tokens: Vec<String> = labels
                .iter()
                .map(|l| kw[l].choose(&mut rng).expect("keywords").clone())
                .collect();
            noise(&mut rng, noise_offset, 200, &mut tokens);
            tokens.shuffle(&mut rng);
            AnswerRecord {
                id: (i + 1).to_string(),
                text: tokens.join(" "),
                labels,
                second_coder: None,
            }
        })
        .collect();
    SyntheticCorpus {
        dataset: Dataset {
            records,
            space: label_codes(n_labels),
        },
        label_keywords: kw,
    }
}
