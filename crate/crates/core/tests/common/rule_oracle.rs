//! Keyword-rule oracle for synthetic corpora: a label is predicted iff one of
//! its generating keywords occurs in the document.

use std::collections::{BTreeSet, HashMap};

pub struct RuleOracle {
    keyword_to_labels: HashMap<String, Vec<usize>>,
}

impl RuleOracle {
    pub fn new(label_keywords: &[Vec<String>]) -> Self {
        let mut keyword_to_labels: HashMap<String, Vec<usize>> = HashMap::new();
        for (label, words) in label_keywords.iter().enumerate() {
            for w in words {
                keyword_to_labels.entry(w.clone()).or_default().push(label);
            }
        }
        Self { keyword_to_labels }
    }

    pub fn predict(&self, tokens: &[String]) -> BTreeSet<usize> {
        tokens
            .iter()
            .filter_map(|t| self.keyword_to_labels.get(t))
            .flatten()
            .copied()
            .collect()
    }
}
