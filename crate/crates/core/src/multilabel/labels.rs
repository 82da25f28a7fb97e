use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::MultiLabelError;

/// A set of label indices into a [`LabelSpace`].
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelSet(BTreeSet<usize>);

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(label: usize) -> Self {
        Self(BTreeSet::from([label]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.0.contains(&label)
    }

    pub fn insert(&mut self, label: usize) -> bool {
        self.0.insert(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn symmetric_difference_len(&self, other: &LabelSet) -> usize {
        self.0.symmetric_difference(&other.0).count()
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<usize> for LabelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for LabelSet {
    fn from(labels: [usize; N]) -> Self {
        labels.into_iter().collect()
    }
}

/// Ordered list of label codes. Column `i` of every label matrix refers to
/// `codes[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSpace {
    codes: Vec<String>,
    index: HashMap<String, usize>,
}

/// Integer-looking codes sort numerically and before anything else.
fn code_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

impl LabelSpace {
    /// Keeps the given order; duplicates are an error.
    pub fn from_codes<S: Into<String>>(codes: impl IntoIterator<Item = S>) -> Result<Self, MultiLabelError> {
        let codes: Vec<String> = codes.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(codes.len());
        for (i, c) in codes.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(MultiLabelError::DuplicateCode(c.clone()));
            }
        }
        Ok(Self { codes, index })
    }

    /// Union of observed codes in canonical order.
    pub fn from_observed<'a>(codes: impl IntoIterator<Item = &'a str>) -> Self {
        let mut unique: Vec<String> = codes
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_owned)
            .collect();
        unique.sort_by(|a, b| code_order(a, b));
        Self::from_codes(unique).expect("codes are unique")
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn code(&self, index: usize) -> &str {
        &self.codes[index]
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.index.get(code).copied()
    }

    pub fn encode<S: AsRef<str>>(&self, codes: &[S]) -> Result<LabelSet, MultiLabelError> {
        codes
            .iter()
            .map(|c| {
                self.index_of(c.as_ref())
                    .ok_or_else(|| MultiLabelError::UnknownCode(c.as_ref().to_owned()))
            })
            .collect()
    }

    pub fn decode(&self, set: &LabelSet) -> Vec<String> {
        set.iter().map(|i| self.codes[i].clone()).collect()
    }
}

impl Serialize for LabelSpace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.codes.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabelSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let codes = Vec::<String>::deserialize(deserializer)?;
        LabelSpace::from_codes(codes).map_err(serde::de::Error::custom)
    }
}

/// Number of training examples carrying each label.
pub fn label_frequencies(y: &[LabelSet], n_labels: usize) -> Vec<usize> {
    let mut freq = vec![0; n_labels];
    for set in y {
        for l in set.iter() {
            freq[l] += 1;
        }
    }
    freq
}

/// Distinct training label sets, most frequent first (ties in set order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelsetRegistry {
    entries: Vec<(LabelSet, usize)>,
}

impl LabelsetRegistry {
    pub fn from_training(y: &[LabelSet]) -> Result<Self, MultiLabelError> {
        let mut counts: BTreeMap<&LabelSet, usize> = BTreeMap::new();
        for (i, set) in y.iter().enumerate() {
            if set.is_empty() {
                return Err(MultiLabelError::EmptyLabelSet(i));
            }
            *counts.entry(set).or_insert(0) += 1;
        }
        let mut entries: Vec<(LabelSet, usize)> = counts.into_iter().map(|(s, c)| (s.clone(), c)).collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, class: usize) -> &LabelSet {
        &self.entries[class].0
    }

    pub fn frequency(&self, class: usize) -> usize {
        self.entries[class].1
    }

    pub fn class_of(&self, set: &LabelSet) -> Option<usize> {
        self.entries.iter().position(|(s, _)| s == set)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LabelSet, usize)> {
        self.entries.iter().map(|(s, c)| (s, *c))
    }
}
