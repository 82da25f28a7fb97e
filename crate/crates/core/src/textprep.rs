//! Normalization of raw survey answers into token sequences.
//!
//! The pipeline is: lowercase, fold umlauts, replace punctuation and digit
//! runs by single spaces, then apply entity rules in declared order. Tokens of
//! length one are dropped at tokenization time.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum TextprepError {
    #[error("invalid entity pattern {pattern:?}: {source}")]
    InvalidPattern {
        pattern: String,
        #[source]
        source: regex::Error,
    },
    #[error("entity replacement {0:?} contains whitespace")]
    WhitespaceInReplacement(String),
    #[error("lemma dictionary {path}: line {line}: expected `form<TAB>lemma`")]
    BadLemmaLine { path: String, line: usize },
    #[error("reading lemma dictionary: {0}")]
    Io(#[from] std::io::Error),
}

/// One raw answer as it appears in the dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawAnswer {
    pub record_id: String,
    pub text: String,
}

impl RawAnswer {
    pub fn new(record_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            record_id: record_id.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityRule {
    pub pattern: String,
    pub replacement: String,
}

impl EntityRule {
    pub fn new(pattern: impl Into<String>, replacement: impl Into<String>) -> Self {
        Self {
            pattern: pattern.into(),
            replacement: replacement.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormalizationRules {
    /// Fixed substitutions applied in order after lowercasing.
    pub umlaut_map: Vec<(String, String)>,
    pub entity_rules: Vec<EntityRule>,
    pub drop_single_letters: bool,
    pub drop_numbers: bool,
    pub drop_punctuation: bool,
}

impl Default for NormalizationRules {
    fn default() -> Self {
        let umlaut_map = [
            ("ä", "ae"),
            ("ö", "oe"),
            ("ü", "ue"),
            ("ß", "ss"),
            // decomposed forms (base letter + combining diaeresis)
            ("a\u{308}", "ae"),
            ("o\u{308}", "oe"),
            ("u\u{308}", "ue"),
        ]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        // Patterns see the folded spelling; the raw spelling is kept as an
        // alternative in case a custom umlaut map leaves it in place.
        let entity_rules = vec![
            EntityRule::new(r"\b(?:die|der|den)\s+gr(?:ue|ü)ne?n?\b", "die_gruenen"),
            EntityRule::new(r"\b(?:die|der|den)\s+linken?\b", "die_linke"),
        ];
        Self {
            umlaut_map,
            entity_rules,
            drop_single_letters: true,
            drop_numbers: true,
            drop_punctuation: true,
        }
    }
}

impl NormalizationRules {
    /// Rules that only lowercase and split on whitespace.
    pub fn minimal() -> Self {
        Self {
            umlaut_map: Vec::new(),
            entity_rules: Vec::new(),
            drop_single_letters: false,
            drop_numbers: false,
            drop_punctuation: false,
        }
    }

    pub fn compile(&self) -> Result<Normalizer, TextprepError> {
        Normalizer::new(self.clone())
    }
}

/// Compiled form of [`NormalizationRules`].
#[derive(Debug, Clone)]
pub struct Normalizer {
    rules: NormalizationRules,
    entities: Vec<(Regex, String)>,
}

impl Normalizer {
    pub fn new(rules: NormalizationRules) -> Result<Self, TextprepError> {
        let mut entities = Vec::with_capacity(rules.entity_rules.len());
        for rule in &rules.entity_rules {
            if rule.replacement.chars().any(char::is_whitespace) {
                return Err(TextprepError::WhitespaceInReplacement(rule.replacement.clone()));
            }
            let re = Regex::new(&format!("(?i){}", rule.pattern)).map_err(|source| TextprepError::InvalidPattern {
                pattern: rule.pattern.clone(),
                source,
            })?;
            entities.push((re, rule.replacement.clone()));
        }
        Ok(Self { rules, entities })
    }

    pub fn rules(&self) -> &NormalizationRules {
        &self.rules
    }

    pub fn normalize(&self, text: &str) -> String {
        let mut s = text.to_lowercase();
        for (from, to) in &self.rules.umlaut_map {
            if s.contains(from.as_str()) {
                s = s.replace(from.as_str(), to);
            }
        }
        let mut out = String::with_capacity(s.len());
        let mut pending_space = false;
        for ch in s.chars() {
            let separator = ch.is_whitespace()
                || (self.rules.drop_numbers && ch.is_numeric())
                || (self.rules.drop_punctuation && is_punctuation(ch));
            if separator {
                pending_space = true;
                continue;
            }
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(ch);
        }
        // Entity rules run on the cleaned text so that "die.grünen" and
        // "die grünen" end up identical in a single pass.
        for (re, replacement) in &self.entities {
            out = re.replace_all(&out, regex::NoExpand(replacement.as_str())).into_owned();
        }
        out
    }

    pub fn tokenize(&self, normalized: &str) -> Vec<String> {
        tokenize(normalized, &self.rules)
    }
}

/// Anything that is neither a letter, a digit, whitespace nor `_`.
///
/// `_` is kept so entity replacement tokens survive as one token.
fn is_punctuation(ch: char) -> bool {
    !(ch.is_alphanumeric() || ch.is_whitespace() || ch == '_')
}

pub fn normalize(answer: &RawAnswer, normalizer: &Normalizer) -> String {
    normalizer.normalize(&answer.text)
}

pub fn tokenize(normalized: &str, rules: &NormalizationRules) -> Vec<String> {
    normalized
        .split_whitespace()
        .filter(|t| !(rules.drop_single_letters && t.chars().count() == 1))
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub record_id: String,
    pub tokens: Vec<String>,
}

impl Document {
    pub fn new(record_id: impl Into<String>, tokens: Vec<String>) -> Self {
        Self {
            record_id: record_id.into(),
            tokens,
        }
    }

    pub fn from_tokens<S: AsRef<str>>(record_id: impl Into<String>, tokens: &[S]) -> Self {
        Self::new(record_id, tokens.iter().map(|t| t.as_ref().to_owned()).collect())
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }
}

/// Total mapping from a token to its lemma.
pub trait Lemmatizer: Send + Sync {
    fn lemma(&self, token: &str) -> String;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityLemmatizer;

impl Lemmatizer for IdentityLemmatizer {
    fn lemma(&self, token: &str) -> String {
        token.to_owned()
    }
}

/// Lookup-table lemmatizer; unknown tokens pass through unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryLemmatizer {
    entries: BTreeMap<String, String>,
}

impl DictionaryLemmatizer {
    pub fn new(entries: BTreeMap<String, String>) -> Self {
        Self { entries }
    }

    /// Reads a tab-separated `form<TAB>lemma` file. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_file(path: &Path) -> Result<Self, TextprepError> {
        let text = fs::read_to_string(path)?;
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (form, lemma) = line.split_once('\t').ok_or_else(|| TextprepError::BadLemmaLine {
                path: path.display().to_string(),
                line: i + 1,
            })?;
            entries.insert(form.to_owned(), lemma.to_owned());
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<const N: usize> From<[(&str, &str); N]> for DictionaryLemmatizer {
    fn from(pairs: [(&str, &str); N]) -> Self {
        Self::new(pairs.into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect())
    }
}

impl Lemmatizer for DictionaryLemmatizer {
    fn lemma(&self, token: &str) -> String {
        self.entries.get(token).cloned().unwrap_or_else(|| token.to_owned())
    }
}

pub fn lemmatize(doc: &Document, lemmatizer: &dyn Lemmatizer) -> Document {
    Document {
        record_id: doc.record_id.clone(),
        tokens: doc.tokens.iter().map(|t| lemmatizer.lemma(t)).collect(),
    }
}

/// Serializable lemmatizer choice, stored with trained models.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LemmatizerSpec {
    #[default]
    Identity,
    Dictionary {
        entries: DictionaryLemmatizer,
    },
}

impl Lemmatizer for LemmatizerSpec {
    fn lemma(&self, token: &str) -> String {
        match self {
            LemmatizerSpec::Identity => token.to_owned(),
            LemmatizerSpec::Dictionary { entries } => entries.lemma(token),
        }
    }
}

/// Normalizer plus lemmatizer: raw answers in, documents out.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    normalizer: Normalizer,
    lemmatizer: LemmatizerSpec,
}

impl Preprocessor {
    pub fn new(rules: NormalizationRules, lemmatizer: LemmatizerSpec) -> Result<Self, TextprepError> {
        Ok(Self {
            normalizer: Normalizer::new(rules)?,
            lemmatizer,
        })
    }

    pub fn rules(&self) -> &NormalizationRules {
        self.normalizer.rules()
    }

    pub fn lemmatizer(&self) -> &LemmatizerSpec {
        &self.lemmatizer
    }

    pub fn process(&self, answer: &RawAnswer) -> Document {
        let normalized = self.normalizer.normalize(&answer.text);
        let tokens = self
            .normalizer
            .tokenize(&normalized)
            .iter()
            .map(|t| self.lemmatizer.lemma(t))
            .collect();
        Document::new(answer.record_id.clone(), tokens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn default_normalizer() -> Normalizer {
        NormalizationRules::default().compile().unwrap()
    }

    #[test]
    fn folds_umlauts() {
        assert_eq!(
            default_normalizer().normalize("Flüchtlingspolitik"),
            "fluechtlingspolitik"
        );
        assert_eq!(default_normalizer().normalize("Größe ÄRGER"), "groesse aerger");
    }

    #[test]
    fn folds_decomposed_umlauts() {
        assert_eq!(default_normalizer().normalize("Flu\u{308}chtlinge"), "fluechtlinge");
    }

    #[test]
    fn empty_input() {
        assert_eq!(default_normalizer().normalize(""), "");
        assert!(default_normalizer().tokenize("").is_empty());
    }

    #[test]
    fn party_entity_after_folding() {
        let n = default_normalizer();
        assert_eq!(n.normalize("die Grünen!!"), "die_gruenen");
        assert_eq!(n.normalize("Die GRUENEN und die Linke"), "die_gruenen und die_linke");
        assert_eq!(n.normalize("mit den Linken"), "mit die_linke");
        // the colour without an article is left alone
        assert_eq!(n.normalize("grüne Wiesen"), "gruene wiesen");
    }

    #[test]
    fn punctuation_and_digits_become_separators() {
        let n = default_normalizer();
        assert_eq!(
            n.normalize("rente bzw.armut im rentenalter"),
            "rente bzw armut im rentenalter"
        );
        assert_eq!(n.normalize("G20-Gipfel 2016!"), "g gipfel");
        assert_eq!(n.tokenize("g gipfel"), vec!["gipfel"]);
        assert_eq!(n.normalize("zu viele nichtwaehler."), "zu viele nichtwaehler");
    }

    #[test]
    fn tokenize_drops_single_letters() {
        let rules = NormalizationRules::default();
        assert_eq!(tokenize("a b krieg", &rules), vec!["krieg"]);
        assert_eq!(
            tokenize("zu viele nichtwaehler", &rules),
            vec!["zu", "viele", "nichtwaehler"]
        );
        assert_eq!(
            tokenize("die_gruenen und steuern", &rules),
            vec!["die_gruenen", "und", "steuern"]
        );
        let keep = NormalizationRules {
            drop_single_letters: false,
            ..NormalizationRules::default()
        };
        assert_eq!(tokenize("a b krieg", &keep), vec!["a", "b", "krieg"]);
    }

    #[test]
    fn lemmatizers() {
        let doc = Document::from_tokens("1", &["probleme", "krieg"]);
        assert_eq!(lemmatize(&doc, &IdentityLemmatizer), doc);
        let dict = DictionaryLemmatizer::from([("probleme", "problem")]);
        assert_eq!(lemmatize(&doc, &dict).tokens, vec!["problem", "krieg"]);
    }

    #[test]
    fn dictionary_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lemmas.tsv");
        fs::write(&path, "# forms\nprobleme\tproblem\n\nflüchtlinge\tflüchtling\n").unwrap();
        let dict = DictionaryLemmatizer::from_file(&path).unwrap();
        assert_eq!(dict.len(), 2);
        assert_eq!(dict.lemma("probleme"), "problem");

        fs::write(&path, "kaputt\n").unwrap();
        assert!(matches!(
            DictionaryLemmatizer::from_file(&path),
            Err(TextprepError::BadLemmaLine { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_bad_rules() {
        let mut rules = NormalizationRules::default();
        rules.entity_rules.push(EntityRule::new("(", "x"));
        assert!(matches!(rules.compile(), Err(TextprepError::InvalidPattern { .. })));
        let mut rules = NormalizationRules::default();
        rules.entity_rules.push(EntityRule::new("afd", "die afd"));
        assert!(matches!(
            rules.compile(),
            Err(TextprepError::WhitespaceInReplacement(_))
        ));
    }

    #[test]
    fn preprocessor_end_to_end() {
        let pre = Preprocessor::new(
            NormalizationRules::default(),
            LemmatizerSpec::Dictionary {
                entries: DictionaryLemmatizer::from([("steuern", "steuer")]),
            },
        )
        .unwrap();
        let doc = pre.process(&RawAnswer::new("7", "Die Grünen & 3 Steuern, u.a."));
        assert_eq!(doc.record_id, "7");
        assert_eq!(doc.tokens, vec!["die_gruenen", "steuer"]);
        assert_eq!(doc.token_count(), 2);
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(text in "\\PC{0,40}") {
            let n = default_normalizer();
            let once = n.normalize(&text);
            prop_assert_eq!(n.normalize(&once), once);
        }

        #[test]
        fn tokens_are_clean(text in "[a-zA-ZäöüÄÖÜß0-9 .,!?;:()\\-_\"']{0,60}") {
            let n = default_normalizer();
            for tok in n.tokenize(&n.normalize(&text)) {
                prop_assert!(tok.chars().count() > 1);
                prop_assert!(!tok.chars().any(|c| c.is_numeric()));
                prop_assert!(!tok.chars().any(is_punctuation));
                prop_assert_eq!(tok.to_lowercase(), tok.clone());
            }
        }

        #[test]
        fn entity_tokens_survive(prefix in "[a-z ]{0,12}", suffix in "[a-z ]{0,12}") {
            let n = default_normalizer();
            let text = format!("{prefix} die Grünen {suffix}");
            let toks = n.tokenize(&n.normalize(&text));
            prop_assert!(toks.iter().any(|t| t == "die_gruenen"));
        }
    }
}
