use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_file, DatasetSpec, ExperimentConfig, GridSpec, PipelineError, SplitConfig};
use crate::features::FeatureOptions;
use crate::multilabel::EccConfig;
use crate::svm::TrainConfig;
use crate::textprep::{DictionaryLemmatizer, LemmatizerSpec, NormalizationRules};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessingConfig {
    #[serde(flatten)]
    pub rules: NormalizationRules,
    /// Tab-separated `form<TAB>lemma` file. No lemmatization when absent.
    pub lemma_file: Option<PathBuf>,
}

/// The toolkit's TOML configuration file. Every section is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToolkitConfig {
    pub dataset: DatasetSpec,
    pub preprocessing: PreprocessingConfig,
    pub features: FeatureOptions,
    pub svm: TrainConfig,
    pub ecc: EccConfig,
    pub grid: GridSpec,
    pub split: SplitConfig,
    pub force_min_one: bool,
}

impl ToolkitConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    /// Reads a config file. Relative lemma-file paths are resolved against
    /// the config file's directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let mut cfg = Self::from_toml(&read_file(path)?)?;
        if let (Some(lemmas), Some(dir)) = (&cfg.preprocessing.lemma_file, path.parent()) {
            if lemmas.is_relative() {
                cfg.preprocessing.lemma_file = Some(dir.join(lemmas));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, PipelineError> {
        toml::to_string_pretty(self).map_err(|e| PipelineError::Config(e.to_string()))
    }

    /// One seed for splitting, SVM coordinate order and ECC sampling.
    pub fn set_seed(&mut self, seed: u64) {
        self.split.seed = seed;
        self.svm.seed = seed;
        self.ecc.seed = seed;
    }

    pub fn experiment(&self) -> Result<ExperimentConfig, PipelineError> {
        let lemmatizer = match &self.preprocessing.lemma_file {
            None => LemmatizerSpec::Identity,
            Some(p) => LemmatizerSpec::Dictionary {
                entries: DictionaryLemmatizer::from_file(p)?,
            },
        };
        Ok(ExperimentConfig {
            rules: self.preprocessing.rules.clone(),
            lemmatizer,
            features: self.features,
            svm: self.svm,
            ecc: self.ecc,
            force_min_one: self.force_min_one,
        })
    }
}
