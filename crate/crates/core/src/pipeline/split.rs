use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, write_file, Dataset, PipelineError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitFractions {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        Self {
            train: 0.6,
            validation: 0.2,
            test: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitConfig {
    #[serde(flatten)]
    pub fractions: SplitFractions,
    pub seed: u64,
}

impl SplitConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let f = self.fractions;
        if [f.train, f.validation, f.test]
            .iter()
            .any(|x| !(x.is_finite() && *x > 0.0))
        {
            return Err(PipelineError::InvalidSplit("fractions must be positive".into()));
        }
        let sum = f.train + f.validation + f.test;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(PipelineError::InvalidSplit(format!("fractions sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// SplitMix64, the generator behind split shuffles.
///
/// Kept in-house so split files can be reproduced by any implementation
/// from the seed alone.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` by multiply-shift: floor(r * bound / 2^64).
    pub fn below(&mut self, bound: usize) -> usize {
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }
}

/// A persisted train/validation/test partition of record ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub seed: u64,
    pub fractions: SplitFractions,
    pub train: Vec<String>,
    pub validation: Vec<String>,
    pub test: Vec<String>,
}

/// Fisher-Yates over `ids` (file order): for i = n-1 down to 1, swap i with
/// `below(i + 1)`. Then the first round(n * train) ids go to training, the
/// next round(n * validation) to validation and the rest to test.
pub fn split_ids(ids: &[String], cfg: &SplitConfig) -> Result<Split, PipelineError> {
    cfg.validate()?;
    let n = ids.len();
    let f = cfg.fractions;
    let n_train = (n as f64 * f.train).round() as usize;
    let n_val = (n as f64 * f.validation).round() as usize;
    if n_train == 0 || n_val == 0 || n_train + n_val >= n {
        return Err(PipelineError::TooFewRecords {
            n,
            train: f.train,
            validation: f.validation,
            test: f.test,
        });
    }
    let mut shuffled = ids.to_vec();
    let mut rng = SplitMix64::new(cfg.seed);
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        shuffled.swap(i, j);
    }
    let test = shuffled.split_off(n_train + n_val);
    let validation = shuffled.split_off(n_train);
    Ok(Split {
        seed: cfg.seed,
        fractions: f,
        train: shuffled,
        validation,
        test,
    })
}

pub fn split(dataset: &Dataset, cfg: &SplitConfig) -> Result<Split, PipelineError> {
    split_ids(&dataset.ids(), cfg)
}

impl Split {
    pub fn part(&self, name: &str) -> Option<&[String]> {
        match name {
            "train" => Some(&self.train),
            "validation" => Some(&self.validation),
            "test" => Some(&self.test),
            _ => None,
        }
    }

    /// Checks that the three parts partition the dataset's ids.
    pub fn check_against(&self, dataset: &Dataset) -> Result<(), PipelineError> {
        let known: HashSet<&str> = dataset.records.iter().map(|r| r.id.as_str()).collect();
        let mut seen = HashSet::new();
        for id in self.train.iter().chain(&self.validation).chain(&self.test) {
            if !known.contains(id.as_str()) {
                return Err(PipelineError::UnknownRecord(id.clone()));
            }
            if !seen.insert(id.as_str()) {
                return Err(PipelineError::InvalidSplit(format!("id {id:?} appears twice")));
            }
        }
        if seen.len() != known.len() {
            return Err(PipelineError::InvalidSplit(format!(
                "split covers {} of {} records",
                seen.len(),
                known.len()
            )));
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        let mut json = serde_json::to_vec_pretty(self)?;
        json.push(b'\n');
        write_file(path, &json)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        Ok(serde_json::from_str(&read_file(path)?)?)
    }
}
