//! Binary SVM base learners and the one-vs-rest multiclass wrapper.
//!
//! Linear models are trained by dual coordinate descent on the
//! L2-regularized hinge loss, with the bias folded in as a constant feature
//! of value 1. Kernel models are trained by SMO with a free bias, so their
//! duals carry the equality constraint `sum_i alpha_i y_i = 0`.

mod dcd;
mod multiclass;
mod smo;

use serde::{Deserialize, Serialize};

use crate::sparse::SparseVector;

pub use dcd::{solve_linear_dual, LinearDualSolution};
pub use multiclass::{predict_multiclass, train_multiclass, MulticlassModel};
pub use smo::{solve_kernel_dual, KernelDualSolution};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SvmError {
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("{features} feature vectors but {labels} labels")]
    LengthMismatch { features: usize, labels: usize },
    #[error("binary labels must be +1 or -1, got {0}")]
    InvalidLabel(f64),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: model expects {expected} features, input has {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel {
    Linear,
    Rbf { gamma: f64 },
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kernel::Linear => f.write_str("linear"),
            Kernel::Rbf { gamma } => write!(f, "rbf gamma={gamma}"),
        }
    }
}

impl Kernel {
    pub fn eval(&self, a: &SparseVector, b: &SparseVector) -> f64 {
        match *self {
            Kernel::Linear => a.dot(b),
            Kernel::Rbf { gamma } => (-gamma * a.squared_distance(b)).exp(),
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Kernel::Linear => None,
            Kernel::Rbf { gamma } => Some(gamma),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Linear => "linear",
            Kernel::Rbf { .. } => "rbf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub c: f64,
    pub kernel: Kernel,
    pub tolerance: f64,
    /// Sweep budget. For SMO the pair-update budget is this times the
    /// number of training points.
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c: 100.0,
            kernel: Kernel::Linear,
            tolerance: 1e-3,
            max_iterations: 10_000,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn linear(c: f64) -> Self {
        Self { c, ..Self::default() }
    }

    pub fn rbf(c: f64, gamma: f64) -> Self {
        Self {
            c,
            kernel: Kernel::Rbf { gamma },
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SvmError> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(SvmError::InvalidConfig(format!("C must be positive, got {}", self.c)));
        }
        if let Kernel::Rbf { gamma } = self.kernel {
            if !(gamma.is_finite() && gamma > 0.0) {
                return Err(SvmError::InvalidConfig(format!("gamma must be positive, got {gamma}")));
            }
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(SvmError::InvalidConfig("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(SvmError::InvalidConfig("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn decision(&self, x: &SparseVector) -> Result<f64, SvmError> {
        check_dim(self.weights.len(), x)?;
        Ok(x.dot_dense(&self.weights) + self.bias)
    }
}

// Weights are stored sparsely on disk; most vocabulary columns never occur
// among a label's support vectors.
#[derive(Serialize, Deserialize)]
struct LinearModelRepr {
    dim: usize,
    indices: Vec<u32>,
    values: Vec<f64>,
    bias: f64,
}

impl Serialize for LinearModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (indices, values) = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(|(i, &w)| (i as u32, w))
            .unzip();
        LinearModelRepr {
            dim: self.weights.len(),
            indices,
            values,
            bias: self.bias,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = LinearModelRepr::deserialize(deserializer)?;
        if r.indices.len() != r.values.len() {
            return Err(serde::de::Error::custom("weight index/value length mismatch"));
        }
        let mut weights = vec![0.0; r.dim];
        for (i, v) in r.indices.into_iter().zip(r.values) {
            let slot = weights
                .get_mut(i as usize)
                .ok_or_else(|| serde::de::Error::custom("weight index out of range"))?;
            *slot = v;
        }
        Ok(LinearModel { weights, bias: r.bias })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelModel {
    pub support_vectors: Vec<SparseVector>,
    /// Signed coefficients alpha_i * y_i.
    pub coefficients: Vec<f64>,
    pub bias: f64,
    pub kernel: Kernel,
    pub c: f64,
    pub dim: usize,
}

impl KernelModel {
    pub fn decision(&self, x: &SparseVector) -> Result<f64, SvmError> {
        check_dim(self.dim, x)?;
        let sum: f64 = self
            .support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, &a)| a * self.kernel.eval(sv, x))
            .sum();
        Ok(sum + self.bias)
    }

    /// Largest violation of the box and equality constraints of the dual.
    pub fn kkt_violation(&self) -> f64 {
        let box_violation = self
            .coefficients
            .iter()
            .map(|a| (a.abs() - self.c).max(0.0))
            .fold(0.0, f64::max);
        let equality: f64 = self.coefficients.iter().sum();
        box_violation.max(equality.abs())
    }
}

/// Returned when a training set contains a single class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantModel {
    pub label: i8,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BinaryModel {
    Linear(LinearModel),
    Kernel(KernelModel),
    Constant(ConstantModel),
}

impl BinaryModel {
    pub fn decision(&self, x: &SparseVector) -> Result<f64, SvmError> {
        match self {
            BinaryModel::Linear(m) => m.decision(x),
            BinaryModel::Kernel(m) => m.decision(x),
            BinaryModel::Constant(m) => {
                check_dim(m.dim, x)?;
                Ok(f64::from(m.label))
            }
        }
    }

    pub fn predict(&self, x: &SparseVector) -> Result<i8, SvmError> {
        self.decision(x).map(predict_from_margin)
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, BinaryModel::Constant(_))
    }

    pub fn dim(&self) -> usize {
        match self {
            BinaryModel::Linear(m) => m.weights.len(),
            BinaryModel::Kernel(m) => m.dim,
            BinaryModel::Constant(m) => m.dim,
        }
    }
}

fn check_dim(expected: usize, x: &SparseVector) -> Result<(), SvmError> {
    if x.dim() != expected {
        return Err(SvmError::DimensionMismatch { expected, got: x.dim() });
    }
    Ok(())
}

/// Sign of the margin; a margin of exactly zero counts as positive.
pub fn predict_from_margin(margin: f64) -> i8 {
    if margin >= 0.0 {
        1
    } else {
        -1
    }
}

pub fn decision(model: &BinaryModel, x: &SparseVector) -> Result<f64, SvmError> {
    model.decision(x)
}

pub fn predict_binary(model: &BinaryModel, x: &SparseVector) -> Result<i8, SvmError> {
    model.predict(x)
}

pub(crate) fn validate_problem(x: &[SparseVector], y: &[f64]) -> Result<usize, SvmError> {
    if x.len() != y.len() {
        return Err(SvmError::LengthMismatch {
            features: x.len(),
            labels: y.len(),
        });
    }
    let first = x.first().ok_or(SvmError::EmptyTrainingSet)?;
    let dim = first.dim();
    if let Some(bad) = x.iter().find(|v| v.dim() != dim) {
        return Err(SvmError::DimensionMismatch {
            expected: dim,
            got: bad.dim(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(SvmError::InvalidLabel(bad));
    }
    Ok(dim)
}

/// Trains one binary classifier on labels in {+1, -1}.
///
/// Single-class input yields a [`ConstantModel`] voting for that class.
pub fn train_binary(x: &[SparseVector], y: &[f64], cfg: &TrainConfig) -> Result<BinaryModel, SvmError> {
    cfg.validate()?;
    let dim = validate_problem(x, y)?;
    let positives = y.iter().filter(|&&v| v > 0.0).count();
    if positives == 0 || positives == y.len() {
        let label = if positives == 0 { -1 } else { 1 };
        return Ok(BinaryModel::Constant(ConstantModel { label, dim }));
    }
    match cfg.kernel {
        Kernel::Linear => {
            let sol = solve_linear_dual(x, y, cfg)?;
            Ok(BinaryModel::Linear(sol.into_model()))
        }
        kernel => {
            let sol = solve_kernel_dual(x, y, kernel, cfg)?;
            Ok(BinaryModel::Kernel(sol.into_model(x, y, kernel, cfg.c, dim)))
        }
    }
}
