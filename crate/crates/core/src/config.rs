//! The JSON problem config: the artifact of record for a run. Scalar flags
//! on the CLI override the corresponding fields.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::domain::{OutputModel, TargetRange, VariableSpec};
use crate::error::{Error, Result};
use crate::experiments::{DEFAULT_DELTAS, DEFAULT_FOLDS, DEFAULT_SIGMAS};
use crate::grid::DEFAULT_GRID_CAP;
use crate::model::{Expression, ExternalModel, DEFAULT_CALL_TIMEOUT};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub variables: Vec<VariableSpec>,
    pub target: TargetRange,
    pub granularity: f64,
    pub model: ModelConfig,
    /// Inward shrink of the target's upper bounds before carving,
    /// compensating for model error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub seed: u64,
    #[serde(default = "default_test_size")]
    pub test_size: usize,
    /// Override for the grid-point cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_cap: Option<u64>,
    /// Per-call timeout for external models, in seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_timeout_secs: Option<f64>,
    /// Sweep overrides; the defaults cover the standard study.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folds: Option<usize>,
    /// When set, a granularity sweep also selects the largest δ whose mean
    /// TPR reaches this threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tpr_threshold: Option<f64>,
}

fn default_test_size() -> usize {
    10_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelConfig {
    /// An arithmetic expression over the declared variables.
    Expr { expr: String },
    /// An external process speaking the line protocol.
    Command { command: Vec<String> },
}

impl ProblemConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ProblemConfig =
            serde_json::from_str(text).map_err(|e| Error::Validation(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::Validation(
                "config field `variables` must be nonempty".into(),
            ));
        }
        let mut names: Vec<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.variables.len() {
            return Err(Error::Validation(
                "config field `variables` has duplicate names".into(),
            ));
        }
        if !self.granularity.is_finite() || self.granularity <= 0.0 {
            return Err(Error::Validation(format!(
                "config field `granularity` must be positive and finite, got {}",
                self.granularity
            )));
        }
        if let Some(margin) = self.margin {
            if margin.is_nan() || margin < 0.0 {
                return Err(Error::Validation(format!(
                    "config field `margin` must be nonnegative, got {margin}"
                )));
            }
        }
        if self.test_size == 0 {
            return Err(Error::Validation(
                "config field `test_size` must be at least 1".into(),
            ));
        }
        if let Some(deltas) = &self.deltas {
            if deltas.is_empty() || deltas.iter().any(|&d| !d.is_finite() || d <= 0.0) {
                return Err(Error::Validation(
                    "config field `deltas` must be a nonempty list of positive values".into(),
                ));
            }
        }
        if let Some(sigmas) = &self.sigmas {
            if sigmas.is_empty() || sigmas.iter().any(|&s| !s.is_finite() || s < 0.0) {
                return Err(Error::Validation(
                    "config field `sigmas` must be a nonempty list of nonnegative values".into(),
                ));
            }
        }
        if self.folds == Some(0) {
            return Err(Error::Validation(
                "config field `folds` must be at least 1".into(),
            ));
        }
        if let Some(t) = self.tpr_threshold {
            if !t.is_finite() {
                return Err(Error::Validation(
                    "config field `tpr_threshold` must be finite".into(),
                ));
            }
        }
        Ok(())
    }

    /// The target with the error margin applied.
    pub fn effective_target(&self) -> Result<TargetRange> {
        match self.margin {
            Some(margin) if margin > 0.0 => self.target.shrink(margin),
            _ => Ok(self.target.clone()),
        }
    }

    pub fn grid_cap(&self) -> u64 {
        self.grid_cap.unwrap_or(DEFAULT_GRID_CAP)
    }

    pub fn deltas(&self) -> Vec<f64> {
        self.deltas
            .clone()
            .unwrap_or_else(|| DEFAULT_DELTAS.to_vec())
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.sigmas
            .clone()
            .unwrap_or_else(|| DEFAULT_SIGMAS.to_vec())
    }

    pub fn folds(&self) -> usize {
        self.folds.unwrap_or(DEFAULT_FOLDS)
    }

    pub fn model_timeout(&self) -> Duration {
        self.model_timeout_secs
            .map(Duration::from_secs_f64)
            .unwrap_or(DEFAULT_CALL_TIMEOUT)
    }

    /// Instantiates the configured model.
    pub fn build_model(&self) -> Result<Box<dyn OutputModel>> {
        match &self.model {
            ModelConfig::Expr { expr } => Ok(Box::new(Expression::parse(expr, &self.variables)?)),
            ModelConfig::Command { command } => Ok(Box::new(ExternalModel::spawn(
                command,
                self.variables.len(),
                self.model_timeout(),
            )?)),
        }
    }
}
