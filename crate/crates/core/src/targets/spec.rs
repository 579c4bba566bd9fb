use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{GmmConfig, GmmPosterior, LogisticPosterior, StandardGaussian, Target, UnitCube};
use crate::error::{Error, Result};

/// A target description as read from a JSON file:
/// `{"name": "gaussian", "params": {"dim": 1}}`.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    Gaussian { dim: usize },
    Uniform01 { dim: usize },
    GmmPosterior(GmmConfig),
    LogisticPosterior { dataset: LogisticDataset },
}

/// Source of the logistic regression data.
#[derive(Debug, Clone, PartialEq)]
pub enum LogisticDataset {
    Nodal,
    Path(PathBuf),
    Synthetic { seed: u64 },
}

#[derive(Deserialize, Serialize)]
struct RawSpec {
    name: String,
    #[serde(default)]
    params: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DimParams {
    #[serde(default = "one")]
    dim: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LogisticParams {
    dataset: Option<String>,
    #[serde(default)]
    seed: u64,
}

fn one() -> usize {
    1
}

fn params<T: serde::de::DeserializeOwned>(value: Value) -> Result<T> {
    let value = if value.is_null() {
        Value::Object(Default::default())
    } else {
        value
    };
    Ok(serde_json::from_value(value)?)
}

impl TargetSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)?;
        Self::from_raw(raw, None)
    }

    /// Reads a spec file; relative dataset paths resolve against the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        Self::from_raw(raw, path.parent())
    }

    fn from_raw(raw: RawSpec, base: Option<&Path>) -> Result<Self> {
        let spec = match raw.name.as_str() {
            "gaussian" => TargetSpec::Gaussian {
                dim: params::<DimParams>(raw.params)?.dim,
            },
            "uniform01" => TargetSpec::Uniform01 {
                dim: params::<DimParams>(raw.params)?.dim,
            },
            "gmm-posterior" => TargetSpec::GmmPosterior(params(raw.params)?),
            "logistic-posterior" => {
                let p: LogisticParams = params(raw.params)?;
                let dataset = match p.dataset.as_deref() {
                    None | Some("nodal") => LogisticDataset::Nodal,
                    Some("synthetic") => LogisticDataset::Synthetic { seed: p.seed },
                    Some(path) => {
                        let path = PathBuf::from(path);
                        LogisticDataset::Path(match base {
                            Some(b) if path.is_relative() => b.join(path),
                            _ => path,
                        })
                    }
                };
                TargetSpec::LogisticPosterior { dataset }
            }
            other => {
                return Err(Error::Input(format!("unknown target `{other}`")));
            }
        };
        if let TargetSpec::Gaussian { dim: 0 } | TargetSpec::Uniform01 { dim: 0 } = spec {
            return Err(Error::Parameter("dimension must be positive".into()));
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<Arc<dyn Target>> {
        Ok(match self {
            TargetSpec::Gaussian { dim } => Arc::new(StandardGaussian::new(*dim)),
            TargetSpec::Uniform01 { dim } => Arc::new(UnitCube::new(*dim)),
            TargetSpec::GmmPosterior(cfg) => Arc::new(GmmPosterior::generate(cfg)?),
            TargetSpec::LogisticPosterior { dataset } => Arc::new(match dataset {
                LogisticDataset::Nodal => LogisticPosterior::nodal(),
                LogisticDataset::Path(p) => LogisticPosterior::from_csv_path(p)?,
                LogisticDataset::Synthetic { seed } => LogisticPosterior::synthetic(53, 6, *seed)?,
            }),
        })
    }
}
