use std::path::Path;

use serde::{Deserialize, Serialize};

use super::experiment::{ExperimentSpec, TestSpec};
use super::scenario::{Relation, Scenario};
use crate::boottest::{Method, TestKind};
use crate::error::{Error, Result};
use crate::models::{Estimator, Family};

/// `[scenario]` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub name: String,
    pub n: usize,
    /// `equal`, `alternative` or `scaled:<c>`.
    pub relation: String,
    /// Diagonal shift of the `sbm-epsilon` alternative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// `[test]` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSection {
    /// `boot`, `ase` or `eig`.
    pub method: String,
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(default)]
    pub fixed_communities: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_reading: Option<String>,
}

/// `[run]` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub mc_runs: usize,
    #[serde(default = "default_b")]
    pub b: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    /// Upper-tail probabilities reported by null-distribution studies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantiles: Option<Vec<f64>>,
}

fn default_kind() -> String {
    "equality".into()
}

fn default_b() -> usize {
    200
}

fn default_alpha() -> f64 {
    0.05
}

/// An experiment file with `[scenario]`, `[test]` and `[run]` sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSection,
    pub test: TestSection,
    pub run: RunSection,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// The fully resolved configuration, defaults included.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let s = &self.scenario;
        let relation: Relation = s.relation.parse()?;
        if s.epsilon.is_some() && s.name != "sbm-epsilon" {
            return Err(Error::Config(
                "key `epsilon` applies only to scenario sbm-epsilon".into(),
            ));
        }
        Scenario::from_name(&s.name, s.n, relation, s.epsilon.unwrap_or(0.0))
    }

    pub fn test_spec(&self) -> Result<TestSpec> {
        let t = &self.test;
        let config_err = |e: Error| Error::Config(e.to_string());
        let method: Method = t.method.parse().map_err(config_err)?;
        let kind: TestKind = t.kind.parse().map_err(config_err)?;
        Ok(match method {
            Method::Boot => {
                let model = t
                    .model
                    .as_deref()
                    .ok_or_else(|| Error::Config("method boot requires key `model`".into()))?;
                let family: Family = model.parse().map_err(config_err)?;
                TestSpec::Boot {
                    kind,
                    estimator: Estimator::from_family(family, t.k, t.d).map_err(config_err)?,
                    fixed_communities: t.fixed_communities,
                }
            }
            Method::Ase => TestSpec::Ase {
                kind,
                d: t.d
                    .ok_or_else(|| Error::Config("method ase requires key `d`".into()))?,
            },
            Method::Eig => {
                if kind != TestKind::Equality {
                    return Err(Error::Config("method eig only tests equality".into()));
                }
                TestSpec::Eig {
                    blocks: t
                        .blocks
                        .ok_or_else(|| Error::Config("method eig requires key `blocks`".into()))?,
                    reading: t
                        .threshold_reading
                        .as_deref()
                        .map(str::parse)
                        .transpose()
                        .map_err(config_err)?
                        .unwrap_or_default(),
                }
            }
        })
    }

    pub fn to_spec(&self) -> Result<ExperimentSpec> {
        let spec = ExperimentSpec {
            scenario: self.scenario()?,
            test: self.test_spec()?,
            mc_runs: self.run.mc_runs,
            b: self.run.b,
            alpha: self.run.alpha,
            seed: self.run.seed,
        };
        spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(spec)
    }

    /// Upper-tail probabilities for quantile tables; defaults to 5%, 4%, .., 1%.
    pub fn quantiles(&self) -> Vec<f64> {
        self.run
            .quantiles
            .clone()
            .unwrap_or_else(|| vec![0.05, 0.04, 0.03, 0.02, 0.01])
    }
}
