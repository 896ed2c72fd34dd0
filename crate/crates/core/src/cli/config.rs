//! Run configuration: flags layered over an optional JSON file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::analysis::SeriesMode;
use crate::constructions::{JumpParams, MultiJumpSpec};
use crate::graph::{MaterializationCap, GENERATOR_VERSION};
use crate::solver::SolverBudget;

/// Keys accepted in `--config <json>`. Flags take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub construction: Option<String>,
    pub nu: Option<usize>,
    pub nus: Option<Vec<usize>>,
    pub n: Option<usize>,
    /// Vertex count of the first product factor.
    #[serde(rename = "N1")]
    pub first_size: Option<usize>,
    /// Row count of the first product factor (`N1 = n1 * nu_1`).
    pub n1: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    pub cap: Option<usize>,
    pub budget_nodes: Option<u64>,
    pub budget_secs: Option<f64>,
    pub threads: Option<usize>,
    pub k_max: Option<usize>,
    pub trials: Option<usize>,
    #[serde(rename = "N")]
    pub vertices: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// A fully resolved graph construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum ConstructionConfig {
    Canonical {
        nu: usize,
        n: usize,
        seed: u64,
    },
    Simple {
        nu: usize,
        n: usize,
        seed: u64,
    },
    Product {
        nus: Vec<usize>,
        #[serde(rename = "N1")]
        first_size: usize,
        alpha: f64,
        seeds: Vec<u64>,
    },
}

impl ConstructionConfig {
    pub fn jump_params(&self) -> Result<JumpParams, CliError> {
        match *self {
            ConstructionConfig::Canonical { nu, n, seed }
            | ConstructionConfig::Simple { nu, n, seed } => Ok(JumpParams::new(nu, n, seed)?),
            ConstructionConfig::Product { .. } => Err(CliError::Usage(
                "expected a single jump graph, got a product".into(),
            )),
        }
    }

    pub fn multi_spec(&self) -> Result<MultiJumpSpec, CliError> {
        match self {
            ConstructionConfig::Product {
                nus,
                first_size,
                alpha,
                seeds,
            } => Ok(MultiJumpSpec::new(
                nus.clone(),
                *first_size,
                *alpha,
                seeds.clone(),
            )?),
            _ => Err(CliError::Usage("expected a product construction".into())),
        }
    }
}

/// Raw construction inputs gathered from flags and config, before validation.
#[derive(Clone, Debug, Default)]
pub struct ConstructionInputs {
    pub construction: Option<String>,
    pub nu: Option<usize>,
    pub n: Option<usize>,
    pub nus: Option<Vec<usize>>,
    pub n1: Option<usize>,
    pub first_size: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: u64,
    pub seeds: Option<Vec<u64>>,
}

impl ConstructionInputs {
    pub fn merge_file(mut self, f: &FileConfig) -> Self {
        self.construction = self.construction.or_else(|| f.construction.clone());
        self.nu = self.nu.or(f.nu);
        self.n = self.n.or(f.n);
        self.nus = self.nus.or_else(|| f.nus.clone());
        self.n1 = self.n1.or(f.n1);
        self.first_size = self.first_size.or(f.first_size);
        self.alpha = self.alpha.or(f.alpha);
        self.seeds = self.seeds.or_else(|| f.seeds.clone());
        self
    }

    pub fn resolve(self) -> Result<ConstructionConfig, CliError> {
        let kind = match self.construction.as_deref() {
            Some(k) => k.to_ascii_lowercase(),
            None if self.nus.is_some() => "product".into(),
            None => "canonical".into(),
        };
        let missing = |name: &str| CliError::Usage(format!("{kind} construction needs --{name}"));
        let out = match kind.as_str() {
            "canonical" | "simple" => {
                let nu = self.nu.ok_or_else(|| missing("nu"))?;
                let n = self.n.ok_or_else(|| missing("n"))?;
                let seed = self
                    .seeds
                    .as_ref()
                    .and_then(|s| s.first().copied())
                    .unwrap_or(self.seed);
                if kind == "canonical" {
                    ConstructionConfig::Canonical { nu, n, seed }
                } else {
                    ConstructionConfig::Simple { nu, n, seed }
                }
            }
            "product" | "multi" | "multi_jump" => {
                let nus = self.nus.ok_or_else(|| missing("nus"))?;
                if nus.is_empty() {
                    return Err(missing("nus"));
                }
                let first_size = match (self.first_size, self.n1) {
                    (Some(n1_vertices), _) => n1_vertices,
                    (None, Some(rows)) => rows
                        .checked_mul(nus[0])
                        .ok_or_else(|| CliError::Usage("n1 too large".into()))?,
                    (None, None) => return Err(missing("n1")),
                };
                let alpha = self.alpha.ok_or_else(|| missing("alpha"))?;
                let seeds = self.seeds.unwrap_or_else(|| {
                    (0..nus.len() as u64)
                        .map(|i| self.seed.wrapping_add(i))
                        .collect()
                });
                ConstructionConfig::Product {
                    nus,
                    first_size,
                    alpha,
                    seeds,
                }
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown construction {other:?} (canonical, simple, product)"
                )))
            }
        };
        // surface parameter errors before any work starts
        match &out {
            ConstructionConfig::Product { .. } => {
                out.multi_spec()?;
            }
            _ => {
                out.jump_params()?;
            }
        }
        Ok(out)
    }
}

/// Everything a run used, written into each output it produces.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionConfig>,
    pub seed: u64,
    pub cap: usize,
    pub budget_nodes: Option<u64>,
    pub budget_secs: Option<f64>,
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SeriesMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "N")]
    pub vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub generator_version: &'static str,
}

impl RunConfig {
    pub fn new(command: &str, common: &Common) -> Self {
        RunConfig {
            command: command.into(),
            construction: None,
            seed: common.seed,
            cap: common.cap.0,
            budget_nodes: common.budget_nodes,
            budget_secs: common.budget_secs,
            threads: common.threads,
            k_max: None,
            mode: None,
            trials: None,
            vertices: None,
            input: None,
            out: common.out.clone(),
            generator_version: GENERATOR_VERSION,
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run config serializes")
    }
}

/// Options shared by every subcommand once flags and config are merged.
#[derive(Clone, Debug)]
pub struct Common {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub cap: MaterializationCap,
    pub budget_nodes: Option<u64>,
    pub budget_secs: Option<f64>,
    pub threads: Option<usize>,
    pub file: FileConfig,
}

impl Common {
    pub fn budget(&self) -> Result<SolverBudget, CliError> {
        let mut b = SolverBudget::unlimited();
        if let Some(n) = self.budget_nodes {
            b = b.with_nodes(n);
        }
        if let Some(s) = self.budget_secs {
            if !(s.is_finite() && s > 0.0) {
                return Err(CliError::Usage(format!(
                    "--budget-secs must be positive, got {s}"
                )));
            }
            b = b.with_time(std::time::Duration::from_secs_f64(s));
        }
        Ok(b)
    }
}
