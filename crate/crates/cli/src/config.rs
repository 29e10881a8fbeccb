//! The JSON run configuration.

use std::path::{Path, PathBuf};

use fenton_core::schema::SCHEMA_VERSION;
use fenton_core::{ProblemDescriptor, SolveOptions};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Oracle,
    Verify,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

/// Sweep values, listed or as an evenly spaced range (endpoints included).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Values {
    pub fn expand(&self) -> Vec<f64> {
        match self {
            Values::List(v) => v.clone(),
            Values::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                _ => (0..*count)
                    .map(|i| {
                        if i + 1 == *count {
                            *stop
                        } else {
                            start + (stop - start) * i as f64 / (count - 1) as f64
                        }
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub path: String,
    pub values: Values,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub path: String,
    pub values: Values,
    /// Optional second axis; rows then cover the product grid.
    #[serde(default)]
    pub second: Option<Axis>,
    /// Node system the swept coordinates are substituted into; defaults to
    /// equally spaced nodes.
    #[serde(default)]
    pub nodes: Option<Vec<f64>>,
}

impl SweepConfig {
    pub fn axes(&self) -> Vec<Axis> {
        let mut axes = vec![Axis {
            path: self.path.clone(),
            values: self.values.clone(),
        }];
        axes.extend(self.second.clone());
        axes
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub problem: Option<ProblemDescriptor>,
    #[serde(default)]
    pub options: SolveOptions,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn empty() -> Self {
        RunConfig {
            schema: SCHEMA_VERSION,
            command: None,
            problem: None,
            options: SolveOptions::default(),
            checks: Vec::new(),
            trials: None,
            sweep: None,
            output: OutputConfig::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        let c: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if c.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                c.schema
            )));
        }
        Ok(c)
    }

    pub fn problem(&self) -> Result<&ProblemDescriptor, CliError> {
        self.problem
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no \"problem\"".into()))
    }
}
