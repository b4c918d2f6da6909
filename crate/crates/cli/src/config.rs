// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! TOML run configuration. Command-line flags override file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub params: ParamSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSection {
    pub m: Option<u32>,
    pub s: Option<f64>,
    pub mj: Option<f64>,
    pub j: Option<f64>,
    pub ba: Option<f64>,
    pub b: Option<f64>,
    pub t: Option<f64>,
    pub j0: Option<f64>,
    pub theta0: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    pub eta_rel_tol: Option<f64>,
    pub phase_abs_tol: Option<f64>,
    pub oracle_steps: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub figure: Option<String>,
    pub resolution: Option<usize>,
    pub axis1: Option<String>,
    pub axis2: Option<String>,
    pub clamp: Option<bool>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    pub regime: Option<String>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
    pub emit_plot_script: Option<bool>,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::invalid(format!("config: {}", e.message())))
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(RunConfig::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::io(format!("cannot read config {}", path.display()), e))?;
                Self::parse(&text)
            }
        }
    }
}
