//! JSON job files. Every object rejects unknown keys.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::args::{Format, MethodArg, OrderArg, PairingArg};
use crate::potential::PotentialParams;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub command: String,
    pub potential: Option<JobPotential>,
    pub discretization: Option<JobDiscretization>,
    pub tolerances: Option<JobTolerances>,
    pub output: Option<JobOutput>,
    pub options: Option<JobOptions>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobPotential {
    pub name: String,
    #[serde(default)]
    pub params: PotentialParams,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDiscretization {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
    pub order: Option<OrderArg>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobTolerances {
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOutput {
    pub format: Option<Format>,
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    pub method: Option<MethodArg>,
    pub k: Option<usize>,
    pub pairing: Option<PairingArg>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub c: Option<f64>,
    pub refinements: Option<u32>,
    pub levels: Option<usize>,
    pub theta_override: Option<f64>,
}

pub fn load(path: &Path) -> Result<JobFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read job file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid job file {}: {e}", path.display()))
}
