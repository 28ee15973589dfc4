//! Command-line front door for the spiking FP8 datapaths: exhaustive
//! verification campaigns, robustness scans, latency benchmarks, netlist
//! export, and the forward-only MLP demo.

pub mod bench;
pub mod export;
pub mod io;
pub mod mlp;
pub mod verify;

use anyhow::{Context, Result};
use serde::Deserialize;
use spikefp::robustness::{beta_scan, sigma_scan, ScanKind, ScanResult, ScanSpec};
use std::path::Path;

/// Scan config file: a [`ScanSpec`] plus the scan kind.
#[derive(Debug, Clone, Deserialize)]
pub struct ScanConfigFile {
    pub kind: ScanKind,
    #[serde(flatten)]
    pub spec: ScanSpec,
}

pub fn run_scan_config(path: &Path) -> Result<ScanResult> {
    let raw = std::fs::read_to_string(path)
        .with_context(|| format!("reading scan config {}", path.display()))?;
    let cfg: ScanConfigFile =
        serde_json::from_str(&raw).with_context(|| "parsing scan config")?;
    let result = match cfg.kind {
        ScanKind::Beta => beta_scan(&cfg.spec)?,
        ScanKind::Sigma => sigma_scan(&cfg.spec)?,
    };
    Ok(result)
}
