//! Run manifests: every invocation writes exactly one `manifest.json` next
//! to its outputs. Re-running the echoed command with the recorded seed
//! reproduces every output file byte for byte (the manifest itself carries
//! the wall clock, so it is the one file excluded from that guarantee).

use serde::Serialize;
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Full argv echo of the run.
    pub command: Vec<String>,
    pub law: Option<String>,
    pub grid: Option<String>,
    pub seed: u64,
    pub n_traj: Option<usize>,
    pub rel_tol: f64,
    pub threads: Option<usize>,
    pub code_version: String,
    pub wall_clock_ms: u128,
    /// Output files written by this run, relative to the output directory.
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn new(seed: u64, rel_tol: f64, threads: Option<usize>) -> Self {
        RunManifest {
            command: std::env::args().collect(),
            law: None,
            grid: None,
            seed,
            n_traj: None,
            rel_tol,
            threads,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_ms: 0,
            files: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), body + "\n")
    }
}
