//! Experiment runner and file formats for `aqec-core`.
//!
//! A run takes a flat config, evaluates one figure dataset on a rayon pool,
//! and writes one CSV per curve plus `manifest.json`. `verify` re-hashes
//! those files and re-runs the assertions bound to the experiment.

pub mod analysis;
pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod opfile;
pub mod output;
pub mod runner;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use checks::{checks_for, Check};
pub use config::{ExperimentConfig, ExperimentId};
pub use error::{AppError, AppResult};
pub use output::{Curve, Manifest, Point};
pub use runner::Runner;

pub struct RunReport {
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
    pub curves: Vec<Curve>,
}

/// Evaluates the experiment without writing anything.
pub fn evaluate(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    experiments::run(cfg, runner)
}

pub fn run(cfg: &ExperimentConfig) -> AppResult<RunReport> {
    let runner = Runner::new(runner::resolve_workers(cfg.workers)?)?;
    let start = Instant::now();
    let curves = evaluate(cfg, &runner)?;
    let wall = start.elapsed().as_secs_f64();
    let (manifest_path, manifest) = output::write_outputs(cfg, &curves, runner.workers(), wall)?;
    Ok(RunReport { manifest_path, manifest, curves })
}

pub struct VerifyReport {
    pub experiment: ExperimentId,
    /// One entry per manifest file: name and problem, if any.
    pub files: Vec<(String, Option<String>)>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.files.iter().all(|(_, e)| e.is_none()) && self.checks.iter().all(|c| c.passed)
    }
}

/// Re-hashes every output listed in the manifest and runs the experiment's
/// assertions. Missing files are an error; corrupted ones are reported.
pub fn verify(manifest_path: &Path) -> AppResult<VerifyReport> {
    let manifest = Manifest::load(manifest_path)?;
    let id: ExperimentId = manifest.experiment.parse()?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let mut files = Vec::new();
    let mut curves = Vec::new();
    for (entry, status) in output::read_outputs(dir, &manifest)? {
        match status {
            output::FileStatus::Ok(c) => {
                curves.push(c);
                files.push((entry.name, None));
            }
            output::FileStatus::Missing => {
                return Err(AppError::Usage(format!("missing output file {}", dir.join(&entry.name).display())));
            }
            output::FileStatus::Corrupted { expected, found } => {
                files.push((entry.name, Some(format!("checksum mismatch: expected {}, found {}", expected, found))));
            }
        }
    }
    Ok(VerifyReport { experiment: id, files, checks: checks_for(id, &curves) })
}
