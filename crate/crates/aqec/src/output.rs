//! Curves as CSV files and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, ExperimentId};
use crate::error::{io_err, AppError, AppResult};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub stderr: Option<f64>,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y, stderr: None }
    }

    pub fn with_err(x: f64, y: f64, stderr: f64) -> Point {
        Point { x, y, stderr: Some(stderr) }
    }
}

/// One output series. `params` are constant columns repeated on every row.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub points: Vec<Point>,
}

impl Curve {
    pub fn new(name: impl Into<String>) -> Curve {
        Curve { name: name.into(), params: Vec::new(), points: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Curve {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, p: Point) {
        self.points.push(p);
    }

    pub fn get_param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.y).collect()
    }

    /// `y` at the point whose `x` equals `x` to 1e-12 relative.
    pub fn at(&self, x: f64) -> Option<Point> {
        self.points.iter().copied().find(|p| (p.x - x).abs() <= 1e-12 * x.abs().max(1.0))
    }

    pub fn has_stderr(&self) -> bool {
        self.points.iter().any(|p| p.stderr.is_some())
    }

    /// Parameters are repeated on every row, so a curve without points
    /// reads back without them.
    pub fn to_csv(&self) -> AppResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let with_err = self.has_stderr();
        let mut header = vec!["x".to_string(), "y".to_string()];
        if with_err {
            header.push("stderr".into());
        }
        header.extend(self.params.iter().map(|(k, _)| k.clone()));
        w.write_record(&header)?;
        for p in &self.points {
            let mut row = vec![p.x.to_string(), p.y.to_string()];
            if with_err {
                row.push(p.stderr.map_or(String::new(), |s| s.to_string()));
            }
            row.extend(self.params.iter().map(|(_, v)| v.clone()));
            w.write_record(&row)?;
        }
        w.into_inner().map_err(|e| AppError::Format(e.to_string()))
    }

    pub fn from_csv(name: &str, bytes: &[u8]) -> AppResult<Curve> {
        let mut r = csv::Reader::from_reader(bytes);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        if header.len() < 2 || header[0] != "x" || header[1] != "y" {
            return Err(AppError::Format(format!("{}: header must start with x,y", name)));
        }
        let with_err = header.get(2).is_some_and(|h| h == "stderr");
        let first_param = if with_err { 3 } else { 2 };
        let num = |s: &str, row: usize| {
            s.parse::<f64>().map_err(|_| AppError::Format(format!("{}: row {}: bad number '{}'", name, row + 1, s)))
        };
        let mut curve = Curve::new(name);
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let x = num(&rec[0], i)?;
            let y = num(&rec[1], i)?;
            let stderr = if with_err && !rec[2].is_empty() { Some(num(&rec[2], i)?) } else { None };
            curve.points.push(Point { x, y, stderr });
            if i == 0 {
                curve.params = header[first_param..]
                    .iter()
                    .zip(rec.iter().skip(first_param))
                    .map(|(k, v)| (k.clone(), v.to_string()))
                    .collect();
            }
        }
        Ok(curve)
    }
}

pub fn csv_name(id: ExperimentId, curve: &str) -> String {
    format!("{}_{}.csv", id, curve)
}

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub curve: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub version: String,
    pub seed: u64,
    pub full_scale: bool,
    pub parameters: BTreeMap<String, String>,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{:02x}", b)).collect()
}

impl Manifest {
    /// The config that reproduces this run, writing into `output`.
    pub fn to_config(&self, output: &Path) -> AppResult<ExperimentConfig> {
        let id: ExperimentId = self.experiment.parse()?;
        let mut cfg = ExperimentConfig::defaults(id, self.full_scale);
        for (k, v) in &self.parameters {
            match cfg.params.get_mut(k) {
                Some(slot) => *slot = v.clone(),
                None => return Err(AppError::Format(format!("manifest parameter '{}' unknown to {}", k, id))),
            }
        }
        cfg.seed = self.seed;
        cfg.output = output.to_path_buf();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> AppResult<Manifest> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Writes every curve and the manifest into `dir`.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    curves: &[Curve],
    workers: usize,
    wall_clock_seconds: f64,
) -> AppResult<(PathBuf, Manifest)> {
    let dir = &cfg.output;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = Vec::with_capacity(curves.len());
    for c in curves {
        let name = csv_name(cfg.experiment, &c.name);
        let bytes = c.to_csv()?;
        let path = dir.join(&name);
        fs::write(&path, &bytes).map_err(io_err(&path))?;
        files.push(FileEntry { name, curve: c.name.clone(), sha256: sha256_hex(&bytes) });
    }
    let manifest = Manifest {
        experiment: cfg.experiment.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        full_scale: cfg.full_scale,
        parameters: cfg.params.clone(),
        workers,
        wall_clock_seconds,
        files,
    };
    let path = dir.join(MANIFEST_NAME);
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    Ok((path, manifest))
}

/// Outcome of re-hashing one manifest entry.
#[derive(Clone, Debug, PartialEq)]
pub enum FileStatus {
    Ok(Curve),
    Missing,
    Corrupted { expected: String, found: String },
}

pub fn read_outputs(dir: &Path, manifest: &Manifest) -> AppResult<Vec<(FileEntry, FileStatus)>> {
    let mut out = Vec::new();
    for f in &manifest.files {
        let path = dir.join(&f.name);
        let status = match fs::read(&path) {
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => FileStatus::Missing,
            Err(e) => return Err(io_err(&path)(e)),
            Ok(bytes) => {
                let found = sha256_hex(&bytes);
                if found != f.sha256 {
                    FileStatus::Corrupted { expected: f.sha256.clone(), found }
                } else {
                    FileStatus::Ok(Curve::from_csv(&f.curve, &bytes)?)
                }
            }
        };
        out.push((f.clone(), status));
    }
    Ok(out)
}
