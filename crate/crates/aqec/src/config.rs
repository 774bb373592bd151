//! Flat `key = value` experiment configuration.
//!
//! One setting per line, `#` starts a comment. Shared keys are `experiment`
//! (required), `seed`, `workers`, `output` and `full_scale`; every other key
//! must appear in the schema of the chosen experiment. Lists are
//! comma-separated.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{AppError, AppResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentId {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig6,
    FigE7,
    FigE8,
    AppH,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        ExperimentId::Fig2,
        ExperimentId::Fig3,
        ExperimentId::Fig4a,
        ExperimentId::Fig4b,
        ExperimentId::Fig5a,
        ExperimentId::Fig5b,
        ExperimentId::Fig6,
        ExperimentId::FigE7,
        ExperimentId::FigE8,
        ExperimentId::AppH,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Fig2 => "fig2",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4a => "fig4a",
            ExperimentId::Fig4b => "fig4b",
            ExperimentId::Fig5a => "fig5a",
            ExperimentId::Fig5b => "fig5b",
            ExperimentId::Fig6 => "fig6",
            ExperimentId::FigE7 => "figE7",
            ExperimentId::FigE8 => "figE8",
            ExperimentId::AppH => "appH",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = AppError;

    fn from_str(s: &str) -> AppResult<ExperimentId> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| AppError::Usage(format!("unknown experiment '{}'", s)))
    }
}

/// One documented parameter: name, desk-scale default, full-scale default.
#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub key: &'static str,
    pub desk: &'static str,
    pub full: &'static str,
    pub doc: &'static str,
}

macro_rules! p {
    ($key:expr, $desk:expr, $full:expr, $doc:expr) => {
        Param { key: $key, desk: $desk, full: $full, doc: $doc }
    };
}

pub fn schema(id: ExperimentId) -> &'static [Param] {
    match id {
        ExperimentId::Fig2 => &[
            p!("r0", "1", "1", "scale r0 of the soft threshold"),
            p!("kappa", "1", "1", "recovery rate"),
            p!("r_values", "0.05,0.02,0.01,0.005", "0.05,0.02,0.01,0.005", "noise-to-recovery ratios r for panel (a)"),
            p!("ell_max", "100", "400", "largest error radius in panel (a)"),
            p!("r_grid", "0.005,0.01,0.02,0.05,0.1,0.2,0.3", "0.002,0.005,0.01,0.02,0.05,0.1,0.2,0.3", "ratios for panel (b)"),
        ],
        ExperimentId::Fig3 => &[
            p!("ell", "6", "6", "error radius"),
            p!("kappa", "1", "1", "recovery rate"),
            p!("n_delta", "1", "1", "total error rate NΔ"),
            p!("times", "1,2,5,10,20,50,100,200,300,400,500,600,700,800,900,1000", "1,2,5,10,20,50,100,200,300,400,500,600,700,800,900,1000", "time grid"),
            p!("samples", "100000", "1000000", "Monte Carlo trajectories"),
            p!("quadrature_times", "1,5,10", "1,2,5,10,20,50", "times for the nested-integral evaluation"),
            p!("check_samples", "1000000", "4000000", "plain and importance-sampled trajectories at the quadrature times"),
            p!("slope_from", "300", "300", "first time used for the late-slope fit"),
        ],
        ExperimentId::Fig4a => &[
            p!("sizes", "3,4", "3,4,6,8", "toric lattice sizes L"),
            p!("delta", "1", "1", "bit-flip rate"),
            p!("taus", "0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2,0.25,0.3,0.4,0.5", "0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2,0.25,0.3,0.4,0.5", "noise durations τ"),
            p!("samples", "10000", "100000", "trajectories per point"),
            p!("level", "0.25", "0.25", "flip probability whose crossing defines τ_c"),
        ],
        ExperimentId::Fig4b => &[
            p!("size", "4", "4", "toric lattice size L"),
            p!("delta", "1", "1", "bit-flip rate"),
            p!("ts", "0.05,0.1,0.2", "0.02,0.05,0.1,0.15,0.2,0.3", "interval lengths t"),
            p!("ms", "2,4,8", "1,2,4,8,16", "numbers of intervals m"),
            p!("samples", "20000", "200000", "trajectories per (t, m)"),
            p!("kappas", "0,1,5", "0,1,5", "recovery rates for the lower-bound comparison"),
            p!("eps_times", "0.1,0.2,0.5,1,2,4", "0.1,0.2,0.5,1,2,4,8", "times for ε̂ in the lower-bound comparison"),
            p!("eps_samples", "10000", "100000", "trajectories per κ for ε̂"),
            p!("alpha_taus", "0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2,0.25,0.3,0.4,0.5", "0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2,0.25,0.3,0.4,0.5", "τ grid used to measure τ_c"),
            p!("alpha_samples", "10000", "100000", "trajectories per τ for τ_c"),
            p!("level", "0.25", "0.25", "a, and the crossing level that defines τ_c"),
        ],
        ExperimentId::Fig5a => &[
            p!("kappa", "1", "1", "recovery rate"),
            p!("n_delta", "1", "1", "total depolarizing rate NΔ"),
            p!("times", "0.001,0.002,0.005,0.01,0.02,0.05,0.1,0.2,0.5,1,2,5,10", "0.0001,0.0002,0.0005,0.001,0.002,0.005,0.01,0.02,0.05,0.1,0.2,0.5,1,2,5,10,20", "exact-integration grid"),
            p!("mc_times", "0.1,0.5,1,2,5,10", "0.1,0.5,1,2,5,10", "Monte Carlo grid"),
            p!("samples", "100000", "1000000", "Monte Carlo trajectories"),
        ],
        ExperimentId::Fig5b => &[
            p!("sizes", "4,6", "4,6,8", "toric lattice sizes L"),
            p!("kappa_per_qubit", "0.1", "0.1", "κ/n"),
            p!("delta", "0.01", "0.01", "per-channel depolarizing rate"),
            p!("times", "1,2,5,10,20,50,100", "1,2,5,10,20,50,100,200", "time grid"),
            p!("samples", "20000", "200000", "trajectories per size"),
            p!("h_fraction", "0.1031", "0.1031", "tolerable weight h/n of the matching decoder"),
        ],
        ExperimentId::Fig6 => &[
            p!("ells", "1,2", "1,2,3", "binomial error radii"),
            p!("cutoffs", "21,45", "30,60,100", "Fock cutoff per ℓ"),
            p!("kappa", "1", "1", "recovery rate"),
            p!("delta", "0.001", "0.001", "noise rate for panel (a)"),
            p!("times", "0.5,1,2,5,10,20,30", "0.5,1,2,5,10,20,30,50", "time grid for panel (a)"),
            p!("deltas", "0.001,0.002,0.005", "0.0005,0.001,0.002,0.005,0.01", "noise rates for panel (b)"),
            p!("rate_window", "20,30", "20,30", "times whose ε difference defines the saturated rate"),
            p!("cache", "", "", "directory for cached recovery operators; empty disables caching"),
        ],
        ExperimentId::FigE7 => &[
            p!("ns", "1000,10000,100000", "1000,10000,100000,1000000,10000000", "channel counts N"),
            p!("fraction", "0.4", "0.4", "h/N"),
            p!("ratios", "2,4,8", "1,2,4,8,16", "κ/Δ values"),
        ],
        ExperimentId::FigE8 => &[
            p!("ns", "1000,2000,5000,10000,20000,50000,100000", "1000,10000,100000,1000000,10000000", "channel counts N (even)"),
            p!("ratios", "2,4,8", "1,2,4,8,16", "κ/Δ values"),
        ],
        ExperimentId::AppH => &[
            p!("sizes", "3,5,7,9,11,15,21,31,41,61,81,101", "3,5,7,9,11,15,21,31,41,61,81,101,151,201", "odd lattice sizes for the closed forms"),
            p!("kappa0", "1", "1", "κ = κ₀L"),
            p!("delta", "0.05", "0.05", "dephasing rate"),
            p!("oracle_sizes", "3,5,7", "3,5,7", "1D sizes checked by enumeration"),
        ],
    }
}

pub const SHARED_KEYS: [&str; 5] = ["experiment", "seed", "workers", "output", "full_scale"];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub seed: u64,
    pub workers: Option<usize>,
    pub output: PathBuf,
    pub full_scale: bool,
    /// Every schema key, resolved to its override or default.
    pub params: BTreeMap<String, String>,
}

pub const DEFAULT_SEED: u64 = 20240601;

fn parse_bool(key: &str, v: &str) -> AppResult<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(AppError::Usage(format!("{}: expected true/false, got '{}'", key, v))),
    }
}

impl ExperimentConfig {
    /// Desk-scale defaults (or full-scale when `full_scale` is set).
    pub fn defaults(id: ExperimentId, full_scale: bool) -> ExperimentConfig {
        let params = schema(id)
            .iter()
            .map(|p| (p.key.to_string(), if full_scale { p.full } else { p.desk }.to_string()))
            .collect();
        ExperimentConfig {
            experiment: id,
            seed: DEFAULT_SEED,
            workers: None,
            output: PathBuf::from("out").join(id.as_str()),
            full_scale,
            params,
        }
    }

    pub fn parse(text: &str) -> AppResult<ExperimentConfig> {
        let mut raw: Vec<(String, String, usize)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| AppError::Usage(format!("line {}: expected 'key = value'", i + 1)))?;
            let k = k.trim().to_string();
            if raw.iter().any(|(seen, _, _)| *seen == k) {
                return Err(AppError::Usage(format!("line {}: duplicate key '{}'", i + 1, k)));
            }
            raw.push((k, v.trim().to_string(), i + 1));
        }
        let id: ExperimentId = raw
            .iter()
            .find(|(k, _, _)| k == "experiment")
            .ok_or_else(|| AppError::Usage("missing 'experiment' key".into()))?
            .1
            .parse()?;
        let full_scale = match raw.iter().find(|(k, _, _)| k == "full_scale") {
            Some((k, v, _)) => parse_bool(k, v)?,
            None => false,
        };
        let mut cfg = ExperimentConfig::defaults(id, full_scale);
        for (k, v, line) in raw {
            match k.as_str() {
                "experiment" | "full_scale" => {}
                "seed" => {
                    cfg.seed = v.parse().map_err(|_| AppError::Usage(format!("line {}: bad seed '{}'", line, v)))?
                }
                "workers" => {
                    let w: usize =
                        v.parse().map_err(|_| AppError::Usage(format!("line {}: bad worker count '{}'", line, v)))?;
                    if w == 0 {
                        return Err(AppError::Usage(format!("line {}: workers must be positive", line)));
                    }
                    cfg.workers = Some(w);
                }
                "output" => cfg.output = PathBuf::from(v),
                _ => match cfg.params.get_mut(&k) {
                    Some(slot) => *slot = v,
                    None => {
                        return Err(AppError::Usage(format!("line {}: unknown key '{}' for {}", line, k, id)))
                    }
                },
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> AppResult<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Usage(format!("cannot read config {}: {}", path.display(), e)))?;
        ExperimentConfig::parse(&text)
    }

    /// Type-check every parameter against its default's shape.
    fn validate(&self) -> AppResult<()> {
        for p in schema(self.experiment) {
            let v = &self.params[p.key];
            if p.key == "cache" {
                continue;
            }
            if p.desk.contains(',') || v.contains(',') {
                self.list_f64(p.key)?;
            } else {
                self.f64(p.key)?;
            }
        }
        Ok(())
    }

    /// Render as a config file that parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut s = format!("experiment = {}\nseed = {}\n", self.experiment, self.seed);
        if let Some(w) = self.workers {
            s += &format!("workers = {}\n", w);
        }
        s += &format!("output = {}\nfull_scale = {}\n", self.output.display(), self.full_scale);
        for (k, v) in &self.params {
            s += &format!("{} = {}\n", k, v);
        }
        s
    }

    fn raw(&self, key: &str) -> AppResult<&str> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| AppError::Usage(format!("{} has no parameter '{}'", self.experiment, key)))
    }

    pub fn str(&self, key: &str) -> AppResult<&str> {
        self.raw(key)
    }

    pub fn f64(&self, key: &str) -> AppResult<f64> {
        let v = self.raw(key)?;
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| AppError::Usage(format!("{}: expected a number, got '{}'", key, v)))
    }

    pub fn u64(&self, key: &str) -> AppResult<u64> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| AppError::Usage(format!("{}: expected a nonnegative integer, got '{}'", key, v)))
    }

    pub fn list_f64(&self, key: &str) -> AppResult<Vec<f64>> {
        let v = self.raw(key)?;
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| AppError::Usage(format!("{}: bad list entry '{}'", key, s.trim())))
            })
            .collect()
    }

    pub fn list_u64(&self, key: &str) -> AppResult<Vec<u64>> {
        let v = self.raw(key)?;
        v.split(',')
            .map(|s| s.trim().parse().map_err(|_| AppError::Usage(format!("{}: bad integer '{}'", key, s.trim()))))
            .collect()
    }
}
