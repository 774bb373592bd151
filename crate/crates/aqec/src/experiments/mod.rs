//! One module per figure dataset. Each experiment maps a resolved config to
//! a list of curves; nothing here touches the filesystem except the
//! optional recovery cache of `fig6`.

mod binomial;
mod faithful;
mod perturbative;
mod recurrence;
mod soft;
mod stabilizer;
mod toric;

pub use binomial::rate_fit;
pub use recurrence::decade_exponent;
pub use stabilizer::FIVE_QUBIT_TOL;

use aqec_core::trajectory::Estimate;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::error::AppResult;
use crate::output::{Curve, Point};
use crate::runner::Runner;

pub fn run(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    match cfg.experiment {
        ExperimentId::Fig2 => soft::fig2(cfg),
        ExperimentId::Fig3 => faithful::fig3(cfg, runner),
        ExperimentId::Fig4a => toric::fig4a(cfg, runner),
        ExperimentId::Fig4b => toric::fig4b(cfg, runner),
        ExperimentId::Fig5a => stabilizer::fig5a(cfg, runner),
        ExperimentId::Fig5b => toric::fig5b(cfg, runner),
        ExperimentId::Fig6 => binomial::fig6(cfg, runner),
        ExperimentId::FigE7 => recurrence::fig_e7(cfg),
        ExperimentId::FigE8 => recurrence::fig_e8(cfg),
        ExperimentId::AppH => perturbative::app_h(cfg),
    }
}

fn mc_curve(name: String, est: &[Estimate], seed: u64) -> Curve {
    let n = est.first().map_or(0, |e| e.n_samples);
    let mut c = Curve::new(name).param("n_samples", n).param("seed", seed);
    c.points = est.iter().map(|e| Point::with_err(e.t, e.value, e.stderr)).collect();
    c
}

fn line(name: impl Into<String>, xs: &[f64], f: impl Fn(f64) -> AppResult<f64>) -> AppResult<Curve> {
    let mut c = Curve::new(name);
    for &x in xs {
        c.push(Point::new(x, f(x)?));
    }
    Ok(c)
}

fn require_positive(key: &str, v: f64) -> AppResult<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(crate::error::AppError::Usage(format!("{} must be positive, got {}", key, v)))
    }
}
