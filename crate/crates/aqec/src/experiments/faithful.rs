use aqec_core::bounds::{
    p_asymptotic, p_exact_quadrature, p_exact_series, required_m_max, theorem2_bound, theorem4_bound, BoundInputs,
};
use aqec_core::trajectory::{CountTally, FaithfulIsTask, FaithfulTask, PoissonParams};

use super::{line, mc_curve};
use crate::analysis::sub_seed;
use crate::config::ExperimentConfig;
use crate::error::{AppError, AppResult};
use crate::output::{Curve, Point};
use crate::runner::Runner;

/// Non-faithful probability `p(t)` for a single Poisson channel of rate
/// `NΔ` against recovery at rate `κ`.
pub fn fig3(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    let ell = cfg.u64("ell")? as u32;
    let kappa = cfg.f64("kappa")?;
    let nd = cfg.f64("n_delta")?;
    let times = cfg.list_f64("times")?;
    let samples = cfg.u64("samples")?;
    let inp = BoundInputs::new(ell, kappa, nd, 1.0);
    inp.validate()?;
    let params = PoissonParams::new(kappa, nd, 1.0)?;

    let mut out = vec![
        line("tolerable_weight", &times, |t| Ok(theorem2_bound(&inp, t)?))?,
        line("early_time", &times, |t| Ok(theorem4_bound(&inp, t)?))?,
        line("asymptotic", &times, |t| Ok(p_asymptotic(&inp, t)?))?,
        line("exact", &times, |t| Ok(p_exact_series(&inp, t)?))?,
    ];

    let seed = sub_seed(cfg.seed, 0);
    let task = FaithfulTask { ell: ell as usize, params, times: times.clone(), seed };
    let tally = runner.run(&task, samples).unwrap_or(CountTally { n: 0, counts: vec![0; times.len()] });
    out.push(
        mc_curve("mc".into(), &tally.finish(&times), seed)
            .param("ell", ell)
            .param("kappa", kappa)
            .param("n_delta", nd)
            .param("slope_from", cfg.f64("slope_from")?),
    );

    let qt = cfg.list_f64("quadrature_times")?;
    if qt.iter().any(|&t| t.is_nan() || t <= 0.0) {
        return Err(AppError::Usage("quadrature_times must be positive".into()));
    }
    out.push(line("quadrature", &qt, |t| Ok(p_exact_quadrature(&inp, t, required_m_max(kappa * t))?))?);
    // Independent estimates at the quadrature times: plain sampling, and
    // importance sampling for the rare-event end of the grid.
    let check_samples = cfg.u64("check_samples")?;
    let seed = sub_seed(cfg.seed, 1);
    let task = FaithfulTask { ell: ell as usize, params, times: qt.clone(), seed };
    let tally = runner.run(&task, check_samples).unwrap_or(CountTally { n: 0, counts: vec![0; qt.len()] });
    out.push(mc_curve("mc_check".into(), &tally.finish(&qt), seed));
    let mut is = Curve::new("mc_is").param("n_samples", check_samples);
    for (k, &t) in qt.iter().enumerate() {
        let s = sub_seed(cfg.seed, 100 + k as u64);
        let task = FaithfulIsTask::with_default_tilt(ell as usize, params, t, s);
        let e = runner.run(&task, check_samples).unwrap_or_default().finish(t);
        is.push(Point::with_err(t, e.value, e.stderr));
    }
    out.push(is.param("root_seed", cfg.seed));
    Ok(out)
}
