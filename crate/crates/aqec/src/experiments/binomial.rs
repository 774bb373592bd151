use std::path::PathBuf;

use aqec_core::bounds::f_ell;
use aqec_core::lindblad::{
    binomial_codewords, build_lindbladian, build_recovery, default_sampler, ladder_words, oscillator_noise,
    BlochPoint, KrausChannel, LogicalEvolution, Tolerances,
};
use aqec_core::lindblad::TruncatedOscillator;

use super::require_positive;
use crate::analysis::log_log_slope;
use crate::config::ExperimentConfig;
use crate::error::{AppError, AppResult};
use crate::opfile;
use crate::output::{Curve, Point};
use crate::runner::Runner;

struct Setup {
    ell: usize,
    osc: TruncatedOscillator,
    words: Vec<aqec_core::lindblad::CVec>,
    rec: KrausChannel,
}

fn setup(ell: usize, dim: usize, cache: Option<&PathBuf>) -> AppResult<Setup> {
    let osc = TruncatedOscillator::new(dim)?;
    let words = binomial_codewords(ell, dim)?.to_vec();
    let path = cache.map(|d| d.join(format!("binomial_l{}_d{}.aqop", ell, dim)));
    let rec = match &path {
        Some(p) if p.exists() => opfile::load_channel(p)?,
        _ => {
            let rec = build_recovery(&words, &ladder_words(&osc, ell))?;
            if let Some(p) = &path {
                opfile::save_channel(p, &rec)?;
            }
            rec
        }
    };
    Ok(Setup { ell, osc, words, rec })
}

fn evolve(s: &Setup, kappa: f64, delta: f64, times: &[f64]) -> AppResult<LogicalEvolution> {
    let l = build_lindbladian(&oscillator_noise(&s.osc, delta))?.with_recovery(kappa, s.rec.clone())?;
    Ok(LogicalEvolution::compute(&l, Some(&s.rec), &s.words, times, Tolerances::default())?)
}

/// Binomial codes under loss, gain and dephasing. `ε` is the infidelity of
/// `|0̄⟩`; the Bloch-sampled worst case is written alongside.
pub fn fig6(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    let ells = cfg.list_u64("ells")?;
    let cutoffs = cfg.list_u64("cutoffs")?;
    if ells.len() != cutoffs.len() {
        return Err(AppError::Usage("ells and cutoffs must have the same length".into()));
    }
    let kappa = require_positive("kappa", cfg.f64("kappa")?)?;
    let delta = require_positive("delta", cfg.f64("delta")?)?;
    let times = cfg.list_f64("times")?;
    let deltas = cfg.list_f64("deltas")?;
    let window = cfg.list_f64("rate_window")?;
    let [t1, t2] = window[..] else {
        return Err(AppError::Usage("rate_window needs exactly two times".into()));
    };
    if !(0.0 <= t1 && t1 < t2) {
        return Err(AppError::Usage("rate_window must be increasing".into()));
    }
    let cache = Some(cfg.str("cache")?).filter(|s| !s.is_empty()).map(PathBuf::from);

    let setups = ells
        .iter()
        .zip(&cutoffs)
        .map(|(&l, &d)| setup(l as usize, d as usize, cache.as_ref()))
        .collect::<AppResult<Vec<_>>>()?;
    // one job per (code, Δ): panel (a) first, then the rate scan
    let mut jobs = Vec::new();
    for i in 0..setups.len() {
        jobs.push((i, delta, times.clone()));
        for &d in &deltas {
            jobs.push((i, require_positive("deltas", d)?, window.clone()));
        }
    }
    let results = runner.map(jobs, |(i, d, ts)| evolve(&setups[i], kappa, d, &ts).map(|e| (i, d, e)));

    let mut out = Vec::new();
    let mut fit_c = Curve::new("fit_c").param("delta", delta);
    let mut fit_cp = Curve::new("fit_cprime");
    let mut fit_slope = Curve::new("fit_slope");
    let sampler = default_sampler();
    let mut results = results.into_iter();
    for s in &setups {
        let (_, _, evo) = results.next().expect("one panel-(a) job per code")?;
        let l = s.ell as f64;
        let meta = |c: Curve| c.param("ell", s.ell).param("cutoff", s.osc.dim).param("kappa", kappa);
        let mut eps = meta(Curve::new(format!("epsilon_l{}", s.ell))).param("delta", delta);
        let mut logc = Vec::new();
        for (k, &t) in times.iter().enumerate() {
            let e = evo.infidelity(k, &BlochPoint::ZERO);
            eps.push(Point::new(t, e));
            let f = f_ell(s.ell as u32, kappa * t)?;
            if e > 0.0 && f > 0.0 {
                logc.push((e.ln() - f.ln()) / (l + 1.0) - delta.ln());
            }
        }
        let mut worst = meta(Curve::new(format!("epsilon_sampled_l{}", s.ell))).param("delta", delta);
        for (k, v) in evo.epsilon(&sampler).into_iter().enumerate() {
            worst.push(Point::new(times[k], v));
        }
        out.push(eps);
        out.push(worst);
        if !logc.is_empty() {
            fit_c.push(Point::new(l, (logc.iter().sum::<f64>() / logc.len() as f64).exp()));
        }

        let mut rate = meta(Curve::new(format!("rate_l{}", s.ell))).param("t1", t1).param("t2", t2);
        for _ in &deltas {
            let (_, d, evo) = results.next().expect("one job per rate point")?;
            let e1 = evo.infidelity(0, &BlochPoint::ZERO);
            let e2 = evo.infidelity(1, &BlochPoint::ZERO);
            rate.push(Point::new(d, (e2 - e1) / (t2 - t1)));
        }
        let (cp, slope) = rate_fit(&rate, s.ell);
        if let Some(cp) = cp {
            fit_cp.push(Point::new(l, cp));
        }
        if let Some(sl) = slope {
            fit_slope.push(Point::new(l, sl));
        }
        out.push(rate);
    }
    out.extend([fit_c, fit_cp, fit_slope]);
    Ok(out)
}

/// `c'` from `rate = (c'Δ)^{ℓ+1}` averaged in log space, and the log-log
/// slope of rate against `Δ`.
pub fn rate_fit(rate: &Curve, ell: usize) -> (Option<f64>, Option<f64>) {
    let logs: Vec<f64> = rate
        .points
        .iter()
        .filter(|p| p.x > 0.0 && p.y > 0.0)
        .map(|p| p.y.ln() / (ell as f64 + 1.0) - p.x.ln())
        .collect();
    let cp = (!logs.is_empty()).then(|| (logs.iter().sum::<f64>() / logs.len() as f64).exp());
    (cp, log_log_slope(&rate.xs(), &rate.ys()))
}
