use aqec_core::bounds::recurrence_log_ratio;

use crate::analysis::ols;
use crate::config::ExperimentConfig;
use crate::error::{AppError, AppResult};
use crate::output::{Curve, Point};

fn grid(cfg: &ExperimentConfig) -> AppResult<(Vec<u64>, Vec<f64>)> {
    let mut ns = cfg.list_u64("ns")?;
    ns.sort_unstable();
    ns.dedup();
    if ns.iter().any(|&n| n < 2) {
        return Err(AppError::Usage("every N must be at least 2".into()));
    }
    Ok((ns, cfg.list_f64("ratios")?))
}

fn ratio_curves(ns: &[u64], ratios: &[f64], h_of: impl Fn(u64) -> u32) -> AppResult<Vec<Curve>> {
    let mut out = Vec::new();
    for &r in ratios {
        let mut c = Curve::new(format!("log_ratio_k{}", r)).param("kappa_over_delta", r);
        for &n in ns {
            c.push(Point::new(n as f64, recurrence_log_ratio(h_of(n), n, r)?));
        }
        out.push(c);
    }
    Ok(out)
}

/// `ln(s₁/p₁^h)` at `h = ⌊fN⌋`; the saturated value is the one at the
/// largest `N`, fitted linearly in `κ/Δ`.
pub fn fig_e7(cfg: &ExperimentConfig) -> AppResult<Vec<Curve>> {
    let (ns, ratios) = grid(cfg)?;
    let f = cfg.f64("fraction")?;
    if !(0.0 < f && f < 1.0) {
        return Err(AppError::Usage("fraction must lie in (0, 1)".into()));
    }
    let mut out = ratio_curves(&ns, &ratios, |n| ((f * n as f64).floor() as u32).max(1))?;
    let mut sat = Curve::new("saturated").param("n", ns.last().copied().unwrap_or(0)).param("fraction", f);
    for c in &out {
        let last = c.points.last().expect("at least one N");
        sat.push(Point::new(c.get_param("kappa_over_delta").unwrap().parse().unwrap(), last.y));
    }
    if let Some((slope, icpt)) = ols(&sat.xs(), &sat.ys()) {
        sat = sat.param("slope", slope).param("intercept", icpt);
    }
    out.push(sat);
    Ok(out)
}

/// `h = N/2`: the N-exponent of `s₁/p₁^h`, fitted over the largest decade.
pub fn fig_e8(cfg: &ExperimentConfig) -> AppResult<Vec<Curve>> {
    let (ns, ratios) = grid(cfg)?;
    let mut out = ratio_curves(&ns, &ratios, |n| (n / 2) as u32)?;
    let mut exp = Curve::new("exponent");
    let mut want = Curve::new("expected_exponent");
    for (c, &r) in out.iter().zip(&ratios) {
        if let Some(e) = decade_exponent(c) {
            exp.push(Point::new(r, e));
        }
        want.push(Point::new(r, -r / 4.0));
    }
    out.extend([exp, want]);
    Ok(out)
}

/// OLS slope of `y = ln ratio` against `ln N` over `N ∈ [N_max/10, N_max]`.
pub fn decade_exponent(c: &Curve) -> Option<f64> {
    let nmax = c.points.iter().map(|p| p.x).fold(0.0, f64::max);
    let (x, y): (Vec<f64>, Vec<f64>) =
        c.points.iter().filter(|p| p.x >= nmax / 10.0 * (1.0 - 1e-12)).map(|p| (p.x.ln(), p.y)).unzip();
    ols(&x, &y).map(|(s, _)| s)
}
