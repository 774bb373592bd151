use aqec_core::bounds::{soft_threshold, BoundInputs};

use super::require_positive;
use crate::config::ExperimentConfig;
use crate::error::AppResult;
use crate::output::{Curve, Point};

/// Late-time rate `(ℓr/r₀)^{ℓ+1}` against `ℓ`, and its integer minimum
/// against `r`.
pub fn fig2(cfg: &ExperimentConfig) -> AppResult<Vec<Curve>> {
    let r0 = require_positive("r0", cfg.f64("r0")?)?;
    let kappa = require_positive("kappa", cfg.f64("kappa")?)?;
    let ell_max = cfg.u64("ell_max")?.max(1);
    let mut out = Vec::new();
    for r in cfg.list_f64("r_values")? {
        let r = require_positive("r_values", r)?;
        let mut c = Curve::new(format!("rate_r{}", r)).param("r", r).param("r0", r0);
        for ell in 1..=ell_max {
            let l = ell as f64;
            c.push(Point::new(l, ((l + 1.0) * (l * r / r0).ln()).exp()));
        }
        out.push(c);
    }
    let mut ell_min = Curve::new("ell_min").param("r0", r0);
    let mut ell_cont = Curve::new("ell_continuous").param("r0", r0);
    let mut gamma = Curve::new("gamma_min").param("r0", r0).param("kappa", kappa);
    for r in cfg.list_f64("r_grid")? {
        let r = require_positive("r_grid", r)?;
        let st = soft_threshold(&BoundInputs::new(1, kappa, r * kappa, 1.0), r0)?;
        ell_min.push(Point::new(r, st.ell_min as f64));
        ell_cont.push(Point::new(r, st.ell_continuous));
        gamma.push(Point::new(r, st.gamma_min / kappa));
    }
    out.extend([ell_min, ell_cont, gamma]);
    Ok(out)
}
