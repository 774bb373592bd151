use aqec_core::bounds::{toric_1d_closed_form_trace, toric_1d_trace_oracle, toric_perturbative, LatticeDims};

use crate::config::ExperimentConfig;
use crate::error::{AppError, AppResult};
use crate::output::{Curve, Point};

/// Leading eigenvalue shift of the toric memory with `κ = κ₀L`, and the
/// enumeration oracle for the 1D trace coefficient.
pub fn app_h(cfg: &ExperimentConfig) -> AppResult<Vec<Curve>> {
    let k0 = cfg.f64("kappa0")?;
    let delta = cfg.f64("delta")?;
    let sizes = cfg.list_u64("sizes")?;
    let mut one = Curve::new("shift_1d").param("kappa0", k0).param("delta", delta);
    let mut two = Curve::new("shift_2d").param("kappa0", k0).param("delta", delta);
    for &l in &sizes {
        if l % 2 == 0 {
            return Err(AppError::Usage(format!("sizes must be odd, got {}", l)));
        }
        let l32 = l as u32;
        let kappa = k0 * l as f64;
        one.push(Point::new(l as f64, toric_perturbative(l32, kappa, delta, LatticeDims::One)? / kappa));
        two.push(Point::new(l as f64, toric_perturbative(l32, kappa, delta, LatticeDims::Two)? / kappa));
    }
    let mut oracle = Curve::new("trace_oracle");
    let mut closed = Curve::new("trace_closed_form");
    let mut matched = Curve::new("trace_match");
    for l in cfg.list_u64("oracle_sizes")? {
        if l < 3 || l % 2 == 0 {
            return Err(AppError::Usage(format!("oracle sizes must be odd and at least 3, got {}", l)));
        }
        let l32 = l as u32;
        let o = toric_1d_trace_oracle(l32, (l32 - 1) / 2 + 1)?;
        let c = toric_1d_closed_form_trace(l32)?;
        oracle.push(Point::new(l as f64, o as f64));
        closed.push(Point::new(l as f64, c as f64));
        matched.push(Point::new(l as f64, (o == c) as u8 as f64));
    }
    Ok(vec![one, two, oracle, closed, matched])
}
