//! Closed-form bounds and estimates of the logical error.
//!
//! Every evaluator is total over its documented domain and returns an
//! explicit error instead of NaN.

mod faithful;
mod recurrence;
mod special;
mod toric;

pub use faithful::{
    delta_eff, faithful_decay_rate, p_asymptotic, p_exact_quadrature, p_exact_series, required_m_max,
    QUADRATURE_TAIL,
};
pub use recurrence::{recurrence_log_ratio, solve_recurrence, Recurrence};
pub use special::{f_ell, gamma_p, gamma_q, ln_factorial, ln_gamma, poisson_cdf, poisson_ln_pmf, poisson_tail};
pub use toric::{toric_1d_closed_form_trace, toric_1d_trace_oracle, toric_perturbative, LatticeDims};

use alloc::format;

use crate::error::{Error, Result};

/// Parameters shared by the bound evaluators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    /// Error radius `ℓ`.
    pub ell: u32,
    /// Tolerable error weight; `ℓ` when absent.
    pub h: Option<u32>,
    pub d: Option<u32>,
    pub xi: f64,
    pub chi: f64,
    pub kappa: f64,
    /// Per-channel noise rate `Δ`.
    pub delta: f64,
    /// Number of error channels `N`.
    pub n_channels: f64,
    /// `‖𝓛_E‖_{1→1,E}`.
    pub l_e_norm: f64,
}

impl BoundInputs {
    /// `χ = 0`, `ξ = 0`, `‖𝓛_E‖ = N` and no tolerable weight.
    pub fn new(ell: u32, kappa: f64, delta: f64, n_channels: f64) -> BoundInputs {
        BoundInputs { ell, h: None, d: None, xi: 0.0, chi: 0.0, kappa, delta, n_channels, l_e_norm: n_channels }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("xi", self.xi),
            ("chi", self.chi),
            ("kappa", self.kappa),
            ("delta", self.delta),
            ("n_channels", self.n_channels),
            ("l_e_norm", self.l_e_norm),
        ];
        for (name, v) in fields {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{} must be finite and nonnegative, got {}", name, v)));
            }
        }
        if self.xi > 1.0 {
            return Err(Error::Domain(format!("xi must be at most 1, got {}", self.xi)));
        }
        if let Some(h) = self.h {
            if h < self.ell {
                return Err(Error::Domain(format!("h = {} is below ell = {}", h, self.ell)));
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> u32 {
        self.h.unwrap_or(self.ell)
    }

    /// `NΔ`.
    pub fn error_rate(&self) -> f64 {
        self.n_channels * self.delta
    }

    /// `NΔ/(κ+NΔ)`, the chance that a jump is an error. Zero when no jumps occur.
    pub fn p1(&self) -> f64 {
        let a = self.error_rate();
        if a == 0.0 {
            0.0
        } else {
            a / (self.kappa + a)
        }
    }

    /// `η = (χ+1)Δ‖𝓛_E‖/κ`.
    pub fn eta(&self) -> Result<f64> {
        if !(self.kappa > 0.0) {
            return Err(Error::Domain("eta needs kappa > 0".into()));
        }
        Ok((self.chi + 1.0) * self.delta * self.l_e_norm / self.kappa)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || t.is_nan() {
        return Err(Error::Domain(format!("time must be nonnegative, got {}", t)));
    }
    Ok(())
}

/// `η^{ℓ+1} F_ℓ(κt)/(χ+1)`.
pub fn theorem1_bound(inp: &BoundInputs, t: f64) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    let eta = inp.eta()?;
    let f = f_ell(inp.ell, inp.kappa * t)?;
    if eta == 0.0 || f == 0.0 {
        return Ok(0.0);
    }
    Ok(libm::exp((inp.ell as f64 + 1.0) * libm::log(eta) + libm::log(f)) / (inp.chi + 1.0))
}

/// `η^{ℓ+1} κt/(χ+1)`, the late-time line of [`theorem1_bound`].
pub fn theorem1_linear(inp: &BoundInputs, t: f64) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    let eta = inp.eta()?;
    Ok(libm::pow(eta, inp.ell as f64 + 1.0) * inp.kappa * t / (inp.chi + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SoftThreshold {
    /// Integer minimizer of `(ℓr/r₀)^{ℓ+1}κ`.
    pub ell_min: u32,
    pub gamma_min: f64,
    /// `r₀/(er)`.
    pub ell_continuous: f64,
}

/// Scan `Γ(ℓ) = (ℓr/r₀)^{ℓ+1}κ` with `r = Δ/κ` over integer `ℓ ≥ 1`.
pub fn soft_threshold(inp: &BoundInputs, r0: f64) -> Result<SoftThreshold> {
    inp.validate()?;
    if !(inp.kappa > 0.0) || !(inp.delta > 0.0) || !(r0 > 0.0) {
        return Err(Error::Domain("soft threshold needs kappa, delta, r0 > 0".into()));
    }
    let x = inp.delta / inp.kappa / r0;
    let ell_continuous = 1.0 / (core::f64::consts::E * x);
    let log_rate = |l: f64| (l + 1.0) * libm::log(l * x);
    let cap = (4.0 * ell_continuous + 16.0).min(1e7) as u32;
    let mut best = (1u32, log_rate(1.0));
    for l in 2..=cap {
        let v = log_rate(l as f64);
        if v < best.1 {
            best = (l, v);
        } else if l as f64 > ell_continuous + 2.0 {
            break;
        }
    }
    Ok(SoftThreshold { ell_min: best.0, gamma_min: inp.kappa * libm::exp(best.1), ell_continuous })
}

/// `1 − exp(−(1−ξ)NΔ p₁^h t − ξ(κ+NΔ)t)`.
pub fn theorem2_bound(inp: &BoundInputs, t: f64) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    let a = inp.error_rate();
    let rate = (1.0 - inp.xi) * a * libm::pow(inp.p1(), inp.weight() as f64) + inp.xi * (inp.kappa + a);
    Ok(-libm::expm1(-rate * t))
}

/// `theorem2_bound` with `p₁^h` replaced by the random-walk failure probability `s₁`.
pub fn theorem3_bound(inp: &BoundInputs, t: f64) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    let a = inp.error_rate();
    let n = libm::round(inp.n_channels);
    if n != inp.n_channels || n < 1.0 {
        return Err(Error::Domain(format!("theorem3_bound needs an integer channel count, got {}", inp.n_channels)));
    }
    let s1 = if a == 0.0 { 0.0 } else { solve_recurrence(inp.weight(), n as u64, inp.p1())?.s(1) };
    let rate = (1.0 - inp.xi) * a * s1 + inp.xi * (inp.kappa + a);
    Ok(-libm::expm1(-rate * t))
}

/// `F_ℓ((κ+NΔ)t)/(1+κ/NΔ)^{ℓ+1}`.
pub fn theorem4_bound(inp: &BoundInputs, t: f64) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    let p1 = inp.p1();
    if p1 == 0.0 {
        f_ell(inp.ell, 0.0)?;
        return Ok(0.0);
    }
    let f = f_ell(inp.ell, (inp.kappa + inp.error_rate()) * t)?;
    Ok(libm::pow(p1, inp.ell as f64 + 1.0) * f)
}

/// `NΔt/(1+κ/NΔ)^ℓ`, the late-time line of [`theorem4_bound`].
pub fn theorem4_linear(inp: &BoundInputs, t: f64) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    Ok(inp.error_rate() * t * libm::pow(inp.p1(), inp.ell as f64))
}

/// `−κ ln(1−ae^{−κτ_c})/(κτ_c + ln 2)`.
pub fn theorem5_rate(a: f64, tau_c: f64, kappa: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&a) || !(tau_c > 0.0) || !(kappa >= 0.0) {
        return Err(Error::Domain(format!("theorem5_lower needs a ∈ [0,1), τ_c > 0, κ ≥ 0 (a = {}, τ_c = {}, κ = {})", a, tau_c, kappa)));
    }
    let kt = kappa * tau_c;
    Ok(-kappa * libm::log1p(-a * libm::exp(-kt)) / (kt + core::f64::consts::LN_2))
}

/// `½(1 − exp(−Δ_eff t))` with the Theorem-5 rate.
pub fn theorem5_lower(a: f64, tau_c: f64, kappa: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let rate = theorem5_rate(a, tau_c, kappa)?;
    Ok(-0.5 * libm::expm1(-rate * t))
}
