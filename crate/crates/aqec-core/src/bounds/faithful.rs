//! Probability of a non-faithful trajectory and its late-time rate.
//!
//! With recoveries at rate `κ` and errors at rate `a = NΔ` the survival
//! `G(τ) = 1 − p(τ)` obeys the renewal equation
//! `G(τ) = e^{−κτ}s(τ) + ∫₀^τ κe^{−κu}s(u) G(τ−u) du`, where
//! `s(u) = P(Poisson(au) ≤ ℓ)`. Its `m`-th Neumann term is the contribution
//! of trajectories with exactly `m` recoveries.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::special::{poisson_ln_pmf, poisson_tail};
use super::{check_time, BoundInputs};
use crate::error::{Error, Result};

/// Largest Poisson(κt) mass a truncated recovery count may drop.
pub const QUADRATURE_TAIL: f64 = 1e-10;

/// Beyond this many recoveries the Neumann series is summed in closed form
/// by solving the Volterra equation directly.
const NESTED_LIMIT: usize = 40;

/// `κ/(1+κ/NΔ)^{w+1}`, plus `κξ` when a tolerable weight `h` is supplied,
/// with `w = h` in that case and `w = ℓ` otherwise.
pub fn delta_eff(inp: &BoundInputs) -> Result<f64> {
    inp.validate()?;
    let a = inp.error_rate();
    if a == 0.0 {
        return Ok(inp.kappa * if inp.h.is_some() { inp.xi } else { 0.0 });
    }
    let base = inp.kappa * libm::pow(inp.p1(), inp.weight() as f64 + 1.0);
    Ok(match inp.h {
        Some(_) => base + inp.kappa * inp.xi,
        None => base,
    })
}

/// `1 − exp(−Δ_eff t)`.
pub fn p_asymptotic(inp: &BoundInputs, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(-libm::expm1(-delta_eff(inp)? * t))
}

/// Smallest `m` with `P(Poisson(κt) > m) < QUADRATURE_TAIL`.
pub fn required_m_max(kappa_t: f64) -> usize {
    let mut m = libm::floor(kappa_t) as u64;
    while poisson_tail(m, kappa_t) >= QUADRATURE_TAIL {
        m += 1;
    }
    m as usize
}

fn survival_weights(ell: u32, a: f64, u: f64) -> f64 {
    // P(Poisson(au) ≤ ℓ) as a finite sum
    let x = a * u;
    let mut term = libm::exp(-x);
    let mut sum = term;
    for m in 1..=ell {
        term *= x / m as f64;
        sum += term;
    }
    sum.min(1.0)
}

fn grid_size(rate_t: f64) -> usize {
    let n = libm::ceil(64.0 * rate_t) as usize;
    n.clamp(512, 16_384)
}

/// Trapezoid solution of the renewal equation at `τ = t` on `n` steps, using
/// at most `m_max` recoveries (all of them when `m_max > NESTED_LIMIT`).
fn survival_on_grid(ell: u32, kappa: f64, a: f64, t: f64, n: usize, m_max: usize) -> f64 {
    let h = t / n as f64;
    let s: Vec<f64> = (0..=n).map(|i| survival_weights(ell, a, i as f64 * h)).collect();
    let g0: Vec<f64> = (0..=n).map(|i| libm::exp(-kappa * i as f64 * h) * s[i]).collect();
    let k: Vec<f64> = (0..=n).map(|i| kappa * libm::exp(-kappa * i as f64 * h) * s[i]).collect();
    if m_max > NESTED_LIMIT {
        let mut g = vec![0.0; n + 1];
        g[0] = g0[0];
        let diag = 1.0 - 0.5 * h * k[0];
        for i in 1..=n {
            let mut acc = 0.5 * k[i] * g[0];
            for j in 1..i {
                acc += k[j] * g[i - j];
            }
            g[i] = (g0[i] + h * acc) / diag;
        }
        return g[n];
    }
    let mut term = g0.clone();
    let mut total = g0[n];
    for _ in 0..m_max {
        let mut next = vec![0.0; n + 1];
        for i in 1..=n {
            let mut acc = 0.5 * (k[0] * term[i] + k[i] * term[0]);
            for j in 1..i {
                acc += k[j] * term[i - j];
            }
            next[i] = h * acc;
        }
        total += next[n];
        term = next;
    }
    total
}

/// `p(t)` from the nested recovery-time integrals, truncated after `m_max`
/// recoveries.
///
/// Each level is a trapezoid convolution on a shared grid; the grid is
/// refined once and the two results are Richardson-combined. `m_max` above
/// 40 switches to a direct Volterra solve, which sums every level at once.
pub fn p_exact_quadrature(inp: &BoundInputs, t: f64, m_max: usize) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    if inp.h.is_some() {
        return Err(Error::Domain("the faithful-trajectory integral is defined for ell only, not h".into()));
    }
    let (kappa, a) = (inp.kappa, inp.error_rate());
    if t == 0.0 {
        return Ok(0.0);
    }
    let dropped = poisson_tail(m_max as u64, kappa * t);
    if dropped >= QUADRATURE_TAIL {
        return Err(Error::Domain(format!(
            "m_max = {} drops Poisson({}) mass {:e}; need m_max ≥ {}",
            m_max,
            kappa * t,
            dropped,
            required_m_max(kappa * t)
        )));
    }
    let n = grid_size((kappa + a) * t);
    let coarse = survival_on_grid(inp.ell, kappa, a, t, n, m_max);
    let fine = survival_on_grid(inp.ell, kappa, a, t, 2 * n, m_max);
    let g = (4.0 * fine - coarse) / 3.0;
    if !g.is_finite() {
        return Err(Error::Integrator("quadrature did not converge".into()));
    }
    Ok((1.0 - g).clamp(0.0, 1.0))
}

/// `p(t) = Σ_k Pois(k; (κ+NΔ)t) q_k` where `q_k` is the chance that `k`
/// independent jumps, each an error with probability `NΔ/(κ+NΔ)`, contain
/// more than `ℓ` consecutive errors.
pub fn p_exact_series(inp: &BoundInputs, t: f64) -> Result<f64> {
    inp.validate()?;
    check_time(t)?;
    let gamma = inp.kappa + inp.error_rate();
    let x = gamma * t;
    if x == 0.0 {
        return Ok(0.0);
    }
    let pe = inp.p1();
    let ell = inp.ell as usize;
    let k_max = libm::ceil(x + 40.0 * libm::sqrt(x) + 60.0) as u64;
    // run[r]: still faithful with a current error run of length r
    let mut run = vec![0.0f64; ell + 1];
    run[0] = 1.0;
    let mut survive = 0.0;
    for k in 0..=k_max {
        let alive: f64 = run.iter().sum();
        survive += libm::exp(poisson_ln_pmf(k, x)) * alive;
        let mut next = vec![0.0f64; ell + 1];
        next[0] = alive * (1.0 - pe);
        for r in 0..ell {
            next[r + 1] = run[r] * pe;
        }
        run = next;
    }
    Ok((1.0 - survive).clamp(0.0, 1.0))
}

/// Exact late-time decay rate `λ` of `1 − p(t)`: the root of
/// `Σ_{m=0}^{ℓ} κa^m/(κ+a−λ)^{m+1} = 1` in `(0, κ+a)`.
pub fn faithful_decay_rate(inp: &BoundInputs) -> Result<f64> {
    inp.validate()?;
    let (kappa, a) = (inp.kappa, inp.error_rate());
    if a == 0.0 {
        return Ok(0.0);
    }
    if kappa == 0.0 {
        return Ok(a);
    }
    let f = |lam: f64| {
        let r = a / (kappa + a - lam);
        let mut term = kappa / (kappa + a - lam);
        let mut sum = term;
        for _ in 0..inp.ell {
            term *= r;
            sum += term;
        }
        sum - 1.0
    };
    let (mut lo, mut hi) = (0.0, kappa + a);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    let mut lam = 0.5 * (lo + hi);
    if lam < 0.5 * kappa {
        // equivalent form λ = κ(a/(κ+a−λ))^{ℓ+1}, free of cancellation for small λ
        for _ in 0..100 {
            let next = kappa * libm::pow(a / (kappa + a - lam), inp.ell as f64 + 1.0);
            let done = (next - lam).abs() <= 1e-15 * next;
            lam = next;
            if done {
                break;
            }
        }
    }
    Ok(lam)
}
