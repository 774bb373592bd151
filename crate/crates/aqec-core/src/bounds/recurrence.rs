//! Failure probabilities of the absorbing random walk on the error weight.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `ln s_v` for `v = 0..=h+1`, with `s_0 = 0` and `s_{h+1} = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence {
    pub log_s: Vec<f64>,
}

impl Recurrence {
    pub fn h(&self) -> u32 {
        (self.log_s.len() - 2) as u32
    }

    pub fn s(&self, v: usize) -> f64 {
        libm::exp(self.log_s[v])
    }

    pub fn log_s1(&self) -> f64 {
        self.log_s[1]
    }
}

const RESCALE_ABOVE: f64 = 1e200;

/// Solves `s_v = (v/N)p₁s_{v−1} + (1−v/N)p₁s_{v+1}` with `s_0 = 0`,
/// `s_{h+1} = 1`.
///
/// Sweeps forward from `s_0 = 0, s_1 = 1` and divides by the final value.
/// The pair `(s_{v−1}, s_v)` is renormalized whenever it exceeds `1e200`,
/// the removed factor going into a running log, so `N` up to `10⁷` stays
/// finite.
pub fn solve_recurrence(h: u32, n: u64, p1: f64) -> Result<Recurrence> {
    if !(p1 > 0.0 && p1 <= 1.0) {
        return Err(Error::Domain(format!("p1 must lie in (0, 1], got {}", p1)));
    }
    if h == 0 {
        return Ok(Recurrence { log_s: alloc::vec![f64::NEG_INFINITY, 0.0] });
    }
    if (h as u64) >= n {
        return Err(Error::Domain(format!("need h < N (h = {}, N = {})", h, n)));
    }
    let nf = n as f64;
    let mut raw = Vec::with_capacity(h as usize + 2);
    raw.push(f64::NEG_INFINITY);
    raw.push(0.0);
    let (mut prev, mut cur, mut scale) = (0.0f64, 1.0f64, 0.0f64);
    for v in 1..=h as u64 {
        let f = v as f64 / nf;
        let next = (cur - f * p1 * prev) / ((1.0 - f) * p1);
        if !(next > 0.0) || !next.is_finite() {
            return Err(Error::Integrator(format!("recurrence sweep broke down at v = {}", v)));
        }
        prev = cur;
        cur = next;
        if cur > RESCALE_ABOVE {
            scale += libm::log(cur);
            prev /= cur;
            cur = 1.0;
        }
        raw.push(scale + libm::log(cur));
    }
    let top = raw[h as usize + 1];
    let log_s = raw.into_iter().map(|x| x - top).collect();
    Ok(Recurrence { log_s })
}

/// `ln(s₁/p₁^h)` with `p₁ = N/(N + κ/Δ)`.
pub fn recurrence_log_ratio(h: u32, n: u64, kappa_over_delta: f64) -> Result<f64> {
    if !(kappa_over_delta >= 0.0) {
        return Err(Error::Domain(format!("kappa/delta must be nonnegative, got {}", kappa_over_delta)));
    }
    let nf = n as f64;
    let p1 = nf / (nf + kappa_over_delta);
    let rec = solve_recurrence(h, n, p1)?;
    Ok(rec.log_s1() - h as f64 * libm::log(p1))
}
