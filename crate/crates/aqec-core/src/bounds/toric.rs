//! Perturbative decay of toric-code coherences under dephasing.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::special::{ln_factorial, ln_gamma};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeDims {
    /// A `1 × L` strip; `L` must be odd.
    One,
    /// An `L × L` torus.
    Two,
}

/// Leading eigenvalue shift `Λ = −2c(L!/(L/2)!)(Δ/κ)^{L/2}κ` of a logical
/// coherence, with `c = 1` in 1D and `c = L` in 2D.
pub fn toric_perturbative(l: u32, kappa: f64, delta: f64, dims: LatticeDims) -> Result<f64> {
    if l < 2 {
        return Err(Error::Domain(format!("lattice size must be at least 2, got {}", l)));
    }
    if dims == LatticeDims::One && l.is_multiple_of(2) {
        return Err(Error::Domain(format!("the 1D formula needs odd L, got {}", l)));
    }
    if !(kappa > 0.0) || !(delta >= 0.0) {
        return Err(Error::Domain(format!("need kappa > 0 and delta ≥ 0 (kappa = {}, delta = {})", kappa, delta)));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let lf = l as f64;
    let c = match dims {
        LatticeDims::One => 1.0,
        LatticeDims::Two => lf,
    };
    let ln_mag = ln_factorial(l as u64) - ln_gamma(lf / 2.0 + 1.0) + lf / 2.0 * libm::log(delta / kappa);
    Ok(-2.0 * c * kappa * libm::exp(ln_mag))
}

/// `−2 L!/j!` with `L = 2j + 1`.
pub fn toric_1d_closed_form_trace(l: u32) -> Result<i128> {
    if l.is_multiple_of(2) || !(3..=31).contains(&l) {
        return Err(Error::Domain(format!("closed form needs odd 3 ≤ L ≤ 31, got {}", l)));
    }
    let j = (l - 1) / 2;
    let ratio: i128 = ((j + 1)..=l).map(|k| k as i128).product();
    Ok(-2 * ratio)
}

/// `tr[l₀† (𝓛′)^order (r₀)]` on the `1 × L` strip by enumeration.
///
/// `𝓛′(ρ) = Σ_i Z_iρZ_i − Lρ` over the `L` horizontal edges. A label sequence
/// of `i` dephasing jumps leaves the edge set `S`; the recovery applies the
/// minimum-weight edge set with the same star boundary, found by brute force
/// over all `2^L` subsets. The coherence `|2⟩⟨0|` picks up a sign `−1` when
/// `S` plus the correction wraps the ring, `+1` otherwise.
pub fn toric_1d_trace_oracle(l: u32, order: u32) -> Result<i128> {
    if l.is_multiple_of(2) || !(3..=7).contains(&l) {
        return Err(Error::Domain(format!("oracle supports odd 3 ≤ L ≤ 7, got {}", l)));
    }
    if order > 12 {
        return Err(Error::Domain(format!("order {} is too large to enumerate", order)));
    }
    let n = l as usize;
    let masks = 1usize << n;
    let full = masks - 1;
    let boundary = |m: usize| {
        let mut b = 0usize;
        for e in 0..n {
            if m >> e & 1 == 1 {
                b ^= (1 << e) | (1 << ((e + 1) % n));
            }
        }
        b
    };
    let mut best = vec![(u32::MAX, 0usize); masks];
    for m in 0..masks {
        let b = boundary(m);
        let w = m.count_ones();
        if w < best[b].0 {
            best[b] = (w, m);
        }
    }
    let sign: Vec<i128> = (0..masks).map(|m| if m ^ best[boundary(m)].1 == full { -1 } else { 1 }).collect();

    // counts[m]: label sequences of the current length whose edge set is m
    let mut counts = vec![0i128; masks];
    counts[0] = 1;
    let mut x = vec![1i128];
    for _ in 0..order {
        let mut next = vec![0i128; masks];
        for (m, &c) in counts.iter().enumerate() {
            if c != 0 {
                for e in 0..n {
                    next[m ^ (1 << e)] += c;
                }
            }
        }
        counts = next;
        x.push(counts.iter().zip(&sign).map(|(c, s)| c * s).sum());
    }
    let lf = l as i128;
    let mut total = 0i128;
    let mut binom = 1i128;
    for (i, xi) in x.iter().enumerate() {
        total += binom * (-lf).pow(order - i as u32) * xi;
        binom = binom * (order as i128 - i as i128) / (i as i128 + 1);
    }
    Ok(total)
}
