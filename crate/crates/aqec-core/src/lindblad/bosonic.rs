use alloc::format;

use num_complex::Complex64;

use super::{CMat, CVec};
use crate::error::{Error, Result};

/// Ladder operators on Fock states `|0⟩ … |D−1⟩`.
#[derive(Clone, Debug)]
pub struct TruncatedOscillator {
    pub dim: usize,
    pub a: CMat,
    pub adag: CMat,
    pub number: CMat,
}

impl TruncatedOscillator {
    pub fn new(dim: usize) -> Result<TruncatedOscillator> {
        if dim < 2 {
            return Err(Error::InvalidSize(format!("Fock cutoff {} < 2", dim)));
        }
        let mut a = CMat::zeros(dim, dim);
        for k in 1..dim {
            a[(k - 1, k)] = Complex64::new(libm::sqrt(k as f64), 0.0);
        }
        let adag = a.adjoint();
        let number = &adag * &a;
        Ok(TruncatedOscillator { dim, a, adag, number })
    }
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Binomial codewords with spacing `S = 2ℓ+1`:
/// `2^{-ℓ} Σ_{s even/odd ≤ S} √C(S, s) |sS⟩`.
pub fn binomial_codewords(ell: usize, dim: usize) -> Result<[CVec; 2]> {
    let s_max = 2 * ell + 1;
    if dim <= s_max * s_max {
        return Err(Error::InvalidSize(format!("cutoff {} must exceed {}", dim, s_max * s_max)));
    }
    let norm = libm::ldexp(1.0, -(ell as i32));
    let mut w = [CVec::zeros(dim), CVec::zeros(dim)];
    for s in 0..=s_max {
        w[s % 2][s * s_max] = Complex64::new(norm * libm::sqrt(binom(s_max as u64, s as u64)), 0.0);
    }
    Ok(w)
}

/// Every product of at most `ell` factors from `{a, a†, n}`, identity first.
pub fn ladder_words(osc: &TruncatedOscillator, ell: usize) -> alloc::vec::Vec<CMat> {
    let base = [&osc.a, &osc.adag, &osc.number];
    let id = CMat::identity(osc.dim, osc.dim);
    let mut out = alloc::vec![id.clone()];
    let mut layer = alloc::vec![id];
    for _ in 0..ell {
        let mut next = alloc::vec::Vec::with_capacity(layer.len() * 3);
        for m in &layer {
            for b in base {
                next.push(m * b);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Loss, gain and dephasing at rate `Δ/3` each.
pub fn oscillator_noise(osc: &TruncatedOscillator, delta: f64) -> alloc::vec::Vec<(CMat, f64)> {
    let w = delta / 3.0;
    alloc::vec![(osc.a.clone(), w), (osc.adag.clone(), w), (osc.number.clone(), w)]
}
