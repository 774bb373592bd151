//! Fidelity and trace-distance error measures over a single logical qubit.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::{evolve_operator, outer, trace_distance, CMat, CVec, KrausChannel, Lindbladian, Tolerances};
use crate::error::{Error, Result};

/// `cos(θ/2)|0̄⟩ + e^{iφ} sin(θ/2)|1̄⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochPoint {
    pub theta: f64,
    pub phi: f64,
}

impl BlochPoint {
    pub const ZERO: BlochPoint = BlochPoint { theta: 0.0, phi: 0.0 };

    pub fn amplitudes(&self) -> [Complex64; 2] {
        let (s, c) = libm::sincos(self.theta / 2.0);
        [Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi)]
    }

    pub fn antipode(&self) -> BlochPoint {
        BlochPoint { theta: PI - self.theta, phi: self.phi + PI }
    }
}

/// Roughly uniform points: `z_k = 1 − (2k+1)/n`, azimuth advancing by the
/// golden angle.
pub fn fibonacci_sphere(n: usize) -> Vec<BlochPoint> {
    let golden = PI * (3.0 - libm::sqrt(5.0));
    (0..n)
        .map(|k| {
            let z = 1.0 - (2 * k + 1) as f64 / n as f64;
            BlochPoint { theta: libm::acos(z), phi: (k as f64 * golden) % (2.0 * PI) }
        })
        .collect()
}

/// The six cardinal states followed by a 32-point Fibonacci grid.
pub fn default_sampler() -> Vec<BlochPoint> {
    let h = PI / 2.0;
    let mut pts = alloc::vec![
        BlochPoint { theta: 0.0, phi: 0.0 },
        BlochPoint { theta: PI, phi: 0.0 },
        BlochPoint { theta: h, phi: 0.0 },
        BlochPoint { theta: h, phi: PI },
        BlochPoint { theta: h, phi: h },
        BlochPoint { theta: h, phi: -h },
    ];
    pts.extend(fibonacci_sphere(32));
    pts
}

/// `e^{𝓛t}` and `𝓡e^{𝓛t}` applied to the four operators `|w_i⟩⟨w_j|`;
/// any logical state follows by linearity.
#[derive(Clone, Debug)]
pub struct LogicalEvolution {
    pub times: Vec<f64>,
    raw: Vec<[CMat; 4]>,
    /// `⟨w_a| 𝓡e^{𝓛t}(|w_i⟩⟨w_j|) |w_b⟩` at index `[k][2i+j][2a+b]`.
    projected: Vec<[[Complex64; 4]; 4]>,
}

impl LogicalEvolution {
    pub fn compute(
        l: &Lindbladian,
        recovery: Option<&KrausChannel>,
        codewords: &[CVec],
        times: &[f64],
        tol: Tolerances,
    ) -> Result<LogicalEvolution> {
        if codewords.len() != 2 {
            return Err(Error::Dimension("exactly two codewords (one logical qubit) expected".into()));
        }
        let mut per_op = Vec::with_capacity(4);
        for i in 0..2 {
            for j in 0..2 {
                per_op.push(evolve_operator(l, &outer(&codewords[i], &codewords[j]), times, tol)?);
            }
        }
        let mut raw = Vec::with_capacity(times.len());
        let mut projected = Vec::with_capacity(times.len());
        for k in 0..times.len() {
            let ops: [CMat; 4] = core::array::from_fn(|o| per_op[o][k].clone());
            let mut g = [[Complex64::new(0.0, 0.0); 4]; 4];
            for (o, m) in ops.iter().enumerate() {
                let r = match recovery {
                    Some(ch) => ch.apply(m),
                    None => m.clone(),
                };
                for a in 0..2 {
                    let left = codewords[a].adjoint() * &r;
                    for b in 0..2 {
                        g[o][2 * a + b] = (&left * &codewords[b])[(0, 0)];
                    }
                }
            }
            raw.push(ops);
            projected.push(g);
        }
        Ok(LogicalEvolution { times: times.to_vec(), raw, projected })
    }

    /// `1 − ⟨ψ|𝓡e^{𝓛t_k}(ψ)|ψ⟩`.
    pub fn infidelity(&self, k: usize, p: &BlochPoint) -> f64 {
        let c = p.amplitudes();
        let g = &self.projected[k];
        let mut f = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                let cij = c[i] * c[j].conj();
                for a in 0..2 {
                    for b in 0..2 {
                        f += cij * c[a].conj() * c[b] * g[2 * i + j][2 * a + b];
                    }
                }
            }
        }
        1.0 - f.re
    }

    /// `e^{𝓛t_k}(|ψ⟩⟨ψ|)` without recovery.
    pub fn state(&self, k: usize, p: &BlochPoint) -> CMat {
        let c = p.amplitudes();
        let ops = &self.raw[k];
        let mut m = ops[0].scale(0.0);
        for i in 0..2 {
            for j in 0..2 {
                m += &ops[2 * i + j] * (c[i] * c[j].conj());
            }
        }
        m
    }

    pub fn epsilon(&self, sampler: &[BlochPoint]) -> Vec<f64> {
        (0..self.times.len())
            .map(|k| sampler.iter().map(|p| self.infidelity(k, p)).fold(0.0, f64::max))
            .collect()
    }

    /// `1 − min T(e^{𝓛t}ψ, e^{𝓛t}ψ⊥)` over antipodal pairs of the sampler.
    pub fn delta(&self, sampler: &[BlochPoint]) -> Vec<f64> {
        (0..self.times.len())
            .map(|k| {
                let min = sampler
                    .iter()
                    .map(|p| trace_distance(&self.state(k, p), &self.state(k, &p.antipode())))
                    .fold(f64::INFINITY, f64::min);
                1.0 - min
            })
            .collect()
    }
}

/// `ε(t) = 1 − min_ψ ⟨ψ|𝓡e^{𝓛t}(ψ)|ψ⟩` over the sampled codewords.
pub fn epsilon_exact(
    l: &Lindbladian,
    recovery: &KrausChannel,
    codewords: &[CVec],
    times: &[f64],
    sampler: &[BlochPoint],
) -> Result<Vec<f64>> {
    Ok(LogicalEvolution::compute(l, Some(recovery), codewords, times, Tolerances::default())?.epsilon(sampler))
}

/// `δ(t) = 1 − min T(e^{𝓛t}ψ₀, e^{𝓛t}ψ₁)` over sampled orthogonal pairs.
pub fn delta_exact(l: &Lindbladian, codewords: &[CVec], times: &[f64], sampler: &[BlochPoint]) -> Result<Vec<f64>> {
    Ok(LogicalEvolution::compute(l, None, codewords, times, Tolerances::default())?.delta(sampler))
}

/// `√Tr(|w⟩⟨w| 𝓛†𝓛 |w⟩⟨w|) = ‖𝓛(|w⟩⟨w|)‖_F` for a noise generator.
pub fn error_norm_proxy(l: &Lindbladian, codeword: &CVec) -> f64 {
    l.apply(&outer(codeword, codeword)).norm()
}
