//! Dense master-equation machinery for small Hilbert spaces.
//!
//! Superoperators act on operators directly (no vectorization) except in
//! [`Lindbladian::to_dense`] and [`KrausChannel::to_dense`], which use the
//! row-major convention `vec(AρB) = (A ⊗ Bᵀ) vec(ρ)`.

mod bosonic;
mod measures;
mod recovery;
mod stabilizer;

pub use bosonic::{binomial_codewords, ladder_words, oscillator_noise, TruncatedOscillator};
pub use measures::{
    default_sampler, delta_exact, epsilon_exact, error_norm_proxy, fibonacci_sphere, BlochPoint, LogicalEvolution,
};
pub use recovery::{build_recovery, kl_matrix, Completion, KlMatrix, KrausChannel};
pub use stabilizer::{low_weight_paulis, pauli_jumps, stabilizer_codewords, stabilizer_recovery};

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl PauliOperator {
    /// Dense `2ⁿ × 2ⁿ` matrix, qubit 0 as the leftmost tensor factor.
    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.num_qubits();
        if n > 14 {
            return Err(Error::Dimension(format!("{} qubits is too many for a dense matrix", n)));
        }
        let dim = 1usize << n;
        // Basis index bit (n − 1 − q) is qubit q.
        let rev = |mask: u64| (0..n).filter(|&q| mask >> q & 1 == 1).fold(0usize, |acc, q| acc | 1 << (n - 1 - q));
        let (xm, zm) = (rev(self.x_mask()), rev(self.z_mask()));
        let base = (self.phase().power() as u32 + self.y_count()) % 4;
        let unit = [ONE, Complex64::new(0.0, 1.0), -ONE, Complex64::new(0.0, -1.0)];
        let mut m = CMat::zeros(dim, dim);
        for b in 0..dim {
            let sign = ((b & zm).count_ones() % 2) * 2;
            m[(b ^ xm, b)] = unit[((base + sign) % 4) as usize];
        }
        Ok(m)
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

fn check_square(m: &CMat, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Dimension(format!("expected {}×{}, got {}×{}", dim, dim, m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix (the anti-Hermitian part is dropped).
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// `½‖ρ − σ‖₁` for Hermitian arguments.
pub fn trace_distance(rho: &CMat, sigma: &CMat) -> f64 {
    0.5 * hermitian_eigenvalues(&(rho - sigma)).iter().map(|e| e.abs()).sum::<f64>()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMat,
}

impl DensityMatrix {
    pub const TRACE_TOL: f64 = 1e-9;
    pub const PSD_TOL: f64 = 1e-9;

    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: CMat) -> Result<DensityMatrix> {
        if !m.is_square() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        let herm = max_abs(&(&m - m.adjoint()));
        if herm > DensityMatrix::TRACE_TOL {
            return Err(Error::Contract(format!("not Hermitian (defect {:e})", herm)));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > DensityMatrix::TRACE_TOL {
            return Err(Error::Contract(format!("trace {} ≠ 1", tr)));
        }
        let min = hermitian_eigenvalues(&m).into_iter().fold(f64::INFINITY, f64::min);
        if min < -DensityMatrix::PSD_TOL {
            return Err(Error::Contract(format!("negative eigenvalue {:e}", min)));
        }
        Ok(DensityMatrix { m })
    }

    pub fn pure(psi: &CVec) -> Result<DensityMatrix> {
        let norm = psi.norm();
        if !(norm > 0.0) {
            return Err(Error::Domain("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(DensityMatrix { m: outer(&v, &v) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    pub fn fidelity_with_pure(&self, psi: &CVec) -> f64 {
        (psi.adjoint() * &self.m * psi)[(0, 0)].re
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuperKind {
    Lindbladian,
    Channel,
}

/// Dense `D² × D²` matrix of a superoperator.
#[derive(Clone, Debug)]
pub struct Superoperator {
    pub kind: SuperKind,
    pub dim: usize,
    pub matrix: CMat,
}

impl Superoperator {
    pub fn apply(&self, rho: &CMat) -> CMat {
        let d = self.dim;
        let v = CVec::from_iterator(d * d, (0..d).flat_map(|i| (0..d).map(move |j| rho[(i, j)])));
        let out = &self.matrix * v;
        CMat::from_fn(d, d, |i, j| out[i * d + j])
    }
}

fn vec_kron(a: &CMat, b: &CMat) -> CMat {
    // A ⊗ Bᵀ
    a.kronecker(&b.transpose())
}

/// `𝓛(ρ) = κ(𝓡(ρ) − ρ) + Σ λ_μ (E ρ E† − ½{E†E, ρ})`.
#[derive(Clone, Debug)]
pub struct Lindbladian {
    dim: usize,
    jumps: Vec<(CMat, CMat, f64)>,
    heff: CMat,
    recovery: Option<(f64, KrausChannel)>,
}

/// Noise part of a Lindbladian from `(E_μ, λ_μ)` pairs.
pub fn build_lindbladian(jumps: &[(CMat, f64)]) -> Result<Lindbladian> {
    Lindbladian::from_jumps(jumps)
}

impl Lindbladian {
    pub fn from_jumps(jumps: &[(CMat, f64)]) -> Result<Lindbladian> {
        let dim = jumps.first().map(|(e, _)| e.nrows()).ok_or_else(|| Error::Dimension("no jump operators".into()))?;
        let mut heff = CMat::zeros(dim, dim);
        let mut stored = Vec::with_capacity(jumps.len());
        for (e, rate) in jumps {
            check_square(e, dim)?;
            if !(rate.is_finite() && *rate >= 0.0) {
                return Err(Error::Domain(format!("jump rate {}", rate)));
            }
            let ed = e.adjoint();
            heff -= (&ed * e).scale(0.5 * rate);
            stored.push((e.clone(), ed, *rate));
        }
        Ok(Lindbladian { dim, jumps: stored, heff, recovery: None })
    }

    /// Pure recovery generator `κ(𝓡 − 𝓘)`.
    pub fn recovery_only(kappa: f64, channel: KrausChannel) -> Result<Lindbladian> {
        let dim = channel.dim();
        Lindbladian { dim, jumps: Vec::new(), heff: CMat::zeros(dim, dim), recovery: None }.with_recovery(kappa, channel)
    }

    /// Adds the global-decoder term `κ(𝓡(ρ) − ρ)`.
    pub fn with_recovery(mut self, kappa: f64, channel: KrausChannel) -> Result<Lindbladian> {
        if channel.dim() != self.dim {
            return Err(Error::Dimension(format!("channel dim {} vs {}", channel.dim(), self.dim)));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::Domain(format!("kappa {}", kappa)));
        }
        self.recovery = Some((kappa, channel));
        Ok(self)
    }

    /// Multiplies every noise rate by `s`.
    pub fn scale_noise(&mut self, s: f64) {
        for j in &mut self.jumps {
            j.2 *= s;
        }
        self.heff.scale_mut(s);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SuperKind {
        SuperKind::Lindbladian
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = &self.heff * rho + rho * &self.heff;
        for (e, ed, rate) in &self.jumps {
            if *rate != 0.0 {
                out += (e * rho * ed).scale(*rate);
            }
        }
        if let Some((kappa, ch)) = &self.recovery {
            if *kappa != 0.0 {
                out += (ch.apply(rho) - rho).scale(*kappa);
            }
        }
        out
    }

    pub fn to_dense(&self) -> Superoperator {
        let d = self.dim;
        let id = CMat::identity(d, d);
        let mut m = vec_kron(&self.heff, &id) + vec_kron(&id, &self.heff.adjoint());
        for (e, ed, rate) in &self.jumps {
            m += vec_kron(e, ed).scale(*rate);
        }
        if let Some((kappa, ch)) = &self.recovery {
            m += (ch.to_dense().matrix - CMat::identity(d * d, d * d)).scale(*kappa);
        }
        Superoperator { kind: SuperKind::Lindbladian, dim: d, matrix: m }
    }
}

/// Step-size control for [`evolve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { atol: 1e-10, rtol: 1e-8, max_steps: 1_000_000 }
    }
}

const A: [[f64; 5]; 5] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

fn combo(y: &CMat, h: f64, ks: &[CMat], coef: &[f64]) -> CMat {
    let mut out = y.clone();
    for (k, &c) in ks.iter().zip(coef) {
        if c != 0.0 {
            out += k * Complex64::new(h * c, 0.0);
        }
    }
    out
}

/// `e^{𝓛t}(X)` at each grid time by adaptive Dormand–Prince 5(4). `X` need
/// not be a density matrix. Times must be nondecreasing and ≥ 0.
pub fn evolve_operator(l: &Lindbladian, x0: &CMat, times: &[f64], tol: Tolerances) -> Result<Vec<CMat>> {
    check_square(x0, l.dim)?;
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("times must be finite, ≥ 0 and nondecreasing".into()));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut y = x0.clone();
    let mut t = 0.0;
    let mut k1 = l.apply(&y);
    let scale0 = max_abs(&y).max(tol.atol);
    let mut h = {
        let d = max_abs(&k1);
        if d > 0.0 {
            (0.01 * scale0 / d).min(1.0)
        } else {
            1.0
        }
    };
    let mut steps = 0usize;
    for &target in times {
        while t < target {
            if steps >= tol.max_steps {
                return Err(Error::Integrator(format!("step limit reached at t = {}", t)));
            }
            steps += 1;
            let last = h >= target - t;
            let hh = if last { target - t } else { h };
            let mut ks: Vec<CMat> = Vec::with_capacity(7);
            ks.push(k1.clone());
            for row in A.iter() {
                let stage = combo(&y, hh, &ks, row);
                ks.push(l.apply(&stage));
            }
            let y_new = combo(&y, hh, &ks, &B);
            let k7 = l.apply(&y_new);
            ks.push(k7);
            let err = combo(&CMat::zeros(l.dim, l.dim), hh, &ks, &E);
            let mut acc = 0.0;
            for ((e, a), b) in err.iter().zip(y.iter()).zip(y_new.iter()) {
                let sc = tol.atol + tol.rtol * a.norm().max(b.norm());
                let r = e.norm() / sc;
                acc += r * r;
            }
            let en = libm::sqrt(acc / err.len() as f64);
            if !en.is_finite() {
                return Err(Error::Integrator(format!("non-finite error estimate at t = {}", t)));
            }
            if en <= 1.0 {
                t = if last { target } else { t + hh };
                y = y_new;
                k1 = ks.pop().unwrap();
            }
            let fac = if en == 0.0 { 5.0 } else { (0.9 * libm::pow(en, -0.2)).clamp(0.2, 5.0) };
            h = if en <= 1.0 && last { h.max(hh * fac) } else { hh * fac };
            if h < 1e-14 * t.max(1.0) {
                return Err(Error::Integrator(format!("step size underflow at t = {}", t)));
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// `ρ(t) = e^{𝓛t}ρ₀`.
pub fn evolve(l: &Lindbladian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    evolve_with(l, rho0, t, Tolerances::default())
}

pub fn evolve_with(l: &Lindbladian, rho0: &DensityMatrix, t: f64, tol: Tolerances) -> Result<DensityMatrix> {
    let m = evolve_operator(l, rho0.matrix(), &[t], tol)?.pop().unwrap();
    Ok(DensityMatrix { m })
}
