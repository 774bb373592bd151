//! Knill–Laflamme recovery channels.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{check_square, hermitian_eigenvalues, max_abs, vec_kron, CMat, CVec, SuperKind, Superoperator};
use crate::error::{Error, Result};

/// Kraus operators plus an optional completion `ρ ↦ Tr(ρ P⊥) σ`.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<CMat>,
    adj: Vec<CMat>,
    completion: Option<Completion>,
}

#[derive(Clone, Debug)]
pub struct Completion {
    /// `P⊥ = I − Σ R†R`.
    pub complement: CMat,
    pub target: CMat,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMat>, completion: Option<Completion>) -> Result<KrausChannel> {
        let dim = ops.first().map(|k| k.ncols()).ok_or_else(|| Error::Dimension("no Kraus operators".into()))?;
        for k in &ops {
            check_square(k, dim)?;
        }
        if let Some(c) = &completion {
            check_square(&c.complement, dim)?;
            check_square(&c.target, dim)?;
        }
        let adj = ops.iter().map(|k| k.adjoint()).collect();
        Ok(KrausChannel { dim, ops, adj, completion })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.ops
    }

    pub fn completion(&self) -> Option<&Completion> {
        self.completion.as_ref()
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (k, kd) in self.ops.iter().zip(&self.adj) {
            out += k * rho * kd;
        }
        if let Some(c) = &self.completion {
            let w = (rho * &c.complement).trace();
            out += &c.target * w;
        }
        out
    }

    /// `‖Σ K†K + P⊥ − I‖_max`; zero for a trace-preserving channel.
    pub fn completeness_defect(&self) -> f64 {
        let mut s = -CMat::identity(self.dim, self.dim);
        for k in &self.ops {
            s += k.adjoint() * k;
        }
        if let Some(c) = &self.completion {
            s += &c.complement * c.target.trace();
        }
        max_abs(&s)
    }

    pub fn to_dense(&self) -> Superoperator {
        let d = self.dim;
        let mut m = CMat::zeros(d * d, d * d);
        for k in &self.ops {
            m += vec_kron(k, &k.adjoint());
        }
        if let Some(c) = &self.completion {
            // vec(σ) vec(P⊥ᵀ)ᵀ
            let t = CVec::from_iterator(d * d, (0..d).flat_map(|i| (0..d).map(move |j| c.target[(i, j)])));
            let p = CVec::from_iterator(d * d, (0..d).flat_map(|i| (0..d).map(move |j| c.complement[(j, i)])));
            m += t * p.transpose();
        }
        Superoperator { kind: SuperKind::Channel, dim: d, matrix: m }
    }
}

/// `C_{μν} = ⟨w₀|K_μ†K_ν|w₀⟩` and whether `⟨w_i|K_μ†K_ν|w_j⟩ = C_{μν}δ_ij`
/// holds for every pair.
#[derive(Clone, Debug)]
pub struct KlMatrix {
    pub c: CMat,
    pub satisfied: bool,
    /// Largest violation, relative to `max(1, max|C|)`.
    pub defect: f64,
}

pub const KL_TOL: f64 = 1e-9;

fn codeword_matrix(codewords: &[CVec]) -> Result<CMat> {
    let dim = codewords.first().map(|w| w.len()).ok_or_else(|| Error::Dimension("no codewords".into()))?;
    if codewords.iter().any(|w| w.len() != dim) {
        return Err(Error::Dimension("codewords of different length".into()));
    }
    let w = CMat::from_columns(codewords);
    let gram = w.adjoint() * &w;
    let off = max_abs(&(gram - CMat::identity(codewords.len(), codewords.len())));
    if off > 1e-9 {
        return Err(Error::Contract(format!("codewords not orthonormal (defect {:e})", off)));
    }
    Ok(w)
}

pub fn kl_matrix(codewords: &[CVec], errors: &[CMat]) -> Result<KlMatrix> {
    let w = codeword_matrix(codewords)?;
    let q = codewords.len();
    let m = errors.len();
    for e in errors {
        check_square(e, w.nrows())?;
    }
    let kw: Vec<CMat> = errors.iter().map(|k| k * &w).collect();
    let mut c = CMat::zeros(m, m);
    let mut worst = 0.0f64;
    let mut blocks = Vec::with_capacity(m * m);
    for (i, a) in kw.iter().enumerate() {
        for (j, b) in kw.iter().enumerate() {
            let g = a.adjoint() * b;
            c[(i, j)] = g[(0, 0)];
            blocks.push(g);
        }
    }
    let scale = max_abs(&c).max(1.0);
    for (idx, g) in blocks.iter().enumerate() {
        let cij = c[(idx / m, idx % m)];
        for r in 0..q {
            for s in 0..q {
                let want = if r == s { cij } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((g[(r, s)] - want).norm() / scale);
            }
        }
    }
    Ok(KlMatrix { c, satisfied: worst <= KL_TOL, defect: worst })
}

/// Recovery built from the KL matrix: diagonalize `C = u d u†`, set
/// `F_α = Σ_ν u_{να} K_ν` and `R_α = P F_α† / √d_α` for `d_α` above
/// `1e-10 · max d`, then send the remaining weight `Tr(ρP⊥)` to `P/q`.
pub fn build_recovery(codewords: &[CVec], errors: &[CMat]) -> Result<KrausChannel> {
    let kl = kl_matrix(codewords, errors)?;
    if !kl.satisfied {
        return Err(Error::Contract(format!("Knill–Laflamme condition fails (defect {:e})", kl.defect)));
    }
    let w = codeword_matrix(codewords)?;
    let dim = w.nrows();
    let q = codewords.len() as f64;
    let p = &w * w.adjoint();
    let herm = (&kl.c + kl.c.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let dmax = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max);
    let dmin = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if dmin < -1e-9 * dmax.max(1.0) {
        return Err(Error::Contract(format!("KL matrix not PSD (eigenvalue {:e})", dmin)));
    }
    let mut ops = Vec::new();
    for (alpha, &d) in eig.eigenvalues.iter().enumerate() {
        if d <= 1e-10 * dmax {
            continue;
        }
        let mut f = CMat::zeros(dim, dim);
        for (nu, k) in errors.iter().enumerate() {
            f += k * eig.eigenvectors[(nu, alpha)];
        }
        ops.push((&p * f.adjoint()).unscale(libm::sqrt(d)));
    }
    let mut complement = CMat::identity(dim, dim);
    for r in &ops {
        complement -= r.adjoint() * r;
    }
    let min = hermitian_eigenvalues(&complement).into_iter().fold(f64::INFINITY, f64::min);
    if min < -1e-8 {
        return Err(Error::Contract(format!("Kraus operators overcomplete (eigenvalue {:e})", min)));
    }
    let target = p.unscale(q);
    KrausChannel::new(ops, Some(Completion { complement, target }))
}
