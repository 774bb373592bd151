use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{CMat, CVec};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};
use crate::trajectory::NoiseModel;

/// `|x̄⟩` for every logical basis string `x`, with `|0̄…0⟩ ∝ P|b⟩` for the
/// first computational basis state `b` it does not annihilate.
pub fn stabilizer_codewords(code: &StabilizerCode) -> Result<Vec<CVec>> {
    let n = code.num_qubits();
    let k = code.num_logical();
    if n > 12 {
        return Err(Error::Dimension(format!("{} qubits is too many for dense codewords", n)));
    }
    let dim = 1usize << n;
    let id = CMat::identity(dim, dim);
    let half = Complex64::new(0.5, 0.0);
    let mut proj = id.clone();
    for g in code.generators().iter().chain(code.logical_z()) {
        proj = (&id + g.to_matrix()?) * half * proj;
    }
    let zero = (0..dim)
        .map(|b| proj.column(b).into_owned())
        .find(|v| v.norm() > 1e-6)
        .ok_or_else(|| Error::Contract("empty codespace".into()))?;
    let zero = zero.unscale(zero.norm());
    let lx: Vec<CMat> = code.logical_x().iter().map(|x| x.to_matrix()).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(1 << k);
    for word in 0..(1usize << k) {
        let mut v = zero.clone();
        for (j, x) in lx.iter().enumerate() {
            if word >> j & 1 == 1 {
                v = x * v;
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Dense `(E_μ, λ_μΔ)` pairs of a Pauli noise model.
pub fn pauli_jumps(noise: &NoiseModel, delta: f64) -> Result<Vec<(CMat, f64)>> {
    noise.jumps().iter().zip(noise.weights()).map(|(j, &w)| Ok((j.to_matrix()?, w * delta))).collect()
}

/// Every Pauli of weight at most `ell`, identity first, in weight order.
pub fn low_weight_paulis(n: usize, ell: usize) -> Vec<PauliOperator> {
    let mut out = alloc::vec![PauliOperator::identity(n)];
    let mut frontier = alloc::vec![(PauliOperator::identity(n), 0usize)];
    for _ in 0..ell {
        let mut next = Vec::new();
        for (p, start) in &frontier {
            for q in *start..n {
                for k in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let mut e = p.clone();
                    e.set(q, k);
                    out.push(e.clone());
                    next.push((e, q + 1));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Knill–Laflamme recovery of `code` for every Pauli of weight at most `ell`.
pub fn stabilizer_recovery(code: &StabilizerCode, ell: usize) -> Result<(Vec<CVec>, super::KrausChannel)> {
    let words = stabilizer_codewords(code)?;
    let errs: Vec<CMat> =
        low_weight_paulis(code.num_qubits(), ell).iter().map(|p| p.to_matrix()).collect::<Result<_>>()?;
    let rec = super::build_recovery(&words, &errs)?;
    Ok((words, rec))
}
