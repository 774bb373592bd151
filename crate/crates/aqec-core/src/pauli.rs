//! Bit-packed n-qubit Pauli operators.
//!
//! An operator is stored as `i^phase · σ_0 ⊗ σ_1 ⊗ … ⊗ σ_{n-1}` where each
//! `σ_q ∈ {I, X, Y, Z}` is encoded by the pair `(x_q, z_q)`: `I=(0,0)`,
//! `X=(1,0)`, `Z=(0,1)`, `Y=(1,1)`. `Y` is the Hermitian Pauli, not `XZ`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Global phase, a power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(k: u8) -> Phase {
        match k & 3 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> u8 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    /// `(re, im)` of the phase.
    pub fn value(self) -> (f64, f64) {
        match self {
            Phase::One => (1.0, 0.0),
            Phase::I => (0.0, 1.0),
            Phase::MinusOne => (-1.0, 0.0),
            Phase::MinusI => (0.0, -1.0),
        }
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn tail_mask(n: usize) -> u64 {
    match n % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> PauliOperator {
        let w = words_for(n);
        PauliOperator { n, x: vec![0; w], z: vec![0; w], phase: 0 }
    }

    /// Builds an operator from packed words. Bits beyond `n` are cleared.
    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: Phase) -> Result<PauliOperator> {
        let w = words_for(n);
        if x.len() != w || z.len() != w {
            return Err(Error::InvalidSize(alloc::format!(
                "{} qubits need {} words, got {} and {}",
                n,
                w,
                x.len(),
                z.len()
            )));
        }
        let mut p = PauliOperator { n, x, z, phase: phase.power() };
        if w > 0 {
            let m = tail_mask(n);
            p.x[w - 1] &= m;
            p.z[w - 1] &= m;
        }
        Ok(p)
    }

    pub fn single(n: usize, qubit: usize, kind: Pauli) -> PauliOperator {
        let mut p = PauliOperator::identity(n);
        p.set(qubit, kind);
        p
    }

    pub fn from_support(n: usize, qubits: &[usize], kind: Pauli) -> PauliOperator {
        let mut p = PauliOperator::identity(n);
        for &q in qubits {
            p.set(q, kind);
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn phase(&self) -> Phase {
        Phase::from_power(self.phase)
    }

    pub fn with_phase(mut self, phase: Phase) -> PauliOperator {
        self.phase = phase.power();
        self
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase.power();
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        assert!(qubit < self.n, "qubit {} out of range for {} qubits", qubit, self.n);
        let (w, b) = (qubit / 64, qubit % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, kind: Pauli) {
        assert!(qubit < self.n, "qubit {} out of range for {} qubits", qubit, self.n);
        let (w, b) = (qubit / 64, qubit % 64);
        let (xb, zb) = kind.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    /// True when the support is empty, whatever the phase.
    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    pub fn eq_up_to_phase(&self, other: &PauliOperator) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    fn check(&self, other: &PauliOperator) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        let mut out = self.clone();
        out.mul_in_place(other)?;
        Ok(out)
    }

    /// `self ← self · other`.
    pub fn mul_in_place(&mut self, other: &PauliOperator) -> Result<()> {
        self.check(other)?;
        self.mul_unchecked(other);
        Ok(())
    }

    #[inline]
    pub(crate) fn mul_unchecked(&mut self, other: &PauliOperator) {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..self.x.len() {
            let (x1, z1) = (self.x[w], self.z[w]);
            let (x2, z2) = (other.x[w], other.z[w]);
            let (xo1, yo1, zo1) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (xo2, yo2, zo2) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((xo1 & yo2) | (yo1 & zo2) | (zo1 & xo2)).count_ones();
            minus += ((xo1 & zo2) | (yo1 & xo2) | (zo1 & yo2)).count_ones();
            self.x[w] = x1 ^ x2;
            self.z[w] = z1 ^ z2;
        }
        let k = self.phase as u32 + other.phase as u32 + plus + 3 * minus;
        self.phase = (k & 3) as u8;
    }

    /// Multiplies by the support of `other`, ignoring phases. Used on frames.
    #[inline]
    pub(crate) fn xor_support(&mut self, other: &PauliOperator) {
        for w in 0..self.x.len() {
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
    }

    pub(crate) fn clear(&mut self) {
        self.x.iter_mut().for_each(|w| *w = 0);
        self.z.iter_mut().for_each(|w| *w = 0);
        self.phase = 0;
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check(other)?;
        Ok(!self.anticommutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &PauliOperator) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        acc & 1 == 1
    }

    /// Hermitian conjugate: the support is unchanged, `i ↔ −i`.
    pub fn adjoint(&self) -> PauliOperator {
        let mut p = self.clone();
        p.phase = (4 - p.phase) & 3;
        p
    }

    /// Number of `Y` factors.
    pub fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(x, z)| (x & z).count_ones()).sum()
    }

    /// Bit mask of the X part for `n ≤ 64`, qubit `q` at bit `q`.
    pub fn x_mask(&self) -> u64 {
        self.x.first().copied().unwrap_or(0)
    }

    pub fn z_mask(&self) -> u64 {
        self.z.first().copied().unwrap_or(0)
    }

    /// Lexicographic key over `(x words, z words)`.
    pub(crate) fn key_cmp(&self, other: &PauliOperator) -> core::cmp::Ordering {
        self.x.cmp(&other.x).then_with(|| self.z.cmp(&other.z))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase() {
            Phase::One => "+",
            Phase::I => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        };
        f.write_str(sign)?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<PauliOperator> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MinusI, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::One, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MinusOne, r)
        } else {
            (Phase::One, s)
        };
        let n = body.chars().count();
        let mut p = PauliOperator::identity(n);
        for (q, c) in body.chars().enumerate() {
            let kind = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(alloc::format!("unexpected '{}' in {:?}", other, String::from(s)))),
            };
            p.set(q, kind);
        }
        Ok(p.with_phase(phase))
    }
}
