//! Recovery maps as syndrome → correction functions.

pub mod blossom;
pub mod mwpm;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::{CodeFamily, LogicalClass, StabilizerCode, Syndrome, ToricLattice};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

pub use mwpm::{mwpm_decode, Sector};

/// Largest `n − k` for which a lookup table is built.
pub const LOOKUP_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorBasis {
    XOnly,
    ZOnly,
    Full,
}

impl ErrorBasis {
    fn letters(self) -> &'static [Pauli] {
        match self {
            ErrorBasis::XOnly => &[Pauli::X],
            ErrorBasis::ZOnly => &[Pauli::Z],
            ErrorBasis::Full => &[Pauli::X, Pauli::Y, Pauli::Z],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Lookup,
    Mwpm,
    Majority,
}

#[derive(Clone, Debug)]
enum Inner {
    Lookup { table: Vec<PauliOperator>, basis: ErrorBasis },
    Mwpm(ToricLattice),
    Majority,
}

#[derive(Clone, Debug)]
pub struct Decoder {
    code: StabilizerCode,
    inner: Inner,
}

/// Result of one recovery: the corrected operator and its logical class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub residual: PauliOperator,
    pub logical: LogicalClass,
}

/// Exhaustive weight-ordered lookup table. Within a weight the correction with
/// the smallest `(x words, z words)` key wins.
pub fn build_lookup(code: &StabilizerCode, basis: ErrorBasis) -> Result<Decoder> {
    let r = code.generators().len();
    if r > LOOKUP_CAP {
        return Err(Error::BudgetExceeded { needed: r, cap: LOOKUP_CAP });
    }
    let n = code.num_qubits();
    let size = 1usize << r;
    let mut table: Vec<Option<PauliOperator>> = vec![None; size];
    let mut filled = 0usize;
    let letters = basis.letters();
    let mut support: Vec<usize> = Vec::new();
    for w in 0..=n {
        if filled == size {
            break;
        }
        let mut fresh: Vec<Option<PauliOperator>> = vec![None; size];
        // Enumerate supports of size w in lexicographic order.
        support.clear();
        support.extend(0..w);
        loop {
            let combos = letters.len().pow(w as u32);
            for mut code_word in 0..combos {
                let mut p = PauliOperator::identity(n);
                for &q in &support {
                    p.set(q, letters[code_word % letters.len()]);
                    code_word /= letters.len();
                }
                let idx = code.syndrome_index_unchecked(&p);
                if table[idx].is_some() {
                    continue;
                }
                match &fresh[idx] {
                    Some(cur) if cur.key_cmp(&p) != core::cmp::Ordering::Greater => {}
                    _ => fresh[idx] = Some(p),
                }
            }
            if !next_combination(&mut support, n) {
                break;
            }
        }
        for (slot, f) in table.iter_mut().zip(fresh) {
            if slot.is_none() && f.is_some() {
                *slot = f;
                filled += 1;
            }
        }
    }
    if filled != size {
        return Err(Error::Contract(format!(
            "{} of {} syndromes unreachable with {:?} errors",
            size - filled,
            size,
            basis
        )));
    }
    Ok(Decoder {
        code: code.clone(),
        inner: Inner::Lookup { table: table.into_iter().map(|p| p.unwrap()).collect(), basis },
    })
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Decoder {
    pub fn lookup(code: &StabilizerCode, basis: ErrorBasis) -> Result<Decoder> {
        build_lookup(code, basis)
    }

    pub fn mwpm(code: &StabilizerCode) -> Result<Decoder> {
        let lat = mwpm::lattice_of(code)?;
        Ok(Decoder { code: code.clone(), inner: Inner::Mwpm(lat) })
    }

    /// Majority vote on the bit-flip repetition code.
    pub fn majority(code: &StabilizerCode) -> Result<Decoder> {
        if code.family() != CodeFamily::Repetition {
            return Err(Error::Contract(format!("{} is not a repetition code", code.name())));
        }
        Ok(Decoder { code: code.clone(), inner: Inner::Majority })
    }

    /// Default decoder per code family.
    pub fn for_code(code: &StabilizerCode) -> Result<Decoder> {
        match code.family() {
            CodeFamily::Toric { .. } => Decoder::mwpm(code),
            CodeFamily::Repetition => Decoder::majority(code),
            _ => build_lookup(code, ErrorBasis::Full),
        }
    }

    pub fn kind(&self) -> DecoderKind {
        match self.inner {
            Inner::Lookup { .. } => DecoderKind::Lookup,
            Inner::Mwpm(_) => DecoderKind::Mwpm,
            Inner::Majority => DecoderKind::Majority,
        }
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn lookup_basis(&self) -> Option<ErrorBasis> {
        match self.inner {
            Inner::Lookup { basis, .. } => Some(basis),
            _ => None,
        }
    }

    /// Correction whose syndrome equals `s`.
    pub fn correction(&self, s: &Syndrome) -> Result<PauliOperator> {
        let r = self.code.generators().len();
        if s.len() != r {
            return Err(Error::LengthMismatch { left: r, right: s.len() });
        }
        match &self.inner {
            Inner::Lookup { table, .. } => Ok(table[s.to_index().unwrap() as usize].clone()),
            Inner::Mwpm(lat) => {
                let mut c = mwpm::decode_sector(*lat, s, Sector::Star)?;
                c.mul_in_place(&mwpm::decode_sector(*lat, s, Sector::Plaquette)?)?;
                c.set_phase(crate::pauli::Phase::One);
                Ok(c)
            }
            Inner::Majority => Ok(majority_correction(self.code.num_qubits(), s)),
        }
    }

    /// Applies the correction for `frame`'s syndrome. The residual has zero
    /// syndrome; `logical` is its class.
    pub fn apply_recovery(&self, frame: &PauliOperator) -> Result<Recovery> {
        let s = self.code.syndrome_of(frame)?;
        let c = self.correction(&s)?;
        let residual = c.multiply(frame)?;
        let logical = self.code.logical_class(&residual)?;
        Ok(Recovery { residual, logical })
    }

    /// Hot-path recovery on a Pauli frame: returns the logical class of the
    /// corrected frame and overwrites the frame with its canonical logical
    /// representative. Phases are not tracked.
    pub fn recover_in_place(&self, frame: &mut PauliOperator) -> LogicalClass {
        debug_assert_eq!(frame.num_qubits(), self.code.num_qubits());
        match &self.inner {
            Inner::Lookup { table, .. } => {
                let idx = self.code.syndrome_index_unchecked(frame);
                frame.xor_support(&table[idx]);
            }
            Inner::Mwpm(lat) => {
                let s = self.code.syndrome_unchecked(frame);
                let lat = *lat;
                for sector in [Sector::Star, Sector::Plaquette] {
                    let c = mwpm::decode_sector(lat, &s, sector).expect("torus syndromes have even parity");
                    frame.xor_support(&c);
                }
            }
            Inner::Majority => {
                let s = self.code.syndrome_unchecked(frame);
                frame.xor_support(&majority_correction(self.code.num_qubits(), &s));
            }
        }
        let class = self.code.class_unchecked(frame);
        self.code.write_representative(class, frame);
        class
    }
}

fn majority_correction(n: usize, s: &Syndrome) -> PauliOperator {
    let mut bits = vec![false; n];
    for i in 1..n {
        bits[i] = bits[i - 1] ^ s.get(i - 1);
    }
    let w = bits.iter().filter(|&&b| b).count();
    let flip = 2 * w > n;
    let support: Vec<usize> = (0..n).filter(|&i| bits[i] ^ flip).collect();
    PauliOperator::from_support(n, &support, Pauli::X)
}

pub fn apply_recovery(dec: &Decoder, frame: &PauliOperator) -> Result<Recovery> {
    dec.apply_recovery(frame)
}
