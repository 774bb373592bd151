//! Stabilizer codes, syndromes and logical classes.
//!
//! Syndrome bit `α` refers to `generators()[α]`; the generator order of every
//! constructor below is fixed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    len: usize,
    words: Vec<u64>,
}

impl Syndrome {
    pub fn zero(len: usize) -> Syndrome {
        Syndrome { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bits(bits: &[bool]) -> Syndrome {
        let mut s = Syndrome::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    pub fn from_index(len: usize, index: u64) -> Syndrome {
        let mut s = Syndrome::zero(len);
        if len > 0 {
            s.words[0] = index & if len >= 64 { u64::MAX } else { (1 << len) - 1 };
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Integer form with bit `α` at position `α`; `None` above 64 bits.
    pub fn to_index(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Logical Pauli class of a zero-syndrome operator, one `(x, z)` pair per
/// logical qubit. Bit `j` of `x` is set when the operator flips `Z̄_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct LogicalClass {
    pub x: u64,
    pub z: u64,
}

impl LogicalClass {
    pub const IDENTITY: LogicalClass = LogicalClass { x: 0, z: 0 };

    pub fn get(&self, j: usize) -> Pauli {
        Pauli::from_bits((self.x >> j) & 1 == 1, (self.z >> j) & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn compose(self, other: LogicalClass) -> LogicalClass {
        LogicalClass { x: self.x ^ other.x, z: self.z ^ other.z }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeFamily {
    FiveQubit,
    Toric { l: usize },
    Repetition,
    Custom,
}

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    name: String,
    family: CodeFamily,
    n: usize,
    generators: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
    distance: usize,
}

impl StabilizerCode {
    /// Validates commutation relations and generator independence.
    pub fn new(
        name: &str,
        n: usize,
        generators: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
        distance: usize,
    ) -> Result<StabilizerCode> {
        let code = StabilizerCode {
            name: name.to_string(),
            family: CodeFamily::Custom,
            n,
            generators,
            logical_x,
            logical_z,
            distance,
        };
        code.validate()?;
        Ok(code)
    }

    fn validate(&self) -> Result<()> {
        let all = self.generators.iter().chain(&self.logical_x).chain(&self.logical_z);
        for p in all {
            if p.num_qubits() != self.n {
                return Err(Error::LengthMismatch { left: self.n, right: p.num_qubits() });
            }
        }
        if self.logical_x.len() != self.logical_z.len() {
            return Err(Error::InvalidSize("unpaired logical operators".to_string()));
        }
        if self.logical_x.len() > 64 {
            return Err(Error::InvalidSize("more than 64 logical qubits".to_string()));
        }
        if self.generators.len() + self.logical_x.len() != self.n {
            return Err(Error::InvalidSize(format!(
                "{} generators and {} logical qubits on {} qubits",
                self.generators.len(),
                self.logical_x.len(),
                self.n
            )));
        }
        for (a, g) in self.generators.iter().enumerate() {
            for h in &self.generators[a + 1..] {
                if g.anticommutes_unchecked(h) {
                    return Err(Error::Contract(format!("generators {} and {} anticommute", g, h)));
                }
            }
            for l in self.logical_x.iter().chain(&self.logical_z) {
                if g.anticommutes_unchecked(l) {
                    return Err(Error::Contract(format!("logical {} anticommutes with {}", l, g)));
                }
            }
        }
        let k = self.logical_x.len();
        for i in 0..k {
            for j in 0..k {
                let anti = self.logical_x[i].anticommutes_unchecked(&self.logical_z[j]);
                if anti != (i == j) {
                    return Err(Error::Contract(format!("logical pair ({}, {}) has wrong commutation", i, j)));
                }
                if i < j
                    && (self.logical_x[i].anticommutes_unchecked(&self.logical_x[j])
                        || self.logical_z[i].anticommutes_unchecked(&self.logical_z[j]))
                {
                    return Err(Error::Contract(format!("logicals {} and {} anticommute", i, j)));
                }
            }
        }
        if gf2_rank(&self.generators) != self.generators.len() {
            return Err(Error::Contract("generators are not independent".to_string()));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.logical_x.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    /// ℓ = ⌊(d−1)/2⌋.
    pub fn error_radius(&self) -> usize {
        self.distance.saturating_sub(1) / 2
    }

    pub fn syndrome_of(&self, err: &PauliOperator) -> Result<Syndrome> {
        if err.num_qubits() != self.n {
            return Err(Error::LengthMismatch { left: self.n, right: err.num_qubits() });
        }
        Ok(self.syndrome_unchecked(err))
    }

    pub(crate) fn syndrome_unchecked(&self, err: &PauliOperator) -> Syndrome {
        let mut s = Syndrome::zero(self.generators.len());
        for (a, g) in self.generators.iter().enumerate() {
            if g.anticommutes_unchecked(err) {
                s.words[a / 64] |= 1 << (a % 64);
            }
        }
        s
    }

    /// Syndrome as an integer; only valid for at most 64 generators.
    #[inline]
    pub(crate) fn syndrome_index_unchecked(&self, err: &PauliOperator) -> usize {
        let mut idx = 0usize;
        for (a, g) in self.generators.iter().enumerate() {
            idx |= (g.anticommutes_unchecked(err) as usize) << a;
        }
        idx
    }

    pub fn logical_class(&self, residual: &PauliOperator) -> Result<LogicalClass> {
        let s = self.syndrome_of(residual)?;
        if !s.is_zero() {
            return Err(Error::Contract(format!("{} has nonzero syndrome", residual)));
        }
        Ok(self.class_unchecked(residual))
    }

    #[inline]
    pub(crate) fn class_unchecked(&self, residual: &PauliOperator) -> LogicalClass {
        let mut c = LogicalClass::IDENTITY;
        for j in 0..self.logical_x.len() {
            c.x |= (residual.anticommutes_unchecked(&self.logical_z[j]) as u64) << j;
            c.z |= (residual.anticommutes_unchecked(&self.logical_x[j]) as u64) << j;
        }
        c
    }

    /// Canonical representative of a logical class (phase +1).
    pub fn logical_representative(&self, class: LogicalClass) -> PauliOperator {
        let mut p = PauliOperator::identity(self.n);
        self.write_representative(class, &mut p);
        p
    }

    pub(crate) fn write_representative(&self, class: LogicalClass, out: &mut PauliOperator) {
        out.clear();
        for j in 0..self.logical_x.len() {
            if (class.x >> j) & 1 == 1 {
                out.xor_support(&self.logical_x[j]);
            }
            if (class.z >> j) & 1 == 1 {
                out.xor_support(&self.logical_z[j]);
            }
        }
    }
}

fn gf2_rank(ops: &[PauliOperator]) -> usize {
    let mut rows: Vec<Vec<u64>> = ops
        .iter()
        .map(|p| p.x_words().iter().chain(p.z_words()).copied().collect())
        .collect();
    let width = rows.first().map_or(0, |r| r.len() * 64);
    let mut rank = 0;
    for col in 0..width {
        let (w, b) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| (rows[r][w] >> b) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && (rows[r][w] >> b) & 1 == 1 {
                let src = rows[rank].clone();
                rows[r].iter_mut().zip(&src).for_each(|(a, s)| *a ^= s);
            }
        }
        rank += 1;
    }
    rank
}

fn parse_all(list: &[&str]) -> Vec<PauliOperator> {
    list.iter().map(|s| s.parse().expect("static Pauli literal")).collect()
}

/// The [[5,1,3]] code with generators `XZZXI, IXZZX, XIXZZ, ZXIXZ`.
pub fn five_qubit_code() -> StabilizerCode {
    let mut code = StabilizerCode::new(
        "five-qubit",
        5,
        parse_all(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]),
        parse_all(&["XXXXX"]),
        parse_all(&["ZZZZZ"]),
        3,
    )
    .expect("five-qubit code is valid");
    code.family = CodeFamily::FiveQubit;
    code
}

/// Edge layout of the L×L periodic lattice.
///
/// Horizontal edge `h(r,c) = r·L + c` joins vertex `(r,c)` to `(r,c+1)`;
/// vertical edge `v(r,c) = L² + r·L + c` joins `(r,c)` to `(r+1,c)`.
/// Face `(r,c)` is bounded by `h(r,c)`, `h(r+1,c)`, `v(r,c)`, `v(r,c+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToricLattice {
    pub l: usize,
}

impl ToricLattice {
    pub fn num_edges(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn h(&self, r: usize, c: usize) -> usize {
        (r % self.l) * self.l + c % self.l
    }

    pub fn v(&self, r: usize, c: usize) -> usize {
        self.l * self.l + (r % self.l) * self.l + c % self.l
    }

    /// Edges touching vertex `(r,c)`.
    pub fn star(&self, r: usize, c: usize) -> [usize; 4] {
        let l = self.l;
        [self.h(r, c), self.h(r, c + l - 1), self.v(r, c), self.v(r + l - 1, c)]
    }

    /// Edges bounding face `(r,c)`.
    pub fn plaquette(&self, r: usize, c: usize) -> [usize; 4] {
        [self.h(r, c), self.h(r + 1, c), self.v(r, c), self.v(r, c + 1)]
    }
}

/// Toric code on an L×L torus, `n = 2L²`, two logical qubits.
///
/// Generators: stars `A_s = ∏ Z` on vertices `0..L²−1` (row-major), then
/// plaquettes `B_p = ∏ X` on faces `0..L²−1`. The last star and the last
/// plaquette are dependent and omitted. Logical pair 0 is
/// `X̄₀ = X` on row 0 of horizontal edges, `Z̄₀ = Z` on column 0 of horizontal
/// edges; pair 1 is `X̄₁ = X` on column 0 of vertical edges, `Z̄₁ = Z` on row 0
/// of vertical edges.
pub fn toric_code(l: usize) -> Result<StabilizerCode> {
    if l < 2 {
        return Err(Error::InvalidSize(format!("toric lattice size {} < 2", l)));
    }
    let lat = ToricLattice { l };
    let n = lat.num_edges();
    let mut generators = Vec::with_capacity(n - 2);
    for s in 0..l * l - 1 {
        generators.push(PauliOperator::from_support(n, &lat.star(s / l, s % l), Pauli::Z));
    }
    for p in 0..l * l - 1 {
        generators.push(PauliOperator::from_support(n, &lat.plaquette(p / l, p % l), Pauli::X));
    }
    let row_h: Vec<usize> = (0..l).map(|c| lat.h(0, c)).collect();
    let col_h: Vec<usize> = (0..l).map(|r| lat.h(r, 0)).collect();
    let col_v: Vec<usize> = (0..l).map(|r| lat.v(r, 0)).collect();
    let row_v: Vec<usize> = (0..l).map(|c| lat.v(0, c)).collect();
    let logical_x = vec![
        PauliOperator::from_support(n, &row_h, Pauli::X),
        PauliOperator::from_support(n, &col_v, Pauli::X),
    ];
    let logical_z = vec![
        PauliOperator::from_support(n, &col_h, Pauli::Z),
        PauliOperator::from_support(n, &row_v, Pauli::Z),
    ];
    let mut code = StabilizerCode::new(&format!("toric-{}", l), n, generators, logical_x, logical_z, l)?;
    code.family = CodeFamily::Toric { l };
    Ok(code)
}

/// Bit-flip repetition code: generators `Z_i Z_{i+1}`, `X̄ = X^{⊗n}`, `Z̄ = Z_0`.
/// The stored distance is the bit-flip distance `n`.
pub fn repetition_code(n: usize) -> Result<StabilizerCode> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidSize(format!("repetition code needs odd n ≥ 3, got {}", n)));
    }
    let generators = (0..n - 1).map(|i| PauliOperator::from_support(n, &[i, i + 1], Pauli::Z)).collect();
    let all: Vec<usize> = (0..n).collect();
    let mut code = StabilizerCode::new(
        &format!("repetition-{}", n),
        n,
        generators,
        vec![PauliOperator::from_support(n, &all, Pauli::X)],
        vec![PauliOperator::single(n, 0, Pauli::Z)],
        n,
    )?;
    code.family = CodeFamily::Repetition;
    Ok(code)
}

pub fn syndrome_of(code: &StabilizerCode, err: &PauliOperator) -> Result<Syndrome> {
    code.syndrome_of(err)
}

pub fn logical_class(code: &StabilizerCode, residual: &PauliOperator) -> Result<LogicalClass> {
    code.logical_class(residual)
}
