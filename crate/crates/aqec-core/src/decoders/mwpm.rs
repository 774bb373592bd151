//! Minimum-weight perfect matching decoder for the toric code.

use alloc::vec::Vec;

use super::blossom::max_weight_matching;
use crate::code::{CodeFamily, StabilizerCode, Syndrome, ToricLattice};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

/// Stars detect X errors and are corrected with X on primal paths;
/// plaquettes detect Z errors and are corrected with Z on dual paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Star,
    Plaquette,
}

pub(crate) fn lattice_of(code: &StabilizerCode) -> Result<ToricLattice> {
    match code.family() {
        CodeFamily::Toric { l } => Ok(ToricLattice { l }),
        _ => Err(Error::Contract(alloc::format!("{} is not a toric code", code.name()))),
    }
}

/// Defect sites (vertex or face index, row-major) of one sector. The omitted
/// last generator is restored from parity.
pub fn defects(lat: ToricLattice, s: &Syndrome, sector: Sector) -> Vec<usize> {
    let m = lat.l * lat.l;
    let off = match sector {
        Sector::Star => 0,
        Sector::Plaquette => m - 1,
    };
    let mut out = Vec::new();
    for i in 0..m - 1 {
        if s.get(off + i) {
            out.push(i);
        }
    }
    if out.len() % 2 == 1 {
        out.push(m - 1);
    }
    out
}

/// Toroidal Manhattan distance between two sites.
pub fn torus_distance(l: usize, a: usize, b: usize) -> usize {
    let (ra, ca) = (a / l, a % l);
    let (rb, cb) = (b / l, b % l);
    let dr = ra.abs_diff(rb);
    let dc = ca.abs_diff(cb);
    dr.min(l - dr) + dc.min(l - dc)
}

/// Pairs `defects` by exact minimum total toroidal distance. Returns index
/// pairs `(i, j)` with `i < j` into `defects`, sorted by `i`.
pub fn match_defects(l: usize, defects: &[usize]) -> Result<Vec<(usize, usize)>> {
    let k = defects.len();
    if k % 2 == 1 {
        return Err(Error::Contract(alloc::format!("odd number of defects ({})", k)));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    if k == 2 {
        return Ok(alloc::vec![(0, 1)]);
    }
    let big = (l + 1) as i64;
    let mut edges = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            edges.push((i, j, big - torus_distance(l, defects[i], defects[j]) as i64));
        }
    }
    let mate = max_weight_matching(&edges, true);
    let mut pairs = Vec::with_capacity(k / 2);
    for (i, m) in mate.iter().enumerate() {
        match m {
            Some(j) if *j > i => pairs.push((i, *j)),
            Some(_) => {}
            None => return Err(Error::Contract("matching left a defect unpaired".into())),
        }
    }
    Ok(pairs)
}

/// Steps from `from` to `to` on a cycle of length `l`: shorter direction,
/// increasing on a tie. Returns `(count, forward)`.
fn steps(l: usize, from: usize, to: usize) -> (usize, bool) {
    let fwd = (to + l - from) % l;
    if fwd <= l - fwd {
        (fwd, true)
    } else {
        (l - fwd, false)
    }
}

/// Toggles the edges of the path between two sites: along the row of `a`
/// first, then along the column of `b`.
pub fn toggle_path(lat: ToricLattice, sector: Sector, a: usize, b: usize, edges: &mut [bool]) {
    let l = lat.l;
    let (mut r, mut c) = (a / l, a % l);
    let (rb, cb) = (b / l, b % l);
    let (nc, fc) = steps(l, c, cb);
    for _ in 0..nc {
        let next = if fc { (c + 1) % l } else { (c + l - 1) % l };
        let e = match (sector, fc) {
            (Sector::Star, true) => lat.h(r, c),
            (Sector::Star, false) => lat.h(r, next),
            (Sector::Plaquette, true) => lat.v(r, next),
            (Sector::Plaquette, false) => lat.v(r, c),
        };
        edges[e] ^= true;
        c = next;
    }
    let (nr, fr) = steps(l, r, rb);
    for _ in 0..nr {
        let next = if fr { (r + 1) % l } else { (r + l - 1) % l };
        let e = match (sector, fr) {
            (Sector::Star, true) => lat.v(r, c),
            (Sector::Star, false) => lat.v(next, c),
            (Sector::Plaquette, true) => lat.h(next, c),
            (Sector::Plaquette, false) => lat.h(r, c),
        };
        edges[e] ^= true;
        r = next;
    }
}

pub fn mwpm_decode(code: &StabilizerCode, s: &Syndrome, sector: Sector) -> Result<PauliOperator> {
    let lat = lattice_of(code)?;
    if s.len() != code.generators().len() {
        return Err(Error::LengthMismatch { left: code.generators().len(), right: s.len() });
    }
    decode_sector(lat, s, sector)
}

pub(crate) fn decode_sector(lat: ToricLattice, s: &Syndrome, sector: Sector) -> Result<PauliOperator> {
    let d = defects(lat, s, sector);
    let pairs = match_defects(lat.l, &d)?;
    let mut edges = alloc::vec![false; lat.num_edges()];
    for (i, j) in pairs {
        toggle_path(lat, sector, d[i], d[j], &mut edges);
    }
    let kind = match sector {
        Sector::Star => Pauli::X,
        Sector::Plaquette => Pauli::Z,
    };
    let support: Vec<usize> = (0..edges.len()).filter(|&e| edges[e]).collect();
    Ok(PauliOperator::from_support(lat.num_edges(), &support, kind))
}
