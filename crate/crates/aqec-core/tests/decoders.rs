use aqec_core::code::{five_qubit_code, repetition_code, toric_code, Syndrome, ToricLattice};
use aqec_core::decoders::mwpm::{match_defects, torus_distance};
use aqec_core::decoders::{build_lookup, mwpm_decode, Decoder, ErrorBasis, Sector};
use aqec_core::{Pauli, PauliOperator, StabilizerCode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_paulis(n: usize) -> Vec<PauliOperator> {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    (0..4usize.pow(n as u32))
        .map(|mut k| {
            let mut p = PauliOperator::identity(n);
            for q in 0..n {
                p.set(q, letters[k % 4]);
                k /= 4;
            }
            p
        })
        .collect()
}

#[test]
fn lookup_matches_exhaustive_minimum() {
    let code = five_qubit_code();
    let dec = build_lookup(&code, ErrorBasis::Full).unwrap();
    let zero = Syndrome::zero(4);
    assert!(dec.correction(&zero).unwrap().is_identity());
    let x0 = PauliOperator::single(5, 0, Pauli::X);
    assert_eq!(dec.correction(&code.syndrome_of(&x0).unwrap()).unwrap(), x0);

    // independent oracle: minimum weight then smallest (x, z) key per syndrome
    let mut best: Vec<Option<(usize, u64, u64)>> = vec![None; 16];
    for p in all_paulis(5) {
        let s = code.syndrome_of(&p).unwrap().to_index().unwrap() as usize;
        let cand = (p.weight(), p.x_mask(), p.z_mask());
        if best[s].is_none_or(|b| cand < b) {
            best[s] = Some(cand);
        }
    }
    for (s, b) in best.iter().enumerate() {
        let (w, x, z) = b.unwrap();
        let c = dec.correction(&Syndrome::from_index(4, s as u64)).unwrap();
        assert_eq!((c.weight(), c.x_mask(), c.z_mask()), (w, x, z), "syndrome {}", s);
        assert!(w <= 2);
        assert_eq!(code.syndrome_of(&c).unwrap().to_index().unwrap() as usize, s);
    }
}

#[test]
fn lookup_budget_is_enforced() {
    let t = toric_code(4).unwrap();
    assert!(build_lookup(&t, ErrorBasis::XOnly).is_err());
}

#[test]
fn five_qubit_two_error_coset() {
    let code = five_qubit_code();
    let dec = Decoder::for_code(&code).unwrap();
    let frame: PauliOperator = "XXIII".parse().unwrap();
    let rec = dec.apply_recovery(&frame).unwrap();
    assert!(code.syndrome_of(&rec.residual).unwrap().is_zero());
    // the single-qubit coset leader with the same syndrome, applied by hand
    let s = code.syndrome_of(&frame).unwrap();
    let leader = all_paulis(5)
        .into_iter()
        .filter(|p| p.weight() <= 1 && code.syndrome_of(p).unwrap() == s)
        .collect::<Vec<_>>();
    assert_eq!(leader.len(), 1);
    let by_hand = leader[0].multiply(&frame).unwrap();
    assert_eq!(code.logical_class(&by_hand).unwrap(), rec.logical);
    assert!(!rec.logical.is_identity());
}

#[test]
fn identity_frame_is_trivial() {
    for code in [five_qubit_code(), toric_code(3).unwrap(), repetition_code(5).unwrap()] {
        let dec = Decoder::for_code(&code).unwrap();
        let rec = dec.apply_recovery(&PauliOperator::identity(code.num_qubits())).unwrap();
        assert!(rec.residual.is_identity());
        assert!(rec.logical.is_identity());
    }
}

#[test]
fn mwpm_examples() {
    let l = 4;
    let t = toric_code(l).unwrap();
    let lat = ToricLattice { l };
    assert!(mwpm_decode(&t, &Syndrome::zero(30), Sector::Star).unwrap().is_identity());

    // adjacent star defects from one X error
    let e = PauliOperator::single(32, lat.h(1, 1), Pauli::X);
    let s = t.syndrome_of(&e).unwrap();
    assert_eq!(mwpm_decode(&t, &s, Sector::Star).unwrap(), e);
    assert!(mwpm_decode(&t, &s, Sector::Plaquette).unwrap().is_identity());

    // defects (0,0) and (0,2): row-0 path
    let e = PauliOperator::from_support(32, &[lat.h(0, 0), lat.h(0, 1)], Pauli::X);
    let s = t.syndrome_of(&e).unwrap();
    let c = mwpm_decode(&t, &s, Sector::Star).unwrap();
    assert_eq!(c, e);
    // the other 2-edge path gives the same defects, same correction
    let e2 = PauliOperator::from_support(32, &[lat.h(0, 3), lat.h(0, 2)], Pauli::X);
    let c2 = mwpm_decode(&t, &t.syndrome_of(&e2).unwrap(), Sector::Star).unwrap();
    assert_eq!(c2, e);
    assert!(t.syndrome_of(&c.multiply(&e2).unwrap()).unwrap().is_zero());

    // plaquette defects from one Z error
    let e = PauliOperator::single(32, lat.v(2, 3), Pauli::Z);
    assert_eq!(mwpm_decode(&t, &t.syndrome_of(&e).unwrap(), Sector::Plaquette).unwrap(), e);

    assert!(mwpm_decode(&five_qubit_code(), &Syndrome::zero(4), Sector::Star).is_err());
}

#[test]
fn horizontal_z_loop_is_undetected_logical() {
    let t = toric_code(4).unwrap();
    let lat = ToricLattice { l: 4 };
    let row: Vec<usize> = (0..4).map(|c| lat.v(0, c)).collect();
    let frame = PauliOperator::from_support(32, &row, Pauli::Z);
    let rec = Decoder::for_code(&t).unwrap().apply_recovery(&frame).unwrap();
    assert_eq!(rec.residual, frame);
    assert_eq!(rec.logical.get(1), Pauli::Z);
    assert_eq!(rec.logical.get(0), Pauli::I);
}

fn brute_min_matching(l: usize, d: &[usize]) -> usize {
    if d.is_empty() {
        return 0;
    }
    let (a, rest) = (d[0], &d[1..]);
    let mut best = usize::MAX;
    for i in 0..rest.len() {
        let mut others = rest.to_vec();
        let b = others.remove(i);
        best = best.min(torus_distance(l, a, b) + brute_min_matching(l, &others));
    }
    best
}

proptest! {
    #[test]
    fn mwpm_cost_is_optimal(l in 2usize..=4, seed in any::<u64>(), half in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = l * l;
        let k = (2 * half).min(m - m % 2);
        let mut sites: Vec<usize> = (0..m).collect();
        for i in 0..k {
            let j = rng.gen_range(i..m);
            sites.swap(i, j);
        }
        let mut d = sites[..k].to_vec();
        d.sort();
        let pairs = match_defects(l, &d).unwrap();
        let cost: usize = pairs.iter().map(|&(i, j)| torus_distance(l, d[i], d[j])).sum();
        prop_assert_eq!(cost, brute_min_matching(l, &d));
        let mut seen = vec![false; k];
        for (i, j) in pairs {
            prop_assert!(!seen[i] && !seen[j]);
            seen[i] = true;
            seen[j] = true;
        }
        prop_assert!(seen.iter().all(|&s| s));
    }
}

#[test]
fn mwpm_matches_bitmask_dp_on_larger_sets() {
    // exact DP over subsets as an independent optimum
    fn dp(l: usize, d: &[usize]) -> usize {
        let k = d.len();
        let mut f = vec![usize::MAX; 1 << k];
        f[0] = 0;
        for mask in 0..(1usize << k) {
            if f[mask] == usize::MAX {
                continue;
            }
            let Some(i) = (0..k).find(|&i| mask >> i & 1 == 0) else { continue };
            for j in i + 1..k {
                if mask >> j & 1 == 0 {
                    let nm = mask | 1 << i | 1 << j;
                    f[nm] = f[nm].min(f[mask] + torus_distance(l, d[i], d[j]));
                }
            }
        }
        f[(1 << k) - 1]
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let l = rng.gen_range(4..=8);
        let k = 2 * rng.gen_range(1..=8usize);
        let mut sites: Vec<usize> = (0..l * l).collect();
        for i in 0..k {
            let j = rng.gen_range(i..l * l);
            sites.swap(i, j);
        }
        let d = sites[..k].to_vec();
        let pairs = match_defects(l, &d).unwrap();
        let cost: usize = pairs.iter().map(|&(i, j)| torus_distance(l, d[i], d[j])).sum();
        assert_eq!(cost, dp(l, &d), "l={} d={:?}", l, d);
    }
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize, basis: ErrorBasis) -> PauliOperator {
    let mut p = PauliOperator::identity(n);
    let density: f64 = rng.gen_range(0.0..0.5);
    for q in 0..n {
        if rng.gen_bool(density) {
            let kind = match basis {
                ErrorBasis::XOnly => Pauli::X,
                ErrorBasis::ZOnly => Pauli::Z,
                ErrorBasis::Full => [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)],
            };
            p.set(q, kind);
        }
    }
    p
}

fn fuzz(code: &StabilizerCode, basis: ErrorBasis, samples: usize, seed: u64) {
    let dec = Decoder::for_code(code).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let f = random_frame(&mut rng, code.num_qubits(), basis);
        let rec = dec.apply_recovery(&f).unwrap();
        assert!(code.syndrome_of(&rec.residual).unwrap().is_zero(), "{} -> {}", f, rec.residual);
        let mut g = f.clone();
        let cls = dec.recover_in_place(&mut g);
        assert_eq!(cls, rec.logical);
        assert_eq!(g, code.logical_representative(cls));
    }
}

#[test]
fn zero_residual_syndrome_fuzz() {
    fuzz(&five_qubit_code(), ErrorBasis::Full, 100_000, 1);
    fuzz(&toric_code(4).unwrap(), ErrorBasis::Full, 100_000, 2);
    fuzz(&toric_code(3).unwrap(), ErrorBasis::Full, 100_000, 3);
    fuzz(&repetition_code(7).unwrap(), ErrorBasis::XOnly, 100_000, 4);
}

fn for_each_error(n: usize, max_w: usize, letters: &[Pauli], f: &mut impl FnMut(&PauliOperator)) {
    fn rec(n: usize, start: usize, left: usize, letters: &[Pauli], p: &mut PauliOperator, f: &mut impl FnMut(&PauliOperator)) {
        f(p);
        if left == 0 {
            return;
        }
        for q in start..n {
            for &l in letters {
                p.set(q, l);
                rec(n, q + 1, left - 1, letters, p, f);
            }
            p.set(q, Pauli::I);
        }
    }
    rec(n, 0, max_w, letters, &mut PauliOperator::identity(n), f);
}

#[test]
fn errors_within_radius_are_corrected() {
    let full = [Pauli::X, Pauli::Y, Pauli::Z];
    let cases: Vec<(StabilizerCode, &[Pauli])> = vec![
        (five_qubit_code(), &full),
        (toric_code(3).unwrap(), &full),
        (toric_code(4).unwrap(), &full),
        (toric_code(5).unwrap(), &full),
        (repetition_code(5).unwrap(), &[Pauli::X]),
        (repetition_code(7).unwrap(), &[Pauli::X]),
    ];
    for (code, letters) in cases {
        let dec = Decoder::for_code(&code).unwrap();
        let mut count = 0;
        for_each_error(code.num_qubits(), code.error_radius(), letters, &mut |e| {
            let rec = dec.apply_recovery(e).unwrap();
            assert!(rec.logical.is_identity(), "{}: {} -> {:?}", code.name(), e, rec.logical);
            count += 1;
        });
        assert!(count > code.num_qubits());
    }
}

#[test]
fn majority_vote() {
    let code = repetition_code(5).unwrap();
    let dec = Decoder::majority(&code).unwrap();
    let e = PauliOperator::from_support(5, &[1, 3], Pauli::X);
    assert!(dec.apply_recovery(&e).unwrap().logical.is_identity());
    let e = PauliOperator::from_support(5, &[0, 1, 3], Pauli::X);
    assert_eq!(dec.apply_recovery(&e).unwrap().logical.get(0), Pauli::X);
    assert!(Decoder::majority(&five_qubit_code()).is_err());
}
