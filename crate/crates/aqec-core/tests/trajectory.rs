use aqec_core::decoders::Decoder;
use aqec_core::sampling::{merge_in_order, sample_rng, ShardedTask};
use aqec_core::trajectory::*;
use aqec_core::{five_qubit_code, repetition_code, toric_code, Pauli, PauliOperator};
use proptest::prelude::*;

fn five() -> (Decoder, NoiseModel) {
    (Decoder::for_code(&five_qubit_code()).unwrap(), NoiseModel::depolarizing(5))
}

#[test]
fn zero_rate_gives_empty_trajectory() {
    let noise = NoiseModel::depolarizing(5);
    let p = PoissonParams::new(0.0, 0.0, noise.n_channels()).unwrap();
    for i in 0..10 {
        let tr = sample_trajectory(&p, &noise, 100.0, &mut sample_rng(1, i));
        assert!(tr.events.is_empty());
    }
}

#[test]
fn event_count_is_poisson_mean() {
    let noise = NoiseModel::dephasing(1);
    let p = PoissonParams::new(1.0, 1.0, 1.0).unwrap();
    let n = 10_000u64;
    let total: usize = (0..n).map(|i| sample_trajectory(&p, &noise, 10.0, &mut sample_rng(7, i)).events.len()).sum();
    let mean = total as f64 / n as f64;
    let sigma = (20.0 / n as f64).sqrt();
    assert!((mean - 20.0).abs() < 3.0 * sigma, "mean {}", mean);
}

#[test]
fn recovery_label_frequency_is_p0() {
    let noise = NoiseModel::depolarizing(2);
    let p = PoissonParams::for_noise(2.0, 0.5, &noise).unwrap();
    let p0 = p.p0();
    assert!((p0 - 0.4).abs() < 1e-15);
    let (mut zeros, mut total) = (0u64, 0u64);
    let mut per_label = vec![0u64; noise.jumps().len()];
    for i in 0..5000 {
        let tr = sample_trajectory(&p, &noise, 4.0, &mut sample_rng(3, i));
        for (a, b) in tr.events.iter().zip(tr.events.iter().skip(1)) {
            assert!(a.time < b.time);
        }
        for e in &tr.events {
            assert!(e.time <= 4.0);
            total += 1;
            if e.label == 0 {
                zeros += 1;
            } else {
                per_label[e.label - 1] += 1;
            }
        }
    }
    let f = zeros as f64 / total as f64;
    let sigma = (p0 * (1.0 - p0) / total as f64).sqrt();
    assert!((f - p0).abs() < 3.0 * sigma, "{} vs {}", f, p0);
    let pj = p.delta / p.gamma();
    let sj = (pj * (1.0 - pj) / total as f64).sqrt();
    for &c in &per_label {
        assert!((c as f64 / total as f64 - pj).abs() < 4.0 * sj);
    }
}

#[test]
fn weighted_noise_picks_in_proportion() {
    use aqec_core::{Pauli, PauliOperator};
    let jumps = vec![PauliOperator::single(1, 0, Pauli::X), PauliOperator::single(1, 0, Pauli::Z)];
    let nm = NoiseModel::new(jumps, vec![0.5, 1.5]).unwrap();
    assert_eq!(nm.n_channels(), 2.0);
    let mut rng = sample_rng(11, 0);
    let n = 40_000;
    let z = (0..n).filter(|_| nm.pick(&mut rng) == 1).count();
    let f = z as f64 / n as f64;
    assert!((f - 0.75).abs() < 3.0 * (0.75f64 * 0.25 / n as f64).sqrt(), "{}", f);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(PoissonParams::new(-1.0, 1.0, 1.0).is_err());
    assert!(PoissonParams::new(1.0, f64::NAN, 1.0).is_err());
    let (dec, noise) = five();
    let wrong_n = PoissonParams::new(1.0, 1.0, 3.0).unwrap();
    assert!(estimate_epsilon(&dec, &noise, wrong_n, &[1.0], 10, 0).is_err());
    let p = PoissonParams::for_noise(1.0, 0.1, &noise).unwrap();
    assert!(estimate_epsilon(&dec, &noise, p, &[2.0, 1.0], 10, 0).is_err());
    let other = NoiseModel::depolarizing(4);
    let p4 = PoissonParams::for_noise(1.0, 0.1, &other).unwrap();
    assert!(estimate_epsilon(&dec, &other, p4, &[1.0], 10, 0).is_err());
}

#[test]
fn no_noise_means_no_failure() {
    let (dec, noise) = five();
    let p = PoissonParams::for_noise(1.0, 0.0, &noise).unwrap();
    let eps = estimate_epsilon(&dec, &noise, p, &[0.0, 1.0, 10.0], 2000, 5).unwrap();
    assert!(eps.iter().all(|e| e.value == 0.0 && e.n_samples == 2000));
}

#[test]
fn alpha_at_zero_time_is_zero() {
    let code = toric_code(4).unwrap();
    let dec = Decoder::for_code(&code).unwrap();
    let noise = NoiseModel::bit_flip(32);
    let a = estimate_alpha(&dec, &noise, 1.0, &[0.0], 1000, 2).unwrap();
    assert_eq!(a[0].value, 0.0);
}

#[test]
fn toric_alpha_saturates_near_half() {
    let dec = Decoder::for_code(&toric_code(4).unwrap()).unwrap();
    let noise = NoiseModel::bit_flip(32);
    let a = estimate_alpha(&dec, &noise, 1.0, &[2.0], 4000, 9).unwrap();
    assert!((a[0].value - 0.5).abs() < 4.0 * a[0].stderr + 0.01, "{:?}", a[0]);
}

#[test]
fn faithful_violation_with_no_recovery_is_first_arrival() {
    let p = PoissonParams::new(0.0, 0.5, 2.0).unwrap();
    let times = [0.1, 0.5, 1.0, 2.0];
    let est = estimate_faithful_violation(0, p, &times, 20_000, 4).unwrap();
    for e in est {
        let exact = 1.0 - (-e.t).exp();
        let sigma = (exact * (1.0 - exact) / e.n_samples as f64).sqrt();
        assert!((e.value - exact).abs() < 3.0 * sigma, "{:?} vs {}", e, exact);
    }
}

#[test]
fn faithful_violation_vanishes_for_fast_recovery() {
    let p = PoissonParams::new(1e4, 1.0, 1.0).unwrap();
    let est = estimate_faithful_violation(1, p, &[1.0], 500, 4).unwrap();
    assert!(est[0].value < 1e-2);
}

#[test]
fn importance_sampling_matches_plain_monte_carlo() {
    let p = PoissonParams::new(1.0, 1.0, 1.0).unwrap();
    let plain = estimate_faithful_violation(3, p, &[4.0], 100_000, 21).unwrap()[0];
    let is = estimate_faithful_violation_is(3, p, 4.0, 100_000, 22).unwrap();
    let comb = (plain.stderr.powi(2) + is.stderr.powi(2)).sqrt();
    assert!((plain.value - is.value).abs() < 3.0 * comb, "{:?} {:?}", plain, is);
}

#[test]
fn assumption2_trivial_cases() {
    let dec = Decoder::for_code(&toric_code(3).unwrap()).unwrap();
    let noise = NoiseModel::bit_flip(18);
    let p = PoissonParams::for_noise(0.0, 1.0, &noise).unwrap();
    let r0 = check_assumption2(&dec, &noise, p, 0.2, 0, 500, 1).unwrap();
    assert_eq!((r0.lhs, r0.rhs), (1.0, 1.0));
    let r1 = check_assumption2(&dec, &noise, p, 0.2, 1, 2000, 1).unwrap();
    assert_eq!(r1.lhs, r1.rhs);
    assert_eq!(r1.sigma, 0.0);
    assert!(r1.holds);
}

#[test]
fn faithful_runs_bound_the_logical_error() {
    // The five-qubit lookup decoder corrects every single-qubit error, so a
    // failure needs a run of two errors without recovery in between.
    let (dec, noise) = five();
    let p = PoissonParams::for_noise(1.0, 1.0 / 15.0, &noise).unwrap();
    let times = [0.5, 1.0, 2.0, 4.0];
    let eps = estimate_epsilon(&dec, &noise, p, &times, 20_000, 8).unwrap();
    let viol = estimate_faithful_violation(1, p, &times, 20_000, 8).unwrap();
    for (e, v) in eps.iter().zip(&viol) {
        assert!(e.value <= v.value + 3.0 * v.stderr.max(e.stderr), "{:?} {:?}", e, v);
    }
    for w in eps.windows(2) {
        assert!(w[1].value + 4.0 * w[1].stderr >= w[0].value);
    }
}

#[test]
fn same_seed_is_bit_identical_across_splits() {
    let (dec, noise) = five();
    let p = PoissonParams::for_noise(1.0, 0.1, &noise).unwrap();
    let task = FrameTask::new(&dec, &noise, p, &[0.5, 1.0, 3.0], 99).unwrap();
    let whole = task.run(0..9000);
    let parts = merge_in_order([task.run(0..1), task.run(1..4100), task.run(4100..9000)]).unwrap();
    assert_eq!(whole, parts);
    let a = estimate_epsilon(&dec, &noise, p, &[1.0, 3.0], 5000, 17).unwrap();
    let b = estimate_epsilon(&dec, &noise, p, &[1.0, 3.0], 5000, 17).unwrap();
    assert_eq!(a, b);
}

#[test]
fn repetition_code_protects_only_bit_flips() {
    let dec = Decoder::for_code(&repetition_code(5).unwrap()).unwrap();
    let noise = NoiseModel::bit_flip(5);
    let p = PoissonParams::for_noise(1.0, 0.2, &noise).unwrap();
    let eps = estimate_epsilon(&dec, &noise, p, &[1.0, 5.0], 3000, 2).unwrap();
    assert!(eps[1].value > 0.0);
    // Z errors commute with the repetition stabilizers and flip the phase.
    let zn = NoiseModel::dephasing(5);
    let pz = PoissonParams::for_noise(1.0, 0.2, &zn).unwrap();
    let task = FrameTask::new(&dec, &zn, pz, &[5.0], 2).unwrap();
    let tally = task.run(0..3000);
    assert_eq!(tally.counts[0][0], 0);
    assert!(tally.counts[0][1] > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trajectories_are_reproducible(seed in any::<u64>(), idx in 0u64..100_000, kappa in 0.0f64..5.0, delta in 0.0f64..2.0) {
        let noise = NoiseModel::depolarizing(3);
        let p = PoissonParams::for_noise(kappa, delta, &noise).unwrap();
        let a = sample_trajectory(&p, &noise, 3.0, &mut sample_rng(seed, idx));
        let b = sample_trajectory(&p, &noise, 3.0, &mut sample_rng(seed, idx));
        prop_assert_eq!(&a, &b);
        prop_assert!(a.events.iter().all(|e| e.label <= noise.jumps().len()));
        let total = if p.gamma() > 0.0 { 1.0 } else { 0.0 };
        prop_assert!((p.p0() + p.p_error() - total).abs() < 1e-12);
    }
}

/// `α(τ)` for L = 3 by summing over all 2¹⁸ bit-flip patterns, each qubit
/// flipped with probability `(1 − e^{−2Δτ})/2`.
#[test]
fn toric_alpha_matches_exhaustive_enumeration() {
    let code = toric_code(3).unwrap();
    let dec = Decoder::mwpm(&code).unwrap();
    let n = code.num_qubits();
    let mut fails = vec![0u64; n + 1];
    for mask in 0u32..(1 << n) {
        let q: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut f = PauliOperator::from_support(n, &q, Pauli::X);
        if dec.recover_in_place(&mut f).x & 1 == 1 {
            fails[q.len()] += 1;
        }
    }
    assert_eq!(fails[0] + fails[1], 0);
    let taus = [0.05, 0.115, 0.18, 0.3];
    let noise = NoiseModel::bit_flip(n);
    let mc = estimate_alpha(&dec, &noise, 1.0, &taus, 20_000, 8).unwrap();
    for (e, &tau) in mc.iter().zip(&taus) {
        let p = -0.5 * (-2.0 * tau).exp_m1();
        let exact: f64 =
            fails.iter().enumerate().map(|(w, &k)| k as f64 * p.powi(w as i32) * (1.0 - p).powi((n - w) as i32)).sum();
        assert!((e.value - exact).abs() <= 3.0 * e.stderr.max(1e-4), "τ = {}: {} ± {} vs {}", tau, e.value, e.stderr, exact);
    }
}
