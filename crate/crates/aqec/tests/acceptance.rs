//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Runs every desk-scale experiment end to end (write outputs, then verify
//! them from the manifest), plus the property suites, and prints a summary.
//! Criteria listed in `KNOWN_DEVIATIONS` are reported as failing when they
//! fail but do not change the exit status; any other failure does.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use aqec::checks::{Check, SIGMAS};
use aqec::config::{ExperimentConfig, ExperimentId};
use aqec_core::bounds::solve_recurrence;
use aqec_core::decoders::mwpm::{match_defects, torus_distance};
use aqec_core::lindblad::{
    binomial_codewords, build_recovery, default_sampler, kl_matrix, ladder_words, max_abs, oscillator_noise, outer,
    stabilizer_recovery, CMat, CVec, KrausChannel, Lindbladian, LogicalEvolution, Tolerances, TruncatedOscillator,
};
use aqec_core::sampling::{below, sample_rng, uniform};
use aqec_core::{five_qubit_code, Pauli, PauliOperator, Phase};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

/// Criteria whose failure at desk scale is understood and recorded.
const KNOWN_DEVIATIONS: [u8; 3] = [3, 6, 7];

const TITLES: [&str; 9] = [
    "five-qubit ε(t): Monte Carlo vs exact integration",
    "faithful-recovery model, ℓ = 6",
    "toric α̂ crossing, L ∈ {3, 4}",
    "interleaving inequality, toric n = 32",
    "five-qubit exact ε vs early-time bound",
    "binomial saturated-rate scaling",
    "recurrence asymptotics",
    "property suites",
    "refined lower bound vs toric ε̂",
];

/// Wall-clock budget per criterion, for the experiment that feeds it.
const BUDGETS: [(u8, u64); 6] = [(1, 120), (2, 300), (3, 300), (4, 300), (6, 600), (7, 120)];

const EXPERIMENTS: [ExperimentId; 7] = [
    ExperimentId::Fig5a,
    ExperimentId::Fig3,
    ExperimentId::Fig4a,
    ExperimentId::Fig4b,
    ExperimentId::Fig6,
    ExperimentId::FigE7,
    ExperimentId::FigE8,
];

fn feeds(id: ExperimentId) -> &'static [u8] {
    match id {
        ExperimentId::Fig5a => &[1, 5],
        ExperimentId::Fig3 => &[2],
        ExperimentId::Fig4a => &[3],
        ExperimentId::Fig4b => &[4, 9],
        ExperimentId::Fig6 => &[6],
        ExperimentId::FigE7 | ExperimentId::FigE8 => &[7],
        _ => &[],
    }
}

fn check(criterion: u8, name: &str, passed: bool, detail: String) -> Check {
    Check { criterion: Some(criterion), name: name.to_string(), passed, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------- experiments ----------

fn run_experiments(checks: &mut Vec<Check>) {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut elapsed: BTreeMap<u8, Duration> = BTreeMap::new();
    for id in EXPERIMENTS {
        let mut cfg = ExperimentConfig::defaults(id, false);
        cfg.output = dir.path().join(id.as_str());
        let start = Instant::now();
        let outcome = aqec::run(&cfg).and_then(|r| aqec::verify(&r.manifest_path));
        let took = start.elapsed();
        for &k in feeds(id) {
            *elapsed.entry(k).or_default() += took;
        }
        eprintln!("  {} finished in {:.1} s", id, took.as_secs_f64());
        match outcome {
            Ok(report) => {
                for (name, problem) in &report.files {
                    if let Some(p) = problem {
                        checks.push(check(feeds(id)[0], &format!("{} file {}", id, name), false, p.clone()));
                    }
                }
                checks.extend(report.checks.into_iter().filter(|c| c.criterion.is_some()));
            }
            Err(e) => {
                for &k in feeds(id) {
                    checks.push(check(k, &format!("{} run", id), false, e.to_string()));
                }
            }
        }
    }
    for (k, secs) in BUDGETS {
        let t = elapsed.get(&k).copied().unwrap_or_default().as_secs_f64();
        checks.push(check(k, "runtime", t < secs as f64, format!("{:.1} s < {} s", t, secs)));
    }
}

// ---------- property suites ----------

fn single(p: Pauli) -> CMat {
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

fn dense(p: &PauliOperator) -> CMat {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in 0..p.num_qubits() {
        m = m.kronecker(&single(p.get(q)));
    }
    let (re, im) = p.phase().value();
    m * c(re, im)
}

fn all_paulis(n: usize) -> Vec<PauliOperator> {
    (0..4usize.pow(n as u32))
        .map(|mut code| {
            let mut p = PauliOperator::identity(n);
            for q in 0..n {
                p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][code % 4]);
                code /= 4;
            }
            p
        })
        .collect()
}

/// Products, commutation and dense matrices of every pair of Paulis on up
/// to three qubits, against Kronecker products of 2×2 matrices.
fn pauli_suite() -> Check {
    let mut pairs = 0usize;
    let mut bad = Vec::new();
    for n in 1..=3 {
        let ops = all_paulis(n);
        for (ia, a) in ops.iter().enumerate() {
            let a = a.clone().with_phase(Phase::from_power((ia % 4) as u8));
            let da = dense(&a);
            if max_abs(&(a.to_matrix().unwrap() - &da)) > 1e-14 {
                bad.push(format!("matrix of {:?}", a));
            }
            for b in &ops {
                pairs += 1;
                let db = dense(b);
                let prod = a.multiply(b).unwrap();
                if max_abs(&(dense(&prod) - &da * &db)) > 1e-12 {
                    bad.push(format!("product n = {}", n));
                }
                let commute = max_abs(&(&da * &db - &db * &da)) < 1e-12;
                if a.commutes(b).unwrap() != commute {
                    bad.push(format!("commutation n = {}", n));
                }
            }
        }
    }
    let detail = if bad.is_empty() { format!("{} pairs", pairs) } else { format!("{} mismatches, first {}", bad.len(), bad[0]) };
    check(8, "Pauli algebra vs dense matrices (n ≤ 3, exhaustive)", bad.is_empty(), detail)
}

fn brute_force_matching(l: usize, defects: &[usize]) -> usize {
    fn go(l: usize, rest: &[usize]) -> usize {
        if rest.is_empty() {
            return 0;
        }
        let (first, tail) = (rest[0], &rest[1..]);
        (0..tail.len())
            .map(|j| {
                let mut left = tail.to_vec();
                let partner = left.remove(j);
                torus_distance(l, first, partner) + go(l, &left)
            })
            .min()
            .unwrap()
    }
    go(l, defects)
}

/// Blossom matching against enumeration of all perfect matchings.
fn mwpm_suite() -> Check {
    let mut rng = sample_rng(0x3a7c, 0);
    let mut cases = 0usize;
    let mut bad = Vec::new();
    for l in 2..=4usize {
        for k in [2usize, 4, 6].into_iter().filter(|&k| k <= l * l) {
            for _ in 0..300 {
                let mut defects: Vec<usize> = Vec::new();
                while defects.len() < k {
                    let v = below(&mut rng, (l * l) as u64) as usize;
                    if !defects.contains(&v) {
                        defects.push(v);
                    }
                }
                cases += 1;
                let pairs = match_defects(l, &defects).unwrap();
                let mut seen = vec![false; k];
                for &(i, j) in &pairs {
                    seen[i] = true;
                    seen[j] = true;
                }
                let cost: usize = pairs.iter().map(|&(i, j)| torus_distance(l, defects[i], defects[j])).sum();
                let best = brute_force_matching(l, &defects);
                if pairs.len() != k / 2 || seen.iter().any(|s| !s) || cost != best {
                    bad.push(format!("L = {} defects {:?}: cost {} vs {}", l, defects, cost, best));
                }
            }
        }
    }
    let detail = if bad.is_empty() { format!("{} random defect sets", cases) } else { bad[0].clone() };
    check(8, "MWPM optimal vs brute force (L ≤ 4, ≤ 6 defects)", bad.is_empty(), detail)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u = uniform(rng).max(1e-300);
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * uniform(rng)).cos()
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| c(gaussian(rng), gaussian(rng)));
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}

/// `R∘R = R` on random states, and `R(K_μ ρ K_ν†) = C_νμ ρ` for random
/// logical `ρ`.
fn recovery_defects(words: &[CVec], errors: &[CMat], rec: &KrausChannel, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let dim = words[0].len();
    let mut idem = 0.0f64;
    for _ in 0..4 {
        let rho = random_density(rng, dim);
        let once = rec.apply(&rho);
        idem = idem.max(max_abs(&(rec.apply(&once) - &once)));
    }
    let kl = kl_matrix(words, errors).unwrap();
    let mut ident = 0.0f64;
    for _ in 0..2 {
        let coeff = CMat::from_fn(2, 2, |_, _| c(gaussian(rng), gaussian(rng)));
        let coeff = &coeff * coeff.adjoint();
        let coeff = &coeff / coeff.trace();
        let mut rho = CMat::zeros(dim, dim);
        for i in 0..2 {
            for j in 0..2 {
                rho += outer(&words[i], &words[j]) * coeff[(i, j)];
            }
        }
        for (mu, km) in errors.iter().enumerate() {
            for (nu, kn) in errors.iter().enumerate() {
                let lhs = rec.apply(&(km * &rho * kn.adjoint()));
                ident = ident.max(max_abs(&(lhs - &rho * kl.c[(nu, mu)])));
            }
        }
    }
    (idem, ident)
}

fn recovery_suite() -> Check {
    let mut rng = sample_rng(0x4ec0, 0);
    let mut parts = Vec::new();
    let mut ok = true;
    let (words, rec) = stabilizer_recovery(&five_qubit_code(), 1).unwrap();
    let errors: Vec<CMat> =
        aqec_core::lindblad::low_weight_paulis(5, 1).iter().map(|p| p.to_matrix().unwrap()).collect();
    let (idem, ident) = recovery_defects(&words, &errors, &rec, &mut rng);
    ok &= idem < 1e-10 && ident < 1e-10;
    parts.push(format!("five-qubit {:.1e}/{:.1e}", idem, ident));
    for (ell, dim) in [(1usize, 21usize), (2, 45)] {
        let osc = TruncatedOscillator::new(dim).unwrap();
        let words: Vec<CVec> = binomial_codewords(ell, dim).unwrap().to_vec();
        let errors = ladder_words(&osc, ell);
        let rec = build_recovery(&words, &errors).unwrap();
        let (idem, ident) = recovery_defects(&words, &errors, &rec, &mut rng);
        ok &= idem < 1e-8 && ident < 1e-8;
        parts.push(format!("binomial ℓ = {} {:.1e}/{:.1e}", ell, idem, ident));
    }
    check(8, "recovery idempotent and KL identity (max defect R²−R / KL)", ok, parts.join(", "))
}

/// `δ ≤ 2ε` for the binomial code on its exact-integration grid; the
/// five-qubit grid is covered by the experiment's own check.
fn binomial_delta_suite() -> Check {
    let times: Vec<f64> = (1..=12).map(|k| 2.5 * k as f64).collect();
    let sampler = default_sampler();
    let mut worst = f64::NEG_INFINITY;
    for (ell, dim, delta) in [(1usize, 21usize, 0.005), (2, 45, 0.005)] {
        let osc = TruncatedOscillator::new(dim).unwrap();
        let words: Vec<CVec> = binomial_codewords(ell, dim).unwrap().to_vec();
        let rec = build_recovery(&words, &ladder_words(&osc, ell)).unwrap();
        let noise = Lindbladian::from_jumps(&oscillator_noise(&osc, delta)).unwrap();
        let with_rec = noise.clone().with_recovery(1.0, rec.clone()).unwrap();
        let ev = LogicalEvolution::compute(&with_rec, Some(&rec), &words, &times, Tolerances::default()).unwrap();
        let (eps, del) = (ev.epsilon(&sampler), ev.delta(&sampler));
        for (e, d) in eps.iter().zip(&del) {
            worst = worst.max(d - 2.0 * e);
        }
    }
    check(8, "δ ≤ 2ε (binomial ℓ = 1, 2)", worst <= 1e-9, format!("max δ − 2ε = {:.2e}", worst))
}

fn random_walk(h: u32, n: u32, p1: f64, samples: u64, seed: u64) -> (f64, f64) {
    let mut rng = sample_rng(seed, 0);
    let mut fails = 0u64;
    for _ in 0..samples {
        let mut v = 1u32;
        while v > 0 && v <= h {
            let u = uniform(&mut rng);
            let up = p1 * (1.0 - v as f64 / n as f64);
            let down = p1 * v as f64 / n as f64;
            if u < up {
                v += 1;
            } else if u < up + down {
                v -= 1;
            } else {
                v = 0;
            }
        }
        if v == h + 1 {
            fails += 1;
        }
    }
    let p = fails as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}

fn recurrence_suite() -> Check {
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut seed = 0x7a11;
    for (h, n) in [(1u32, 3u32), (2, 6), (3, 9), (4, 14), (5, 17), (6, 20)] {
        for p1 in [0.6, 0.9, 0.99] {
            let exact = solve_recurrence(h, n as u64, p1).unwrap().s(1);
            let (mc, se) = random_walk(h, n, p1, 100_000, seed);
            seed += 1;
            cases += 1;
            worst = worst.max((mc - exact).abs() / se.max(1e-6));
        }
    }
    check(
        8,
        "recurrence vs random-walk Monte Carlo (h ≤ 6, N ≤ 20)",
        worst <= SIGMAS,
        format!("{} cases, worst {:.2}σ", cases, worst),
    )
}

// ---------- report ----------

fn main() -> ExitCode {
    let start = Instant::now();
    let mut checks = Vec::new();
    run_experiments(&mut checks);
    checks.push(pauli_suite());
    checks.push(mwpm_suite());
    checks.push(recovery_suite());
    checks.push(binomial_delta_suite());
    checks.push(recurrence_suite());

    let mut unexpected = Vec::new();
    println!();
    for k in 1..=9u8 {
        let mine: Vec<&Check> = checks.iter().filter(|c| c.criterion == Some(k)).collect();
        let passed = !mine.is_empty() && mine.iter().all(|c| c.passed);
        let status = match (passed, KNOWN_DEVIATIONS.contains(&k)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known deviation)",
            (false, false) => {
                unexpected.push(k);
                "FAIL"
            }
        };
        let detail: Vec<String> = mine
            .iter()
            .map(|c| format!("{}{}: {}", if c.passed { "" } else { "✗ " }, c.name, c.detail))
            .collect();
        println!("[{}] {} {}  |  {}", k, status, TITLES[k as usize - 1], detail.join("; "));
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {:?}", unexpected);
        ExitCode::FAILURE
    }
}
