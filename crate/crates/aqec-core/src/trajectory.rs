//! Poisson point-process trajectories and Pauli-frame Monte Carlo estimators.
//!
//! Events arrive at total rate `γ = κ + NΔ`. An event is a recovery with
//! probability `κ/γ`, otherwise jump `E_μ` with probability `λ_μΔ/γ`. Pauli
//! noise keeps the state a Pauli frame times a codeword, so a frame of bits is
//! an exact simulation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand_core::RngCore;

use crate::code::LogicalClass;
use crate::decoders::Decoder;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};
use crate::sampling::{self, below, exponential, sample_rng, uniform, ShardedTask, Tally};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonParams {
    pub kappa: f64,
    pub delta: f64,
    /// `N = Σ λ_μ`.
    pub n_channels: f64,
}

impl PoissonParams {
    pub fn new(kappa: f64, delta: f64, n_channels: f64) -> Result<PoissonParams> {
        for (name, v) in [("kappa", kappa), ("delta", delta), ("n_channels", n_channels)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("{} must be finite and ≥ 0, got {}", name, v)));
            }
        }
        Ok(PoissonParams { kappa, delta, n_channels })
    }

    pub fn for_noise(kappa: f64, delta: f64, noise: &NoiseModel) -> Result<PoissonParams> {
        PoissonParams::new(kappa, delta, noise.n_channels())
    }

    pub fn error_rate(&self) -> f64 {
        self.n_channels * self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.kappa + self.error_rate()
    }

    /// Probability that an event is a recovery; 0 when `γ = 0`.
    pub fn p0(&self) -> f64 {
        let g = self.gamma();
        if g > 0.0 {
            self.kappa / g
        } else {
            0.0
        }
    }

    /// Probability that an event is any error jump, `p₁ = NΔ/γ`.
    pub fn p_error(&self) -> f64 {
        let g = self.gamma();
        if g > 0.0 {
            self.error_rate() / g
        } else {
            0.0
        }
    }
}

/// Jump operators with weights `λ_μ`; `N = Σ λ_μ`.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    jumps: Vec<PauliOperator>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    uniform: bool,
}

impl NoiseModel {
    pub fn new(jumps: Vec<PauliOperator>, weights: Vec<f64>) -> Result<NoiseModel> {
        if jumps.is_empty() || jumps.len() != weights.len() {
            return Err(Error::InvalidSize(format!("{} jumps with {} weights", jumps.len(), weights.len())));
        }
        let n = jumps[0].num_qubits();
        if let Some(j) = jumps.iter().find(|j| j.num_qubits() != n) {
            return Err(Error::LengthMismatch { left: n, right: j.num_qubits() });
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::Domain("jump weights must be positive".into()));
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        let uniform = weights.iter().all(|&w| w == weights[0]);
        Ok(NoiseModel { jumps, weights, cumulative, uniform })
    }

    fn per_site(n: usize, kinds: &[Pauli]) -> NoiseModel {
        let mut jumps = Vec::with_capacity(n * kinds.len());
        for q in 0..n {
            for &k in kinds {
                jumps.push(PauliOperator::single(n, q, k));
            }
        }
        let w = vec![1.0; jumps.len()];
        NoiseModel::new(jumps, w).expect("per-site noise is valid")
    }

    /// `{X_i, Y_i, Z_i}` on every qubit, unit weights (`N = 3n`).
    pub fn depolarizing(n: usize) -> NoiseModel {
        NoiseModel::per_site(n, &[Pauli::X, Pauli::Y, Pauli::Z])
    }

    /// `{X_i}`, unit weights (`N = n`).
    pub fn bit_flip(n: usize) -> NoiseModel {
        NoiseModel::per_site(n, &[Pauli::X])
    }

    /// `{Z_i}`, unit weights (`N = n`).
    pub fn dephasing(n: usize) -> NoiseModel {
        NoiseModel::per_site(n, &[Pauli::Z])
    }

    pub fn jumps(&self) -> &[PauliOperator] {
        &self.jumps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_qubits(&self) -> usize {
        self.jumps[0].num_qubits()
    }

    pub fn n_channels(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Index of a jump drawn with probability `λ_μ / N`.
    #[inline]
    pub fn pick(&self, rng: &mut impl RngCore) -> usize {
        if self.uniform {
            return below(rng, self.jumps.len() as u64) as usize;
        }
        let u = uniform(rng) * self.n_channels();
        self.cumulative.partition_point(|&c| c <= u).min(self.jumps.len() - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    /// 0 is a recovery; `μ ≥ 1` is jump `μ − 1` of the noise model.
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub horizon: f64,
    pub events: Vec<Event>,
}

/// Lazy event generator on `[0, ∞)`.
pub struct EventStream<'a, R: RngCore> {
    params: PoissonParams,
    noise: Option<&'a NoiseModel>,
    rng: R,
    now: f64,
}

impl<'a, R: RngCore> EventStream<'a, R> {
    pub fn new(params: PoissonParams, noise: Option<&'a NoiseModel>, rng: R) -> Self {
        EventStream { params, noise, rng, now: 0.0 }
    }

    /// Next event, or `None` when `γ = 0`. Without a noise model every error
    /// carries label 1.
    #[inline]
    pub fn next_event(&mut self) -> Option<Event> {
        let g = self.params.gamma();
        if g <= 0.0 {
            return None;
        }
        self.now += exponential(&mut self.rng, g);
        let label = if uniform(&mut self.rng) * g < self.params.kappa {
            0
        } else {
            match self.noise {
                Some(nm) => 1 + nm.pick(&mut self.rng),
                None => 1,
            }
        };
        Some(Event { time: self.now, label })
    }
}

pub fn sample_trajectory(p: &PoissonParams, noise: &NoiseModel, t: f64, rng: &mut impl RngCore) -> Trajectory {
    let mut stream = EventStream::new(*p, Some(noise), rng);
    let mut events = Vec::new();
    while let Some(e) = stream.next_event() {
        if e.time > t {
            break;
        }
        events.push(e);
    }
    Trajectory { horizon: t, events }
}

/// Point estimate with binomial (or sample) standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

fn binomial(t: f64, k: u64, n: u64) -> Estimate {
    let p = if n > 0 { k as f64 / n as f64 } else { 0.0 };
    let se = if n > 0 { libm::sqrt(p * (1.0 - p) / n as f64) } else { 0.0 };
    Estimate { t, value: p, stderr: se, n_samples: n }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("time grid must be finite, ≥ 0 and nondecreasing".into()));
    }
    Ok(())
}

fn check_noise(decoder: &Decoder, noise: &NoiseModel, p: &PoissonParams) -> Result<()> {
    if noise.num_qubits() != decoder.code().num_qubits() {
        return Err(Error::LengthMismatch { left: decoder.code().num_qubits(), right: noise.num_qubits() });
    }
    let n = noise.n_channels();
    if (p.n_channels - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::Contract(format!("params N = {} but noise model has N = {}", p.n_channels, n)));
    }
    Ok(())
}

/// Failure flags of one readout. `z`: a `|0̄⟩`-type state is flipped (any
/// `X̄` or `Ȳ`); `x`: any `Z̄` or `Ȳ`; `y`: any `X̄` or `Z̄`; `alpha`: `X̄` or
/// `Ȳ` on logical qubit 0.
#[inline]
fn families(c: LogicalClass) -> [bool; 4] {
    [c.x != 0, c.z != 0, (c.x ^ c.z) != 0, c.x & 1 == 1]
}

/// Per-time failure counts for the three cardinal families and the logical-0
/// flip.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTally {
    pub n: u64,
    pub counts: Vec<[u64; 4]>,
}

impl Tally for FrameTally {
    fn merge(&mut self, other: Self) {
        self.n += other.n;
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            for i in 0..4 {
                a[i] += b[i];
            }
        }
    }
}

impl FrameTally {
    /// `ε̂(t)`: the worst of the three cardinal families.
    pub fn epsilon(&self, times: &[f64]) -> Vec<Estimate> {
        times
            .iter()
            .zip(&self.counts)
            .map(|(&t, c)| binomial(t, c[0].max(c[1]).max(c[2]), self.n))
            .collect()
    }

    /// Failure probability of one family (0: Z basis, 1: X basis, 2: Y basis).
    pub fn family(&self, times: &[f64], which: usize) -> Vec<Estimate> {
        times.iter().zip(&self.counts).map(|(&t, c)| binomial(t, c[which], self.n)).collect()
    }

    pub fn alpha(&self, times: &[f64]) -> Vec<Estimate> {
        self.family(times, 3)
    }
}

/// One trajectory per sample, read out (with a final recovery on a copy of
/// the frame) at every grid time.
pub struct FrameTask<'a> {
    pub decoder: &'a Decoder,
    pub noise: &'a NoiseModel,
    pub params: PoissonParams,
    pub times: Vec<f64>,
    pub seed: u64,
}

impl<'a> FrameTask<'a> {
    pub fn new(
        decoder: &'a Decoder,
        noise: &'a NoiseModel,
        params: PoissonParams,
        times: &[f64],
        seed: u64,
    ) -> Result<FrameTask<'a>> {
        check_times(times)?;
        check_noise(decoder, noise, &params)?;
        Ok(FrameTask { decoder, noise, params, times: times.to_vec(), seed })
    }
}

impl ShardedTask for FrameTask<'_> {
    type Tally = FrameTally;

    fn run(&self, samples: Range<u64>) -> FrameTally {
        let n = self.decoder.code().num_qubits();
        let mut tally = FrameTally { n: 0, counts: vec![[0; 4]; self.times.len()] };
        let mut frame = PauliOperator::identity(n);
        let mut scratch = PauliOperator::identity(n);
        let t_end = self.times.last().copied().unwrap_or(0.0);
        for i in samples {
            tally.n += 1;
            frame.clear();
            let mut stream = EventStream::new(self.params, Some(self.noise), sample_rng(self.seed, i));
            let mut next = 0;
            let mut cached: Option<[bool; 4]> = None;
            loop {
                let ev = stream.next_event();
                let te = ev.map_or(f64::INFINITY, |e| e.time);
                while next < self.times.len() && self.times[next] < te {
                    let f = *cached.get_or_insert_with(|| {
                        scratch.clone_from(&frame);
                        families(self.decoder.recover_in_place(&mut scratch))
                    });
                    for (k, &bit) in f.iter().enumerate() {
                        tally.counts[next][k] += bit as u64;
                    }
                    next += 1;
                }
                let Some(e) = ev else { break };
                if e.time > t_end {
                    break;
                }
                if e.label == 0 {
                    self.decoder.recover_in_place(&mut frame);
                } else {
                    frame.xor_support(&self.noise.jumps()[e.label - 1]);
                }
                cached = None;
            }
        }
        tally
    }
}

/// `ε̂(t)` on a time grid.
pub fn estimate_epsilon(
    decoder: &Decoder,
    noise: &NoiseModel,
    p: PoissonParams,
    times: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<Estimate>> {
    let task = FrameTask::new(decoder, noise, p, times, seed)?;
    Ok(run_frames(&task, n_samples).epsilon(times))
}

fn run_frames(task: &FrameTask<'_>, n: u64) -> FrameTally {
    sampling::run_serial(task, n).unwrap_or(FrameTally { n: 0, counts: vec![[0; 4]; task.times.len()] })
}

/// `α̂(τ)`: probability that pure noise for time `τ` followed by one recovery
/// flips logical qubit 0 out of `|0̄⟩`.
pub fn estimate_alpha(
    decoder: &Decoder,
    noise: &NoiseModel,
    delta: f64,
    taus: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<Estimate>> {
    let p = PoissonParams::for_noise(0.0, delta, noise)?;
    let task = FrameTask::new(decoder, noise, p, taus, seed)?;
    Ok(run_frames(&task, n_samples).alpha(taus))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Assumption2 {
    pub lhs: f64,
    pub rhs: f64,
    /// Standard error of `lhs − rhs` from the paired samples.
    pub sigma: f64,
    pub holds: bool,
    pub n_samples: u64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PairTally {
    pub n: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub diff_sq: u64,
}

impl Tally for PairTally {
    fn merge(&mut self, o: Self) {
        self.n += o.n;
        self.lhs += o.lhs;
        self.rhs += o.rhs;
        self.diff_sq += o.diff_sq;
    }
}

impl PairTally {
    pub fn finish(&self) -> Assumption2 {
        let n = self.n.max(1) as f64;
        let lhs = self.lhs as f64 / n;
        let rhs = self.rhs as f64 / n;
        let mean_d = lhs - rhs;
        let var = if self.n > 1 { (self.diff_sq as f64 / n - mean_d * mean_d) * n / (n - 1.0) } else { 0.0 };
        let sigma = libm::sqrt(var.max(0.0) / n);
        Assumption2 { lhs, rhs, sigma, holds: lhs <= rhs + 3.0 * sigma, n_samples: self.n }
    }
}

/// Survival of `|0̄⟩` after one recovery at `m·t` (lhs) versus a recovery
/// after every interval `t` (rhs). Both use the same event sequence.
pub struct Assumption2Task<'a> {
    pub decoder: &'a Decoder,
    pub noise: &'a NoiseModel,
    pub params: PoissonParams,
    pub t: f64,
    pub m: u32,
    pub seed: u64,
}

impl ShardedTask for Assumption2Task<'_> {
    type Tally = PairTally;

    fn run(&self, samples: Range<u64>) -> PairTally {
        let n = self.decoder.code().num_qubits();
        let mut tally = PairTally::default();
        let mut left = PauliOperator::identity(n);
        let mut right = PauliOperator::identity(n);
        for i in samples {
            tally.n += 1;
            left.clear();
            right.clear();
            let mut stream = EventStream::new(self.params, Some(self.noise), sample_rng(self.seed, i));
            let t_end = self.t * self.m as f64;
            let mut block = 1u32;
            let mut ev = stream.next_event();
            loop {
                let te = ev.map_or(f64::INFINITY, |e| e.time);
                while block <= self.m && (block as f64) * self.t < te {
                    self.decoder.recover_in_place(&mut right);
                    block += 1;
                }
                match ev {
                    Some(e) if e.time <= t_end => {
                        if e.label == 0 {
                            self.decoder.recover_in_place(&mut left);
                            self.decoder.recover_in_place(&mut right);
                        } else {
                            let j = &self.noise.jumps()[e.label - 1];
                            left.xor_support(j);
                            right.xor_support(j);
                        }
                        ev = stream.next_event();
                    }
                    _ => break,
                }
            }
            let sl = self.decoder.recover_in_place(&mut left).x == 0;
            // `right` was recovered at the last block boundary, so it is canonical.
            let sr = self.decoder.code().class_unchecked(&right).x == 0;
            tally.lhs += sl as u64;
            tally.rhs += sr as u64;
            tally.diff_sq += (sl != sr) as u64;
        }
        tally
    }
}

pub fn check_assumption2(
    decoder: &Decoder,
    noise: &NoiseModel,
    p: PoissonParams,
    t: f64,
    m: u32,
    n_samples: u64,
    seed: u64,
) -> Result<Assumption2> {
    check_noise(decoder, noise, &p)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("t = {}", t)));
    }
    let task = Assumption2Task { decoder, noise, params: p, t, m, seed };
    Ok(sampling::run_serial(&task, n_samples).unwrap_or_default().finish())
}

/// Per-time counts of label sequences that have contained a run of more than
/// `ℓ` consecutive error labels.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTally {
    pub n: u64,
    pub counts: Vec<u64>,
}

impl Tally for CountTally {
    fn merge(&mut self, o: Self) {
        self.n += o.n;
        self.counts.iter_mut().zip(o.counts).for_each(|(a, b)| *a += b);
    }
}

impl CountTally {
    pub fn finish(&self, times: &[f64]) -> Vec<Estimate> {
        times.iter().zip(&self.counts).map(|(&t, &k)| binomial(t, k, self.n)).collect()
    }
}

pub struct FaithfulTask {
    pub ell: usize,
    pub params: PoissonParams,
    pub times: Vec<f64>,
    pub seed: u64,
}

impl ShardedTask for FaithfulTask {
    type Tally = CountTally;

    fn run(&self, samples: Range<u64>) -> CountTally {
        let mut tally = CountTally { n: 0, counts: vec![0; self.times.len()] };
        let t_end = self.times.last().copied().unwrap_or(0.0);
        for i in samples {
            tally.n += 1;
            let mut stream = EventStream::new(self.params, None, sample_rng(self.seed, i));
            let mut run = 0usize;
            while let Some(e) = stream.next_event() {
                if e.time > t_end {
                    break;
                }
                if e.label == 0 {
                    run = 0;
                    continue;
                }
                run += 1;
                if run > self.ell {
                    let first = self.times.partition_point(|&t| t < e.time);
                    for c in &mut tally.counts[first..] {
                        *c += 1;
                    }
                    break;
                }
            }
        }
        tally
    }
}

pub fn estimate_faithful_violation(
    ell: usize,
    p: PoissonParams,
    times: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<Estimate>> {
    check_times(times)?;
    let task = FaithfulTask { ell, params: p, times: times.to_vec(), seed };
    let tally = sampling::run_serial(&task, n_samples).unwrap_or(CountTally { n: 0, counts: vec![0; times.len()] });
    Ok(tally.finish(times))
}

/// Weighted sums for an importance-sampled mean.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct WeightTally {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Tally for WeightTally {
    fn merge(&mut self, o: Self) {
        self.n += o.n;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }
}

impl WeightTally {
    pub fn finish(&self, t: f64) -> Estimate {
        let n = self.n.max(1) as f64;
        let mean = self.sum / n;
        let var = (self.sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        Estimate { t, value: mean, stderr: libm::sqrt(var / n), n_samples: self.n }
    }
}

/// Importance-sampled `p(t)` for small violation probabilities. The event
/// count is drawn from `Poisson(tilt_mean)` and labels from
/// `Bernoulli(tilt_p1)`; each sample carries its likelihood ratio.
pub struct FaithfulIsTask {
    pub ell: usize,
    pub params: PoissonParams,
    pub t: f64,
    pub tilt_mean: f64,
    pub tilt_p1: f64,
    pub seed: u64,
}

impl FaithfulIsTask {
    /// Tilt toward short all-error bursts: at least `ℓ + 1 + √(ℓ+1)` events
    /// on average and error labels with probability at least `(ℓ+1)/(ℓ+2)`.
    pub fn with_default_tilt(ell: usize, params: PoissonParams, t: f64, seed: u64) -> FaithfulIsTask {
        let l1 = (ell + 1) as f64;
        let mean = params.gamma() * t;
        FaithfulIsTask {
            ell,
            params,
            t,
            tilt_mean: mean.max(l1 + libm::sqrt(l1)),
            tilt_p1: params.p_error().max(l1 / (l1 + 1.0)),
            seed,
        }
    }
}

impl ShardedTask for FaithfulIsTask {
    type Tally = WeightTally;

    fn run(&self, samples: Range<u64>) -> WeightTally {
        let mut tally = WeightTally::default();
        let mean = self.params.gamma() * self.t;
        let p1 = self.params.p_error();
        let (m2, q1) = (self.tilt_mean, self.tilt_p1);
        for i in samples {
            tally.n += 1;
            let mut rng = sample_rng(self.seed, i);
            let mut k = 0u32;
            let mut clock = exponential(&mut rng, m2);
            let (mut errs, mut recs) = (0u32, 0u32);
            let mut run = 0usize;
            let mut hit = false;
            while clock <= 1.0 {
                k += 1;
                if uniform(&mut rng) < q1 {
                    errs += 1;
                    run += 1;
                    hit |= run > self.ell;
                } else {
                    recs += 1;
                    run = 0;
                }
                clock += exponential(&mut rng, m2);
            }
            if !hit {
                continue;
            }
            let mut logw = k as f64 * libm::log(mean / m2) - (mean - m2);
            if errs > 0 {
                logw += errs as f64 * libm::log(p1 / q1);
            }
            if recs > 0 {
                logw += recs as f64 * libm::log((1.0 - p1) / (1.0 - q1));
            }
            let w = libm::exp(logw);
            tally.sum += w;
            tally.sum_sq += w * w;
        }
        tally
    }
}

pub fn estimate_faithful_violation_is(ell: usize, p: PoissonParams, t: f64, n_samples: u64, seed: u64) -> Result<Estimate> {
    if !(t.is_finite() && t > 0.0) || p.gamma() <= 0.0 {
        return Err(Error::Domain("importance sampling needs t > 0 and γ > 0".into()));
    }
    let task = FaithfulIsTask::with_default_tilt(ell, p, t, seed);
    Ok(sampling::run_serial(&task, n_samples).unwrap_or_default().finish(t))
}
