use aqec_core::bounds::{theorem2_bound, theorem5_lower, BoundInputs};
use aqec_core::trajectory::{Assumption2Task, FrameTally, FrameTask, NoiseModel, PoissonParams};
use aqec_core::{toric_code, Decoder, StabilizerCode};

use super::{line, mc_curve, require_positive};
use crate::analysis::{crossing, sub_seed};
use crate::config::ExperimentConfig;
use crate::error::{AppError, AppResult};
use crate::output::{Curve, Point};
use crate::runner::Runner;

struct Toric {
    code: StabilizerCode,
    decoder: Decoder,
    n: usize,
}

fn toric(l: u64) -> AppResult<Toric> {
    let code = toric_code(l as usize)?;
    let decoder = Decoder::mwpm(&code)?;
    let n = code.num_qubits();
    Ok(Toric { code, decoder, n })
}

fn frames(runner: &Runner, task: &FrameTask<'_>, samples: u64) -> FrameTally {
    runner.run(task, samples).unwrap_or(FrameTally { n: 0, counts: vec![[0; 4]; task.times.len()] })
}

fn alpha_curve(runner: &Runner, l: u64, delta: f64, taus: &[f64], samples: u64, seed: u64) -> AppResult<Curve> {
    let t = toric(l)?;
    let noise = NoiseModel::bit_flip(t.n);
    let p = PoissonParams::for_noise(0.0, delta, &noise)?;
    let task = FrameTask::new(&t.decoder, &noise, p, taus, seed)?;
    let est = frames(runner, &task, samples).alpha(taus);
    Ok(mc_curve(format!("alpha_L{}", l), &est, seed).param("L", l).param("n", t.n).param("delta", delta))
}

/// Logical flip probability `α̂(τ)` of the toric code under pure bit-flip
/// noise followed by one matching recovery.
pub fn fig4a(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    let delta = require_positive("delta", cfg.f64("delta")?)?;
    let taus = cfg.list_f64("taus")?;
    let samples = cfg.u64("samples")?;
    let level = cfg.f64("level")?;
    let mut out = Vec::new();
    let mut tc = Curve::new("tau_c").param("level", level);
    for (i, l) in cfg.list_u64("sizes")?.into_iter().enumerate() {
        let c = alpha_curve(runner, l, delta, &taus, samples, sub_seed(cfg.seed, i as u64))?;
        if let Some(x) = crossing(&c.xs(), &c.ys(), level) {
            tc.push(Point::new(l as f64, x));
        }
        out.push(c);
    }
    out.push(tc);
    Ok(out)
}

/// Interleaving check at `κ = 0`, and the recovery-rate lower bound with
/// `(a, τ_c)` measured from `α̂` on the same lattice.
pub fn fig4b(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    let l = cfg.u64("size")?;
    let delta = require_positive("delta", cfg.f64("delta")?)?;
    let ts = cfg.list_f64("ts")?;
    let samples = cfg.u64("samples")?;
    let t = toric(l)?;
    let noise = NoiseModel::bit_flip(t.n);
    let p0 = PoissonParams::for_noise(0.0, delta, &noise)?;
    let mut out = Vec::new();
    for (j, m) in cfg.list_u64("ms")?.into_iter().enumerate() {
        let m32 = u32::try_from(m).ok().filter(|&m| m >= 1).ok_or_else(|| AppError::Usage(format!("bad m {}", m)))?;
        let mut lhs = Curve::new(format!("lhs_m{}", m)).param("m", m).param("n", t.n).param("n_samples", samples);
        let mut rhs = Curve::new(format!("rhs_m{}", m)).param("m", m).param("n", t.n).param("n_samples", samples);
        for (i, &tt) in ts.iter().enumerate() {
            let seed = sub_seed(cfg.seed, (j * 1000 + i) as u64);
            let task = Assumption2Task { decoder: &t.decoder, noise: &noise, params: p0, t: tt, m: m32, seed };
            let r = runner.run(&task, samples).unwrap_or_default().finish();
            // stderr on lhs is the paired σ of lhs − rhs
            lhs.push(Point::with_err(tt, r.lhs, r.sigma));
            rhs.push(Point::new(tt, r.rhs));
        }
        out.push(lhs.param("root_seed", cfg.seed));
        out.push(rhs.param("root_seed", cfg.seed));
    }

    let level = cfg.f64("level")?;
    let alpha = alpha_curve(
        runner,
        l,
        delta,
        &cfg.list_f64("alpha_taus")?,
        cfg.u64("alpha_samples")?,
        sub_seed(cfg.seed, 50_000),
    )?;
    let tau_c = crossing(&alpha.xs(), &alpha.ys(), level)
        .ok_or_else(|| AppError::Format(format!("α̂ never reaches {} on the τ grid", level)))?;
    out.push(alpha);
    let mut measured = Curve::new("tau_c").param("a", level);
    measured.push(Point::new(l as f64, tau_c));
    out.push(measured);

    let times = cfg.list_f64("eps_times")?;
    let eps_samples = cfg.u64("eps_samples")?;
    for (i, kappa) in cfg.list_f64("kappas")?.into_iter().enumerate() {
        let p = PoissonParams::for_noise(kappa, delta, &noise)?;
        let seed = sub_seed(cfg.seed, 60_000 + i as u64);
        let task = FrameTask::new(&t.decoder, &noise, p, &times, seed)?;
        let est = frames(runner, &task, eps_samples).epsilon(&times);
        out.push(mc_curve(format!("epsilon_k{}", kappa), &est, seed).param("kappa", kappa));
        out.push(
            line(format!("lower_k{}", kappa), &times, |x| Ok(theorem5_lower(level, tau_c, kappa, x)?))?
                .param("kappa", kappa)
                .param("a", level)
                .param("tau_c", tau_c),
        );
    }
    Ok(out)
}

/// `ε̂(t)` for toric codes under depolarizing noise with `κ ∝ n`, next to
/// the tolerable-weight bound for `h = ⌊h_fraction·n⌋`.
pub fn fig5b(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    let kpq = cfg.f64("kappa_per_qubit")?;
    let delta = require_positive("delta", cfg.f64("delta")?)?;
    let times = cfg.list_f64("times")?;
    let samples = cfg.u64("samples")?;
    let hf = cfg.f64("h_fraction")?;
    let mut out = Vec::new();
    for (i, l) in cfg.list_u64("sizes")?.into_iter().enumerate() {
        let t = toric(l)?;
        let noise = NoiseModel::depolarizing(t.n);
        let kappa = kpq * t.n as f64;
        let p = PoissonParams::for_noise(kappa, delta, &noise)?;
        let seed = sub_seed(cfg.seed, i as u64);
        let task = FrameTask::new(&t.decoder, &noise, p, &times, seed)?;
        let est = frames(runner, &task, samples).epsilon(&times);
        out.push(mc_curve(format!("epsilon_L{}", l), &est, seed).param("L", l).param("kappa", kappa));
        let ell = t.code.error_radius() as u32;
        let h = ((hf * t.n as f64).floor() as u32).max(ell);
        let mut inp = BoundInputs::new(ell, kappa, delta, noise.n_channels());
        inp.h = Some(h);
        out.push(line(format!("theorem2_L{}", l), &times, |x| Ok(theorem2_bound(&inp, x)?))?.param("h", h));
    }
    Ok(out)
}
