use aqec_core::bounds::{theorem4_bound, BoundInputs};
use aqec_core::lindblad::{
    build_lindbladian, default_sampler, pauli_jumps, stabilizer_recovery, LogicalEvolution, Tolerances,
};
use aqec_core::trajectory::{FrameTally, FrameTask, NoiseModel, PoissonParams};
use aqec_core::{five_qubit_code, Decoder};

use super::{line, mc_curve};
use crate::analysis::{index_of, merge_grids, sub_seed};
use crate::config::ExperimentConfig;
use crate::error::AppResult;
use crate::output::{Curve, Point};
use crate::runner::Runner;

/// Tighter than the default so that `ε ∝ t²` is resolved at `t = 10⁻³`.
pub const FIVE_QUBIT_TOL: Tolerances = Tolerances { atol: 1e-14, rtol: 1e-10, max_steps: 1_000_000 };

/// Five-qubit code under depolarizing noise: exact `ε(t)`, `δ(t)`, the
/// early-time bound and Pauli-frame `ε̂(t)`.
pub fn fig5a(cfg: &ExperimentConfig, runner: &Runner) -> AppResult<Vec<Curve>> {
    let kappa = cfg.f64("kappa")?;
    let nd = cfg.f64("n_delta")?;
    let times = cfg.list_f64("times")?;
    let mc_times = cfg.list_f64("mc_times")?;
    let samples = cfg.u64("samples")?;

    let code = five_qubit_code();
    let noise = NoiseModel::depolarizing(code.num_qubits());
    let n = noise.n_channels();
    let delta = nd / n;
    let (words, rec) = stabilizer_recovery(&code, code.error_radius())?;
    let l = build_lindbladian(&pauli_jumps(&noise, delta)?)?.with_recovery(kappa, rec.clone())?;
    let grid = merge_grids(&times, &mc_times);
    let evo = LogicalEvolution::compute(&l, Some(&rec), &words, &grid, FIVE_QUBIT_TOL)?;
    let sampler = default_sampler();
    let eps = evo.epsilon(&sampler);
    let dlt = evo.delta(&sampler);
    let pick = |ts: &[f64], v: &[f64], name: &str| {
        let mut c = Curve::new(name).param("kappa", kappa).param("n_delta", nd);
        for &t in ts {
            let k = index_of(&grid, t).expect("grid contains its inputs");
            c.push(Point::new(t, v[k]));
        }
        c
    };
    let mut out = vec![
        pick(&times, &eps, "exact_epsilon"),
        pick(&times, &dlt, "exact_delta"),
        pick(&mc_times, &eps, "exact_epsilon_mc_grid"),
    ];
    let inp = BoundInputs::new(code.error_radius() as u32, kappa, delta, n);
    out.push(line("early_time", &times, |t| Ok(theorem4_bound(&inp, t)?))?);

    let decoder = Decoder::for_code(&code)?;
    let p = PoissonParams::for_noise(kappa, delta, &noise)?;
    let seed = sub_seed(cfg.seed, 0);
    let task = FrameTask::new(&decoder, &noise, p, &mc_times, seed)?;
    let tally = runner.run(&task, samples).unwrap_or(FrameTally { n: 0, counts: vec![[0; 4]; mc_times.len()] });
    out.push(mc_curve("mc_epsilon".into(), &tally.epsilon(&mc_times), seed));
    Ok(out)
}
