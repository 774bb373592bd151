//! Batch evaluation of the closed-form bounds over a CSV parameter table.
//!
//! Input columns (header required, order free, unused ones may be blank):
//!
//! | column | meaning |
//! |---|---|
//! | `op` | `theorem1`, `theorem2`, `theorem3`, `theorem4`, `theorem4_linear`, `delta_eff`, `p_asymptotic`, `p_exact`, `theorem5` |
//! | `ell` | error radius ℓ |
//! | `kappa`, `delta`, `n` | recovery rate, per-channel noise rate, channel count N |
//! | `t` | time (every op except `delta_eff`) |
//! | `h`, `d`, `xi`, `chi`, `l_e_norm` | optional; defaults h = ℓ, ξ = χ = 0, ‖𝓛_E‖ = N |
//! | `a`, `tau_c` | `theorem5` only |
//!
//! The output repeats every input column and appends `value`.

use std::io::{Read, Write};

use aqec_core::bounds::{
    delta_eff, p_asymptotic, p_exact_series, theorem1_bound, theorem2_bound, theorem3_bound, theorem4_bound,
    theorem4_linear, theorem5_lower, BoundInputs,
};
use serde::Deserialize;

use crate::error::{AppError, AppResult};

#[derive(Debug, Deserialize)]
struct Row {
    op: String,
    ell: Option<u32>,
    kappa: Option<f64>,
    delta: Option<f64>,
    n: Option<f64>,
    t: Option<f64>,
    h: Option<u32>,
    d: Option<u32>,
    xi: Option<f64>,
    chi: Option<f64>,
    l_e_norm: Option<f64>,
    a: Option<f64>,
    tau_c: Option<f64>,
}

fn need<T>(v: Option<T>, col: &str, line: usize) -> AppResult<T> {
    v.ok_or_else(|| AppError::Usage(format!("row {}: column '{}' is required", line, col)))
}

fn evaluate(r: &Row, line: usize) -> AppResult<f64> {
    if r.op == "theorem5" {
        return Ok(theorem5_lower(
            need(r.a, "a", line)?,
            need(r.tau_c, "tau_c", line)?,
            need(r.kappa, "kappa", line)?,
            need(r.t, "t", line)?,
        )?);
    }
    let mut inp =
        BoundInputs::new(need(r.ell, "ell", line)?, need(r.kappa, "kappa", line)?, need(r.delta, "delta", line)?, need(r.n, "n", line)?);
    inp.h = r.h;
    inp.d = r.d;
    inp.xi = r.xi.unwrap_or(0.0);
    inp.chi = r.chi.unwrap_or(0.0);
    if let Some(x) = r.l_e_norm {
        inp.l_e_norm = x;
    }
    let t = || need(r.t, "t", line);
    let v = match r.op.as_str() {
        "theorem1" => theorem1_bound(&inp, t()?)?,
        "theorem2" => theorem2_bound(&inp, t()?)?,
        "theorem3" => theorem3_bound(&inp, t()?)?,
        "theorem4" => theorem4_bound(&inp, t()?)?,
        "theorem4_linear" => theorem4_linear(&inp, t()?)?,
        "delta_eff" => delta_eff(&inp)?,
        "p_asymptotic" => p_asymptotic(&inp, t()?)?,
        "p_exact" => p_exact_series(&inp, t()?)?,
        other => return Err(AppError::Usage(format!("row {}: unknown op '{}'", line, other))),
    };
    Ok(v)
}

pub fn evaluate_grid(input: impl Read, output: impl Write) -> AppResult<usize> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    if !headers.iter().any(|h| h == "op") {
        return Err(AppError::Usage("grid needs an 'op' column".into()));
    }
    let mut w = csv::Writer::from_writer(output);
    let mut out_header = headers.clone();
    out_header.push_field("value");
    w.write_record(&out_header)?;
    let mut rows = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row: Row = rec.deserialize(Some(&headers)).map_err(|e| AppError::Usage(format!("row {}: {}", i + 1, e)))?;
        let v = evaluate(&row, i + 1)?;
        let mut out = rec.clone();
        out.push_field(&v.to_string());
        w.write_record(&out)?;
        rows += 1;
    }
    w.flush().map_err(|e| AppError::Format(e.to_string()))?;
    Ok(rows)
}
