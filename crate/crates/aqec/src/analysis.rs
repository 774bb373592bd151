//! Small numerical helpers shared by experiments and checks.

use aqec_core::sampling::splitmix64;

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn ols(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Slope of `ln y` against `ln x`, skipping nonpositive entries.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).unzip();
    ols(&lx, &ly).map(|(s, _)| s)
}

/// First upward crossing of `level`, linearly interpolated.
pub fn crossing(x: &[f64], y: &[f64], level: f64) -> Option<f64> {
    if y.first().is_some_and(|&y0| y0 >= level) {
        return x.first().copied();
    }
    x.windows(2).zip(y.windows(2)).find(|(_, w)| w[0] < level && w[1] >= level).map(|(xs, w)| {
        let f = (level - w[0]) / (w[1] - w[0]);
        xs[0] + f * (xs[1] - xs[0])
    })
}

/// Independent root seed for the `tag`-th stream of an experiment.
pub fn sub_seed(root: u64, tag: u64) -> u64 {
    splitmix64(root ^ splitmix64(tag.wrapping_add(0x5eed)))
}

/// Sorted union of two grids.
pub fn merge_grids(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().chain(b).copied().collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn index_of(grid: &[f64], x: f64) -> Option<usize> {
    grid.iter().position(|&g| g == x)
}
