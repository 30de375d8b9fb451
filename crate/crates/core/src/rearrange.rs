//! Symmetric decreasing rearrangement.
//!
//! For a piecewise-linear `u` the distribution function `μ(t) = |{u > t}|` is
//! piecewise affine between the distinct nodal values of `u`, with jumps at the
//! heights of flat pieces. Inverting `μ/2` level by level gives `u*` exactly.

use serde::Serialize;

use crate::error::{param, Result};
use crate::function_model::PiecewiseLinear;

/// Slope tolerance used when canonicalizing `u*`.
pub const CANONICAL_TOL: f64 = 1e-12;

/// Distribution data of a piecewise-linear function at its distinct levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelProfile {
    /// Distinct nodal values `0 = t₀ < t₁ < … < t_m = max u`.
    pub levels: Vec<f64>,
    /// `μ(tᵢ) = |{u > tᵢ}|` (right limit).
    pub measure_above: Vec<f64>,
    /// `μ(tᵢ⁻) = |{u ≥ tᵢ}|` (left limit); exceeds `measure_above` by the
    /// total length of flat pieces at height `tᵢ`.
    pub measure_at_least: Vec<f64>,
    /// `dμ/dt` on each band `(tᵢ, tᵢ₊₁)`, i.e. `−Σ 1/|b|` over crossing segments.
    pub band_slopes: Vec<f64>,
}

impl LevelProfile {
    pub fn new(u: &PiecewiseLinear) -> Self {
        let mut levels: Vec<f64> = u.values().to_vec();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let measure_above: Vec<f64> = levels.iter().map(|&t| distribution_measure(u, t)).collect();
        let mut measure_at_least: Vec<f64> = levels
            .iter()
            .map(|&t| u.segments().map(|s| s.measure_at_least(t)).sum())
            .collect();
        // every point of [-1, 1] has u >= 0
        measure_at_least[0] = 2.0;
        let band_slopes = levels
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                -u.segments()
                    .filter(|s| !s.is_flat() && s.y_lo.min(s.y_hi) < mid && mid < s.y_lo.max(s.y_hi))
                    .map(|s| 1.0 / s.slope().abs())
                    .sum::<f64>()
            })
            .collect();
        Self {
            levels,
            measure_above,
            measure_at_least,
            band_slopes,
        }
    }

    /// `μ(t)` from the profile alone (affine interpolation inside bands).
    pub fn measure(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 2.0;
        }
        let m = self.levels.len();
        if t >= self.levels[m - 1] {
            return 0.0;
        }
        let i = self.levels.partition_point(|l| *l <= t) - 1;
        if self.levels[i] == t {
            return self.measure_above[i];
        }
        self.measure_above[i] + self.band_slopes[i] * (t - self.levels[i])
    }
}

/// `|{x ∈ [-1, 1] : u(x) > t}|`, segment by segment in closed form.
pub fn distribution_measure(u: &PiecewiseLinear, t: f64) -> f64 {
    u.segments().map(|s| s.measure_above(t)).sum()
}

/// The symmetric decreasing rearrangement `u*`.
///
/// `u*` is even, nonincreasing on `[0, 1]`, and equimeasurable with `u`. Flat
/// pieces of `u` at height `t` reappear as a flat piece of `u*` at the same
/// height, split symmetrically about the origin.
pub fn symmetrize(u: &PiecewiseLinear) -> PiecewiseLinear {
    let prof = LevelProfile::new(u);
    // right half, from the top level down to zero
    let mut right: Vec<(f64, f64)> = Vec::with_capacity(2 * prof.levels.len());
    for i in (0..prof.levels.len()).rev() {
        let t = prof.levels[i];
        let a = (0.5 * prof.measure_above[i]).clamp(0.0, 1.0);
        let b = (0.5 * prof.measure_at_least[i]).clamp(0.0, 1.0);
        for x in [a, b] {
            // points closer than a few ulps are rounding slivers of one point
            match right.last() {
                Some(&(lx, _)) if x <= lx + 4.0 * f64::EPSILON => {}
                _ => right.push((x, t)),
            }
        }
    }
    match right.last_mut() {
        Some(p) if p.0 >= 1.0 - 4.0 * f64::EPSILON => p.0 = 1.0,
        _ => right.push((1.0, 0.0)),
    }
    let mut xs = Vec::with_capacity(2 * right.len());
    let mut ys = Vec::with_capacity(2 * right.len());
    for &(x, t) in right.iter().rev() {
        if x > 0.0 {
            xs.push(-x);
            ys.push(t);
        }
    }
    for &(x, t) in &right {
        xs.push(x);
        ys.push(t);
    }
    // u(±1) = 0 by construction: the last right point is at level 0
    let last = ys.len() - 1;
    ys[0] = 0.0;
    ys[last] = 0.0;
    PiecewiseLinear::new(xs, ys)
        .expect("rearrangement produces a valid piecewise-linear function")
        .canonicalize(CANONICAL_TOL)
}

/// Rearranges sampled values into symmetric decreasing order.
///
/// Position order is: middle cell first (for even `m`, the right one of the
/// two middle cells), then alternating right, left, moving outward. Of each
/// equidistant pair, the right cell receives the larger value.
pub fn symmetrize_grid(samples: &[f64], cell_width: f64) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(param("symmetrize_grid needs at least one sample"));
    }
    if !(cell_width > 0.0) {
        return Err(param("cell width must be positive"));
    }
    if samples.iter().any(|v| !(*v >= 0.0)) {
        return Err(param("samples must be nonnegative"));
    }
    let m = samples.len();
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0; m];
    for (k, v) in sorted.into_iter().enumerate() {
        out[grid_position(m, k)] = v;
    }
    Ok(out)
}

/// Index of the `k`-th position in the center-outward order.
fn grid_position(m: usize, k: usize) -> usize {
    let c = m / 2;
    // odd m:  c, c+1, c-1, c+2, c-2, ...
    // even m: c, c-1, c+1, c-2, c+2, ...  (pairs (c-1, c), (c-2, c+1), ...)
    if m % 2 == 1 {
        if k == 0 {
            c
        } else if k % 2 == 1 {
            c + k.div_ceil(2)
        } else {
            c - k / 2
        }
    } else if k % 2 == 0 {
        c + k / 2
    } else {
        c - k.div_ceil(2)
    }
}
