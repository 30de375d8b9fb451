//! Numerical experiments: rearrangement gaps of `J` and `I` on hats, double
//! ramps and random functions, the two-point kernel inequality, and a
//! two-dimensional grid demonstration of Steiner symmetrization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{param, Error, Result};
use crate::function_model::{make_double_ramp, make_hat, ExponentSpec, PiecewiseLinear};
use crate::functionals::{eval_functional, kernel_k, QuadratureConfig, Which};
use crate::rearrange::{symmetrize, symmetrize_grid};

/// Tolerance for `I(u*) ≤ I(u)` and `J(u*) ≤ J(u)` trials.
pub const TRIAL_TOL: f64 = 1e-9;
/// Tolerance for direct kernel comparisons.
pub const KERNEL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub inputs: Value,
    pub value_original: f64,
    pub value_symmetrized: f64,
    /// `value_original − value_symmetrized`
    pub gap: f64,
    pub pass: bool,
    pub tolerance: f64,
}

impl TrialReport {
    fn monotone(inputs: Value, original: f64, symmetrized: f64, tolerance: f64) -> Self {
        let gap = original - symmetrized;
        TrialReport { inputs, value_original: original, value_symmetrized: symmetrized, gap, pass: gap >= -tolerance, tolerance }
    }
}

/// Random `u` with `n_nodes` interior breakpoints, uniform positions and
/// heights in `[0, 1]`. With `plateaus`, about a third of the interior nodes
/// repeat the previous height.
pub fn random_piecewise_linear<R: Rng>(rng: &mut R, n_nodes: usize, plateaus: bool) -> PiecewiseLinear {
    loop {
        let mut xs: Vec<f64> = (0..n_nodes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).any(|w| w[0] >= w[1]) || xs.first() == Some(&-1.0) {
            continue;
        }
        let mut ys: Vec<f64> = Vec::with_capacity(n_nodes);
        for k in 0..n_nodes {
            let repeat = plateaus && k > 0 && rng.gen_bool(1.0 / 3.0);
            ys.push(if repeat { ys[k - 1] } else { rng.gen_range(0.0..=1.0) });
        }
        let mut bx = vec![-1.0];
        bx.extend(xs);
        bx.push(1.0);
        let mut by = vec![0.0];
        by.extend(ys);
        by.push(0.0);
        return PiecewiseLinear::new(bx, by).expect("sorted interior nodes");
    }
}

fn functional_gap(which: Which, u: &PiecewiseLinear, p: &ExponentSpec, cfg: &QuadratureConfig, inputs: Value, tol: f64) -> Result<TrialReport> {
    let us = symmetrize(u);
    let a = eval_functional(which, u, p, cfg)?.value;
    let b = eval_functional(which, &us, p, cfg)?.value;
    Ok(TrialReport::monotone(inputs, a, b, tol))
}

/// `J(u) − J(u*)` for the hat `α(ε − |x − x₀|)₊`.
pub fn j_rearrangement_gap(p: &ExponentSpec, x0: f64, alpha: f64, eps: f64, cfg: &QuadratureConfig) -> Result<TrialReport> {
    let u = make_hat(x0, alpha, eps)?;
    functional_gap(Which::J, &u, p, cfg, json!({ "x0": x0, "alpha": alpha, "eps": eps }), TRIAL_TOL)
}

/// Scans hats for `J(u*) > J(u)` beyond ten times the quadrature tolerance.
///
/// The returned report has `pass = true` when the violation is confirmed.
pub fn find_j_counterexample(p: &ExponentSpec, cfg: &QuadratureConfig) -> Result<Option<TrialReport>> {
    p.clone().validated()?;
    cfg.validate()?;
    for i in 0..=18 {
        let x0 = -0.9 + 0.1 * i as f64;
        for alpha in [0.25, 0.5, 2.0, 4.0] {
            for eps in [1e-2, 1e-3] {
                let r = j_rearrangement_gap(p, x0, alpha, eps, cfg)?;
                let scale = r.value_original.abs().max(r.value_symmetrized.abs());
                let tol = 10.0 * (cfg.abs_tol + cfg.rel_tol * scale);
                if r.gap < -tol {
                    return Ok(Some(TrialReport { pass: true, tolerance: tol, ..r }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreconvReport {
    pub x1: f64,
    pub x2: f64,
    pub s: f64,
    pub t: f64,
    /// `K(s, x₁) + K(t, x₂) − K(σ, −m) − K(σ, m)`, `σ = (s+t)/2`, `m = (x₂−x₁)/2`.
    pub closed_form_gap: f64,
    pub trials: Vec<TrialReport>,
    /// `(I(u_ε) − I(u_ε*)) / 2ε` per ε.
    pub scaled_gaps: Vec<f64>,
    /// `|scaled gap − closed form|` per ε.
    pub errors: Vec<f64>,
    /// `log₂` of successive error ratios (for halving ε).
    pub observed_orders: Vec<f64>,
}

/// Limit of `(I(u_ε) − I(u_ε*)) / 2ε` for the double ramp as `ε → 0`.
pub fn preconv_closed_form(p: &ExponentSpec, x1: f64, x2: f64, s: f64, t: f64) -> Result<f64> {
    let sigma = 0.5 * (s + t);
    let m = 0.5 * (x2 - x1);
    Ok(kernel_k(s, x1, p)? + kernel_k(t, x2, p)? - kernel_k(sigma, -m, p)? - kernel_k(sigma, m, p)?)
}

/// Finite-ε double-ramp gaps against their closed-form limit.
#[allow(clippy::too_many_arguments)]
pub fn preconv_probe(p: &ExponentSpec, x1: f64, x2: f64, s: f64, t: f64, eps_list: &[f64], cfg: &QuadratureConfig) -> Result<PreconvReport> {
    if !(s > 0.0 && t > 0.0) {
        return Err(param("s and t must be positive"));
    }
    let closed = preconv_closed_form(p, x1, x2, s, t)?;
    let mut trials = Vec::new();
    let mut scaled = Vec::new();
    for &eps in eps_list {
        let u = make_double_ramp(x1, x2, s, t, eps)?;
        let r = functional_gap(Which::I, &u, p, cfg, json!({ "x1": x1, "x2": x2, "s": s, "t": t, "eps": eps }), TRIAL_TOL)?;
        scaled.push(r.gap / (2.0 * eps));
        trials.push(r);
    }
    let errors: Vec<f64> = scaled.iter().map(|g| (g - closed).abs()).collect();
    let observed_orders = errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect();
    Ok(PreconvReport { x1, x2, s, t, closed_form_gap: closed, trials, scaled_gaps: scaled, errors, observed_orders })
}

/// One random function: `pass` iff the functional does not increase.
pub fn random_trial(which: Which, p: &ExponentSpec, seed: u64, n_nodes: usize, cfg: &QuadratureConfig) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_piecewise_linear(&mut rng, n_nodes, false);
    let inputs = json!({ "seed": seed, "n_nodes": n_nodes, "functional": format!("{which:?}") });
    functional_gap(which, &u, p, cfg, inputs, TRIAL_TOL)
}

/// `I(u*) ≤ I(u) + 10⁻⁹` on a random `u`.
#[allow(non_snake_case)]
pub fn random_I_trial(p: &ExponentSpec, seed: u64, n_nodes: usize, cfg: &QuadratureConfig) -> Result<TrialReport> {
    random_trial(Which::I, p, seed, n_nodes, cfg)
}

/// `trials` random trials; trial `k` uses seed `base_seed + k` and
/// `1 + k mod max_nodes` interior nodes.
pub fn trial_suite(which: Which, p: &ExponentSpec, trials: usize, base_seed: u64, max_nodes: usize, cfg: &QuadratureConfig) -> Result<Vec<TrialReport>> {
    if max_nodes == 0 {
        return Err(param("max_nodes must be positive"));
    }
    (0..trials)
        .into_par_iter()
        .map(|k| random_trial(which, p, base_seed.wrapping_add(k as u64), 1 + k % max_nodes, cfg))
        .collect()
}

/// `Σ K(s_k, x_k) ≥ 2 K(½ Σ s_k, ½ Σ (−1)^k x_k)` for one instance.
pub fn quasiconv_trial(p: &ExponentSpec, s: &[f64], x: &[f64]) -> Result<TrialReport> {
    let m = s.len();
    if m == 0 || m % 2 != 0 || x.len() != m {
        return Err(param("need an even, positive number of (s, x) pairs"));
    }
    if s.iter().any(|v| !(*v > 0.0)) {
        return Err(param("s_k must be positive"));
    }
    if x.windows(2).any(|w| w[0] > w[1]) || x.iter().any(|v| !(-1.0..=1.0).contains(v)) {
        return Err(param("x must be sorted in [-1, 1]"));
    }
    let mut lhs = 0.0;
    for (sk, xk) in s.iter().zip(x) {
        lhs += kernel_k(*sk, *xk, p)?;
    }
    let ssum: f64 = s.iter().sum();
    // k is 1-based: odd k enter with a minus sign
    let xalt: f64 = x.iter().enumerate().map(|(i, v)| if i % 2 == 0 { -v } else { *v }).sum();
    let rhs = 2.0 * kernel_k(0.5 * ssum, 0.5 * xalt, p)?;
    Ok(TrialReport::monotone(json!({ "s": s, "x": x }), lhs, rhs, KERNEL_TOL))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiconvSearch {
    pub trials: usize,
    pub failures: usize,
    /// Largest violation found.
    pub worst: Option<TrialReport>,
}

/// Random instances with `m` pairs, `s_k ∈ [0.05, 4]`, sorted `x_k ∈ [−1, 1]`.
pub fn quasiconv_search(p: &ExponentSpec, m: usize, trials: usize, seed: u64) -> Result<QuasiconvSearch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst: Option<TrialReport> = None;
    for _ in 0..trials {
        let s: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..4.0)).collect();
        let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        x.sort_by(f64::total_cmp);
        let r = quasiconv_trial(p, &s, &x)?;
        if !r.pass {
            failures += 1;
            if worst.as_ref().is_none_or(|w| r.gap < w.gap) {
                worst = Some(r);
            }
        }
    }
    Ok(QuasiconvSearch { trials, failures, worst })
}

/// Node values on `[−1, 1]²`, `samples[i * ny + j]` at `(x′ᵢ, yⱼ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub samples: Vec<f64>,
}

#[derive(Deserialize)]
struct RawGrid {
    nx: usize,
    ny: usize,
    samples: Vec<f64>,
}

impl TryFrom<RawGrid> for Grid2D {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        Grid2D::new(r.nx, r.ny, r.samples)
    }
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, samples: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 3 {
            return Err(param("grid needs nx >= 2 and ny >= 3 nodes"));
        }
        if samples.len() != nx * ny {
            return Err(param(format!("expected {} samples, got {}", nx * ny, samples.len())));
        }
        if samples.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(param("samples must be finite and nonnegative"));
        }
        for i in 0..nx {
            if samples[i * ny] != 0.0 || samples[i * ny + ny - 1] != 0.0 {
                return Err(param(format!("column {i} does not vanish at y = ±1")));
            }
        }
        Ok(Grid2D { nx, ny, hx: 2.0 / (nx - 1) as f64, hy: 2.0 / (ny - 1) as f64, samples })
    }

    /// Samples `f(x′, y)` at the nodes; boundary rows are set to 0.
    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let hx = 2.0 / (nx.max(2) - 1) as f64;
        let hy = 2.0 / (ny.max(3) - 1) as f64;
        let mut s = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                let v = if j == 0 || j + 1 == ny { 0.0 } else { f(-1.0 + i as f64 * hx, -1.0 + j as f64 * hy) };
                s.push(v);
            }
        }
        Grid2D::new(nx, ny, s)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.samples[i * self.ny + j]
    }

    /// Column-wise symmetric decreasing rearrangement in `y` of the interior nodes.
    pub fn steiner(&self) -> Result<Grid2D> {
        let mut out = self.samples.clone();
        for i in 0..self.nx {
            let col = &self.samples[i * self.ny + 1..i * self.ny + self.ny - 1];
            let r = symmetrize_grid(col, self.hy)?;
            out[i * self.ny + 1..i * self.ny + self.ny - 1].copy_from_slice(&r);
        }
        Grid2D::new(self.nx, self.ny, out)
    }
}

/// Exponent on `[−1, 1]²` given as a profile in `y` for each cell column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentField2D {
    /// One entry (used for every column) or one per cell column (`nx − 1`).
    pub columns: Vec<ExponentSpec>,
}

impl ExponentField2D {
    pub fn uniform(p: ExponentSpec) -> Self {
        ExponentField2D { columns: vec![p] }
    }

    fn column(&self, i: usize) -> &ExponentSpec {
        if self.columns.len() == 1 {
            &self.columns[0]
        } else {
            &self.columns[i]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SteinerReport {
    pub nx: usize,
    pub ny: usize,
    pub i_original: f64,
    pub i_symmetrized: f64,
    /// Discretization-limited; never a certified statement.
    pub illustrative: bool,
}

/// Midpoint-rule `∫ (1 + |∇u|²)^{p/2}` with cell-centered differences.
pub fn grid_functional(p2d: &ExponentField2D, g: &Grid2D) -> Result<f64> {
    if p2d.columns.len() != 1 && p2d.columns.len() != g.nx - 1 {
        return Err(param(format!("need 1 or {} exponent columns, got {}", g.nx - 1, p2d.columns.len())));
    }
    let mut total = 0.0;
    for i in 0..g.nx - 1 {
        let p = p2d.column(i);
        for j in 0..g.ny - 1 {
            let ux = (g.at(i + 1, j) - g.at(i, j) + g.at(i + 1, j + 1) - g.at(i, j + 1)) / (2.0 * g.hx);
            let uy = (g.at(i, j + 1) - g.at(i, j) + g.at(i + 1, j + 1) - g.at(i + 1, j)) / (2.0 * g.hy);
            let yc = -1.0 + (j as f64 + 0.5) * g.hy;
            total += (0.5 * p.p(yc) * (ux * ux + uy * uy).ln_1p()).exp();
        }
    }
    Ok(total * g.hx * g.hy)
}

/// `Î` before and after Steiner symmetrization in `y`.
pub fn steiner_grid_demo(p2d: &ExponentField2D, grid: &Grid2D) -> Result<SteinerReport> {
    for p in &p2d.columns {
        p.clone().validated()?;
    }
    let sym = grid.steiner()?;
    Ok(SteinerReport {
        nx: grid.nx,
        ny: grid.ny,
        i_original: grid_functional(p2d, grid)?,
        i_symmetrized: grid_functional(p2d, &sym)?,
        illustrative: true,
    })
}
