//! Adaptive Simpson quadrature on a closed interval.

use crate::error::{Error, Result};
use crate::functionals::QuadratureConfig;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` by adaptive Simpson with Richardson correction.
///
/// Panels are processed depth-first, left to right, so the summation order is
/// fixed. If some panel still fails the local test at `max_depth`, the error
/// carries the partial value and the accumulated error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, est_error: 0.0 });
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    let tol = cfg.abs_tol.max(cfg.rel_tol * whole.abs());
    let mut stack = vec![Panel { a, b, fa, fm, fb, whole, tol, depth: 0 }];
    let mut value = 0.0;
    let mut est_error = 0.0;
    let mut converged = true;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        // no further split possible once the midpoint is not interior
        let exhausted = p.depth + 1 >= cfg.max_depth || !(p.a < lm && rm < p.b);
        if delta.abs() <= 15.0 * p.tol || exhausted {
            if delta.abs() > 15.0 * p.tol {
                converged = false;
            }
            value += left + right + delta / 15.0;
            est_error += delta.abs() / 15.0;
        } else {
            let half = 0.5 * p.tol;
            stack.push(Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right, tol: half, depth: p.depth + 1 });
            stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left, tol: half, depth: p.depth + 1 });
        }
    }
    if !value.is_finite() || !converged {
        return Err(Error::Quadrature { partial: value, est_error });
    }
    Ok(QuadResult { value, est_error })
}
