//! Differential conditions on the exponent.
//!
//! With `q = p − 1` and `w = 1/s²`, joint convexity of `K` reduces to the sign
//! of `det K″`, which in turn reduces to `q q″ ≥ q′² A(w, q)` for all `w > 0`.

use serde::Serialize;

use crate::error::{domain, param, Result};
use crate::function_model::ExponentSpec;
use crate::functionals::kernel_partials;

/// Below this `w` the coefficient `A` is evaluated from its Taylor expansion.
pub const A_SERIES_THRESHOLD: f64 = 1e-4;

/// Default tolerance for the mesh-based verdicts.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default mesh step for the one-dimensional screens.
pub const DEFAULT_MESH_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub passed: bool,
    /// Coordinates of the worst point, when one was sampled.
    pub witness: Option<Vec<f64>>,
    /// Signed slack at the worst point.
    pub margin: f64,
}

impl ConditionVerdict {
    fn from_margin(margin: f64, witness: Option<Vec<f64>>, tol: f64) -> Self {
        Self { passed: margin >= -tol, witness, margin }
    }

    /// Conjunction; keeps the witness of the smaller margin.
    pub fn and(self, other: ConditionVerdict) -> ConditionVerdict {
        let passed = self.passed && other.passed;
        let worst = if !self.passed && other.passed {
            self
        } else if self.passed && !other.passed || other.margin < self.margin {
            other
        } else {
            self
        };
        ConditionVerdict { passed, ..worst }
    }
}

/// `det K″(s, x)` written in `w = 1/s²` and `(q, q′, q″)`.
pub fn det_k_hessian(w: f64, q: f64, q1: f64, q2: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(domain(format!("det_k_hessian needs w > 0, got {w}")));
    }
    let (pos, neg, pref) = det_k_terms(w, q, q1, q2);
    Ok(pref * (pos - neg))
}

/// `(positive part, subtracted part, prefactor)` of `det K″`.
fn det_k_terms(w: f64, q: f64, q1: f64, q2: f64) -> (f64, f64, f64) {
    let l = w.ln_1p();
    let pref = 0.25 * ((q - 1.0) * l).exp();
    let pos = w * (w * q + 1.0) * (q + 1.0) * l * (q1 * q1 * l + 2.0 * q2);
    let sq = (1.0 - q * w) * l - 2.0 * w;
    (pos, q1 * q1 * sq * sq, pref)
}

/// Taylor expansions of `a(w) = 4w − (w+3)ln(1+w)` and
/// `b(w) = −ln(1+w) + ln(1+w)/w + 4w/ln(1+w) − 4` at `w = 0`.
pub fn a_b_series(w: f64) -> (f64, f64) {
    let a = w * (1.0 + w * (0.5 + w * (-0.5 + w * (5.0 / 12.0))));
    let b = 1.0 + w * (0.5 + w * (0.5 + w * (-5.0 / 12.0 + w * (31.0 / 90.0))));
    (a, b)
}

/// `a(w)` and `b(w)` of the `r = 1/q` form, with the series below the seam.
pub fn a_b(w: f64) -> (f64, f64) {
    if w < A_SERIES_THRESHOLD {
        return a_b_series(w);
    }
    let l = w.ln_1p();
    (4.0 * w - (w + 3.0) * l, -l + l / w + 4.0 * w / l - 4.0)
}

/// `A(w, q)`. `q = +∞` is accepted and gives `A(w, ∞) = 2 − ½(L + 3L/w)`.
pub fn a_value(w: f64, q: f64) -> Result<f64> {
    if !(w >= 0.0) || !(q >= 0.0) || w.is_infinite() {
        return Err(domain(format!("A(w, q) needs finite w >= 0 and q >= 0, got ({w}, {q})")));
    }
    if q.is_infinite() {
        return Ok(a_inf(w));
    }
    if w < A_SERIES_THRESHOLD {
        // q²a + qb over 2(qw+1)(q+1); uniform in q
        let (a, b) = a_b_series(w);
        return Ok(q * (q * a + b) / (2.0 * (q * w + 1.0) * (q + 1.0)));
    }
    let l = w.ln_1p();
    let num = q * (4.0 * w - (w + 3.0) * l) - ((w - 1.0) / w) * l + 4.0 * w / l - 4.0;
    Ok(num / (2.0 * (q * w + 1.0)) * (q / (q + 1.0)))
}

/// The `r = 1/q` form `(a + r b) / (2(w + r)(1 + r))`, valid down to `r = 0`.
pub fn a_value_r(w: f64, r: f64) -> Result<f64> {
    if !(w >= 0.0) || !(r >= 0.0) || !w.is_finite() || !r.is_finite() {
        return Err(domain(format!("A_r(w, r) needs finite w, r >= 0, got ({w}, {r})")));
    }
    if w == 0.0 && r == 0.0 {
        return Ok(0.5);
    }
    let (a, b) = a_b(w);
    Ok((a + r * b) / (2.0 * (w + r) * (1.0 + r)))
}

/// `A(w, ∞)`.
pub fn a_inf(w: f64) -> f64 {
    if w < A_SERIES_THRESHOLD {
        // a(w)/w
        let alpha = 1.0 + w * (0.5 + w * (-0.5 + w * (5.0 / 12.0)));
        return 0.5 * alpha;
    }
    let l = w.ln_1p();
    2.0 - 0.5 * (l + 3.0 * l / w)
}

/// `dA(w, ∞)/dw`.
pub fn a_inf_d1(w: f64) -> f64 {
    let l = w.ln_1p();
    -0.5 * (1.0 / (1.0 + w) + 3.0 / (w * (1.0 + w)) - 3.0 * l / (w * w))
}

/// `d²A(w, ∞)/dw²`.
pub fn a_inf_d2(w: f64) -> f64 {
    let l = w.ln_1p();
    let w1 = 1.0 + w;
    -0.5 * (-1.0 / (w1 * w1) + 3.0 * (-1.0 / (w * w1 * w1) - 2.0 / (w * w * w1) + 2.0 * l / (w * w * w)))
}

/// `∂A(w, 1/r)/∂r`.
pub fn a_dr(w: f64, r: f64) -> f64 {
    let (a, b) = a_b(w);
    let d = (w + r) * (1.0 + r);
    (b * (w - r * r) - a * (1.0 + w + 2.0 * r)) / (2.0 * d * d)
}

/// `𝒜(q) = sup_{w>0} A(w, q)` with its maximizer.
pub fn script_a_argmax(q: f64) -> Result<(f64, f64)> {
    if !(q >= 0.0) {
        return Err(domain(format!("script_A needs q >= 0, got {q}")));
    }
    let f = |w: f64| a_value(w, q).expect("w > 0 inside the scan");
    const N: usize = 400;
    let (lo, hi) = (-4.0f64, 4.0f64);
    let wi = |i: usize| 10f64.powf(lo + (hi - lo) * i as f64 / (N - 1) as f64);
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..N {
        let v = f(wi(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let a = wi(best_i.saturating_sub(1));
    let b = wi((best_i + 1).min(N - 1));
    let (w, v) = golden_max(f, a, b, 1e-10);
    if v >= best {
        Ok((w, v))
    } else {
        Ok((wi(best_i), best))
    }
}

pub fn script_a(q: f64) -> Result<f64> {
    script_a_argmax(q).map(|(_, v)| v)
}

/// Golden-section maximization on `[a, b]` down to bracket width `tol`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if b - a <= tol || c == d {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `|p(x) − p(−x)|` on a grid of step `10⁻³`; margin is minus the worst deviation.
pub fn check_even(p: &ExponentSpec, tol: f64) -> ConditionVerdict {
    let n = (1.0 / DEFAULT_MESH_STEP).round() as usize;
    let (mut worst, mut at) = (0.0f64, 0.0f64);
    for i in 0..=n {
        let x = (i as f64 * DEFAULT_MESH_STEP).min(1.0);
        let dev = (p.p(x) - p.p(-x)).abs();
        if dev > worst {
            worst = dev;
            at = x;
        }
    }
    ConditionVerdict::from_margin(-worst, Some(vec![at]), tol)
}

/// Midpoint convexity of `q^{1−M}` on the uniform mesh of step `step`.
pub fn check_power_convex(p: &ExponentSpec, m: f64, step: f64, tol: f64) -> Result<ConditionVerdict> {
    if !(m > 0.0 && m < 1.0) {
        return Err(param(format!("M must lie in (0, 1), got {m}")));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(param("mesh step must lie in (0, 1]"));
    }
    let n = (2.0 / step).round() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| (-1.0 + 2.0 * i as f64 / n as f64).clamp(-1.0, 1.0)).collect();
    let mut g = Vec::with_capacity(xs.len());
    for &x in &xs {
        let q = p.p(x) - 1.0;
        if q < 0.0 {
            return Err(domain(format!("q({x}) = {q} < 0")));
        }
        g.push(q.powf(1.0 - m));
    }
    let (mut worst, mut at) = (f64::INFINITY, vec![0.0]);
    for i in 0..=n {
        for j in (i + 2..=n).step_by(2) {
            let k = (i + j) / 2;
            let slack = 0.5 * (g[i] + g[j]) - g[k];
            if slack < worst {
                worst = slack;
                at = vec![xs[k], xs[i], xs[j]];
            }
        }
    }
    if worst == f64::INFINITY {
        worst = 0.0;
    }
    Ok(ConditionVerdict::from_margin(worst, Some(at), tol))
}

/// The two sufficient conditions for joint convexity of `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm4Verdict {
    /// `p` even and `q^{0.37}` convex.
    pub part1: ConditionVerdict,
    /// `p` even, `p ≤ 2.36`, and `√q` convex.
    pub part2: ConditionVerdict,
}

impl Thm4Verdict {
    /// Either condition suffices.
    pub fn passed(&self) -> bool {
        self.part1.passed || self.part2.passed
    }
}

pub fn check_sufficient_thm4(p: &ExponentSpec) -> Result<Thm4Verdict> {
    let even = check_even(p, DEFAULT_TOL);
    let part1 = even.clone().and(check_power_convex(p, 0.63, DEFAULT_MESH_STEP, DEFAULT_TOL)?);
    let n = (2.0 / DEFAULT_MESH_STEP).round() as usize;
    let (mut pmax, mut at) = (f64::NEG_INFINITY, 0.0);
    for i in 0..=n {
        let x = (-1.0 + i as f64 * DEFAULT_MESH_STEP).clamp(-1.0, 1.0);
        if p.p(x) > pmax {
            pmax = p.p(x);
            at = x;
        }
    }
    let cap = ConditionVerdict::from_margin(2.36 - pmax, Some(vec![at]), 0.0);
    let part2 = even.and(cap).and(check_power_convex(p, 0.5, DEFAULT_MESH_STEP, DEFAULT_TOL)?);
    Ok(Thm4Verdict { part1, part2 })
}

/// Mesh scan of `det K″` over log-spaced `w ∈ [10⁻³, 10³]` and uniform `x`.
///
/// The margin is the smallest determinant divided by the magnitude of its two
/// competing terms, so it lies in `[−1, 1]`.
pub fn check_joint_convexity_k(p: &ExponentSpec, mesh_w: usize, mesh_x: usize, tol: f64) -> Result<ConditionVerdict> {
    if mesh_w < 2 || mesh_x < 2 {
        return Err(param("joint convexity mesh needs at least 2 points per axis"));
    }
    let (mut worst, mut at) = (f64::INFINITY, vec![0.0, 0.0]);
    for i in 0..mesh_w {
        let w = 10f64.powf(-3.0 + 6.0 * i as f64 / (mesh_w - 1) as f64);
        for j in 0..mesh_x {
            let x = (-1.0 + 2.0 * j as f64 / (mesh_x - 1) as f64).clamp(-1.0, 1.0);
            let ev = p.eval(x)?;
            let (pos, neg, _) = det_k_terms(w, ev.q, ev.dq, ev.d2q);
            let scale = pos.abs() + neg;
            let rel = if scale > 0.0 { (pos - neg) / scale } else { 0.0 };
            if rel < worst {
                worst = rel;
                at = vec![w, x];
            }
        }
    }
    let mut verdict = ConditionVerdict::from_margin(worst, Some(at), tol);
    // ∂²K/∂s² > 0 spot check
    for &s in &[1e-2, 0.3, 1.0, 3.0, 30.0] {
        for &x in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            if !(kernel_partials(s, x, p)?.kss > 0.0) {
                verdict.passed = false;
                verdict.witness = Some(vec![1.0 / (s * s), x]);
            }
        }
    }
    Ok(verdict)
}

/// `det 𝒦″(c, d, y)` via the partials of `K` at `s = c/√(1+d²)`.
pub fn det_kcal_hessian(c: f64, d: f64, y: f64, p: &ExponentSpec) -> Result<f64> {
    if !(c > 0.0) {
        return Err(domain(format!("det_kcal_hessian needs c > 0, got {c}")));
    }
    let rho = 1.0 + d * d;
    let s = c / rho.sqrt();
    let k = kernel_partials(s, y, p)?;
    let bracket = (k.kxx * k.kss - k.ksx * k.ksx) * (k.k - s * k.ks) - k.kss * k.kx * k.kx * d * d;
    Ok(bracket / (rho * rho.sqrt()))
}

/// Doubling search `d = 1, 2, 4, …, ≤ 10⁶` for `det 𝒦″ < 0`.
pub fn kcal_negativity_probe(p: &ExponentSpec, y: f64, c: f64) -> Result<Option<f64>> {
    let mut d = 1.0;
    while d <= 1e6 {
        if det_kcal_hessian(c, d, y, p)? < 0.0 {
            return Ok(Some(d));
        }
        d *= 2.0;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{kernel_k, kernel_kcal};

    fn powerwell() -> ExponentSpec {
        ExponentSpec::power_well(0.5, 1.0, 1.0 / 0.37).unwrap()
    }

    #[test]
    fn det_k_vanishes_for_constant_exponent() {
        for (w, q) in [(0.1, 0.0), (1.0, 1.0), (50.0, 3.0)] {
            assert_eq!(det_k_hessian(w, q, 0.0, 0.0).unwrap(), 0.0);
        }
        assert!(det_k_hessian(0.0, 1.0, 0.0, 0.0).is_err());
    }

    /// 4th-order central differences of K(s, x) for q(x) = q0 + q1 ξ + q2 ξ²/2.
    fn fd_det(w: f64, q0: f64, q1: f64, q2: f64) -> f64 {
        let s0 = 1.0 / w.sqrt();
        let k = |s: f64, xi: f64| {
            let p = 1.0 + q0 + q1 * xi + 0.5 * q2 * xi * xi;
            s * (0.5 * p * (1.0 / (s * s)).ln_1p()).exp()
        };
        let h = 1e-3 * s0.min(1.0);
        let c1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let c2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        let off = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let mut kss = 0.0;
        let mut kxx = 0.0;
        let mut ksx = 0.0;
        for i in 0..5 {
            kss += c2[i] * k(s0 + off[i] * h, 0.0);
            kxx += c2[i] * k(s0, off[i] * h);
            for j in 0..5 {
                ksx += c1[i] * c1[j] * k(s0 + off[i] * h, off[j] * h);
            }
        }
        (kss * kxx - ksx * ksx) / (h * h * h * h)
    }

    #[test]
    fn det_k_matches_finite_differences() {
        let exact = det_k_hessian(1.0, 1.0, 1.0, 2.0).unwrap();
        let fd = fd_det(1.0, 1.0, 1.0, 2.0);
        assert!(((exact - fd) / exact).abs() < 1e-6, "{exact} vs {fd}");
        let exact = det_k_hessian(2.0, 0.5, 0.3, 0.1).unwrap();
        let fd = fd_det(2.0, 0.5, 0.3, 0.1);
        assert_eq!(exact.signum(), fd.signum());
    }

    #[test]
    fn a_examples() {
        assert!((a_value(1.0, 1.0).unwrap() - 0.374_773_930_164_509).abs() < 1e-12);
        assert!((a_value(2.0, f64::INFINITY).unwrap() - (2.0 - 1.25 * 3f64.ln())).abs() < 1e-15);
        assert!((a_value(0.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((a_value(1e-12, 3.0).unwrap() - 0.375).abs() < 1e-11);
        assert_eq!(a_value(0.7, 0.0).unwrap(), 0.0);
        assert!(a_value(-1.0, 1.0).is_err());
        assert!(a_value(1.0, -1.0).is_err());
    }

    #[test]
    fn a_series_seam_is_continuous() {
        for q in [0.0, 0.1, 1.0, 1.36, 10.0, 1e3, 1e8] {
            let below = a_value(A_SERIES_THRESHOLD * (1.0 - 1e-12), q).unwrap();
            let l = A_SERIES_THRESHOLD.ln_1p();
            let w = A_SERIES_THRESHOLD;
            let direct = (q * (4.0 * w - (w + 3.0) * l) - ((w - 1.0) / w) * l + 4.0 * w / l - 4.0) / (2.0 * (q * w + 1.0))
                * (q / (q + 1.0));
            assert!((below - direct).abs() < 1e-10, "q = {q}: {below} vs {direct}");
        }
    }

    #[test]
    fn r_form_agrees_with_direct_formula() {
        for &w in &[1e-3, 0.1, 0.5, 1.0, 1.817, 4.0, 30.0, 500.0] {
            for &r in &[1e-6, 1e-3, 0.1, 0.5, 1.0] {
                let d = a_value(w, 1.0 / r).unwrap();
                let rr = a_value_r(w, r).unwrap();
                assert!(((d - rr) / d).abs() < 1e-10, "({w}, {r}): {d} vs {rr}");
            }
            assert_eq!(a_value_r(w, 0.0).unwrap(), a_b(w).0 / (2.0 * w));
            assert!((a_value_r(w, 0.0).unwrap() - a_inf(w)).abs() < 1e-14);
        }
    }

    #[test]
    fn a_inf_derivatives_match_finite_differences() {
        for &w in &[1.0, 1.5, 2.0, 3.3, 4.0] {
            let h = 1e-4;
            let d1 = (a_inf(w + h) - a_inf(w - h)) / (2.0 * h);
            let d2 = (a_inf(w + h) - 2.0 * a_inf(w) + a_inf(w - h)) / (h * h);
            assert!((d1 - a_inf_d1(w)).abs() < 1e-8);
            assert!((d2 - a_inf_d2(w)).abs() < 1e-5);
        }
        assert!((a_dr(4.0, 1.0) + 0.0947).abs() < 1e-3);
        let (w, r, h) = (2.0, 0.5, 1e-5);
        let fd = (a_value_r(w, r + h).unwrap() - a_value_r(w, r - h).unwrap()) / (2.0 * h);
        assert!((fd - a_dr(w, r)).abs() < 1e-8);
    }

    #[test]
    fn script_a_values() {
        assert_eq!(script_a(0.0).unwrap(), 0.0);
        for q in [0.5, 1.0, 1.36, 5.0, 1e3] {
            let (w, v) = script_a_argmax(q).unwrap();
            assert!(v <= 0.63);
            let h = 1e-5 * w;
            let slope = (a_value(w + h, q).unwrap() - a_value(w - h, q).unwrap()) / (2.0 * h);
            assert!(slope.abs() < 1e-6, "q = {q}: slope {slope}");
        }
    }

    #[test]
    fn evenness_screen() {
        assert!(check_even(&ExponentSpec::constant(2.0).unwrap(), DEFAULT_TOL).passed);
        assert!(check_even(&ExponentSpec::quadratic(2.0, 0.5).unwrap(), DEFAULT_TOL).passed);
        let v = check_even(&ExponentSpec::affine(2.0, 0.5).unwrap(), DEFAULT_TOL);
        assert!(!v.passed);
        assert_eq!(v.witness, Some(vec![1.0]));
        assert!((v.margin + 1.0).abs() < 1e-15);
    }

    #[test]
    fn power_convexity_screen() {
        let v = check_power_convex(&powerwell(), 0.63, 1e-3, DEFAULT_TOL).unwrap();
        assert!(v.passed, "{v:?}");
        assert!(check_power_convex(&ExponentSpec::constant(2.0).unwrap(), 0.3, 1e-2, DEFAULT_TOL).unwrap().passed);
        let bump = ExponentSpec::quadratic(2.0, -0.5).unwrap();
        let v = check_power_convex(&bump, 0.5, 1e-2, DEFAULT_TOL).unwrap();
        assert!(!v.passed);
        // worst pair is (−1, 1) around 0: √0.5 − 1
        assert!((v.margin - (0.5f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(check_power_convex(&bump, 1.5, 1e-2, DEFAULT_TOL).is_err());
    }

    #[test]
    fn thm4_examples() {
        assert!(check_sufficient_thm4(&powerwell()).unwrap().part1.passed);
        assert!(check_sufficient_thm4(&ExponentSpec::quadratic(1.5, 0.8).unwrap()).unwrap().part2.passed);
        let v = check_sufficient_thm4(&ExponentSpec::quadratic(1.5, 1.0).unwrap()).unwrap();
        assert!(!v.part2.passed);
        assert!((v.part2.margin + 0.14).abs() < 1e-12);
    }

    #[test]
    fn joint_convexity_examples() {
        let v = check_joint_convexity_k(&ExponentSpec::constant(3.0).unwrap(), 50, 21, DEFAULT_TOL).unwrap();
        assert!(v.passed && v.margin == 0.0);
        assert!(check_joint_convexity_k(&powerwell(), 200, 101, DEFAULT_TOL).unwrap().passed);
        assert!(!check_joint_convexity_k(&ExponentSpec::affine(2.0, 0.5).unwrap(), 200, 101, DEFAULT_TOL).unwrap().passed);
    }

    #[test]
    fn kcal_examples() {
        let two = ExponentSpec::constant(2.0).unwrap();
        for (c, d, y) in [(1.0, 0.0, 0.0), (0.3, 5.0, 0.7), (4.0, 100.0, -0.2)] {
            assert!(det_kcal_hessian(c, d, y, &two).unwrap() >= 0.0);
        }
        let q = ExponentSpec::quadratic(2.0, 0.5).unwrap();
        assert!(det_kcal_hessian(1.0, 100.0, 0.5, &q).unwrap() < 0.0);
        assert_eq!(kcal_negativity_probe(&two, 0.5, 1.0).unwrap(), None);
        let d = kcal_negativity_probe(&q, 0.5, 1.0).unwrap().unwrap();
        assert!(d <= 1e3);
        assert!(det_kcal_hessian(0.0, 1.0, 0.0, &q).is_err());
        // identity sanity at the evaluation point
        let lhs = kernel_kcal(1.0, d, 0.5, &q).unwrap();
        let rho = (1.0 + d * d).sqrt();
        assert!(((lhs - rho * kernel_k(1.0 / rho, 0.5, &q).unwrap()) / lhs).abs() < 1e-12);
    }

    #[test]
    fn verdict_conjunction_keeps_worst() {
        let a = ConditionVerdict { passed: true, witness: Some(vec![0.0]), margin: 0.5 };
        let b = ConditionVerdict { passed: false, witness: Some(vec![1.0]), margin: -0.5 };
        let c = a.clone().and(b.clone());
        assert!(!c.passed);
        assert_eq!(c.witness, Some(vec![1.0]));
        assert_eq!(a.clone().and(a.clone()), a);
    }
}
