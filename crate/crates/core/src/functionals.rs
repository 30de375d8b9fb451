//! The functionals `J(u) = ∫|u′|^{p(x)}` and `I(u) = ∫(1 + |u′|²)^{p(x)/2}`,
//! and the kernels `K(s, x) = s (1 + s⁻²)^{p(x)/2}`, `M = K − s` and
//! `𝒦(c, d, y) = c (1 + (1 + d²)/c²)^{p(y)/2}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Error, Result};
use crate::function_model::{ExponentSpec, PiecewiseLinear, Segment};
use crate::quadrature::adaptive_simpson;

/// Smallest admissible `s` for the kernels.
pub const MIN_KERNEL_ARG: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_depth: 40 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(param("quadrature tolerances must be positive"));
        }
        if self.max_depth < 1 {
            return Err(param("max_depth must be at least 1"));
        }
        Ok(())
    }

    /// Tighter configuration used by the experiment suites.
    pub fn tight() -> Self {
        Self { rel_tol: 1e-13, abs_tol: 1e-14, max_depth: 40 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub est_error: f64,
    /// Measure of `{u′ = 0}`.
    pub zero_slope_measure: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    J,
    I,
}

/// `ln(1 + b²)` without overflow for large `b`.
fn ln1p_sq(b: f64) -> f64 {
    let b = b.abs();
    if b > 1e150 {
        2.0 * b.ln() + (1.0 / (b * b)).ln_1p()
    } else {
        (b * b).ln_1p()
    }
}

fn accumulate<F>(u: &PiecewiseLinear, cfg: &QuadratureConfig, per_segment: F) -> Result<FunctionalValue>
where
    F: Fn(&Segment) -> Result<(f64, f64)>,
{
    cfg.validate()?;
    let mut total = FunctionalValue { value: 0.0, est_error: 0.0, zero_slope_measure: 0.0 };
    for seg in u.segments() {
        if seg.is_flat() {
            total.zero_slope_measure += seg.len();
        }
        match per_segment(&seg) {
            Ok((v, e)) => {
                total.value += v;
                total.est_error += e;
            }
            Err(Error::Quadrature { partial, est_error }) => {
                return Err(Error::Quadrature {
                    partial: total.value + partial,
                    est_error: total.est_error + est_error,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}

/// `J(u) = ∫ |u′(x)|^{p(x)} dx`.
pub fn eval_j(u: &PiecewiseLinear, p: &ExponentSpec, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
    accumulate(u, cfg, |seg| {
        let b = seg.slope().abs();
        if b == 0.0 {
            return Ok((0.0, 0.0));
        }
        let lb = b.ln();
        if let ExponentSpec::Constant { p0 } = p {
            return Ok(((p0 * lb).exp() * seg.len(), 0.0));
        }
        let r = adaptive_simpson(|x| (p.p(x) * lb).exp(), seg.x_lo, seg.x_hi, cfg)?;
        Ok((r.value, r.est_error))
    })
}

/// `I(u) = ∫ (1 + |u′(x)|²)^{p(x)/2} dx`. Flat pieces contribute their length.
pub fn eval_i(u: &PiecewiseLinear, p: &ExponentSpec, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
    accumulate(u, cfg, |seg| {
        let b = seg.slope();
        if b == 0.0 {
            return Ok((seg.len(), 0.0));
        }
        let l = ln1p_sq(b);
        if let ExponentSpec::Constant { p0 } = p {
            return Ok(((0.5 * p0 * l).exp() * seg.len(), 0.0));
        }
        let r = adaptive_simpson(|x| (0.5 * p.p(x) * l).exp(), seg.x_lo, seg.x_hi, cfg)?;
        Ok((r.value, r.est_error))
    })
}

pub fn eval_functional(which: Which, u: &PiecewiseLinear, p: &ExponentSpec, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
    match which {
        Which::J => eval_j(u, p, cfg),
        Which::I => eval_i(u, p, cfg),
    }
}

/// `ln(1 + 1/s²)` for `s > 0`, stable at both ends.
fn ln1p_inv_sq(s: f64) -> f64 {
    if s >= 1.0 {
        (1.0 / (s * s)).ln_1p()
    } else {
        (s * s).ln_1p() - 2.0 * s.ln()
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= MIN_KERNEL_ARG) || !s.is_finite() {
        return Err(domain(format!("kernel argument s = {s} must be in [1e-300, inf)")));
    }
    Ok(())
}

/// `K(s, x) = s (1 + s⁻²)^{p(x)/2}`.
pub fn kernel_k(s: f64, x: f64, p: &ExponentSpec) -> Result<f64> {
    check_s(s)?;
    let pv = p.eval(x)?.p;
    Ok(s * (0.5 * pv * ln1p_inv_sq(s)).exp())
}

/// `M(s, x) = K(s, x) − s`, via `expm1` so it stays accurate for large `s`.
pub fn kernel_m(s: f64, x: f64, p: &ExponentSpec) -> Result<f64> {
    check_s(s)?;
    let pv = p.eval(x)?.p;
    Ok(s * (0.5 * pv * ln1p_inv_sq(s)).exp_m1())
}

/// `𝒦(c, d, y) = c (1 + (1 + d²)/c²)^{p(y)/2}`.
pub fn kernel_kcal(c: f64, d: f64, y: f64, p: &ExponentSpec) -> Result<f64> {
    check_s(c)?;
    let pv = p.eval(y)?.p;
    let r = (1.0 + d * d) / (c * c);
    Ok(c * (0.5 * pv * r.ln_1p()).exp())
}

/// `K` and its partial derivatives up to second order in `(s, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelPartials {
    pub k: f64,
    pub ks: f64,
    pub kx: f64,
    pub kss: f64,
    pub ksx: f64,
    pub kxx: f64,
}

impl KernelPartials {
    pub fn hessian_det(&self) -> f64 {
        self.kss * self.kxx - self.ksx * self.ksx
    }
}

pub fn kernel_partials(s: f64, x: f64, p: &ExponentSpec) -> Result<KernelPartials> {
    check_s(s)?;
    let ev = p.eval(x)?;
    let (pv, dp, d2p) = (ev.p, ev.dq, ev.d2q);
    let half_l = 0.5 * ln1p_inv_sq(s);
    let e = (pv * half_l).exp();
    let s2p1 = s * s + 1.0;
    Ok(KernelPartials {
        k: s * e,
        ks: e * (1.0 - pv / s2p1),
        kx: s * e * half_l * dp,
        kss: e * pv * (s * s + pv - 1.0) / (s * s2p1 * s2p1),
        ksx: e * dp * (half_l * (1.0 - pv / s2p1) - 1.0 / s2p1),
        kxx: s * e * (half_l * half_l * dp * dp + half_l * d2p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_model::{make_double_ramp, make_hat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn midpoint_rule(u: &PiecewiseLinear, f: impl Fn(f64, f64) -> f64, n: usize) -> f64 {
        // n points per segment; f(x, slope)
        let mut total = 0.0;
        for s in u.segments() {
            let h = s.len() / n as f64;
            let b = s.slope();
            total += (0..n).map(|i| f(s.x_lo + (i as f64 + 0.5) * h, b)).sum::<f64>() * h;
        }
        total
    }

    #[test]
    fn j_closed_forms() {
        let cfg = QuadratureConfig::default();
        let u = make_hat(0.2, 3.0, 0.1).unwrap();
        let p = ExponentSpec::constant(2.5).unwrap();
        let v = eval_j(&u, &p, &cfg).unwrap().value;
        assert!((v - 0.2 * 3f64.powf(2.5)).abs() < 1e-13);
        let u = make_hat(0.0, 1.0, 0.5).unwrap();
        for p in [ExponentSpec::affine(2.0, 0.5).unwrap(), ExponentSpec::quadratic(2.0, 1.0).unwrap()] {
            assert!((eval_j(&u, &p, &cfg).unwrap().value - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn j_matches_dense_riemann_sum() {
        let cfg = QuadratureConfig::default();
        let u = make_hat(0.5, 0.5, 0.01).unwrap();
        let p = ExponentSpec::affine(2.0, 0.5).unwrap();
        let v = eval_j(&u, &p, &cfg).unwrap().value;
        let oracle = midpoint_rule(&u, |x, b| if b == 0.0 { 0.0 } else { b.abs().powf(p.p(x)) }, 500_000);
        assert!(((v - oracle) / oracle).abs() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn i_closed_forms() {
        let cfg = QuadratureConfig::default();
        let u = make_hat(0.0, 1.0, 0.5).unwrap();
        let p1 = ExponentSpec::constant(1.0).unwrap();
        let r = eval_i(&u, &p1, &cfg).unwrap();
        assert!((r.value - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!((r.zero_slope_measure - 1.0).abs() < 1e-15);
        let z = PiecewiseLinear::zero();
        let q = ExponentSpec::quadratic(2.0, 1.0).unwrap();
        assert_eq!(eval_i(&z, &q, &cfg).unwrap().value, 2.0);
    }

    #[test]
    fn i_matches_dense_riemann_sum() {
        let cfg = QuadratureConfig::default();
        let u = make_double_ramp(-0.5, 0.5, 1.0, 1.0, 0.1).unwrap();
        let p = ExponentSpec::quadratic(2.0, 1.0).unwrap();
        let v = eval_i(&u, &p, &cfg).unwrap().value;
        let oracle = midpoint_rule(&u, |x, b| (1.0 + b * b).powf(0.5 * p.p(x)), 200_000);
        assert!(((v - oracle) / oracle).abs() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn i_is_bounded_below_by_domain_length() {
        let cfg = QuadratureConfig::default();
        let p = ExponentSpec::power_well(0.5, 1.0, 1.0 / 0.37).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let u = crate::experiments::random_piecewise_linear(&mut rng, 6, false);
            let r = eval_i(&u, &p, &cfg).unwrap();
            assert!(r.value >= 2.0);
            assert!(r.value >= r.zero_slope_measure + (2.0 - r.zero_slope_measure));
        }
    }

    #[test]
    fn segment_order_does_not_matter() {
        let cfg = QuadratureConfig::default();
        let p = ExponentSpec::quadratic(2.0, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = crate::experiments::random_piecewise_linear(&mut rng, 8, false);
        let total = eval_i(&u, &p, &cfg).unwrap().value;
        let single = |i: usize| {
            let s = u.segment(i);
            let b = s.slope();
            if b == 0.0 {
                return s.len();
            }
            adaptive_simpson(|x| (1.0 + b * b).powf(0.5 * p.p(x)), s.x_lo, s.x_hi, &cfg).unwrap().value
        };
        let reversed: f64 = (0..u.num_segments()).rev().map(single).sum();
        assert!(((total - reversed) / total).abs() <= 1e-12);
    }

    #[test]
    fn kernel_examples() {
        let two = ExponentSpec::constant(2.0).unwrap();
        let one = ExponentSpec::constant(1.0).unwrap();
        assert!((kernel_k(1.0, 0.3, &two).unwrap() - 2.0).abs() < 1e-15);
        for s in [0.01, 0.5, 3.0, 1e5] {
            let k = kernel_k(s, 0.0, &one).unwrap();
            assert!(((k - (s * s + 1.0).sqrt()) / k).abs() < 1e-15);
        }
        let quad = ExponentSpec::quadratic(2.0, 1.0).unwrap();
        // 40-digit reference: 3 * (1 + 1/9)^(2.25/2)
        let k = kernel_k(3.0, 0.5, &quad).unwrap();
        assert!(((k - 3.377_523_905_796_376_6) / k).abs() < 1e-12);
        assert!(kernel_k(0.0, 0.0, &one).is_err());
        assert!(kernel_k(1e-301, 0.0, &one).is_err());
    }

    #[test]
    fn m_examples() {
        let one = ExponentSpec::constant(1.0).unwrap();
        let two = ExponentSpec::constant(2.0).unwrap();
        assert!((kernel_m(1.0, 0.0, &one).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((kernel_m(100.0, 0.0, &two).unwrap() - 0.01).abs() < 1e-16);
        let pw = ExponentSpec::power_well(0.5, 1.0, 1.0 / 0.37).unwrap();
        // reference from direct 40-digit evaluation of K - s
        let pv = pw.p(0.3);
        let expect = 0.5 * (5f64).powf(0.5 * pv) - 0.5;
        let m = kernel_m(0.5, 0.3, &pw).unwrap();
        assert!(((m - expect) / expect).abs() < 1e-13);
    }

    #[test]
    fn kcal_identity() {
        let two = ExponentSpec::constant(2.0).unwrap();
        assert!((kernel_kcal(1.0, 1.0, 0.0, &two).unwrap() - 3.0).abs() < 1e-15);
        let q = ExponentSpec::quadratic(2.0, 0.5).unwrap();
        let (c, d, y) = (2.0, 3.0, 0.4);
        let r = (1.0f64 + d * d).sqrt();
        let lhs = kernel_kcal(c, d, y, &q).unwrap();
        let rhs = r * kernel_k(c / r, y, &q).unwrap();
        assert!(((lhs - rhs) / lhs).abs() < 1e-12);
        assert_eq!(kernel_kcal(1.7, 0.0, 0.2, &q).unwrap(), kernel_k(1.7, 0.2, &q).unwrap());
        assert!(kernel_kcal(-1.0, 0.0, 0.0, &q).is_err());
    }

    #[test]
    fn kernel_partials_match_finite_differences() {
        let p = ExponentSpec::power_well(0.5, 1.0, 1.0 / 0.37).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let s: f64 = rng.gen_range(0.2..4.0);
            let x: f64 = rng.gen_range(-0.9..0.9);
            let kp = kernel_partials(s, x, &p).unwrap();
            let k = |s: f64, x: f64| kernel_k(s, x, &p).unwrap();
            let h = 1e-5;
            let fs = (k(s + h, x) - k(s - h, x)) / (2.0 * h);
            let fx = (k(s, x + h) - k(s, x - h)) / (2.0 * h);
            let tol = |v: f64| 1e-6 * v.abs().max(1.0);
            assert!((fs - kp.ks).abs() < tol(kp.ks));
            assert!((fx - kp.kx).abs() < tol(kp.kx));
            let h = 1e-4;
            let fss = (k(s + h, x) - 2.0 * k(s, x) + k(s - h, x)) / (h * h);
            let fxx = (k(s, x + h) - 2.0 * k(s, x) + k(s, x - h)) / (h * h);
            let fsx = (k(s + h, x + h) - k(s + h, x - h) - k(s - h, x + h) + k(s - h, x - h)) / (4.0 * h * h);
            let tol = |v: f64| 1e-4 * v.abs().max(1.0);
            assert!((fss - kp.kss).abs() < tol(kp.kss), "{fss} {}", kp.kss);
            assert!((fxx - kp.kxx).abs() < tol(kp.kxx), "{fxx} {}", kp.kxx);
            assert!((fsx - kp.ksx).abs() < tol(kp.ksx), "{fsx} {}", kp.ksx);
        }
    }
}
