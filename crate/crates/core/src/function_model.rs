//! Test functions `u` and exponent fields `p`.
//!
//! [`PiecewiseLinear`] is the class of nonnegative piecewise-linear functions on
//! `[-1, 1]` vanishing at both endpoints. [`ExponentSpec`] is a small family of
//! exponent fields `p(x) ≥ 1` with access to `q = p - 1` and its first two
//! derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Result};

/// Sampling step used when validating `p(x) ≥ 1`.
pub const EXPONENT_VALIDATION_STEP: f64 = 1e-4;

/// Finite-difference step for derivatives of tabulated exponents.
pub const TABLE_FD_STEP: f64 = 1e-5;

fn check_in_domain(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("x = {x} is outside [-1, 1]")));
    }
    Ok(())
}

/// One linear piece of a [`PiecewiseLinear`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }

    pub fn slope(&self) -> f64 {
        (self.y_hi - self.y_lo) / (self.x_hi - self.x_lo)
    }

    pub fn intercept(&self) -> f64 {
        self.y_lo - self.slope() * self.x_lo
    }

    pub fn is_flat(&self) -> bool {
        self.y_lo == self.y_hi
    }

    /// Linear interpolation; exact at both endpoints.
    pub fn eval(&self, x: f64) -> f64 {
        if x == self.x_hi {
            return self.y_hi;
        }
        if x == self.x_lo {
            return self.y_lo;
        }
        let t = (x - self.x_lo) / (self.x_hi - self.x_lo);
        self.y_lo + (self.y_hi - self.y_lo) * t
    }

    /// Measure of `{x in segment : u(x) > t}`.
    pub fn measure_above(&self, t: f64) -> f64 {
        let (a, b) = (self.y_lo, self.y_hi);
        let len = self.len();
        match (a > t, b > t) {
            (true, true) => len,
            (false, false) => 0.0,
            (true, false) => len * (a - t) / (a - b),
            (false, true) => len * (b - t) / (b - a),
        }
    }

    /// Measure of `{x in segment : u(x) ≥ t}`; differs from
    /// [`Segment::measure_above`] only for a flat piece at height `t`.
    pub fn measure_at_least(&self, t: f64) -> f64 {
        if self.is_flat() && self.y_lo == t {
            self.len()
        } else {
            self.measure_above(t)
        }
    }
}

/// A nonnegative piecewise-linear function on `[-1, 1]` with `u(±1) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewiseLinear")]
pub struct PiecewiseLinear {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPiecewiseLinear {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawPiecewiseLinear> for PiecewiseLinear {
    type Error = crate::Error;

    fn try_from(raw: RawPiecewiseLinear) -> Result<Self> {
        PiecewiseLinear::new(raw.breakpoints, raw.values)
    }
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(param(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(param("at least two breakpoints are required"));
        }
        if breakpoints[0] != -1.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(param("breakpoints must start at -1 and end at 1"));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(param("breakpoints and values must be finite"));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(param(format!(
                "breakpoints must be strictly increasing ({} >= {})",
                w[0], w[1]
            )));
        }
        if let Some(v) = values.iter().find(|v| **v < 0.0) {
            return Err(param(format!("values must be nonnegative, got {v}")));
        }
        if values[0] != 0.0 || *values.last().unwrap() != 0.0 {
            return Err(param("u must vanish at -1 and 1"));
        }
        Ok(Self { breakpoints, values })
    }

    /// The identically zero function.
    pub fn zero() -> Self {
        Self {
            breakpoints: vec![-1.0, 1.0],
            values: vec![0.0, 0.0],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| Segment {
                x_lo: x[0],
                x_hi: x[1],
                y_lo: y[0],
                y_hi: y[1],
            })
    }

    pub fn segment(&self, i: usize) -> Segment {
        Segment {
            x_lo: self.breakpoints[i],
            x_hi: self.breakpoints[i + 1],
            y_lo: self.values[i],
            y_hi: self.values[i + 1],
        }
    }

    pub fn num_segments(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Evaluates `u(x)`; exact at breakpoints.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_in_domain(x)?;
        let i = self.breakpoints.partition_point(|b| *b <= x);
        if i > 0 && self.breakpoints[i - 1] == x {
            return Ok(self.values[i - 1]);
        }
        Ok(self.segment(i - 1).eval(x))
    }

    /// Drops interior breakpoints where the slope does not change.
    ///
    /// Slopes are compared with relative tolerance `tol`.
    pub fn canonicalize(&self, tol: f64) -> Self {
        let n = self.breakpoints.len();
        let mut xs = vec![self.breakpoints[0]];
        let mut ys = vec![self.values[0]];
        for i in 1..n - 1 {
            let (x0, y0) = (*xs.last().unwrap(), *ys.last().unwrap());
            let (x1, y1) = (self.breakpoints[i], self.values[i]);
            let (x2, y2) = (self.breakpoints[i + 1], self.values[i + 1]);
            let s1 = (y1 - y0) / (x1 - x0);
            let s2 = (y2 - y1) / (x2 - x1);
            let scale = s1.abs().max(s2.abs()).max(1.0);
            if (s1 - s2).abs() > tol * scale {
                xs.push(x1);
                ys.push(y1);
            }
        }
        xs.push(self.breakpoints[n - 1]);
        ys.push(self.values[n - 1]);
        Self {
            breakpoints: xs,
            values: ys,
        }
    }
}

/// `u(x) = α (ε − |x − x₀|)₊`.
pub fn make_hat(x0: f64, alpha: f64, eps: f64) -> Result<PiecewiseLinear> {
    if !(alpha > 0.0 && eps > 0.0) {
        return Err(param("hat requires alpha > 0 and eps > 0"));
    }
    let (lo, hi) = (x0 - eps, x0 + eps);
    if lo < -1.0 || hi > 1.0 {
        return Err(param(format!(
            "hat support [{lo}, {hi}] is not inside [-1, 1]"
        )));
    }
    let mut xs = vec![-1.0];
    let mut ys = vec![0.0];
    if lo > -1.0 {
        xs.push(lo);
        ys.push(0.0);
    }
    xs.push(x0);
    ys.push(alpha * eps);
    if hi < 1.0 {
        xs.push(hi);
        ys.push(0.0);
    }
    xs.push(1.0);
    ys.push(0.0);
    PiecewiseLinear::new(xs, ys)
}

/// `u(x) = min(2ε, (ε + (x − x₁)/s)₊, (ε + (x₂ − x)/t)₊)`: a ramp of slope
/// `1/s` around `x₁`, a plateau at `2ε`, and a ramp of slope `−1/t` around `x₂`.
pub fn make_double_ramp(x1: f64, x2: f64, s: f64, t: f64, eps: f64) -> Result<PiecewiseLinear> {
    if !(s > 0.0 && t > 0.0 && eps > 0.0) {
        return Err(param("double ramp requires s, t, eps > 0"));
    }
    if !(-1.0 < x1 && x1 < x2 && x2 < 1.0) {
        return Err(param("double ramp requires -1 < x1 < x2 < 1"));
    }
    let pts = [x1 - s * eps, x1 + s * eps, x2 - t * eps, x2 + t * eps];
    if pts[0] <= -1.0 || pts[3] >= 1.0 {
        return Err(param(format!(
            "ramp bands [{}, {}] exit (-1, 1)",
            pts[0], pts[3]
        )));
    }
    if pts[1] >= pts[2] {
        return Err(param("ramp bands overlap"));
    }
    PiecewiseLinear::new(
        vec![-1.0, pts[0], pts[1], pts[2], pts[3], 1.0],
        vec![0.0, 0.0, 2.0 * eps, 2.0 * eps, 0.0, 0.0],
    )
}

/// Value of `p` and of `q = p − 1` with its first two derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentValue {
    pub p: f64,
    pub q: f64,
    pub dq: f64,
    pub d2q: f64,
}

/// Variable exponent `p(x) ≥ 1` on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExponent", into = "RawExponent")]
pub enum ExponentSpec {
    Constant { p0: f64 },
    /// `p(x) = a + b x²`
    Quadratic { a: f64, b: f64 },
    /// `p(x) = 1 + (a + b x²)^γ`
    PowerWell { a: f64, b: f64, gamma: f64 },
    /// `p(x) = a + b x`
    Affine { a: f64, b: f64 },
    /// Cubic Hermite interpolation of samples, slopes from finite differences.
    Table { breakpoints: Vec<f64>, samples: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawExponent {
    Constant { p0: f64 },
    Quadratic { a: f64, b: f64 },
    Powerwell { a: f64, b: f64, gamma: f64 },
    Affine { a: f64, b: f64 },
    Table { breakpoints: Vec<f64>, samples: Vec<f64> },
}

impl TryFrom<RawExponent> for ExponentSpec {
    type Error = crate::Error;

    fn try_from(raw: RawExponent) -> Result<Self> {
        let spec = match raw {
            RawExponent::Constant { p0 } => ExponentSpec::Constant { p0 },
            RawExponent::Quadratic { a, b } => ExponentSpec::Quadratic { a, b },
            RawExponent::Powerwell { a, b, gamma } => ExponentSpec::PowerWell { a, b, gamma },
            RawExponent::Affine { a, b } => ExponentSpec::Affine { a, b },
            RawExponent::Table {
                breakpoints,
                samples,
            } => ExponentSpec::Table {
                breakpoints,
                samples,
            },
        };
        spec.validated()
    }
}

impl From<ExponentSpec> for RawExponent {
    fn from(spec: ExponentSpec) -> Self {
        match spec {
            ExponentSpec::Constant { p0 } => RawExponent::Constant { p0 },
            ExponentSpec::Quadratic { a, b } => RawExponent::Quadratic { a, b },
            ExponentSpec::PowerWell { a, b, gamma } => RawExponent::Powerwell { a, b, gamma },
            ExponentSpec::Affine { a, b } => RawExponent::Affine { a, b },
            ExponentSpec::Table {
                breakpoints,
                samples,
            } => RawExponent::Table {
                breakpoints,
                samples,
            },
        }
    }
}

impl ExponentSpec {
    pub fn constant(p0: f64) -> Result<Self> {
        ExponentSpec::Constant { p0 }.validated()
    }

    pub fn quadratic(a: f64, b: f64) -> Result<Self> {
        ExponentSpec::Quadratic { a, b }.validated()
    }

    pub fn power_well(a: f64, b: f64, gamma: f64) -> Result<Self> {
        ExponentSpec::PowerWell { a, b, gamma }.validated()
    }

    pub fn affine(a: f64, b: f64) -> Result<Self> {
        ExponentSpec::Affine { a, b }.validated()
    }

    pub fn table(breakpoints: Vec<f64>, samples: Vec<f64>) -> Result<Self> {
        ExponentSpec::Table {
            breakpoints,
            samples,
        }
        .validated()
    }

    /// Checks parameters and `p(x) ≥ 1` on a grid of step
    /// [`EXPONENT_VALIDATION_STEP`].
    pub fn validated(self) -> Result<Self> {
        match &self {
            ExponentSpec::Constant { p0 } if !p0.is_finite() => {
                return Err(param("p0 must be finite"))
            }
            ExponentSpec::PowerWell { a, b, gamma } => {
                if !(*a >= 0.0 && *b >= 0.0 && *gamma > 0.0) || !gamma.is_finite() {
                    return Err(param("powerwell requires a >= 0, b >= 0, gamma > 0"));
                }
            }
            ExponentSpec::Quadratic { a, b } | ExponentSpec::Affine { a, b } => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(param("coefficients must be finite"));
                }
            }
            ExponentSpec::Table {
                breakpoints,
                samples,
            } => {
                if breakpoints.len() != samples.len() || breakpoints.len() < 2 {
                    return Err(param(
                        "table needs matching breakpoints and samples, at least two",
                    ));
                }
                if breakpoints[0] > -1.0 || *breakpoints.last().unwrap() < 1.0 {
                    return Err(param("table breakpoints must cover [-1, 1]"));
                }
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(param("table breakpoints must be strictly increasing"));
                }
                if samples.iter().any(|s| !s.is_finite()) {
                    return Err(param("table samples must be finite"));
                }
            }
            _ => {}
        }
        let n = (2.0 / EXPONENT_VALIDATION_STEP).round() as usize;
        for i in 0..=n {
            let x = (-1.0 + i as f64 * EXPONENT_VALIDATION_STEP).clamp(-1.0, 1.0);
            let p = self.p(x);
            if !(p >= 1.0) {
                return Err(param(format!("p({x}) = {p} < 1")));
            }
        }
        Ok(self)
    }

    pub fn is_constant(&self) -> bool {
        match self {
            ExponentSpec::Constant { .. } => true,
            ExponentSpec::Quadratic { b, .. } | ExponentSpec::Affine { b, .. } => *b == 0.0,
            ExponentSpec::PowerWell { b, .. } => *b == 0.0,
            ExponentSpec::Table { samples, .. } => samples.windows(2).all(|w| w[0] == w[1]),
        }
    }

    /// `p(x)` without domain checks.
    pub fn p(&self, x: f64) -> f64 {
        match self {
            ExponentSpec::Constant { p0 } => *p0,
            ExponentSpec::Quadratic { a, b } => a + b * x * x,
            ExponentSpec::PowerWell { a, b, gamma } => 1.0 + (a + b * x * x).powf(*gamma),
            ExponentSpec::Affine { a, b } => a + b * x,
            ExponentSpec::Table {
                breakpoints,
                samples,
            } => hermite_eval(breakpoints, samples, x),
        }
    }

    /// Evaluates `(p, q, q′, q″)` at `x ∈ [-1, 1]`.
    pub fn eval(&self, x: f64) -> Result<ExponentValue> {
        check_in_domain(x)?;
        let p = self.p(x);
        let q = p - 1.0;
        let (dq, d2q) = match self {
            ExponentSpec::Constant { .. } => (0.0, 0.0),
            ExponentSpec::Quadratic { b, .. } => (2.0 * b * x, 2.0 * b),
            ExponentSpec::Affine { b, .. } => (*b, 0.0),
            ExponentSpec::PowerWell { a, b, gamma } => power_well_derivatives(*a, *b, *gamma, x),
            ExponentSpec::Table { .. } => {
                let h = TABLE_FD_STEP;
                // shift the stencil inward near the endpoints
                let c = x.clamp(-1.0 + h, 1.0 - h);
                let (pm, p0, pp) = (self.p(c - h), self.p(c), self.p(c + h));
                ((pp - pm) / (2.0 * h), (pp - 2.0 * p0 + pm) / (h * h))
            }
        };
        Ok(ExponentValue { p, q, dq, d2q })
    }
}

fn power_well_derivatives(a: f64, b: f64, gamma: f64, x: f64) -> (f64, f64) {
    let u = a + b * x * x;
    if u == 0.0 {
        // a = 0 and (x = 0 or b = 0): one-sided limits of |x|^{2γ} b^γ
        if b == 0.0 {
            return (0.0, 0.0);
        }
        let dq = if gamma >= 0.5 { 0.0 } else { f64::INFINITY };
        let d2q = if gamma > 1.0 {
            0.0
        } else if gamma == 1.0 {
            2.0 * b
        } else {
            f64::INFINITY
        };
        return (dq, d2q);
    }
    let g1 = u.powf(gamma - 1.0);
    let dq = 2.0 * b * gamma * x * g1;
    let d2q = 2.0 * b * gamma * g1 + 4.0 * b * b * gamma * (gamma - 1.0) * x * x * g1 / u;
    (dq, d2q)
}

fn hermite_eval(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let i = xs.partition_point(|b| *b <= x).clamp(1, n - 1) - 1;
    let slope = |k: usize| -> f64 {
        if k == 0 {
            (ys[1] - ys[0]) / (xs[1] - xs[0])
        } else if k == n - 1 {
            (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2])
        } else {
            (ys[k + 1] - ys[k - 1]) / (xs[k + 1] - xs[k - 1])
        }
    };
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * ys[i] + h10 * h * slope(i) + h01 * ys[i + 1] + h11 * h * slope(i + 1)
}
