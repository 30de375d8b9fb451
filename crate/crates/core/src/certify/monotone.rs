//! Monotone building blocks and the checks that justify using them.
//!
//! A monotone function of one variable is enclosed over an interval by its
//! values at the two endpoints, which avoids the dependency blow-up of the
//! naive interval extension. Every such use is backed by a claim that is
//! verified on the region before certification starts, by interval-evaluating
//! a quantity with the sign of the derivative.

use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::{Cell, Chart, Quantity, RegionSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// `ln(1+w)/w`, with the limit 1 at 0.
pub fn g1_point(w: f64) -> Interval {
    if w == 0.0 {
        return Interval::ONE;
    }
    let x = Interval::point(w);
    x.ln_1p() / x
}

/// `w/ln(1+w)`, with the limit 1 at 0.
pub fn g2_point(w: f64) -> Interval {
    if w == 0.0 {
        return Interval::ONE;
    }
    let x = Interval::point(w);
    x / x.ln_1p()
}

/// `ln(1 + 1/v)`, `+∞` at 0.
pub fn ln_inv_point(v: f64) -> Interval {
    if v == 0.0 {
        return Interval { lo: f64::INFINITY, hi: f64::INFINITY };
    }
    Interval::point(v).recip().ln_1p()
}

/// `v ln(1 + 1/v)`, 0 at 0.
pub fn phi_point(v: f64) -> Interval {
    if v == 0.0 {
        return Interval::ZERO;
    }
    Interval::point(v) * ln_inv_point(v)
}

/// `1/ln(1 + 1/v)`, 0 at 0.
pub fn psi_point(v: f64) -> Interval {
    if v == 0.0 {
        return Interval::ZERO;
    }
    ln_inv_point(v).recip()
}

fn increasing(f: fn(f64) -> Interval, x: Interval) -> Interval {
    Interval { lo: f(x.lo).lo, hi: f(x.hi).hi }
}

fn decreasing(f: fn(f64) -> Interval, x: Interval) -> Interval {
    Interval { lo: f(x.hi).lo, hi: f(x.lo).hi }
}

pub fn g1(w: Interval, mono: bool) -> Interval {
    if mono {
        decreasing(g1_point, w)
    } else {
        w.ln_1p() / w
    }
}

pub fn g2(w: Interval, mono: bool) -> Interval {
    if mono {
        increasing(g2_point, w)
    } else {
        w / w.ln_1p()
    }
}

pub fn ln_inv(v: Interval, mono: bool) -> Interval {
    if mono {
        decreasing(ln_inv_point, v)
    } else {
        v.recip().ln_1p()
    }
}

pub fn phi(v: Interval, mono: bool) -> Interval {
    if mono {
        increasing(phi_point, v)
    } else {
        v * v.recip().ln_1p()
    }
}

pub fn psi(v: Interval, mono: bool) -> Interval {
    if mono {
        increasing(psi_point, v)
    } else {
        v.recip().ln_1p().recip()
    }
}

fn ratio_point(a: f64, b: f64, upper: bool) -> f64 {
    if a == 0.0 {
        return if b == 0.0 && upper { 1.0 } else { 0.0 };
    }
    let x = Interval::point(a);
    let r = x / (x + Interval::point(b));
    if upper {
        r.hi.min(1.0)
    } else {
        r.lo.max(0.0)
    }
}

/// `x/(x+y)` for `x, y ≥ 0`: increasing in `x`, decreasing in `y`, in `[0, 1]`.
pub fn ratio(x: Interval, y: Interval, mono: bool) -> Interval {
    if mono {
        Interval { lo: ratio_point(x.lo, y.hi, false), hi: ratio_point(x.hi, y.lo, true) }
    } else {
        (x / (x + y)).intersect(&Interval::new(0.0, 1.0)).unwrap_or(Interval::new(0.0, 1.0))
    }
}

/// Which monotone shortcuts are certified usable on a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Flags {
    pub g1: bool,
    pub g2: bool,
    pub ln_inv: bool,
    pub phi: bool,
    pub psi: bool,
    pub ratio: bool,
    /// Direction of each bracketed factor of `A` in `w` and in `q`;
    /// `None` where undetermined (or the factor does not depend on it).
    pub factors: [[Option<Monotonicity>; 2]; 7],
}

impl Flags {
    /// All claims assumed; for tests of the evaluation code only.
    pub fn all() -> Self {
        let mut factors = [[None; 2]; 7];
        for (k, f) in FACTORS.iter().enumerate() {
            factors[k] = [f.dir_w, f.dir_q];
        }
        Flags { g1: true, g2: true, ln_inv: true, phi: true, psi: true, ratio: true, factors }
    }

    pub fn none() -> Self {
        Self::default()
    }
}

/// One bracketed factor of `A = [F1 − F2 − F3 + F4 + F5 − 4] / F6 · F7`.
pub struct Factor {
    pub name: &'static str,
    pub dir_w: Option<Monotonicity>,
    pub dir_q: Option<Monotonicity>,
}

pub const FACTORS: [Factor; 7] = {
    use Monotonicity::*;
    [
        Factor { name: "4qw", dir_w: Some(Increasing), dir_q: Some(Increasing) },
        Factor { name: "q(w+3)ln(w+1)", dir_w: Some(Increasing), dir_q: Some(Increasing) },
        Factor { name: "ln(w+1)", dir_w: Some(Increasing), dir_q: None },
        Factor { name: "ln(w+1)/w", dir_w: Some(Decreasing), dir_q: None },
        Factor { name: "4w/ln(w+1)", dir_w: Some(Increasing), dir_q: None },
        Factor { name: "2(qw+1)", dir_w: Some(Increasing), dir_q: Some(Increasing) },
        Factor { name: "q/(q+1)", dir_w: None, dir_q: Some(Increasing) },
    ]
};

/// Point or box value of factor `k`; `w = 0` limits are exact.
fn factor_value(k: usize, w: Interval, q: Interval, flags: &Flags) -> Interval {
    let c = Interval::point;
    match k {
        0 => c(4.0) * q * w,
        1 => q * (w + c(3.0)) * w.ln_1p(),
        2 => w.ln_1p(),
        3 => {
            if w.lo == w.hi {
                g1_point(w.lo)
            } else {
                g1(w, flags.g1)
            }
        }
        4 => {
            if w.lo == w.hi {
                c(4.0) * g2_point(w.lo)
            } else {
                c(4.0) * g2(w, flags.g2)
            }
        }
        5 => c(2.0) * (q * w + c(1.0)),
        6 => q / (q + c(1.0)),
        _ => unreachable!(),
    }
}

fn corner(x: Interval, dir: Option<Monotonicity>, upper: bool) -> Option<f64> {
    match (dir, upper) {
        (Some(Monotonicity::Increasing), true) | (Some(Monotonicity::Decreasing), false) => Some(x.hi),
        (Some(Monotonicity::Increasing), false) | (Some(Monotonicity::Decreasing), true) => Some(x.lo),
        (None, _) => None,
    }
}

/// Range of factor `k` over the cell: corner values where the direction is
/// certified, the interval extension otherwise.
fn factor_range(k: usize, w: Interval, q: Interval, flags: &Flags) -> Interval {
    let [dw, dq] = flags.factors[k];
    let uses_w = FACTORS[k].dir_w.is_some();
    let uses_q = FACTORS[k].dir_q.is_some();
    let end = |upper: bool| -> Interval {
        let wv = if uses_w { corner(w, dw, upper).map(Interval::point).unwrap_or(w) } else { w };
        let qv = if uses_q { corner(q, dq, upper).map(Interval::point).unwrap_or(q) } else { q };
        factor_value(k, wv, qv, flags)
    };
    let (lo, hi) = (end(false), end(true));
    Interval { lo: lo.lo, hi: hi.hi }
}

/// The bracket strategy on a `(w, q)` cell.
pub fn a_by_factors(w: Interval, q: Interval, flags: &Flags) -> Interval {
    let f: Vec<Interval> = (0..7).map(|k| factor_range(k, w, q, flags)).collect();
    let num = f[0] - f[1] - f[2] + f[3] + f[4] - Interval::point(4.0);
    num * (f[6] / f[5])
}

/// `β = b(w)` and `γ = a(w)/w − b(w) = 8 − 4(g₁ + g₂)` over a `w` interval.
pub fn beta_gamma(w: Interval, flags: &Flags) -> (Interval, Interval) {
    let (u1, u2) = (g1(w, flags.g1), g2(w, flags.g2));
    let beta = -w.ln_1p() + u1 + Interval::point(4.0) * u2 - Interval::point(4.0);
    let gamma = Interval::point(8.0) - Interval::point(4.0) * (u1 + u2);
    (beta, gamma)
}

/// `a(1/v)/… ` pieces of the `v` charts: `av = 4 − L − 3φ` and
/// `bv = −φ + vφ + 4ψ − 4v` with `L = ln(1 + 1/v)`.
pub fn av_bv(v: Interval, flags: &Flags) -> (Interval, Interval) {
    let c = Interval::point;
    let l = ln_inv(v, flags.ln_inv);
    let ph = phi(v, flags.phi);
    let ps = psi(v, flags.psi);
    let av = c(4.0) - l - c(3.0) * ph;
    let bv = -ph + v * ph + c(4.0) * ps - c(4.0) * v;
    (av, bv)
}

/// Per-column data for the cheap strategy.
#[derive(Clone, Copy, Debug)]
pub enum Column {
    W { beta: Interval, gamma: Interval },
    V { av: Interval, bv: Interval },
    None,
}

pub fn column(chart: Chart, quantity: Quantity, x: Interval, flags: &Flags) -> Column {
    if quantity != Quantity::A {
        return Column::None;
    }
    match chart {
        Chart::WQ | Chart::WR => {
            let (beta, gamma) = beta_gamma(x, flags);
            Column::W { beta, gamma }
        }
        Chart::VQ | Chart::VR => {
            let (av, bv) = av_bv(x, flags);
            Column::V { av, bv }
        }
    }
}

/// `A` over a cell from the monotone building blocks.
pub fn a_by_primitives(chart: Chart, col: &Column, cell: &Cell, flags: &Flags) -> Interval {
    let c = Interval::point;
    let (x, y) = (cell.x(), cell.y());
    match (chart, col) {
        (Chart::WQ, Column::W { beta, gamma }) => {
            let theta = ratio(y * x, Interval::ONE, flags.ratio);
            let f7 = ratio(y, Interval::ONE, flags.ratio);
            (*beta + theta * *gamma) * f7 * c(0.5)
        }
        (Chart::WR, Column::W { beta, gamma }) => {
            let theta = ratio(x, y, flags.ratio);
            (*beta + theta * *gamma) / (c(2.0) * (c(1.0) + y))
        }
        (Chart::VQ, Column::V { av, bv }) => {
            let theta = ratio(y, x, flags.ratio);
            theta * (y * *av + *bv) / (c(2.0) * (y + c(1.0)))
        }
        (Chart::VR, Column::V { av, bv }) => (*av + y * *bv) / (c(2.0) * (c(1.0) + y * x) * (c(1.0) + y)),
        _ => Interval::NAI,
    }
}

/// A claim: "`name` is `claimed` in `variable` on the region".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub factor: String,
    pub variable: String,
    pub claimed: Monotonicity,
    pub certified: bool,
}

type SignFn = fn(Interval, Interval, &Flags) -> Interval;

struct Claim {
    factor: &'static str,
    variable: &'static str,
    claimed: Monotonicity,
    /// Enclosure of a quantity with the sign of the derivative.
    sign: SignFn,
    apply: fn(&mut Flags, bool),
}

/// Sign of `d/dw [ln(1+w)/w]` through `w/(1+w) − ln(1+w)` and, near 0, the
/// Lagrange form `−1/(1+w) + 1/2 − w/(3(1+ξ)³)`, `ξ ∈ [0, w]`.
fn g1_derivative_sign(w: Interval) -> Interval {
    let c = Interval::point;
    let direct = w / (c(1.0) + w) - w.ln_1p();
    let xi = Interval { lo: 0.0, hi: w.hi };
    let proxy = -(c(1.0) + w).recip() + c(0.5) - w / (c(3.0) * (c(1.0) + xi).powi(3));
    if direct.hi <= 0.0 {
        direct
    } else {
        proxy
    }
}

fn claims_for(chart: Chart, quantity: Quantity) -> Vec<Claim> {
    use Monotonicity::*;
    let mut out = Vec::new();
    if quantity != Quantity::A {
        return out;
    }
    match chart {
        Chart::WQ => {
            let fac = |k: usize, var: usize, dir: Monotonicity, sign: SignFn| -> Claim {
                let apply: fn(&mut Flags, bool) = match (k, var) {
                    (0, 0) => |f, ok| f.factors[0][0] = ok.then_some(Increasing),
                    (0, 1) => |f, ok| f.factors[0][1] = ok.then_some(Increasing),
                    (1, 0) => |f, ok| f.factors[1][0] = ok.then_some(Increasing),
                    (1, 1) => |f, ok| f.factors[1][1] = ok.then_some(Increasing),
                    (2, 0) => |f, ok| f.factors[2][0] = ok.then_some(Increasing),
                    (3, 0) => |f, ok| {
                        f.factors[3][0] = ok.then_some(Decreasing);
                        f.g1 = ok;
                    },
                    (4, 0) => |f, ok| {
                        f.factors[4][0] = ok.then_some(Increasing);
                        f.g2 = ok;
                    },
                    (5, 0) => |f, ok| f.factors[5][0] = ok.then_some(Increasing),
                    (5, 1) => |f, ok| f.factors[5][1] = ok.then_some(Increasing),
                    (6, 1) => |f, ok| f.factors[6][1] = ok.then_some(Increasing),
                    _ => unreachable!(),
                };
                Claim { factor: FACTORS[k].name, variable: if var == 0 { "w" } else { "q" }, claimed: dir, sign, apply }
            };
            out.push(fac(0, 0, Increasing, |_, q, _| Interval::point(4.0) * q));
            out.push(fac(0, 1, Increasing, |w, _, _| Interval::point(4.0) * w));
            out.push(fac(1, 0, Increasing, |w, q, _| {
                q * (w.ln_1p() + (w + Interval::point(3.0)) / (Interval::ONE + w))
            }));
            out.push(fac(1, 1, Increasing, |w, _, _| (w + Interval::point(3.0)) * w.ln_1p()));
            out.push(fac(2, 0, Increasing, |w, _, _| (Interval::ONE + w).recip()));
            out.push(fac(3, 0, Decreasing, |w, _, _| g1_derivative_sign(w)));
            out.push(fac(4, 0, Increasing, |w, _, _| -g1_derivative_sign(w)));
            out.push(fac(5, 0, Increasing, |_, q, _| Interval::point(2.0) * q));
            out.push(fac(5, 1, Increasing, |w, _, _| Interval::point(2.0) * w));
            out.push(fac(6, 1, Increasing, |_, q, _| (Interval::ONE + q).sqr().recip()));
            out.push(Claim {
                factor: "x/(x+y)",
                variable: "x",
                claimed: Increasing,
                sign: |_, _, _| Interval::ONE,
                apply: |f, ok| f.ratio = ok,
            });
        }
        Chart::WR => {
            out.push(Claim {
                factor: "ln(w+1)/w",
                variable: "w",
                claimed: Decreasing,
                sign: |w, _, _| g1_derivative_sign(w),
                apply: |f, ok| f.g1 = ok,
            });
            out.push(Claim {
                factor: "w/ln(w+1)",
                variable: "w",
                claimed: Increasing,
                sign: |w, _, _| -g1_derivative_sign(w),
                apply: |f, ok| f.g2 = ok,
            });
            out.push(Claim {
                factor: "w/(w+r)",
                variable: "w",
                claimed: Increasing,
                sign: |_, r, _| r,
                apply: |f, ok| f.ratio = ok,
            });
            out.push(Claim {
                factor: "w/(w+r)",
                variable: "r",
                claimed: Decreasing,
                sign: |w, _, _| -w,
                apply: |f, ok| f.ratio &= ok,
            });
        }
        Chart::VQ | Chart::VR => {
            out.push(Claim {
                factor: "ln(1+1/v)",
                variable: "v",
                claimed: Decreasing,
                // d/dv = −1/(v(1+v)) with v ≥ 0
                sign: |v, _, _| if v.lo >= 0.0 { Interval::point(-1.0) } else { Interval::NAI },
                apply: |f, ok| f.ln_inv = ok,
            });
            out.push(Claim {
                factor: "v ln(1+1/v)",
                variable: "v",
                claimed: Increasing,
                // d/dv = ln(1+1/v) − 1/(1+v)
                sign: |v, _, f| ln_inv(v, f.ln_inv) - (Interval::ONE + v).recip(),
                apply: |f, ok| f.phi = ok,
            });
            out.push(Claim {
                factor: "1/ln(1+1/v)",
                variable: "v",
                claimed: Increasing,
                // d/dv = 1/(v(1+v)L²) with v ≥ 0
                sign: |v, _, _| if v.lo >= 0.0 { Interval::ONE } else { Interval::NAI },
                apply: |f, ok| f.psi = ok,
            });
            if chart == Chart::VQ {
                out.push(Claim {
                    factor: "q/(q+v)",
                    variable: "q",
                    claimed: Increasing,
                    sign: |v, _, _| v,
                    apply: |f, ok| f.ratio = ok,
                });
                out.push(Claim {
                    factor: "q/(q+v)",
                    variable: "v",
                    claimed: Decreasing,
                    sign: |_, q, _| -q,
                    apply: |f, ok| f.ratio &= ok,
                });
            }
        }
    }
    out
}

const CLAIM_TILES: usize = 8;
const CLAIM_DEPTH: u32 = 12;

fn sign_ok(s: Interval, dir: Monotonicity) -> bool {
    match dir {
        Monotonicity::Increasing => s.lo >= 0.0,
        Monotonicity::Decreasing => s.hi <= 0.0,
    }
}

fn check_tile(claim: &Claim, x: Interval, y: Interval, flags: &Flags, depth: u32) -> bool {
    if sign_ok((claim.sign)(x, y, flags), claim.claimed) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let (xm, ym) = (x.mid(), y.mid());
    if x.width() >= y.width() && xm > x.lo && xm < x.hi {
        check_tile(claim, Interval::new(x.lo, xm), y, flags, depth - 1)
            && check_tile(claim, Interval::new(xm, x.hi), y, flags, depth - 1)
    } else if ym > y.lo && ym < y.hi {
        check_tile(claim, x, Interval::new(y.lo, ym), flags, depth - 1)
            && check_tile(claim, x, Interval::new(ym, y.hi), flags, depth - 1)
    } else {
        false
    }
}

/// Checks every monotonicity claim the region's strategies rely on, and
/// returns the reports with the flags of the certified ones.
pub fn verify_monotone_claims(spec: &RegionSpec) -> (Vec<ClaimReport>, Flags) {
    let mut flags = Flags::none();
    let mut reports = Vec::new();
    let (xb, yb) = (spec.x_bounds, spec.y_bounds);
    for claim in claims_for(spec.chart, spec.quantity) {
        let mut ok = true;
        'tiles: for i in 0..CLAIM_TILES {
            for j in 0..CLAIM_TILES {
                let x = tile(xb, i);
                let y = tile(yb, j);
                if !check_tile(&claim, x, y, &flags, CLAIM_DEPTH) {
                    ok = false;
                    break 'tiles;
                }
            }
        }
        (claim.apply)(&mut flags, ok);
        reports.push(ClaimReport {
            factor: claim.factor.to_string(),
            variable: claim.variable.to_string(),
            claimed: claim.claimed,
            certified: ok,
        });
    }
    (reports, flags)
}

fn tile(b: [f64; 2], i: usize) -> Interval {
    let n = CLAIM_TILES as f64;
    let lo = if i == 0 { b[0] } else { b[0] + (b[1] - b[0]) * i as f64 / n };
    let hi = if i + 1 == CLAIM_TILES { b[1] } else { b[0] + (b[1] - b[0]) * (i + 1) as f64 / n };
    Interval::new(lo, hi)
}
