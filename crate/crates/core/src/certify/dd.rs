//! Double-double numbers and intervals with double-double endpoints.
//!
//! Endpoints carry about 106 bits. Instead of directed rounding, each interval
//! operation computes its endpoints in round-to-nearest double-double and then
//! widens them outward:
//!
//! * `+ − × ÷` by `2⁻⁹⁶·|x| + 2⁻¹⁰⁰⁰`. The accurate double-double sum, product
//!   and quotient have relative error below `2⁻¹⁰¹`, so this is a factor of
//!   at least 32 on top of the worst case.
//! * `ln` by `2⁻⁸⁸·(1 + |y|)`. The logarithm is one Newton step
//!   `y = y₀ + x e^{−y₀} − 1` from the `f64` logarithm `y₀`. Its error is
//!   bounded by the relative error of `exp` (below `2⁻⁹³` for `|t| ≤ 709`:
//!   argument reduction by `ln 2`, a 14-term Taylor series on `r/16` and four
//!   squarings) plus the quadratic Newton term `δ²/2 ≤ 2⁻¹⁰⁵` and the final
//!   additions.
//!
//! Operations whose operand is an exact zero are exact, as in [`Interval`].

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::interval::Interval;

const ARITH_WIDEN: f64 = 1.262_177_448_353_619e-29; // 2^-96
const LN_WIDEN: f64 = 3.231_174_267_785_264e-27; // 2^-88
const ABS_FLOOR: f64 = 9.332_636_185_032_189e-302; // 2^-1000

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

/// An unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.hi == 0.0
    }

    pub fn is_nan(&self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Largest `f64` not above the value.
    pub fn floor_f64(self) -> f64 {
        if self.lo < 0.0 {
            self.hi.next_down()
        } else {
            self.hi
        }
    }

    /// Smallest `f64` not below the value.
    pub fn ceil_f64(self) -> f64 {
        if self.lo > 0.0 {
            self.hi.next_up()
        } else {
            self.hi
        }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (s, t) = fast_two_sum(p, e);
        Dd { hi: s, lo: t }
    }

    /// `e^t`, relative error below `2⁻⁹³` for `|t| ≤ 709`.
    pub fn exp(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let n = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(n);
        let s = r.mul_f64(1.0 / 16.0);
        // Horner for Σ_{k ≤ 14} s^k / k!
        let mut acc = Dd::ONE;
        for k in (1..=14).rev() {
            acc = Dd::ONE + (s * acc) / Dd::from_f64(k as f64);
        }
        for _ in 0..4 {
            acc = acc * acc;
        }
        let scale = 2f64.powi(n as i32);
        Dd { hi: acc.hi * scale, lo: acc.lo * scale }
    }

    /// `ln x` for `x > 0`, absolute error below `2⁻⁹⁰ (1 + |ln x|)`.
    pub fn ln(self) -> Dd {
        let y0 = self.hi.ln();
        let e = Dd::from_f64(-y0).exp();
        Dd::from_f64(y0) + (self * e - Dd::ONE)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let e = e + t;
        let (s, e) = fast_two_sum(s, e);
        let e = e + f;
        let (s, e) = fast_two_sum(s, e);
        Dd { hi: s, lo: e }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        let e = e + (self.hi * y.lo + self.lo * y.hi);
        let (s, t) = fast_two_sum(p, e);
        Dd { hi: s, lo: t }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y.mul_f64(q1);
        let q2 = r.hi / y.hi;
        let r = r - y.mul_f64(q2);
        let q3 = r.hi / y.hi;
        let (q1, q2) = fast_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

fn dmin(a: Dd, b: Dd) -> Dd {
    if b < a {
        b
    } else {
        a
    }
}

fn dmax(a: Dd, b: Dd) -> Dd {
    if b > a {
        b
    } else {
        a
    }
}

#[inline]
fn widen_down(x: Dd, rel: f64) -> Dd {
    x - Dd::from_f64(x.hi.abs() * rel + ABS_FLOOR)
}

#[inline]
fn widen_up(x: Dd, rel: f64) -> Dd {
    x + Dd::from_f64(x.hi.abs() * rel + ABS_FLOOR)
}

/// Interval with double-double endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdInterval {
    pub lo: Dd,
    pub hi: Dd,
}

impl DdInterval {
    pub const NAI: DdInterval = DdInterval {
        lo: Dd { hi: f64::NAN, lo: f64::NAN },
        hi: Dd { hi: f64::NAN, lo: f64::NAN },
    };

    pub fn point(x: f64) -> Self {
        let d = Dd::from_f64(x);
        Self { lo: d, hi: d }
    }

    pub fn from_interval(x: Interval) -> Self {
        if x.is_nai() {
            return Self::NAI;
        }
        Self { lo: Dd::from_f64(x.lo), hi: Dd::from_f64(x.hi) }
    }

    /// Outward conversion to an `f64` interval.
    pub fn to_interval(self) -> Interval {
        if self.is_nai() {
            return Interval::NAI;
        }
        Interval { lo: self.lo.floor_f64(), hi: self.hi.ceil_f64() }
    }

    pub fn is_nai(&self) -> bool {
        self.lo.is_nan() || self.hi.is_nan()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.hi <= 0.0 && self.hi.hi >= 0.0
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).to_f64()
    }

    pub fn ln(self) -> DdInterval {
        if self.is_nai() || !(self.lo.hi > 0.0) {
            return Self::NAI;
        }
        let f = |x: Dd, down: bool| -> Dd {
            if x == Dd::ONE {
                return Dd::ZERO;
            }
            let y = x.ln();
            let pad = Dd::from_f64(LN_WIDEN * (1.0 + y.hi.abs()));
            if down {
                y - pad
            } else {
                y + pad
            }
        };
        DdInterval { lo: f(self.lo, true), hi: f(self.hi, false) }
    }

    pub fn ln_1p(self) -> DdInterval {
        (DdInterval::point(1.0) + self).ln()
    }
}

impl Neg for DdInterval {
    type Output = DdInterval;
    fn neg(self) -> DdInterval {
        DdInterval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for DdInterval {
    type Output = DdInterval;
    fn add(self, y: DdInterval) -> DdInterval {
        if self.is_nai() || y.is_nai() {
            return Self::NAI;
        }
        let lo = if self.lo.is_zero() && self.lo.lo == 0.0 {
            y.lo
        } else if y.lo.is_zero() && y.lo.lo == 0.0 {
            self.lo
        } else {
            widen_down(self.lo + y.lo, ARITH_WIDEN)
        };
        let hi = if self.hi.is_zero() && self.hi.lo == 0.0 {
            y.hi
        } else if y.hi.is_zero() && y.hi.lo == 0.0 {
            self.hi
        } else {
            widen_up(self.hi + y.hi, ARITH_WIDEN)
        };
        DdInterval { lo, hi }
    }
}

impl Sub for DdInterval {
    type Output = DdInterval;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, y: DdInterval) -> DdInterval {
        self + (-y)
    }
}

fn exact_zero(x: Dd) -> bool {
    x.hi == 0.0 && x.lo == 0.0
}

impl Mul for DdInterval {
    type Output = DdInterval;
    fn mul(self, y: DdInterval) -> DdInterval {
        if self.is_nai() || y.is_nai() {
            return Self::NAI;
        }
        let cands = [(self.lo, y.lo), (self.lo, y.hi), (self.hi, y.lo), (self.hi, y.hi)];
        let mut lo: Option<Dd> = None;
        let mut hi: Option<Dd> = None;
        for (a, b) in cands {
            let (l, h) = if exact_zero(a) || exact_zero(b) {
                (Dd::ZERO, Dd::ZERO)
            } else {
                let p = a * b;
                (widen_down(p, ARITH_WIDEN), widen_up(p, ARITH_WIDEN))
            };
            lo = Some(lo.map_or(l, |v| dmin(v, l)));
            hi = Some(hi.map_or(h, |v| dmax(v, h)));
        }
        DdInterval { lo: lo.unwrap(), hi: hi.unwrap() }
    }
}

impl Div for DdInterval {
    type Output = DdInterval;
    fn div(self, y: DdInterval) -> DdInterval {
        if self.is_nai() || y.is_nai() || y.contains_zero() {
            return Self::NAI;
        }
        let cands = [(self.lo, y.lo), (self.lo, y.hi), (self.hi, y.lo), (self.hi, y.hi)];
        let mut lo: Option<Dd> = None;
        let mut hi: Option<Dd> = None;
        for (a, b) in cands {
            let (l, h) = if exact_zero(a) {
                (Dd::ZERO, Dd::ZERO)
            } else {
                let q = a / b;
                (widen_down(q, ARITH_WIDEN), widen_up(q, ARITH_WIDEN))
            };
            lo = Some(lo.map_or(l, |v| dmin(v, l)));
            hi = Some(hi.map_or(h, |v| dmax(v, h)));
        }
        DdInterval { lo: lo.unwrap(), hi: hi.unwrap() }
    }
}
