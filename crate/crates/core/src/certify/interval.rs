//! Closed intervals of `f64` with outward rounding.
//!
//! Each endpoint of `+ − × ÷` is computed in round-to-nearest and then stepped
//! one ulp outward. Transcendental endpoints are stepped two ulps, which is
//! sound as long as the platform `ln`/`ln_1p`/`exp` are accurate to within one
//! ulp. Results that are exact by construction (`x + 0`, `x · 0`, `ln 1`,
//! `exp 0`) are not stepped, so exact zeros stay exact.
//!
//! An operation whose result is undefined (division by an interval containing
//! zero, `ln` of a negative number) returns [`Interval::NAI`], whose endpoints
//! are NaN. Every operation propagates it; comparisons such as `x.hi <= t`
//! are then false.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
fn down2(x: f64) -> f64 {
    x.next_down().next_down()
}

#[inline]
fn up2(x: f64) -> f64 {
    x.next_up().next_up()
}

#[inline]
fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        down(a * b)
    }
}

#[inline]
fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        up(a * b)
    }
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        down(a / b)
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        up(a / b)
    }
}

impl Interval {
    /// Not-an-interval: the result of an undefined operation.
    pub const NAI: Interval = Interval { lo: f64::NAN, hi: f64::NAN };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    /// # Panics
    /// If `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn is_nai(&self) -> bool {
        self.lo.is_nan() || self.hi.is_nan()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_nai() || other.is_nai() {
            return Self::NAI;
        }
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Intersection; `None` when disjoint or either side is NAI.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        if self.is_nai() || other.is_nai() {
            return None;
        }
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Intersection of the usable (non-NAI) members of `parts`.
    pub fn intersect_all(parts: &[Interval]) -> Interval {
        let mut out: Option<Interval> = None;
        for p in parts.iter().filter(|p| !p.is_nai()) {
            out = Some(match out {
                None => *p,
                // disjoint sound enclosures cannot happen; keep the first if they do
                Some(o) => o.intersect(p).unwrap_or(o),
            });
        }
        out.unwrap_or(Self::NAI)
    }

    pub fn sqr(self) -> Interval {
        if self.is_nai() {
            return Self::NAI;
        }
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let (mn, mx) = if self.contains_zero() { (0.0, a.max(b)) } else { (a.min(b), a.max(b)) };
        Interval { lo: mul_down(mn, mn).max(0.0), hi: mul_up(mx, mx) }
    }

    pub fn recip(self) -> Interval {
        Interval::ONE / self
    }

    /// Division that reports a zero-containing denominator as an error.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    pub fn sqrt(self) -> Interval {
        if self.is_nai() || self.lo < 0.0 {
            return Self::NAI;
        }
        let lo = if self.lo == 0.0 { 0.0 } else { down(self.lo.sqrt()).max(0.0) };
        let hi = if self.hi == 0.0 { 0.0 } else { up(self.hi.sqrt()) };
        Interval { lo, hi }
    }

    pub fn ln(self) -> Interval {
        if self.is_nai() || self.lo < 0.0 {
            return Self::NAI;
        }
        let lo = if self.lo == 1.0 { 0.0 } else { down2(self.lo.ln()) };
        let hi = if self.hi == 1.0 { 0.0 } else { up2(self.hi.ln()) };
        Interval { lo, hi }
    }

    pub fn ln_1p(self) -> Interval {
        if self.is_nai() || self.lo < -1.0 {
            return Self::NAI;
        }
        let lo = if self.lo == 0.0 { 0.0 } else { down2(self.lo.ln_1p()) };
        let hi = if self.hi == 0.0 { 0.0 } else { up2(self.hi.ln_1p()) };
        Interval { lo, hi }
    }

    pub fn exp(self) -> Interval {
        if self.is_nai() {
            return Self::NAI;
        }
        let lo = if self.lo == 0.0 { 1.0 } else { down2(self.lo.exp()).max(0.0) };
        let hi = if self.hi == 0.0 { 1.0 } else { up2(self.hi.exp()) };
        Interval { lo, hi }
    }

    /// `x^n` for integer `n ≥ 0` by repeated multiplication.
    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => self,
            _ if n % 2 == 0 => self.powi(n / 2).sqr(),
            _ => self * self.powi(n - 1),
        }
    }

    /// `x^y = exp(y ln x)` for `x > 0`.
    pub fn pow(self, y: Interval) -> Interval {
        (y * self.ln()).exp()
    }

    pub fn max(self, other: Interval) -> Interval {
        if self.is_nai() || other.is_nai() {
            return Self::NAI;
        }
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(self, other: Interval) -> Interval {
        if self.is_nai() || other.is_nai() {
            return Self::NAI;
        }
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        if self.is_nai() || rhs.is_nai() {
            return Interval::NAI;
        }
        let lo = if self.lo == 0.0 {
            rhs.lo
        } else if rhs.lo == 0.0 {
            self.lo
        } else {
            down(self.lo + rhs.lo)
        };
        let hi = if self.hi == 0.0 {
            rhs.hi
        } else if rhs.hi == 0.0 {
            self.hi
        } else {
            up(self.hi + rhs.hi)
        };
        Interval { lo, hi }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_nai() || rhs.is_nai() {
            return Interval::NAI;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval { lo: mul_down(a, c), hi: mul_up(b, d) };
        }
        let lo = mul_down(a, c).min(mul_down(a, d)).min(mul_down(b, c)).min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Interval { lo, hi }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        if self.is_nai() || rhs.is_nai() || rhs.contains_zero() {
            return Interval::NAI;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = div_down(a, c).min(div_down(a, d)).min(div_down(b, c)).min(div_down(b, d));
        let hi = div_up(a, c).max(div_up(a, d)).max(div_up(b, c)).max(div_up(b, d));
        Interval { lo, hi }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $f(self, rhs: f64) -> Interval {
                $tr::$f(self, Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $f(self, rhs: Interval) -> Interval {
                $tr::$f(Interval::point(self), rhs)
            }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);
