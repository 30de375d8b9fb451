//! Scalar abstraction so one formula serves `f64`, intervals, double-double
//! intervals and forward-mode derivatives of any of them.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::dd::DdInterval;
use super::interval::Interval;

pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn cst(x: f64) -> Self;
    fn ln(self) -> Self;
    fn ln_1p(self) -> Self;

    fn sqr(self) -> Self {
        self * self
    }

    fn recip(self) -> Self {
        Self::cst(1.0) / self
    }
}

impl Real for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }
}

impl Real for Interval {
    fn cst(x: f64) -> Self {
        Interval::point(x)
    }
    fn ln(self) -> Self {
        Interval::ln(self)
    }
    fn ln_1p(self) -> Self {
        Interval::ln_1p(self)
    }
    fn sqr(self) -> Self {
        Interval::sqr(self)
    }
}

impl Real for DdInterval {
    fn cst(x: f64) -> Self {
        DdInterval::point(x)
    }
    fn ln(self) -> Self {
        DdInterval::ln(self)
    }
    fn ln_1p(self) -> Self {
        DdInterval::ln_1p(self)
    }
}

/// Value and gradient with respect to two variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub d: [T; 2],
}

impl<T: Real> Dual<T> {
    /// The `i`-th independent variable with value `v`.
    pub fn var(v: T, i: usize) -> Self {
        let mut d = [T::cst(0.0); 2];
        d[i] = T::cst(1.0);
        Dual { v, d }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { v: self.v + o.v, d: [self.d[0] + o.d[0], self.d[1] + o.d[1]] }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { v: self.v - o.v, d: [self.d[0] - o.d[0], self.d[1] - o.d[1]] }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { v: -self.v, d: [-self.d[0], -self.d[1]] }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual {
            v: self.v * o.v,
            d: [self.d[0] * o.v + self.v * o.d[0], self.d[1] * o.v + self.v * o.d[1]],
        }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let v = self.v / o.v;
        Dual { v, d: [(self.d[0] - v * o.d[0]) / o.v, (self.d[1] - v * o.d[1]) / o.v] }
    }
}

impl<T: Real> Real for Dual<T> {
    fn cst(x: f64) -> Self {
        Dual { v: T::cst(x), d: [T::cst(0.0); 2] }
    }
    fn ln(self) -> Self {
        Dual { v: self.v.ln(), d: [self.d[0] / self.v, self.d[1] / self.v] }
    }
    fn ln_1p(self) -> Self {
        let s = T::cst(1.0) + self.v;
        Dual { v: self.v.ln_1p(), d: [self.d[0] / s, self.d[1] / s] }
    }
    fn sqr(self) -> Self {
        let two_v = T::cst(2.0) * self.v;
        Dual { v: self.v.sqr(), d: [two_v * self.d[0], two_v * self.d[1]] }
    }
}
