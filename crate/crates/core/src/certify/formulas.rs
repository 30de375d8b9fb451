//! The certified quantities as generic formulas, and the mean-value form.

use serde::{Deserialize, Serialize};

use super::dd::DdInterval;
use super::interval::Interval;
use super::real::{Dual, Real};

/// A formula in two chart coordinates `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    /// `A` in `(w, q)`.
    AWq,
    /// `A` in `(w, r = 1/q)`.
    AWr,
    /// `A` in `(v = 1/w, q)`.
    AVq,
    /// `A` in `(v, r)`.
    AVr,
    /// `∂A(w, 1/r)/∂r` in `(w, r)`.
    DrAWr,
    /// `d²A(w, ∞)/dw²`; `y` is ignored.
    AInfDd,
}

/// `a(w) = 4w − (w+3)L` and `b(w) = −L + L/w + 4w/L − 4`, `L = ln(1+w)`.
fn ab<T: Real>(w: T) -> (T, T) {
    let c = T::cst;
    let l = w.ln_1p();
    let a = c(4.0) * w - (w + c(3.0)) * l;
    let b = -l + l / w + c(4.0) * w / l - c(4.0);
    (a, b)
}

/// `w·a(1/v)` and `v·b(1/v)` for `v = 1/w`.
fn ab_v<T: Real>(v: T) -> (T, T) {
    let c = T::cst;
    let l = v.recip().ln_1p();
    let av = c(4.0) - (c(1.0) + c(3.0) * v) * l;
    let bv = -(c(1.0) - v) * v * l + c(4.0) / l - c(4.0) * v;
    (av, bv)
}

impl Formula {
    pub fn eval<T: Real>(self, x: T, y: T) -> T {
        let c = T::cst;
        match self {
            Formula::AWq => {
                let (w, q) = (x, y);
                let (a, b) = ab(w);
                q * (q * a + b) / (c(2.0) * (q * w + c(1.0)) * (q + c(1.0)))
            }
            Formula::AWr => {
                let (w, r) = (x, y);
                let (a, b) = ab(w);
                (a + r * b) / (c(2.0) * (w + r) * (c(1.0) + r))
            }
            Formula::AVq => {
                let (v, q) = (x, y);
                let (av, bv) = ab_v(v);
                q * (q * av + bv) / (c(2.0) * (q + v) * (q + c(1.0)))
            }
            Formula::AVr => {
                let (v, r) = (x, y);
                let (av, bv) = ab_v(v);
                (av + r * bv) / (c(2.0) * (c(1.0) + r * v) * (c(1.0) + r))
            }
            Formula::DrAWr => {
                let (w, r) = (x, y);
                let (a, b) = ab(w);
                let num = b * (w - r.sqr()) - a * (c(1.0) + w + c(2.0) * r);
                num / (c(2.0) * (w + r).sqr() * (c(1.0) + r).sqr())
            }
            Formula::AInfDd => {
                let w = x;
                let w1 = c(1.0) + w;
                let l = w.ln_1p();
                let inner = -(w * w1.sqr()).recip() - c(2.0) / (w.sqr() * w1) + c(2.0) * l / (w.sqr() * w);
                c(-0.5) * (-(w1.sqr().recip()) + c(3.0) * inner)
            }
        }
    }
}

/// Interval types usable in the mean-value form.
pub trait Enclosure: Real {
    fn from_iv(x: Interval) -> Self;
    fn into_iv(self) -> Interval;
}

impl Enclosure for Interval {
    fn from_iv(x: Interval) -> Self {
        x
    }
    fn into_iv(self) -> Interval {
        self
    }
}

impl Enclosure for DdInterval {
    fn from_iv(x: Interval) -> Self {
        DdInterval::from_interval(x)
    }
    fn into_iv(self) -> Interval {
        self.to_interval()
    }
}

/// Direct interval extension of the formula over the box `x × y`.
pub fn natural<E: Enclosure>(f: Formula, x: Interval, y: Interval) -> Interval {
    f.eval(E::from_iv(x), E::from_iv(y)).into_iv()
}

/// `f(c) + ∇f(box)·(p − c)` with `c` the box midpoint.
pub fn mean_value<E: Enclosure>(f: Formula, x: Interval, y: Interval) -> Interval {
    let (cx, cy) = (x.mid(), y.mid());
    let fc = f.eval(E::from_iv(Interval::point(cx)), E::from_iv(Interval::point(cy)));
    let g = f.eval(Dual::var(E::from_iv(x), 0), Dual::var(E::from_iv(y), 1));
    let dx = E::from_iv(x) - E::cst(cx);
    let dy = E::from_iv(y) - E::cst(cy);
    let out = (fc + g.d[0] * dx + g.d[1] * dy).into_iv();
    if out.is_nai() || !out.is_finite() {
        Interval::NAI
    } else {
        out
    }
}
