//! Double-double arithmetic (an unevaluated sum `hi + lo` of two f64).
//!
//! Gives roughly 31 significant decimal digits. Used for oracle generation
//! and for re-evaluating suspected inequality violations; never on the hot
//! path of a scan.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::real::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};
const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        Dd::renorm(p1, p2 + self.lo * b)
    }

    /// Multiplies by `2^e` exactly (barring over/underflow).
    fn ldexp(self, e: i32) -> Self {
        let mut out = self;
        let mut e = e;
        while e != 0 {
            let step = e.clamp(-1000, 1000);
            let f = 2f64.powi(step);
            out = Dd {
                hi: out.hi * f,
                lo: out.lo * f,
            };
            e -= step;
        }
        out
    }

    fn sin_taylor(t: Dd) -> Dd {
        let t2 = t * t;
        let mut term = t;
        let mut sum = t;
        let mut k = 1.0;
        loop {
            term = -(term * t2) / Dd::from_f64((k + 1.0) * (k + 2.0));
            k += 2.0;
            sum += term;
            if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) {
                break sum;
            }
        }
    }

    fn cos_taylor(t: Dd) -> Dd {
        let t2 = t * t;
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * t2) / Dd::from_f64((k + 1.0) * (k + 2.0));
            k += 2.0;
            sum += term;
            if term.hi.abs() < 1e-34 {
                break sum;
            }
        }
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::renorm(s1, s2 + t2)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        Dd::renorm(p1, p2 + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + Dd::from_f64(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Dd {
            #[inline]
            fn $m(&mut self, rhs: Dd) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Real for Dd {
    const ZERO: Self = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Self = Dd { hi: 1.0, lo: 0.0 };
    const EPSILON: f64 = 4.93e-32;

    #[inline]
    fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn pi() -> Self {
        PI
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let m = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(m);
        // exp(r) = (1 + s)^(2^10) with s = expm1(r / 2^10)
        let r = r.ldexp(-10);
        let mut term = r;
        let mut s = r;
        let mut k = 1.0;
        loop {
            k += 1.0;
            term = term * r / Dd::from_f64(k);
            s += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s * s;
        }
        (Dd::ONE + s).ldexp(m as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        let mut x = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            x = x + self * (-x).exp() - Dd::ONE;
        }
        x
    }

    fn sin_pi(self) -> Self {
        let n = self.hi.round();
        let y = self - Dd::from_f64(n);
        let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        let (ay, ysign) = if y.hi < 0.0 { (-y, -sign) } else { (y, sign) };
        let v = if ay.hi <= 0.25 {
            Dd::sin_taylor(PI * ay)
        } else {
            Dd::cos_taylor(PI * (Dd::from_f64(0.5) - ay))
        };
        v.mul_f64(ysign)
    }
}
