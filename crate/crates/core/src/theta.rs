//! Modified Jacobi theta function and q- / theta-shifted factorials.
//!
//! `theta(x; p) = (x; p)_inf (p/x; p)_inf`. Every infinite product
//! `prod_j (1 - c p^j)` is cut at the smallest `N` with
//! `|c| p^N / (1 - p) < product_tail_bound`, which bounds the neglected
//! part of the log-product.

use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use crate::real::Real;

const MAX_FACTORS: usize = 1_000_000;

/// Elliptic nome, `0 <= p < 1`. `p = 0` is the q-degeneration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nome<R = f64>(R);

impl<R: Real> Nome<R> {
    pub fn new(p: R) -> Result<Self> {
        let v = p.to_f64();
        if !(0.0..1.0).contains(&v) {
            return Err(Error::domain("nome", format!("p = {v} outside [0, 1)")));
        }
        Ok(Nome(p))
    }

    pub fn zero() -> Self {
        Nome(R::ZERO)
    }

    #[inline]
    pub fn value(self) -> R {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.to_f64() == 0.0
    }

    pub fn cast<S: Real>(self) -> Nome<S> {
        Nome(S::from_f64(self.0.to_f64()))
    }
}

/// `1 - c` as a denominator factor; a vanishing factor is a pole.
#[inline]
pub(crate) fn denom_factor<R: Real>(c: R, what: &'static str) -> Result<R> {
    let v = R::ONE - c;
    let scale = c.abs().max(R::ONE).to_f64();
    if v.abs().to_f64() <= 8.0 * R::EPSILON * scale || !v.is_finite() {
        return Err(Error::pole(what, format!("factor 1 - {:e} vanishes", c.to_f64())));
    }
    Ok(v)
}

/// Rejects an exactly vanishing (or non-finite) denominator value.
#[inline]
pub(crate) fn nonzero<R: Real>(v: R, what: &'static str) -> Result<R> {
    if v.to_f64() == 0.0 || !v.is_finite() {
        return Err(Error::pole(what, "denominator vanishes"));
    }
    Ok(v)
}

/// `q^x` for `q > 0`.
#[inline]
pub fn qpow<R: Real>(q: R, x: R) -> R {
    q.powr(x)
}

fn truncation_len(c: f64, p: f64, tail: f64) -> usize {
    if p == 0.0 {
        return 1;
    }
    let c = c.abs();
    if c == 0.0 {
        return 0;
    }
    let target = tail * (1.0 - p);
    if c < target {
        return 0;
    }
    let n = ((target / c).ln() / p.ln()).floor() + 1.0;
    (n.max(1.0) as usize).min(MAX_FACTORS)
}

/// `prod_{j >= 0} (1 - c p^j)` truncated per the policy.
fn shifted_product<R: Real>(c: R, p: R, pol: &PrecisionPolicy, check: Option<&'static str>) -> Result<R> {
    let n = truncation_len(c.to_f64(), p.to_f64(), pol.product_tail_bound);
    let mut acc = R::ONE;
    let mut term = c;
    for _ in 0..n {
        acc *= match check {
            Some(what) => denom_factor(term, what)?,
            None => R::ONE - term,
        };
        term *= p;
    }
    Ok(acc)
}

fn theta_impl<R: Real>(x: R, p: Nome<R>, pol: &PrecisionPolicy, check: Option<&'static str>) -> Result<R> {
    if !x.is_finite() || (x.to_f64() == 0.0 && !p.is_zero()) {
        return Err(Error::domain("theta", "argument must be nonzero and finite"));
    }
    // theta(x; 0) = 1 - x, defined at x = 0 as well
    if p.is_zero() {
        return match check {
            Some(what) => denom_factor(x, what),
            None => Ok(R::ONE - x),
        };
    }
    let pv = p.value();
    Ok(shifted_product(x, pv, pol, check)? * shifted_product(pv / x, pv, pol, check)?)
}

/// Modified Jacobi theta function `theta(x; p) = (x, p/x; p)_inf`.
pub fn theta<R: Real>(x: R, p: Nome<R>, pol: &PrecisionPolicy) -> Result<R> {
    theta_impl(x, p, pol, None)
}

/// Theta value used as a denominator: a vanishing factor is a pole.
pub(crate) fn theta_denom<R: Real>(x: R, p: Nome<R>, pol: &PrecisionPolicy, what: &'static str) -> Result<R> {
    theta_impl(x, p, pol, Some(what))
}

/// `theta(x_1; p) ... theta(x_n; p)`.
pub fn theta_product<R: Real>(xs: &[R], p: Nome<R>, pol: &PrecisionPolicy) -> Result<R> {
    xs.iter().try_fold(R::ONE, |acc, &x| Ok(acc * theta(x, p, pol)?))
}

pub(crate) fn theta_product_denom<R: Real>(
    xs: &[R],
    p: Nome<R>,
    pol: &PrecisionPolicy,
    what: &'static str,
) -> Result<R> {
    xs.iter()
        .try_fold(R::ONE, |acc, &x| Ok(acc * theta_denom(x, p, pol, what)?))
}

/// `theta(nums; p) / theta(dens; p)`. Falls back to summing log-magnitudes
/// when either product leaves the floating-point range (tiny or huge
/// arguments with `p` near 1 can overflow individual thetas while the ratio
/// stays moderate).
pub(crate) fn theta_ratio<R: Real>(
    nums: &[R],
    dens: &[R],
    p: Nome<R>,
    pol: &PrecisionPolicy,
    what: &'static str,
) -> Result<R> {
    let num = theta_product(nums, p, pol)?;
    let den = theta_product_denom(dens, p, pol, what)?;
    let in_range = |v: R| v.is_finite() && v.to_f64() != 0.0;
    if in_range(num) && in_range(den) {
        return Ok(num / den);
    }
    let mut sign = 1i32;
    let mut log = R::ZERO;
    for &x in nums {
        let (s, l) = theta_log(x, p, pol, None)?;
        if s == 0 {
            return Ok(R::ZERO);
        }
        sign *= s;
        log += l;
    }
    for &x in dens {
        let (s, l) = theta_log(x, p, pol, Some(what))?;
        sign *= s;
        log -= l;
    }
    let v = log.exp();
    Ok(if sign < 0 { -v } else { v })
}

/// `(sign, ln|theta(x; p)|)` via `theta(p^n y) = (-1)^n y^-n p^{-n(n-1)/2} theta(y)`
/// with `p < |y| <= 1`.
fn theta_log<R: Real>(
    x: R,
    p: Nome<R>,
    pol: &PrecisionPolicy,
    check: Option<&'static str>,
) -> Result<(i32, R)> {
    let pv = p.value();
    let n = if p.is_zero() || !x.is_finite() || x.to_f64() == 0.0 {
        0
    } else {
        (x.abs().to_f64().ln() / pv.to_f64().ln()).floor() as i32
    };
    let y = x / pv.powi(n);
    let t = theta_impl(y, p, pol, check)?;
    let sgn = |v: R| {
        if v.to_f64() > 0.0 {
            1
        } else if v.to_f64() < 0.0 {
            -1
        } else {
            0
        }
    };
    let parity = if n % 2 == 0 { 1 } else { -1 };
    let y_sign = if n % 2 == 0 { 1 } else { sgn(y) };
    let nn = R::from_f64(n as f64);
    let log = t.abs().ln() - nn * y.abs().ln() - R::from_f64(0.5 * n as f64 * (n as f64 - 1.0)) * pv.ln();
    Ok((parity * y_sign * sgn(t), log))
}

fn check_base<R: Real>(q: R, what: &'static str) -> Result<()> {
    let v = q.to_f64();
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::domain(what, format!("base q = {v} outside (0, 1)")));
    }
    Ok(())
}

/// `(a; q)_inf = prod_{j >= 0} (1 - a q^j)`.
pub fn q_pochhammer_inf<R: Real>(a: R, q: R, pol: &PrecisionPolicy) -> Result<R> {
    check_base(q, "q_pochhammer_inf")?;
    shifted_product(a, q, pol, None)
}

/// `(a; q)_k = (a; q)_inf / (a q^k; q)_inf` for real `k`.
///
/// Removable poles at `a = q^-n` are not removed: any vanishing factor of
/// the denominator product is reported as a pole.
pub fn q_pochhammer<R: Real>(a: R, q: R, k: R, pol: &PrecisionPolicy) -> Result<R> {
    check_base(q, "q_pochhammer")?;
    if k.to_f64() == 0.0 {
        return Ok(R::ONE);
    }
    let den = shifted_product(a * qpow(q, k), q, pol, Some("q_pochhammer"))?;
    let num = shifted_product(a, q, pol, None)?;
    Ok(num / den)
}

/// Finite product `prod_{j < n} (1 - a q^j)`.
pub fn q_pochhammer_finite<R: Real>(a: R, q: R, n: u32) -> R {
    let mut acc = R::ONE;
    let mut term = a;
    for _ in 0..n {
        acc *= R::ONE - term;
        term *= q;
    }
    acc
}

/// Theta shifted factorial `(a; q, p)_k = theta(a, aq, ..., aq^{k-1}; p)`.
pub fn theta_pochhammer<R: Real>(a: R, q: R, p: Nome<R>, k: u32, pol: &PrecisionPolicy) -> Result<R> {
    let mut acc = R::ONE;
    let mut arg = a;
    for _ in 0..k {
        acc *= theta(arg, p, pol)?;
        arg *= q;
    }
    Ok(acc)
}
