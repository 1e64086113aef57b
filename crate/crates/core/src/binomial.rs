//! Continuous, q-, a;q-, (b;q)- and a,b;q-binomial coefficients.
//!
//! Each q-type coefficient has two product forms: a ratio of real-index
//! q-shifted factorials of length `x - k`, and a finite form of length `k`.
//! A non-negative integer `k` selects the finite form; any other `k` goes
//! through the ratio form.

use crate::error::{Error, Result};
use crate::gamma::{gamma, ln_gamma_signed};
use crate::precision::PrecisionPolicy;
use crate::qnumbers::ParamSet;
use crate::real::{as_index, Real};
use crate::theta::{denom_factor, nonzero, q_pochhammer, q_pochhammer_finite, qpow};

/// `Gamma(1+x) / (Gamma(1+k) Gamma(1+x-k))`.
pub fn continuous_binomial<R: Real>(x: R, k: R) -> Result<R> {
    let args = [R::ONE + x, R::ONE + k, R::ONE + x - k];
    if args.iter().all(|a| a.to_f64().abs() < 160.0) {
        return Ok(gamma(args[0])? / (gamma(args[1])? * gamma(args[2])?));
    }
    let (a, sa) = ln_gamma_signed(args[0])?;
    let (b, sb) = ln_gamma_signed(args[1])?;
    let (c, sc) = ln_gamma_signed(args[2])?;
    Ok(R::from_f64(sa * sb * sc) * (a - b - c).exp())
}

/// Truncated Euler product `prod_{j=1}^{terms} (k+j)(x-k+j) / (j(x+j))`
/// with the leading tail correction `exp(k(x-k) / (terms + 1/2))`.
pub fn continuous_binomial_product(x: f64, k: f64, terms: u64) -> Result<f64> {
    if x <= -1.0 && x.fract() == 0.0 {
        return Err(Error::pole(
            "continuous_binomial_product",
            "x is a negative integer",
        ));
    }
    let mut log_acc = 0.0f64;
    let mut sign = 1.0f64;
    for j in 1..=terms {
        let j = j as f64;
        let f = (k + j) * (x - k + j) / (j * (x + j));
        if f < 0.0 {
            sign = -sign;
        }
        log_acc += f.abs().ln();
    }
    let tail = k * (x - k) / (terms as f64 + 0.5);
    Ok(sign * (log_acc + tail).exp())
}

/// `prod_i (c_i; q)_n` over real `n`, reporting denominator poles.
fn pochhammer_ratio<R: Real>(num: &[R], den: &[R], q: R, n: R, pol: &PrecisionPolicy) -> Result<R> {
    let mut top = R::ONE;
    for &c in num {
        top *= q_pochhammer(c, q, n, pol)?;
    }
    let mut bottom = R::ONE;
    for &c in den {
        bottom *= q_pochhammer(c, q, n, pol)?;
    }
    Ok(top / nonzero(bottom, "binomial")?)
}

/// Finite version: `prod_i (c_i; q)_n` for integer `n`.
fn finite_ratio<R: Real>(num: &[R], den: &[R], q: R, n: u32, what: &'static str) -> Result<R> {
    let mut top = R::ONE;
    for &c in num {
        top *= q_pochhammer_finite(c, q, n);
    }
    let mut bottom = R::ONE;
    for &c in den {
        let mut t = c;
        for _ in 0..n {
            bottom *= denom_factor(t, what)?;
            t *= q;
        }
    }
    Ok(top / bottom)
}

fn check_base<R: Real>(q: R, what: &'static str) -> Result<()> {
    let v = q.to_f64();
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::domain(what, format!("q = {v} outside (0, 1)")));
    }
    Ok(())
}

/// Gaussian binomial `(q^{1+k}; q)_{x-k} / (q; q)_{x-k}`.
pub fn q_binomial<R: Real>(x: R, k: R, q: R, pol: &PrecisionPolicy) -> Result<R> {
    check_base(q, "q_binomial")?;
    match as_index(k.to_f64()) {
        Some(n) => finite_ratio(&[qpow(q, R::ONE + x - k)], &[q], q, n, "q_binomial"),
        None => pochhammer_ratio(&[qpow(q, R::ONE + k)], &[q], q, x - k, pol),
    }
}

/// a;q-binomial `(q^{1+k}, a q^{1+k}; q)_{x-k} / (q, a q; q)_{x-k} q^{k(k-x)}`.
pub fn aq_binomial<R: Real>(x: R, k: R, a: R, q: R, pol: &PrecisionPolicy) -> Result<R> {
    check_base(q, "aq_binomial")?;
    let scale = qpow(q, k * (k - x));
    let body = match as_index(k.to_f64()) {
        Some(n) => {
            let t = qpow(q, R::ONE + x - k);
            finite_ratio(&[t, a * t], &[q, a * q], q, n, "aq_binomial")?
        }
        None => {
            let t = qpow(q, R::ONE + k);
            pochhammer_ratio(&[t, a * t], &[q, a * q], q, x - k, pol)?
        }
    };
    Ok(body * scale)
}

/// (b;q)-binomial `(q^{1+k}, b q^{1+k}; q)_{x-k} / (q, b q^{1+2k}; q)_{x-k}`.
pub fn bq_binomial<R: Real>(x: R, k: R, b: R, q: R, pol: &PrecisionPolicy) -> Result<R> {
    check_base(q, "bq_binomial")?;
    match as_index(k.to_f64()) {
        Some(n) => finite_ratio(
            &[qpow(q, R::ONE + x - k), b * qpow(q, R::ONE + k)],
            &[q, b * qpow(q, R::ONE + x)],
            q,
            n,
            "bq_binomial",
        ),
        None => {
            let t = qpow(q, R::ONE + k);
            pochhammer_ratio(&[t, b * t], &[q, b * t * qpow(q, k)], q, x - k, pol)
        }
    }
}

/// Finite (length-`k`) form of the a,b;q-binomial coefficient:
/// `(q^{1+x-k}, a q^{1+x-k}, b q^{1+k}, a q^{1-k}/b; q)_k /
///  (q, a q, b q^{1+x}, a q^{1+x-2k}/b; q)_k`.
pub fn abq_binomial_finite<R: Real>(x: R, k: u32, p: &ParamSet<R>) -> Result<R> {
    check_base(p.q, "abq_binomial")?;
    if p.b.to_f64() == 0.0 {
        return Err(Error::domain("abq_binomial", "b = 0"));
    }
    let ParamSet { q, a, b } = *p;
    let kr = R::from_f64(k as f64);
    let t = qpow(q, R::ONE + x - kr);
    let num = [t, a * t, b * qpow(q, R::ONE + kr), a * qpow(q, R::ONE - kr) / b];
    let den = [
        q,
        a * q,
        b * qpow(q, R::ONE + x),
        a * qpow(q, R::ONE + x - kr - kr) / b,
    ];
    finite_ratio(&num, &den, q, k, "abq_binomial")
}

/// Ratio (length-`x-k`) form of the a,b;q-binomial coefficient:
/// `(q^{1+k}, a q^{1+k}, b q^{1+k}, a q^{1-k}/b; q)_{x-k} /
///  (q, a q, b q^{1+2k}, a q/b; q)_{x-k}`.
pub fn abq_binomial_ratio<R: Real>(x: R, k: R, p: &ParamSet<R>, pol: &PrecisionPolicy) -> Result<R> {
    check_base(p.q, "abq_binomial")?;
    if p.b.to_f64() == 0.0 {
        return Err(Error::domain("abq_binomial", "b = 0"));
    }
    let ParamSet { q, a, b } = *p;
    let t = qpow(q, R::ONE + k);
    let num = [t, a * t, b * t, a * qpow(q, R::ONE - k) / b];
    let den = [q, a * q, b * t * qpow(q, k), a * q / b];
    pochhammer_ratio(&num, &den, q, x - k, pol)
}

/// a,b;q-binomial coefficient; finite form for non-negative integer `k`.
///
/// The length-`k` form has removable singularities (matching zero factors in
/// numerator and denominator); when `x - k` is also a non-negative integer
/// these are avoided by evaluating the length-`x-k` form as a finite product.
pub fn abq_binomial<R: Real>(x: R, k: R, p: &ParamSet<R>, pol: &PrecisionPolicy) -> Result<R> {
    let Some(n) = as_index(k.to_f64()) else {
        return abq_binomial_ratio(x, k, p, pol);
    };
    match (abq_binomial_finite(x, n, p), as_index((x - k).to_f64())) {
        (Err(Error::Pole { .. }), Some(m)) => {
            let ParamSet { q, a, b } = *p;
            let t = qpow(q, R::ONE + k);
            let num = [t, a * t, b * t, a * qpow(q, R::ONE - k) / b];
            let den = [q, a * q, b * t * qpow(q, k), a * q / b];
            finite_ratio(&num, &den, q, m, "abq_binomial")
        }
        (r, _) => r,
    }
}
