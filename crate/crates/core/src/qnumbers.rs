//! q-, quantum, a;q-, (b;q)- and a,b;q-numbers, the a,b;q-weight, and the
//! rational kernel used by the log-concavity arguments.
//!
//! `q^x` for real `x` is `exp(x ln q)`. Vanishing denominator factors are
//! reported as [`Error::Pole`](crate::Error::Pole), never returned as
//! infinities.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::theta::{denom_factor, nonzero, qpow};

/// Parameters `(q, a, b)` of the a,b;q-numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamSet<R = f64> {
    pub q: R,
    pub a: R,
    pub b: R,
}

/// Which theorem domains a parameter set satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct DomainFlags {
    /// `0 < q < 1`
    pub base: bool,
    /// `0 < q < 1` and `0 < a < b < 1`
    pub positivity: bool,
}

impl<R: Real> ParamSet<R> {
    /// Requires `0 < q < 1` and `a, b >= 0`.
    pub fn new(q: R, a: R, b: R) -> Result<Self> {
        let (qv, av, bv) = (q.to_f64(), a.to_f64(), b.to_f64());
        if !(qv > 0.0 && qv < 1.0) {
            return Err(Error::domain("ParamSet", format!("q = {qv} outside (0, 1)")));
        }
        if !(av >= 0.0 && bv >= 0.0) {
            return Err(Error::domain("ParamSet", "a and b must be non-negative"));
        }
        Ok(ParamSet { q, a, b })
    }

    pub fn flags(&self) -> DomainFlags {
        let (q, a, b) = (self.q.to_f64(), self.a.to_f64(), self.b.to_f64());
        let base = q > 0.0 && q < 1.0;
        DomainFlags {
            base,
            positivity: base && 0.0 < a && a < b && b < 1.0,
        }
    }

    /// `(a q^{2s}, b q^s)`, the parameters attached to `[y - s]` in the
    /// addition formula.
    pub fn shifted(&self, s: R) -> Self {
        let qs = qpow(self.q, s);
        ParamSet {
            q: self.q,
            a: self.a * qs * qs,
            b: self.b * qs,
        }
    }

    pub fn cast<S: Real>(&self) -> ParamSet<S> {
        ParamSet {
            q: S::from_f64(self.q.to_f64()),
            a: S::from_f64(self.a.to_f64()),
            b: S::from_f64(self.b.to_f64()),
        }
    }
}

fn check_q_not_one<R: Real>(q: R, what: &'static str) -> Result<()> {
    if q.to_f64() == 1.0 {
        return Err(Error::domain(what, "q = 1"));
    }
    Ok(())
}

fn check_base<R: Real>(q: R, what: &'static str) -> Result<()> {
    let v = q.to_f64();
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::domain(what, format!("q = {v} outside (0, 1)")));
    }
    Ok(())
}

/// `[x]_q = (1 - q^x) / (1 - q)`.
pub fn q_number<R: Real>(x: R, q: R) -> Result<R> {
    check_q_not_one(q, "q_number")?;
    if q.to_f64() <= 0.0 {
        return Err(Error::domain("q_number", "q^x needs q > 0"));
    }
    Ok((R::ONE - qpow(q, x)) / (R::ONE - q))
}

/// `<x>_q = (q^x - q^-x) / (q - q^-1)`.
pub fn quantum_number<R: Real>(x: R, q: R) -> Result<R> {
    let v = q.to_f64();
    if v <= 0.0 || v == 1.0 {
        return Err(Error::domain(
            "quantum_number",
            format!("q = {v} not in (0,1) U (1,inf)"),
        ));
    }
    let qx = qpow(q, x);
    Ok((qx - R::ONE / qx) / (q - R::ONE / q))
}

/// `[x]_{a;q} = (1 - q^x)(1 - a q^x) / ((1 - q)(1 - a q)) q^{1-x}`.
pub fn aq_number<R: Real>(x: R, a: R, q: R) -> Result<R> {
    check_base(q, "aq_number")?;
    let qx = qpow(q, x);
    let den = (R::ONE - q) * denom_factor(a * q, "aq_number")?;
    Ok((R::ONE - qx) * (R::ONE - a * qx) / den * q / qx)
}

/// `[x]_{(b;q)} = (1 - q^x)(1 - b q) / ((1 - q)(1 - b q^x))`.
pub fn bq_number<R: Real>(x: R, b: R, q: R) -> Result<R> {
    check_base(q, "bq_number")?;
    let qx = qpow(q, x);
    let den = (R::ONE - q) * denom_factor(b * qx, "bq_number")?;
    Ok((R::ONE - qx) * (R::ONE - b * q) / den)
}

/// `[x]_{a,b;q}`, the four-factor ratio.
pub fn abq_number<R: Real>(x: R, p: &ParamSet<R>) -> Result<R> {
    check_base(p.q, "abq_number")?;
    if p.b.to_f64() == 0.0 {
        return Err(Error::domain(
            "abq_number",
            "b = 0; use bq_number / aq_number for the limits",
        ));
    }
    let ParamSet { q, a, b } = *p;
    let qx = qpow(q, x);
    let num = (R::ONE - qx) * (R::ONE - a * qx) * (R::ONE - b * q) * (R::ONE - a * q / b);
    let den = (R::ONE - q)
        * denom_factor(a * q, "abq_number")?
        * denom_factor(b * qx, "abq_number")?
        * denom_factor(a * qx / b, "abq_number")?;
    Ok(num / den)
}

/// The a,b;q-weight `W_{a,b;q}(x)`.
pub fn abq_weight<R: Real>(x: R, p: &ParamSet<R>) -> Result<R> {
    check_base(p.q, "abq_weight")?;
    if p.b.to_f64() == 0.0 {
        return Err(Error::domain("abq_weight", "b = 0"));
    }
    let ParamSet { q, a, b } = *p;
    let qx = qpow(q, x);
    let num = (R::ONE - a * q * qx * qx)
        * (R::ONE - b)
        * (R::ONE - b * q)
        * (R::ONE - a / b)
        * (R::ONE - a * q / b);
    let den = denom_factor(a * q, "abq_weight")?
        * denom_factor(b * qx, "abq_weight")?
        * denom_factor(b * q * qx, "abq_weight")?
        * denom_factor(a * qx / b, "abq_weight")?
        * denom_factor(a * q * qx / b, "abq_weight")?;
    Ok(num / den * qx)
}

/// Right-hand side of `[x]_{a,b;q} = -W_{a,b;q}(x) [-x]_{a q^{2x}, b q^x; q}`.
pub fn abq_number_negative<R: Real>(x: R, p: &ParamSet<R>) -> Result<R> {
    let w = abq_weight(x, p)?;
    Ok(-w * abq_number(-x, &p.shifted(x))?)
}

/// Rational kernel `f(u) = (1 - u q^{x+r})(1 - u q^{x-r}) / (1 - u q^x)^2`
/// for a fixed pair `x >= r > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec<R = f64> {
    pub x: R,
    pub r: R,
    pub q: R,
}

impl<R: Real> KernelSpec<R> {
    pub fn new(x: R, r: R, q: R) -> Result<Self> {
        check_base(q, "KernelSpec")?;
        if !(r.to_f64() > 0.0 && x >= r) {
            return Err(Error::domain("KernelSpec", "need x >= r > 0"));
        }
        Ok(KernelSpec { x, r, q })
    }

    fn check_u(&self, u: R) -> Result<R> {
        let v = u.to_f64();
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain("f_kernel", format!("u = {v} outside [0, 1]")));
        }
        Ok(qpow(self.q, self.x))
    }

    pub fn f(&self, u: R) -> Result<R> {
        let qx = self.check_u(u)?;
        let qr = qpow(self.q, self.r);
        let w = u * qx;
        let d = denom_factor(w, "f_kernel")?;
        Ok((R::ONE - w * qr) * (R::ONE - w / qr) / (d * d))
    }

    /// `f'(u) = -(1 - q^r)^2 (1 + u q^x) q^{x-r} / (1 - u q^x)^3`
    pub fn d1(&self, u: R) -> Result<R> {
        let qx = self.check_u(u)?;
        let qr = qpow(self.q, self.r);
        let w = u * qx;
        let d = denom_factor(w, "f_kernel_d1")?;
        let c = (R::ONE - qr) * (R::ONE - qr);
        Ok(-(c * (R::ONE + w) * qx / qr) / (d * d * d))
    }

    /// `f''(u) = -2 (1 - q^r)^2 (2 + u q^x) q^{2x-r} / (1 - u q^x)^4`
    pub fn d2(&self, u: R) -> Result<R> {
        let qx = self.check_u(u)?;
        let qr = qpow(self.q, self.r);
        let w = u * qx;
        let d = denom_factor(w, "f_kernel_d2")?;
        let c = (R::ONE - qr) * (R::ONE - qr);
        let d2 = d * d;
        Ok(-(R::from_f64(2.0) * c * (R::from_f64(2.0) + w) * qx * qx / qr) / (d2 * d2))
    }
}

pub fn f_kernel<R: Real>(u: R, spec: &KernelSpec<R>) -> Result<R> {
    spec.f(u)
}

pub fn f_kernel_d1<R: Real>(u: R, spec: &KernelSpec<R>) -> Result<R> {
    spec.d1(u)
}

pub fn f_kernel_d2<R: Real>(u: R, spec: &KernelSpec<R>) -> Result<R> {
    spec.d2(u)
}

/// Multiplicative Turán ratio `f(lambda) f(a) / (f(b) f(lambda a / b))`.
///
/// For `f` positive with negative first and second derivatives on
/// `[delta, lambda]` and `delta < a <= b < lambda` the ratio is at most one.
pub fn turan_ratio<R: Real, F>(f: F, lambda: R, a: R, b: R) -> Result<R>
where
    F: Fn(R) -> Result<R>,
{
    let den = nonzero(f(b)? * f(lambda * a / b)?, "turan_ratio")?;
    Ok(f(lambda)? * f(a)? / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;
    use crate::diff::central;
    use proptest::prelude::*;

    fn ps(q: f64, a: f64, b: f64) -> ParamSet {
        ParamSet::new(q, a, b).unwrap()
    }

    #[test]
    fn q_number_examples() {
        assert_eq!(q_number(0.0, 0.5).unwrap(), 0.0);
        assert!((q_number(3.0, 0.5).unwrap() - 1.75).abs() < 1e-15);
        assert!((q_number(1.0, 0.37).unwrap() - 1.0).abs() < 1e-15);
        assert!(q_number(2.0, 1.0).is_err());
    }

    #[test]
    fn quantum_number_examples() {
        assert!((quantum_number(1.0, 0.3).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(quantum_number(0.0, 0.3).unwrap(), 0.0);
        assert!((quantum_number(2.0, 0.5).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn quantum_number_is_the_a_minus_one_limit() {
        let q: f64 = 0.6;
        for &x in &[0.5, 1.0, 2.3, 4.0] {
            let lhs = aq_number(x, -1.0, q).unwrap();
            let rhs = quantum_number(x, q).unwrap();
            assert!((lhs - rhs).abs() < 1e-13 * rhs.abs().max(1.0), "{x}: {lhs} {rhs}");
        }
    }

    #[test]
    fn aq_number_examples() {
        assert!((aq_number(1.0, 0.3, 0.4).unwrap() - 1.0).abs() < 1e-15);
        // (3/4)(15/16) / ((1/2)(7/8)) * q^{1-x}, q^{1-x} = 2: 45/14
        assert!((aq_number(2.0, 0.25, 0.5).unwrap() - 45.0 / 14.0).abs() < 4e-15);
        // a = 0 gives [x]_{q^-1}
        let q: f64 = 0.3;
        for &x in &[0.5, 2.0, 3.7] {
            let lhs = aq_number(x, 0.0, q).unwrap();
            let rhs = q_number(x, 1.0 / q).unwrap();
            assert!((lhs - rhs).abs() < 1e-13 * rhs.abs(), "{x}");
        }
        assert!(matches!(aq_number(2.0, 2.0, 0.5), Err(Error::Pole { .. })));
    }

    #[test]
    fn bq_number_examples() {
        assert!((bq_number(1.0, 0.3, 0.4).unwrap() - 1.0).abs() < 1e-15);
        assert!((bq_number(2.0, 0.5, 0.5).unwrap() - 9.0 / 7.0).abs() < 1e-15);
        for &x in &[0.5, 2.0, 3.7] {
            assert!((bq_number(x, 0.0, 0.3).unwrap() - q_number(x, 0.3).unwrap()).abs() < 1e-15);
        }
        assert!(matches!(bq_number(0.0, 1.0, 0.5), Err(Error::Pole { .. })));
    }

    #[test]
    fn abq_number_basics() {
        let p = ps(0.5, 0.25, 0.5);
        assert_eq!(abq_number(0.0, &p).unwrap(), 0.0);
        assert!((abq_number(1.0, &p).unwrap() - 1.0).abs() < 1e-15);
        assert!((abq_weight(0.0, &p).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            abq_number(1.0, &ps(0.5, 0.25, 0.0)),
            Err(Error::Domain { .. })
        ));
        // b q^x = 1 at x = 1 with b = 1/q
        assert!(matches!(
            abq_number(1.0, &ps(0.5, 0.1, 2.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        let k = KernelSpec::new(1.3, 0.4, 0.6).unwrap();
        assert_eq!(k.f(0.0).unwrap(), 1.0);
        let h = 1e-5;
        let fd = central(|u| k.f(u), 0.5, h).unwrap();
        let d1 = k.d1(0.5).unwrap();
        assert!((fd - d1).abs() < 1e-6 * d1.abs());
        let fd2 = central(|u| k.d1(u), 0.5, h).unwrap();
        assert!((fd2 - k.d2(0.5).unwrap()).abs() < 1e-6 * fd2.abs());
        assert!(k.f(1.5).is_err());
        assert!(KernelSpec::new(0.2, 0.4, 0.6).is_err());
    }

    #[test]
    fn turan_ratio_symmetric_case_is_one() {
        let k = KernelSpec::new(2.0, 0.5, 0.5).unwrap();
        let r = turan_ratio(|u| k.f(u), 1.0, 0.4, 0.4).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn turan_ratio_gaussian() {
        // e^{-u^2} is positive, decreasing and concave on (0, 1/sqrt 2)
        let f = |u: f64| Ok((-u * u).exp());
        let lambda = 0.7;
        for i in 1..20 {
            for j in i..20 {
                let a = 0.7 * i as f64 / 21.0;
                let b = 0.7 * j as f64 / 21.0;
                assert!(turan_ratio(f, lambda, a, b).unwrap() <= 1.0 + 1e-15);
            }
        }
    }

    proptest! {
        #[test]
        fn addition_formula(q in 0.05f64..0.95, a in 0.01f64..0.9, gap in 0.01f64..0.09,
                            x in 0.0f64..5.0, y in 0.0f64..5.0) {
            let p = ps(q, a, a + gap);
            let lhs1 = abq_number(x, &p).unwrap();
            let lhs2 = abq_weight(x, &p).unwrap() * abq_number(y - x, &p.shifted(x)).unwrap();
            let rhs = abq_number(y, &p).unwrap();
            let scale = lhs1.abs().max(lhs2.abs()).max(rhs.abs());
            prop_assert!((lhs1 + lhs2 - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn negative_argument_relation(q in 0.05f64..0.95, a in 0.01f64..0.5, gap in 0.01f64..0.4,
                                      x in 0.0f64..3.0) {
            let p = ps(q, a, a + gap);
            let direct = abq_number(x, &p).unwrap();
            let via = abq_number_negative(x, &p).unwrap();
            prop_assert!((direct - via).abs() <= 1e-12 * direct.abs().max(1.0));
        }

        #[test]
        fn order_relation(q in 0.05f64..0.95, a in 0.01f64..0.5, gap in 0.01f64..0.4,
                          y in 0.0f64..5.0, d in 0.0f64..3.0) {
            let p = ps(q, a, a + gap);
            prop_assert!(abq_number(y + d, &p).unwrap() >= abq_number(y, &p).unwrap());
            prop_assert!(abq_weight(y, &p).unwrap() > 0.0);
        }

        #[test]
        fn kernel_derivatives_negative(q in 0.05f64..0.95, r in 0.01f64..2.0, extra in 0.0f64..2.0,
                                       u in 0.001f64..0.999) {
            let k = KernelSpec::new(r + extra, r, q).unwrap();
            prop_assert!(k.d1(u).unwrap() < 0.0);
            prop_assert!(k.d2(u).unwrap() < 0.0);
        }
    }

    #[test]
    fn double_double_agrees_with_f64() {
        let p = ps(0.5, 0.25, 0.5);
        let hi = abq_number(Dd::from_f64(2.5), &p.cast::<Dd>()).unwrap().to_f64();
        let lo = abq_number(2.5, &p).unwrap();
        assert!((hi - lo).abs() < 1e-15 * hi.abs());
    }
}
