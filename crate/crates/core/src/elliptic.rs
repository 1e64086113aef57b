//! Elliptic (a,b;q,p) numbers, weights and binomial coefficients, and the
//! theta-function kernel with its closed-form first derivative.

use crate::diff::richardson;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use crate::qnumbers::ParamSet;
use crate::real::Real;
use crate::theta::{nonzero, q_pochhammer_inf, qpow, theta, theta_denom, theta_ratio, Nome};

/// Parameters `(q, a, b)` together with the nome `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticParamSet<R = f64> {
    pub base: ParamSet<R>,
    pub p: Nome<R>,
}

impl<R: Real> EllipticParamSet<R> {
    pub fn new(q: R, a: R, b: R, p: R) -> Result<Self> {
        Ok(EllipticParamSet {
            base: ParamSet::new(q, a, b)?,
            p: Nome::new(p)?,
        })
    }

    pub fn q(&self) -> R {
        self.base.q
    }

    pub fn a(&self) -> R {
        self.base.a
    }

    pub fn b(&self) -> R {
        self.base.b
    }

    /// `(a q^{2s}, b q^s)` with the same `q` and `p`.
    pub fn shifted(&self, s: R) -> Self {
        EllipticParamSet {
            base: self.base.shifted(s),
            p: self.p,
        }
    }

    pub fn with_b(&self, b: R) -> Self {
        let mut out = *self;
        out.base.b = b;
        out
    }

    pub fn cast<S: Real>(&self) -> EllipticParamSet<S> {
        EllipticParamSet {
            base: self.base.cast(),
            p: self.p.cast(),
        }
    }

    /// Domain of continuous strong log-concavity for shift `r` at `x`:
    /// `0 < p < q^{2r}` and `p q^{-x-r} < a < b < 1`.
    pub fn in_direct_domain(&self, x: f64, r: f64) -> bool {
        let (q, a, b, p) = self.as_f64();
        0.0 < q && q < 1.0 && 0.0 < p && p < q.powf(2.0 * r) && p * q.powf(-x - r) < a && a < b && b < 1.0
    }

    /// Domain of discrete upper-index log-concavity:
    /// `0 < p < q^2` and `p q^{-x-1} < a <= b q^k < 1`.
    pub fn in_binomial_domain(&self, x: f64, k: u32) -> bool {
        let (q, a, b, p) = self.as_f64();
        let bqk = b * q.powi(k as i32);
        0.0 < q && q < 1.0 && 0.0 < p && p < q * q && p * q.powf(-x - 1.0) < a && a <= bqk && bqk < 1.0
    }

    fn as_f64(&self) -> (f64, f64, f64, f64) {
        (
            self.base.q.to_f64(),
            self.base.a.to_f64(),
            self.base.b.to_f64(),
            self.p.value().to_f64(),
        )
    }
}

fn need_b<R: Real>(e: &EllipticParamSet<R>, what: &'static str) -> Result<()> {
    if e.b().to_f64() == 0.0 {
        return Err(Error::domain(what, "b = 0"));
    }
    Ok(())
}

/// `[x]_{a,b;q,p} = theta(q^x, a q^x, b q, a q/b; p) / theta(q, a q, b q^x, a q^x/b; p)`.
pub fn elliptic_number<R: Real>(x: R, e: &EllipticParamSet<R>, pol: &PrecisionPolicy) -> Result<R> {
    need_b(e, "elliptic_number")?;
    let (q, a, b) = (e.q(), e.a(), e.b());
    let qx = qpow(q, x);
    theta_ratio(
        &[qx, a * qx, b * q, a * q / b],
        &[q, a * q, b * qx, a * qx / b],
        e.p,
        pol,
        "elliptic_number",
    )
}

/// Elliptic weight
/// `theta(a q^{1+2x}, b, b q, a/b, a q/b; p) / theta(a q, b q^x, b q^{1+x}, a q^x/b, a q^{1+x}/b; p) q^x`.
pub fn elliptic_weight<R: Real>(x: R, e: &EllipticParamSet<R>, pol: &PrecisionPolicy) -> Result<R> {
    need_b(e, "elliptic_weight")?;
    let (q, a, b) = (e.q(), e.a(), e.b());
    let qx = qpow(q, x);
    let ratio = theta_ratio(
        &[a * q * qx * qx, b, b * q, a / b, a * q / b],
        &[a * q, b * qx, b * q * qx, a * qx / b, a * q * qx / b],
        e.p,
        pol,
        "elliptic_weight",
    )?;
    Ok(ratio * qx)
}

/// Elliptic binomial coefficient for non-negative integer `k`:
/// `(q^{1+x-k}, a q^{1+x-k}, b q^{1+k}, a q^{1-k}/b; q, p)_k /
///  (q, a q, b q^{1+x}, a q^{1+x-2k}/b; q, p)_k`.
pub fn elliptic_binomial<R: Real>(x: R, k: u32, e: &EllipticParamSet<R>, pol: &PrecisionPolicy) -> Result<R> {
    need_b(e, "elliptic_binomial")?;
    let (q, a, b) = (e.q(), e.a(), e.b());
    let kr = R::from_f64(k as f64);
    let t = qpow(q, R::ONE + x - kr);
    let expand = |starts: [R; 4]| -> Vec<R> {
        starts
            .into_iter()
            .flat_map(|c| {
                (0..k).scan(c, move |arg, _| {
                    let v = *arg;
                    *arg *= q;
                    Some(v)
                })
            })
            .collect()
    };
    let nums = expand([t, a * t, b * qpow(q, R::ONE + kr), a * qpow(q, R::ONE - kr) / b]);
    let dens = expand([
        q,
        a * q,
        b * qpow(q, R::ONE + x),
        a * qpow(q, R::ONE + x - kr - kr) / b,
    ]);
    theta_ratio(&nums, &dens, e.p, pol, "elliptic_binomial")
}

/// Theta kernel `f(u) = theta(u q^{x+r}, u q^{x-r}; p) / theta(u q^x; p)^2` on
/// `[delta, lambda]`, `delta = p q^{-x-r}`, `lambda = q^{r-x}`.
///
/// The u-independent constant `(p;p)_inf^2 theta(q^r; p)^2` of the closed-form
/// derivative is computed once at construction; the struct is immutable and
/// can be shared across scan workers.
#[derive(Clone, Copy, Debug)]
pub struct ThetaKernel<R: Real = f64> {
    q: R,
    x: R,
    r: R,
    p: Nome<R>,
    delta: R,
    lambda: R,
    derivative_const: R,
    pol: PrecisionPolicy,
}

impl<R: Real> ThetaKernel<R> {
    /// Requires `0 < q < 1`, `x >= r > 0` and `0 <= p < q^{2r}`.
    pub fn new(x: R, r: R, q: R, p: Nome<R>, pol: &PrecisionPolicy) -> Result<Self> {
        let qv = q.to_f64();
        if !(qv > 0.0 && qv < 1.0) {
            return Err(Error::domain("theta_kernel", format!("q = {qv} outside (0, 1)")));
        }
        if !(r.to_f64() > 0.0 && x >= r) {
            return Err(Error::domain("theta_kernel", "need x >= r > 0"));
        }
        let qr = qpow(q, r);
        if p.value() >= qr * qr {
            return Err(Error::domain("theta_kernel", "need p < q^{2r}"));
        }
        let qx = qpow(q, x);
        let delta = p.value() / (qx * qr);
        let lambda = qr / qx;
        let euler = if p.is_zero() {
            R::ONE
        } else {
            q_pochhammer_inf(p.value(), p.value(), pol)?
        };
        let tq = theta(qr, p, pol)?;
        Ok(ThetaKernel {
            q,
            x,
            r,
            p,
            delta,
            lambda,
            derivative_const: euler * euler * tq * tq,
            pol: *pol,
        })
    }

    pub fn delta(&self) -> R {
        self.delta
    }

    pub fn lambda(&self) -> R {
        self.lambda
    }

    /// `u` with `u^2 q^{2x} = p`; below it `theta(u^2 q^{2x}; p) < 0`.
    pub fn derivative_sign_change(&self) -> R {
        let qx = qpow(self.q, self.x);
        R::from_f64(self.p.value().to_f64().sqrt()) / qx
    }

    fn check_closed(&self, u: R) -> Result<()> {
        if u < self.delta || u > self.lambda {
            return Err(Error::domain(
                "theta_kernel",
                format!("u = {:e} outside [delta, lambda]", u.to_f64()),
            ));
        }
        Ok(())
    }

    fn check_open(&self, u: R) -> Result<()> {
        if !(u > self.delta && u < self.lambda) {
            return Err(Error::domain(
                "theta_kernel derivative",
                format!("u = {:e} outside (delta, lambda)", u.to_f64()),
            ));
        }
        Ok(())
    }

    /// Evaluates without the interval check (used by finite differences near
    /// the endpoints).
    fn f_unchecked(&self, u: R) -> Result<R> {
        let qx = qpow(self.q, self.x);
        let qr = qpow(self.q, self.r);
        let w = u * qx;
        let num = theta(w * qr, self.p, &self.pol)? * theta(w / qr, self.p, &self.pol)?;
        let d = theta_denom(w, self.p, &self.pol, "theta_kernel")?;
        Ok(num / nonzero(d * d, "theta_kernel")?)
    }

    pub fn f(&self, u: R) -> Result<R> {
        self.check_closed(u)?;
        self.f_unchecked(u)
    }

    fn d1_unchecked(&self, u: R) -> Result<R> {
        let qx = qpow(self.q, self.x);
        let qr = qpow(self.q, self.r);
        let w = u * qx;
        let t = theta_denom(w, self.p, &self.pol, "theta_kernel_d1")?;
        let t2 = t * t;
        let num = theta(w * w, self.p, &self.pol)?;
        Ok(-(qx / qr) * self.derivative_const * num / (t2 * t2))
    }

    /// `f'(u) = -q^{x-r} (p;p)^2 theta(q^r;p)^2 theta(u^2 q^{2x};p) / theta(u q^x;p)^4`.
    pub fn d1_closed(&self, u: R) -> Result<R> {
        self.check_open(u)?;
        self.d1_unchecked(u)
    }

    fn step(&self, u: R) -> R {
        let gap = (u - self.delta).to_f64().min((self.lambda - u).to_f64());
        R::from_f64(R::EPSILON.powf(0.125) * gap.min(u.to_f64().abs()).max(f64::MIN_POSITIVE) * 0.5)
    }

    /// Second derivative by Richardson differences of the closed-form `f'`.
    pub fn d2(&self, u: R) -> Result<R> {
        self.check_open(u)?;
        richardson(|v| self.d1_unchecked(v), u, self.step(u))
    }

    /// Central difference of `f` with step `h`, as an oracle for `f'`.
    pub fn d1_finite_difference(&self, u: R, h: R) -> Result<R> {
        self.check_open(u)?;
        crate::diff::central(|v| self.f_unchecked(v), u, h)
    }
}

pub fn theta_kernel<R: Real>(u: R, x: R, r: R, q: R, p: Nome<R>, pol: &PrecisionPolicy) -> Result<R> {
    ThetaKernel::new(x, r, q, p, pol)?.f(u)
}

pub fn theta_kernel_d1_closed<R: Real>(
    u: R,
    x: R,
    r: R,
    q: R,
    p: Nome<R>,
    pol: &PrecisionPolicy,
) -> Result<R> {
    ThetaKernel::new(x, r, q, p, pol)?.d1_closed(u)
}

/// Per-`j` logarithmic derivatives compared in the second-derivative
/// argument for the theta kernel:
///
/// ```text
/// lhs = d/du log(1 - p^j u^2 q^{2x}) + d/du log(1 - p^{j+1} u^{-2} q^{-2x})
/// rhs = 4 d/du log(1 - p^j u q^x)   + 4 d/du log(1 - p^{j+1} u^{-1} q^{-x})
/// ```
///
/// Returns the four summands `(lhs_1, lhs_2, rhs_1, rhs_2)`.
pub fn termwise_log_derivatives<R: Real>(j: u32, u: R, x: R, q: R, p: R) -> (R, R, R, R) {
    let pj = p.powi(j as i32);
    let pj1 = pj * p;
    let qx = qpow(q, x);
    let w = u * qx;
    let two = R::from_f64(2.0);
    let four = R::from_f64(4.0);
    let lhs1 = -(two * pj * u * qx * qx) / (R::ONE - pj * w * w);
    let lhs2 = two * pj1 / (u * w * w) / (R::ONE - pj1 / (w * w));
    let rhs1 = -(four * pj * qx) / (R::ONE - pj * w);
    let rhs2 = four * pj1 / (u * w) / (R::ONE - pj1 / w);
    (lhs1, lhs2, rhs1, rhs2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::abq_binomial_finite;
    use crate::dd::Dd;
    use crate::qnumbers::{abq_number, abq_weight, KernelSpec};
    use proptest::prelude::*;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn ep(q: f64, a: f64, b: f64, p: f64) -> EllipticParamSet {
        EllipticParamSet::new(q, a, b, p).unwrap()
    }

    #[test]
    fn zero_nome_degenerates() {
        let e = ep(0.5, 0.25, 0.5, 0.0);
        for &x in &[0.0, 0.7, 2.0, 3.3] {
            let a = elliptic_number(x, &e, &pol()).unwrap();
            let b = abq_number(x, &e.base).unwrap();
            assert!((a - b).abs() < 1e-15 * b.abs().max(1.0));
            let a = elliptic_weight(x, &e, &pol()).unwrap();
            let b = abq_weight(x, &e.base).unwrap();
            assert!((a - b).abs() < 1e-15 * b.abs().max(1.0));
        }
        for k in 0..4 {
            let a = elliptic_binomial(4.5, k, &e, &pol()).unwrap();
            let b = abq_binomial_finite(4.5, k, &e.base).unwrap();
            assert!((a - b).abs() < 1e-14 * b.abs().max(1.0));
        }
    }

    #[test]
    fn unit_values() {
        let e = ep(0.5, 0.25, 0.5, 1.0 / 16.0);
        assert!((elliptic_number(1.0, &e, &pol()).unwrap() - 1.0).abs() < 1e-15);
        assert!((elliptic_weight(0.0, &e, &pol()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(elliptic_binomial(3.0, 0, &e, &pol()).unwrap(), 1.0);
    }

    #[test]
    fn k_one_reduction() {
        let e = ep(0.6, 0.2, 0.5, 0.05);
        let shifted = e.with_b(0.5 / 0.6);
        for &x in &[0.4, 1.0, 2.5] {
            let a = elliptic_binomial(x, 1, &shifted, &pol()).unwrap();
            let b = elliptic_number(x, &e, &pol()).unwrap();
            assert!((a - b).abs() < 1e-13 * b.abs().max(1.0));
        }
    }

    #[test]
    fn kernel_degenerates_to_rational_kernel() {
        let k = ThetaKernel::new(1.3, 0.4, 0.6, Nome::zero(), &pol()).unwrap();
        let r = KernelSpec::new(1.3, 0.4, 0.6).unwrap();
        for &u in &[0.0, 0.2, 0.5, 0.9] {
            assert!((k.f(u).unwrap() - r.f(u).unwrap()).abs() < 1e-15);
        }
        assert!((k.d1_closed(0.5).unwrap() - r.d1(0.5).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn closed_derivative_matches_finite_difference() {
        let k = ThetaKernel::new(1.3, 0.4, 0.5, Nome::new(0.1).unwrap(), &pol()).unwrap();
        for i in 1..20 {
            let u = k.delta() + (k.lambda() - k.delta()) * (i as f64 / 20.0);
            let fd = k.d1_finite_difference(u, 1e-6).unwrap();
            let cf = k.d1_closed(u).unwrap();
            assert!((fd - cf).abs() < 1e-6 * cf.abs().max(1e-3), "{u}: {fd} vs {cf}");
        }
    }

    #[test]
    fn derivative_sign_flips_below_sqrt_p_over_qx() {
        // f' carries the factor theta(u^2 q^{2x}; p), negative while u^2 q^{2x} < p
        let k = ThetaKernel::new(1.3, 0.4, 0.5, Nome::new(0.1).unwrap(), &pol()).unwrap();
        let s = k.derivative_sign_change();
        assert!(k.delta() < s && s < k.lambda());
        assert!(k.d1_closed(0.5 * (k.delta() + s)).unwrap() > 0.0);
        assert!(k.d1_closed(0.5 * (s + k.lambda())).unwrap() < 0.0);
        assert!(k.d1_closed(s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn second_derivative_negative_on_sweep() {
        let k = ThetaKernel::new(2.0, 0.7, 0.55, Nome::new(0.2).unwrap(), &pol()).unwrap();
        for i in 1..200 {
            let u = k.delta() + (k.lambda() - k.delta()) * (i as f64 / 200.0);
            assert!(k.d2(u).unwrap() < 0.0, "{u}");
        }
    }

    #[test]
    fn kernel_positive_inside_interval() {
        let k = ThetaKernel::new(2.0, 0.7, 0.55, Nome::new(0.2).unwrap(), &pol()).unwrap();
        for i in 1..1000 {
            let u = k.delta() + (k.lambda() - k.delta()) * (i as f64 / 1000.0);
            assert!(k.f(u).unwrap() > 0.0, "{u}");
        }
        // theta(p; p) = theta(1; p) = 0: the kernel vanishes at both ends
        assert!(k.f(k.delta()).unwrap().abs() < 1e-13);
        assert!(k.f(k.lambda()).unwrap().abs() < 1e-13);
        assert!(k.f(k.lambda() * 1.01).is_err());
        assert!(k.d1_closed(k.lambda()).is_err());
    }

    #[test]
    fn kernel_rejects_large_nome() {
        assert!(ThetaKernel::new(1.0, 0.5, 0.5, Nome::new(0.6).unwrap(), &pol()).is_err());
    }

    #[test]
    fn double_double_binomial() {
        let e = ep(0.6, 0.3, 0.45, 0.05);
        let hi = elliptic_binomial(Dd::from_f64(3.4), 2, &e.cast::<Dd>(), &PrecisionPolicy::high())
            .unwrap()
            .to_f64();
        let lo = elliptic_binomial(3.4, 2, &e, &pol()).unwrap();
        assert!(hi.abs() > 1e-3);
        assert!((hi - lo).abs() < 1e-14 * hi.abs(), "{hi} vs {lo}");
    }

    proptest! {
        #[test]
        fn termwise_first_summands(q in 0.05f64..0.95, r in 0.01f64..2.0, extra in 0.0f64..2.0,
                                   pf in 0.01f64..0.99, t in 0.001f64..0.999, j in 0u32..6) {
            let x = r + extra;
            let p = pf * q.powf(2.0 * r);
            let delta = p * q.powf(-x - r);
            let lambda = q.powf(r - x);
            let u = delta + t * (lambda - delta);
            let (l1, _, r1, _) = termwise_log_derivatives(j, u, x, q, p);
            prop_assert!(l1 > r1);
        }

        #[test]
        fn termwise_holds_where_factors_positive(q in 0.05f64..0.95, r in 0.01f64..2.0,
                                                 extra in 0.0f64..2.0, pf in 0.01f64..0.99,
                                                 t in 0.001f64..0.999, j in 0u32..6) {
            let x = r + extra;
            let p = pf * q.powf(2.0 * r);
            let lambda = q.powf(r - x);
            let lo = p.sqrt() * q.powf(-x);
            let u = lo + t * (lambda - lo);
            let (l1, l2, r1, r2) = termwise_log_derivatives(j, u, x, q, p);
            prop_assert!(l1 + l2 > r1 + r2);
        }
    }

    #[test]
    fn termwise_fails_where_a_factor_is_negative() {
        // j = 0 and u^2 q^{2x} < p: 1 - p u^-2 q^-2x < 0
        let (q, x, p): (f64, f64, f64) = (0.5, 1.3, 0.1);
        let u: f64 = 0.7;
        assert!(u * u * q.powf(2.0 * x) < p);
        let (l1, l2, r1, r2) = termwise_log_derivatives(0, u, x, q, p);
        assert!(l1 + l2 < r1 + r2);
    }
}
