//! Weierstrass sigma, zeta and wp functions for the half-periods
//! `omega_1 = 1/2`, `omega_2 = tau/2` with `p = exp(2 pi i tau)`, `tau` on the
//! positive imaginary axis.
//!
//! All arguments live on the imaginary axis, `z = i t` with `t` real, so the
//! theta argument `u = exp(2 pi i z) = exp(-2 pi t)` is real and positive.
//! On that axis sigma, zeta and wp are real up to fixed powers of `i`:
//!
//! ```text
//! sigma(i t) = i * s(t),   s(t) = exp(-eta t^2 + pi t) theta(exp(-2 pi t); p) / (2 pi (p;p)^2)
//! zeta(i t)  = -i * s'(t) / s(t)
//! wp(i t)    = d/dt [s'(t) / s(t)]
//! ```
//!
//! [`SigmaContext::sigma`] returns `s(t)`, [`SigmaContext::zeta_w`] returns
//! `s'(t)/s(t)` and [`SigmaContext::wp`] returns `wp(i t)`. Identities that are
//! homogeneous of equal degree in sigma keep their form; an identity whose two
//! sides differ by a net factor `i^2` picks up a minus sign (see
//! [`SigmaContext::wp_relation_rhs`]).

use crate::diff::richardson;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use crate::real::Real;
use crate::theta::{q_pochhammer_inf, theta, Nome};

/// Immutable per-nome constants of the sigma function.
#[derive(Clone, Copy, Debug)]
pub struct SigmaContext<R: Real = f64> {
    nome: Nome<R>,
    eta: R,
    /// `(p; p)_inf^2`
    euler_sq: R,
    /// Spacing of the zeros of `s` along the axis, `-ln p / 2 pi`.
    zero_spacing: f64,
    pol: PrecisionPolicy,
}

/// `sum_{n >= 1} p^n / (1 - p^n)^2`, stopping once the next term falls below
/// `product_tail_bound` times the partial sum and `eta_terms` terms are used.
pub fn eta_series<R: Real>(p: Nome<R>, pol: &PrecisionPolicy) -> R {
    if p.is_zero() {
        return R::ZERO;
    }
    let pv = p.value();
    let mut sum = R::ZERO;
    let mut pn = pv;
    let mut n = 1u32;
    loop {
        let d = R::ONE - pn;
        let term = pn / (d * d);
        if n > pol.eta_terms && term.abs().to_f64() < pol.product_tail_bound * sum.abs().to_f64() {
            break;
        }
        sum += term;
        pn *= pv;
        n += 1;
        if n > 1_000_000 {
            break;
        }
    }
    sum
}

impl<R: Real> SigmaContext<R> {
    pub fn new(p: Nome<R>, pol: &PrecisionPolicy) -> Result<Self> {
        pol.validate()?;
        let pi = R::pi();
        let eta = pi * pi / R::from_f64(6.0) * (R::ONE - R::from_f64(24.0) * eta_series(p, pol));
        let euler = if p.is_zero() {
            R::ONE
        } else {
            q_pochhammer_inf(p.value(), p.value(), pol)?
        };
        let pv = p.value().to_f64();
        let zero_spacing = if pv == 0.0 {
            f64::INFINITY
        } else {
            -pv.ln() / (2.0 * std::f64::consts::PI)
        };
        Ok(SigmaContext {
            nome: p,
            eta,
            euler_sq: euler * euler,
            zero_spacing,
            pol: *pol,
        })
    }

    pub fn nome(&self) -> Nome<R> {
        self.nome
    }

    pub fn eta(&self) -> R {
        self.eta
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.pol
    }

    /// `s(t) = -i sigma(i t)`.
    pub fn sigma(&self, t: R) -> Result<R> {
        let pi = R::pi();
        let two_pi = R::from_f64(2.0) * pi;
        let u = (-(two_pi * t)).exp();
        let uv = u.to_f64();
        if uv == 0.0 || !uv.is_finite() {
            return Err(Error::domain(
                "sigma",
                "theta argument exp(-2 pi t) not representable",
            ));
        }
        let th = theta(u, self.nome, &self.pol)?;
        Ok((-(self.eta * t * t) + pi * t).exp() * th / (two_pi * self.euler_sq))
    }

    /// Distance from `t` to the nearest zero of `s`.
    fn zero_distance(&self, t: f64) -> f64 {
        if self.zero_spacing.is_infinite() {
            return t.abs();
        }
        let k = (t / self.zero_spacing).round();
        (t - k * self.zero_spacing).abs()
    }

    fn step(&self, t: R) -> R {
        let d = self.zero_distance(t.to_f64()).min(1.0);
        R::from_f64(R::EPSILON.powf(0.125) * d)
    }

    /// `s'(t) / s(t) = i zeta(i t)`, by Richardson-extrapolated differences.
    pub fn zeta_w(&self, t: R) -> Result<R> {
        let s = self.sigma(t)?;
        if s.to_f64() == 0.0 || self.zero_distance(t.to_f64()) == 0.0 {
            return Err(Error::pole("zeta_w", "sigma vanishes at a lattice point"));
        }
        let ds = richardson(|v| self.sigma(v), t, self.step(t))?;
        Ok(ds / s)
    }

    /// `wp(i t) = d/dt zeta_w(t)`.
    pub fn wp(&self, t: R) -> Result<R> {
        if self.zero_distance(t.to_f64()) == 0.0 {
            return Err(Error::pole("wp", "sigma vanishes at a lattice point"));
        }
        richardson(|v| self.zeta_w(v), t, self.step(t))
    }

    /// Right-hand side of `wp(v) - wp(u) = sigma(u-v) sigma(u+v) / (sigma(u)^2 sigma(v)^2)`
    /// on the imaginary axis: the powers of `i` leave a factor `-1`.
    pub fn wp_relation_rhs(&self, u: R, v: R) -> Result<R> {
        let su = self.sigma(u)?;
        let sv = self.sigma(v)?;
        let den = su * su * sv * sv;
        if den.to_f64() == 0.0 {
            return Err(Error::pole("wp_relation", "sigma(u) or sigma(v) vanishes"));
        }
        Ok(-(self.sigma(u - v)? * self.sigma(u + v)?) / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;
    use crate::diff::central;

    fn ctx(p: f64) -> SigmaContext {
        SigmaContext::new(Nome::new(p).unwrap(), &PrecisionPolicy::default()).unwrap()
    }

    #[test]
    fn sigma_vanishes_at_origin() {
        assert_eq!(ctx(0.2).sigma(0.0).unwrap(), 0.0);
        assert!(matches!(ctx(0.2).zeta_w(0.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn sigma_derivative_at_origin_is_one() {
        for &p in &[0.0, 0.05, 0.2, 0.6] {
            let c = ctx(p);
            let h = c.policy().fd_step;
            let d = central(|t| c.sigma(t), 0.0, h).unwrap();
            assert!((d - 1.0).abs() < 1e-8, "p = {p}: {d}");
        }
    }

    #[test]
    fn sigma_degenerates_to_hyperbolic_sine() {
        let c = ctx(0.0);
        let eta = std::f64::consts::PI.powi(2) / 6.0;
        assert!((c.eta() - eta).abs() < 1e-15);
        for &t in &[-0.4, 0.1, 0.3, 0.9] {
            let direct = (-eta * t * t).exp() * (std::f64::consts::PI * t).sinh() / std::f64::consts::PI;
            let got = c.sigma(t).unwrap();
            assert!((got - direct).abs() < 1e-14 * direct.abs(), "{t}");
        }
    }

    #[test]
    fn eta_series_converges() {
        let pol = PrecisionPolicy::default();
        let p = Nome::new(0.3).unwrap();
        let a = eta_series(p, &pol);
        let more = PrecisionPolicy {
            eta_terms: pol.eta_terms + 8,
            ..pol
        };
        let b = eta_series(p, &more);
        assert!((a - b).abs() < pol.report_tol);
        // first terms by hand: 0.3/0.49 + 0.09/0.8281 + ...
        assert!(a > 0.3 / 0.49 + 0.09 / 0.8281);
    }

    #[test]
    fn zeta_is_odd() {
        let c = ctx(0.15);
        for &t in &[0.05, 0.1, 0.17] {
            let a = c.zeta_w(t).unwrap();
            let b = c.zeta_w(-t).unwrap();
            assert!((a + b).abs() <= 1e-10 * a.abs().max(1.0), "{t}");
        }
    }

    #[test]
    fn wp_matches_closed_form_at_zero_nome() {
        // s = exp(-eta t^2) sinh(pi t)/pi  =>  wp = -2 eta - pi^2 / sinh^2(pi t)
        let c = ctx(0.0);
        let pi = std::f64::consts::PI;
        for &t in &[0.1, 0.35, 0.8] {
            let expect = -2.0 * c.eta() - pi * pi / (pi * t).sinh().powi(2);
            let got = c.wp(t).unwrap();
            assert!(
                (got - expect).abs() < 1e-9 * expect.abs(),
                "{t}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn double_double_context_agrees() {
        let hi = SigmaContext::new(Nome::new(Dd::from_f64(0.2)).unwrap(), &PrecisionPolicy::high()).unwrap();
        let lo = ctx(0.2);
        let t = 0.07;
        let a = hi.zeta_w(Dd::from_f64(t)).unwrap().to_f64();
        let b = lo.zeta_w(t).unwrap();
        assert!((a - b).abs() < 1e-11 * a.abs());
    }
}
