//! Finite-difference derivatives.

use crate::error::Result;
use crate::real::Real;

/// Plain central difference `(f(t+h) - f(t-h)) / 2h`.
pub fn central<R: Real, F>(f: F, t: R, h: R) -> Result<R>
where
    F: Fn(R) -> Result<R>,
{
    Ok((f(t + h)? - f(t - h)?) / (R::from_f64(2.0) * h))
}

/// Central difference with two levels of Richardson extrapolation
/// (steps `h`, `h/2`, `h/4`); truncation error is `O(h^6)`.
pub fn richardson<R: Real, F>(f: F, t: R, h: R) -> Result<R>
where
    F: Fn(R) -> Result<R>,
{
    let half = R::from_f64(0.5);
    let d1 = central(&f, t, h)?;
    let d2 = central(&f, t, h * half)?;
    let d3 = central(&f, t, h * half * half)?;
    let r1 = (R::from_f64(4.0) * d2 - d1) / R::from_f64(3.0);
    let r2 = (R::from_f64(4.0) * d3 - d2) / R::from_f64(3.0);
    Ok((R::from_f64(16.0) * r2 - r1) / R::from_f64(15.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_beats_plain_difference() {
        let f = |t: f64| Ok(t.sin() * t.exp());
        let exact = |t: f64| t.exp() * (t.sin() + t.cos());
        let t = 0.7;
        let plain = (central(f, t, 1e-2).unwrap() - exact(t)).abs();
        let rich = (richardson(f, t, 1e-2).unwrap() - exact(t)).abs();
        assert!(rich < 1e-12, "{rich}");
        assert!(rich < plain / 1e5);
    }

    #[test]
    fn errors_propagate() {
        let f = |t: f64| {
            if t > 1.0 {
                Err(crate::error::Error::pole("test", "boom"))
            } else {
                Ok(t)
            }
        };
        assert!(central(f, 1.0, 0.1).is_err());
    }
}
