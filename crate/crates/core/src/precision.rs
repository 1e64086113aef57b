use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation orders and tolerances for every infinite product and series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Target relative tail of each truncated infinite product.
    pub product_tail_bound: f64,
    /// Minimum number of terms of the eta series.
    pub eta_terms: u32,
    /// Step of plain central differences.
    pub fd_step: f64,
    /// Residual tolerance for identity checks.
    pub report_tol: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            product_tail_bound: 1e-15,
            eta_terms: 8,
            fd_step: 1e-5,
            report_tol: 1e-10,
        }
    }
}

impl PrecisionPolicy {
    /// Policy for double-double evaluation.
    pub fn high() -> Self {
        PrecisionPolicy {
            product_tail_bound: 1e-32,
            eta_terms: 16,
            fd_step: 1e-5,
            report_tol: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.product_tail_bound) {
            return Err(Error::Policy("product_tail_bound must be positive".into()));
        }
        if !positive(self.fd_step) {
            return Err(Error::Policy("fd_step must be positive".into()));
        }
        if !positive(self.report_tol) {
            return Err(Error::Policy("report_tol must be positive".into()));
        }
        if self.eta_terms < 1 {
            return Err(Error::Policy("eta_terms must be at least 1".into()));
        }
        if self.product_tail_bound >= self.report_tol {
            return Err(Error::Policy(
                "product_tail_bound must be below report_tol".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        PrecisionPolicy::default().validate().unwrap();
        PrecisionPolicy::high().validate().unwrap();
    }

    #[test]
    fn rejects_inverted_tolerances() {
        let pol = PrecisionPolicy {
            product_tail_bound: 1e-9,
            report_tol: 1e-10,
            ..Default::default()
        };
        assert!(pol.validate().is_err());
        let pol = PrecisionPolicy {
            eta_terms: 0,
            ..Default::default()
        };
        assert!(pol.validate().is_err());
        let pol = PrecisionPolicy {
            fd_step: -1.0,
            ..Default::default()
        };
        assert!(pol.validate().is_err());
    }
}
