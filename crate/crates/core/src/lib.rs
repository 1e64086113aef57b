//! Generalized q-, a;q-, (b;q)-, a,b;q- and elliptic numbers and binomial
//! coefficients, the theta/sigma machinery behind them, and a parameter-scan
//! harness that checks their identities and log-concavity inequalities.
//!
//! Every evaluator is generic over [`Real`], implemented for `f64` and for the
//! double-double [`Dd`] used to re-check suspected violations.

pub mod binomial;
pub mod dd;
pub mod diff;
pub mod elliptic;
pub mod error;
pub mod gamma;
pub mod precision;
pub mod qnumbers;
pub mod real;
pub mod sigma;
pub mod theta;
pub mod verify;

pub use binomial::{
    abq_binomial, abq_binomial_finite, abq_binomial_ratio, aq_binomial, bq_binomial, continuous_binomial,
    continuous_binomial_product, q_binomial,
};
pub use dd::Dd;
pub use elliptic::{
    elliptic_binomial, elliptic_number, elliptic_weight, termwise_log_derivatives, theta_kernel,
    theta_kernel_d1_closed, EllipticParamSet, ThetaKernel,
};
pub use error::{Error, Result};
pub use precision::PrecisionPolicy;
pub use qnumbers::{
    abq_number, abq_number_negative, abq_weight, aq_number, bq_number, f_kernel, f_kernel_d1, f_kernel_d2,
    q_number, quantum_number, turan_ratio, DomainFlags, KernelSpec, ParamSet,
};
pub use real::Real;
pub use sigma::SigmaContext;
pub use theta::{
    q_pochhammer, q_pochhammer_finite, q_pochhammer_inf, theta, theta_pochhammer, theta_product, Nome,
};
pub use verify::{run_scan, run_suite, Report, ScanSpec, SuiteOptions};
