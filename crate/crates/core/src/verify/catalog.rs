//! The fixed catalog of checkable claims.
//!
//! Every property names its scan variables with default domains, a list of
//! built-in constraints, a tolerance, and a pointwise evaluator generic over
//! [`Real`] (so suspected violations can be re-evaluated in double-double).

use serde::{Deserialize, Serialize};

use crate::binomial::{
    abq_binomial, abq_binomial_finite, abq_binomial_ratio, aq_binomial, bq_binomial, continuous_binomial,
    q_binomial,
};
use crate::diff::central;
use crate::elliptic::{
    elliptic_binomial, elliptic_number, elliptic_weight, termwise_log_derivatives, EllipticParamSet,
    ThetaKernel,
};
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use crate::qnumbers::{
    abq_number, abq_number_negative, abq_weight, aq_number, bq_number, q_number, turan_ratio, KernelSpec,
    ParamSet,
};
use crate::real::Real;
use crate::sigma::SigmaContext;
use crate::theta::{qpow, theta, Nome};

/// What a property asserts and how its outcome is judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// A proved inequality; zero confirmed violations expected.
    Theorem,
    /// A pointwise statement made inside a proof (derivative signs, term-wise bounds).
    Claim,
    /// An exact identity; residuals must stay below the tolerance.
    Identity,
    /// A parameter limit; the error sequence must decrease monotonically to zero.
    Limit,
    /// A statement expected to fail; at least one confirmed violation expected.
    NegativeControl,
}

/// Sampling domain of one scan variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VarDomain {
    Range { lo: f64, hi: f64 },
    Integer { lo: i64, hi: i64 },
    Choice { values: Vec<f64> },
}

impl VarDomain {
    pub fn validate(&self, name: &str) -> Result<()> {
        let ok = match self {
            VarDomain::Range { lo, hi } => lo.is_finite() && hi.is_finite() && lo <= hi,
            VarDomain::Integer { lo, hi } => lo <= hi,
            VarDomain::Choice { values } => !values.is_empty() && values.iter().all(|v| v.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "empty or invalid domain for variable `{name}`"
            )))
        }
    }
}

const fn range(lo: f64, hi: f64) -> VarDomain {
    VarDomain::Range { lo, hi }
}

const fn int(lo: i64, hi: i64) -> VarDomain {
    VarDomain::Integer { lo, hi }
}

/// Static description of a catalog entry.
#[derive(Clone, Debug)]
pub struct PropertyDef {
    pub id: PropertyId,
    pub name: &'static str,
    pub kind: Kind,
    pub summary: &'static str,
    pub vars: Vec<(&'static str, VarDomain)>,
    pub constraints: Vec<&'static str>,
    /// Slack (inequalities) or residual (identities) tolerance.
    pub tol: f64,
    /// Whether the default suite runs it.
    pub in_suite: bool,
}

impl PropertyDef {
    pub fn var_names(&self) -> Vec<&'static str> {
        self.vars.iter().map(|(n, _)| *n).collect()
    }
}

macro_rules! properties {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Identifier of a catalog property.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PropertyId { $($variant),* }

        impl PropertyId {
            pub const ALL: &'static [PropertyId] = &[$(PropertyId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(PropertyId::$variant => $name),* }
            }

            pub fn from_name(name: &str) -> Result<Self> {
                match name {
                    $($name => Ok(PropertyId::$variant),)*
                    other => Err(Error::UnknownProperty(other.to_string())),
                }
            }
        }
    };
}

properties! {
    Prop1Factor => "check_prop_1factor",
    AqNumbers => "check_aq_numbers",
    BqNumbers => "check_bq_numbers",
    AbqShifted => "check_abq_shifted",
    AbqDirect => "check_abq_direct",
    ContBinomial => "check_cont_binomial",
    AqBinomialLower => "check_aq_binomial_lower",
    AbqBinomialUpper => "check_abq_binomial_upper",
    EllShifted => "check_ell_shifted",
    EllDirect => "check_ell_direct",
    EllBinomialUpper => "check_ell_binomial_upper",
    ThetaInversion => "theta_inversion",
    ThetaQuasiPeriodicity => "theta_quasi_periodicity",
    ThetaAddition => "theta_addition",
    SigmaAddition => "sigma_addition",
    SigmaPrimeAtZero => "sigma_prime_at_zero",
    ZetaDifference => "zeta_difference",
    ZetaDoubling => "zeta_doubling",
    WpRelation => "wp_relation",
    AbqAddition => "abq_addition",
    AbqNegativeArgument => "abq_negative_argument",
    BqDifferenceFormula => "bq_difference_formula",
    EllipticAddition => "elliptic_addition",
    BinomialDualForms => "binomial_dual_forms",
    BinomialK1Reductions => "binomial_k1_reductions",
    AqBinomialSymmetry => "aq_binomial_symmetry",
    ZeroParameterSpecializations => "zero_parameter_specializations",
    FKernelDerivative => "f_kernel_derivative",
    ThetaKernelDerivative => "theta_kernel_derivative",
    LimitAbqBToZero => "limit_abq_b_to_zero",
    LimitAbqAToZero => "limit_abq_a_to_zero",
    LimitEllipticPToZero => "limit_elliptic_p_to_zero",
    LimitBinomialChain => "limit_binomial_chain",
    FKernelD1Negative => "f_kernel_d1_negative",
    FKernelD2Negative => "f_kernel_d2_negative",
    ThetaKernelD1Negative => "theta_kernel_d1_negative",
    ThetaKernelD2Negative => "theta_kernel_d2_negative",
    ThetaKernelTermwise => "theta_kernel_termwise",
    TuranFKernel => "turan_f_kernel",
    TuranThetaKernel => "turan_theta_kernel",
    BqBinomialLower => "bq_binomial_lower",
    BqBinomialSymmetry => "bq_binomial_symmetry",
}

const Q: VarDomain = range(0.05, 0.95);
const UNIT: VarDomain = range(0.01, 0.99);
const ARG: VarDomain = range(0.0, 4.0);
const SIGMA_ARG: VarDomain = range(-0.4, 0.4);
const SIGMA_NOME: VarDomain = range(0.0, 0.3);
const ORDER: [&str; 2] = ["x>=y", "y>=r"];
const BINOM_ORDER: [&str; 4] = ["x>=y", "k>=l", "l>=r", "y-l>=x-k"];
// Keeps every factor of the product forms positive; without it the stated
// hypotheses admit negative Gamma / q-Pochhammer arguments where the
// inequality fails.
const BINOM_POSITIVE: &str = "x-k-r>-1";

/// Tolerance of the sigma-derivative identities (finite-difference zeta).
pub const ZETA_TOL: f64 = 1e-7;
/// Tolerance of the wp relation (second finite difference).
pub const WP_TOL: f64 = 1e-6;
/// Tolerance of closed-form vs finite-difference kernel derivatives.
pub const DERIVATIVE_TOL: f64 = 1e-6;
/// Tolerance of sigma'(0) = 1.
pub const SIGMA_PRIME_TOL: f64 = 1e-8;
/// Default slack tolerance of inequality scans.
pub const SLACK_TOL: f64 = 1e-9;

fn def(
    id: PropertyId,
    kind: Kind,
    summary: &'static str,
    vars: Vec<(&'static str, VarDomain)>,
    constraints: Vec<&'static str>,
    tol: f64,
) -> PropertyDef {
    PropertyDef {
        id,
        name: id.name(),
        kind,
        summary,
        vars,
        constraints,
        tol,
        in_suite: true,
    }
}

fn with(base: &[&'static str], extra: &[&'static str]) -> Vec<&'static str> {
    base.iter().chain(extra).copied().collect()
}

impl PropertyId {
    pub fn def(self, pol: &PrecisionPolicy) -> PropertyDef {
        use Kind::*;
        use PropertyId::*;
        let rt = pol.report_tol;
        let xyr = || vec![("x", ARG), ("y", ARG), ("r", ARG)];
        let cat = |head: Vec<(&'static str, VarDomain)>| {
            let mut v = head;
            v.extend(xyr());
            v
        };
        let binom_vars = |head: Vec<(&'static str, VarDomain)>| {
            let mut v = head;
            v.extend([
                ("x", range(0.0, 6.0)),
                ("y", range(0.0, 6.0)),
                ("k", ARG),
                ("l", ARG),
                ("r", ARG),
            ]);
            v
        };
        let theta_kernel_vars = || {
            vec![
                ("q", Q),
                ("x", ARG),
                ("r", range(0.01, 4.0)),
                ("p", range(0.0001, 0.9)),
                ("t", range(0.001, 0.999)),
            ]
        };
        let mut d = match self {
            Prop1Factor => def(
                self,
                Theorem,
                "(1-nu q^x)(1-nu q^y) >= (1-nu q^{x+r})(1-nu q^{y-r})",
                cat(vec![("nu", range(0.0, 0.99)), ("q", Q)]),
                ORDER.to_vec(),
                SLACK_TOL,
            ),
            AqNumbers => def(
                self,
                Theorem,
                "[x][y] >= [x+r][y-r] for a;q-numbers",
                cat(vec![("q", Q), ("a", UNIT)]),
                ORDER.to_vec(),
                SLACK_TOL,
            ),
            BqNumbers => def(
                self,
                Theorem,
                "[x][y] >= [x+r][y-r] for (b;q)-numbers, with the closed-form difference",
                cat(vec![("q", Q), ("b", UNIT)]),
                ORDER.to_vec(),
                SLACK_TOL,
            ),
            AbqShifted => def(
                self,
                Theorem,
                "[x]_{aq^2r,bq^r}[y]_{a,b} >= [x+r]_{a,b}[y-r]_{aq^2r,bq^r}",
                cat(vec![("q", Q), ("a", UNIT), ("b", UNIT)]),
                with(&ORDER, &["a<b"]),
                SLACK_TOL,
            ),
            AbqDirect => def(
                self,
                Theorem,
                "[x][y] >= [x+r][y-r] for a,b;q-numbers",
                cat(vec![("q", Q), ("a", UNIT), ("b", UNIT)]),
                with(&ORDER, &["a<b"]),
                SLACK_TOL,
            ),
            ContBinomial => def(
                self,
                Theorem,
                "C(x,k)C(y,l) >= C(x,k+r)C(y,l-r)",
                binom_vars(vec![]),
                with(&BINOM_ORDER, &[BINOM_POSITIVE]),
                SLACK_TOL,
            ),
            AqBinomialLower => def(
                self,
                Theorem,
                "lower-index strong log-concavity of a;q-binomials (a = 0 included)",
                binom_vars(vec![("q", Q), ("a", range(0.0, 0.99))]),
                with(&BINOM_ORDER, &[BINOM_POSITIVE]),
                SLACK_TOL,
            ),
            AbqBinomialUpper => def(
                self,
                Theorem,
                "B(x,k)B(y,k) >= B(x+1,k)B(y-1,k), x = y + n, for a,b;q-binomials",
                vec![("q", Q), ("a", UNIT), ("b", UNIT), ("k", int(0, 4)), ("y", range(1.0, 5.0)), ("n", int(0, 4))],
                vec!["a<=b*q^k", "b*q^k<1", "y>=k"],
                SLACK_TOL,
            ),
            EllShifted => def(
                self,
                Theorem,
                "shifted-parameter inequality for elliptic numbers",
                cat(vec![("q", Q), ("p", range(0.0001, 0.3)), ("a", UNIT), ("b", UNIT)]),
                // every theta argument of [r] W(y-r) [x-y+r] lies in (p, 1)
                with(&ORDER, &["a<b", "p<a*q^(x+y+r+1)"]),
                SLACK_TOL,
            ),
            EllDirect => def(
                self,
                Theorem,
                "[x][y] >= [x+r][y-r] for elliptic numbers",
                cat(vec![("q", Q), ("p", range(0.0001, 0.5)), ("a", UNIT), ("b", UNIT)]),
                with(&ORDER, &["p<q^(2*r)", "p*q^(-x-r)<a", "a<b"]),
                SLACK_TOL,
            ),
            EllBinomialUpper => def(
                self,
                Theorem,
                "B(x,k)B(y,k) >= B(x+1,k)B(y-1,k), x = y + n, for elliptic binomials",
                vec![
                    ("q", Q),
                    ("p", range(0.0001, 0.5)),
                    ("a", UNIT),
                    ("b", UNIT),
                    ("k", int(0, 4)),
                    ("y", range(1.0, 5.0)),
                    ("n", int(0, 4)),
                ],
                vec!["p<q^2", "p*q^(-y-n-1)<a", "a<=b*q^k", "b*q^k<1", "y>=k"],
                SLACK_TOL,
            ),
            ThetaInversion => def(
                self,
                Identity,
                "theta(x) = -x theta(1/x)",
                vec![
                    ("x", range(0.1, 10.0)),
                    (
                        "p",
                        VarDomain::Choice {
                            values: vec![0.0, 0.05, 0.3, 0.8],
                        },
                    ),
                ],
                vec![],
                rt,
            ),
            ThetaQuasiPeriodicity => def(
                self,
                Identity,
                "theta(px) = -theta(x)/x",
                vec![
                    ("x", range(0.1, 10.0)),
                    (
                        "p",
                        VarDomain::Choice {
                            values: vec![0.05, 0.3, 0.8],
                        },
                    ),
                ],
                vec![],
                rt,
            ),
            ThetaAddition => def(
                self,
                Identity,
                "Weierstrass theta addition formula",
                vec![
                    ("x", range(0.2, 5.0)),
                    ("y", range(0.2, 5.0)),
                    ("u", range(0.2, 5.0)),
                    ("t", range(0.2, 5.0)),
                    ("p", range(0.0, 0.8)),
                ],
                vec![],
                rt,
            ),
            SigmaAddition => def(
                self,
                Identity,
                "sigma addition formula",
                vec![("x", SIGMA_ARG), ("y", SIGMA_ARG), ("u", SIGMA_ARG), ("t", SIGMA_ARG), ("p", SIGMA_NOME)],
                vec![],
                rt,
            ),
            SigmaPrimeAtZero => def(
                self,
                Identity,
                "sigma'(0) = 1",
                vec![("p", range(0.0, 0.6))],
                vec![],
                SIGMA_PRIME_TOL,
            ),
            ZetaDifference => def(
                self,
                Identity,
                "zeta(x+y)+zeta(x-y)-zeta(x+t)-zeta(x-t) as a sigma quotient",
                vec![("x", SIGMA_ARG), ("y", SIGMA_ARG), ("t", SIGMA_ARG), ("p", SIGMA_NOME)],
                vec![],
                ZETA_TOL,
            ),
            ZetaDoubling => def(
                self,
                Identity,
                "zeta(2u)+zeta(2v)-2zeta(u+v) as a sigma quotient",
                vec![("u", SIGMA_ARG), ("v", SIGMA_ARG), ("p", SIGMA_NOME)],
                vec![],
                ZETA_TOL,
            ),
            WpRelation => def(
                self,
                Identity,
                "wp(v) - wp(u) as a sigma quotient",
                vec![("u", SIGMA_ARG), ("v", SIGMA_ARG), ("p", SIGMA_NOME)],
                vec![],
                WP_TOL,
            ),
            AbqAddition => def(
                self,
                Identity,
                "[x] + W(x)[y-x]_{aq^2x,bq^x} = [y]",
                vec![("q", Q), ("a", UNIT), ("b", UNIT), ("x", range(0.0, 5.0)), ("y", range(0.0, 5.0))],
                vec!["a<b"],
                rt,
            ),
            AbqNegativeArgument => def(
                self,
                Identity,
                "[x] = -W(x)[-x]_{aq^2x,bq^x}",
                vec![("q", Q), ("a", UNIT), ("b", UNIT), ("x", range(0.0, 3.0))],
                vec!["a<b"],
                rt,
            ),
            BqDifferenceFormula => def(
                self,
                Identity,
                "closed form of [x][y] - [x+r][y-r] for (b;q)-numbers",
                cat(vec![("q", Q), ("b", UNIT)]),
                ORDER.to_vec(),
                rt,
            ),
            EllipticAddition => def(
                self,
                Identity,
                "elliptic addition formula",
                vec![
                    ("q", Q),
                    ("p", range(0.001, 0.5)),
                    ("a", UNIT),
                    ("b", UNIT),
                    ("x", range(0.0, 5.0)),
                    ("y", range(0.0, 5.0)),
                ],
                vec!["a<b"],
                rt,
            ),
            BinomialDualForms => def(
                self,
                Identity,
                "finite and infinite-ratio forms of the a,b;q-binomial, x = k + n",
                vec![("q", Q), ("a", UNIT), ("b", UNIT), ("k", int(0, 4)), ("n", range(0.0, 5.0))],
                vec!["a<b"],
                rt,
            ),
            BinomialK1Reductions => def(
                self,
                Identity,
                "k = 1 binomials reduce to the a,b;q-, a;q-, (b;q)- and elliptic numbers",
                vec![("q", Q), ("p", range(0.001, 0.5)), ("a", UNIT), ("b", UNIT), ("x", range(0.0, 5.0))],
                vec!["a<b"],
                rt,
            ),
            AqBinomialSymmetry => def(
                self,
                Identity,
                "a;q-binomials are symmetric in k and x-k",
                vec![("q", Q), ("a", UNIT), ("x", int(0, 8)), ("k", int(0, 8))],
                vec!["k<=x"],
                rt,
            ),
            ZeroParameterSpecializations => def(
                self,
                Identity,
                "[x]_(0;q) = [x]_q, [x]_0;q = [x]_{1/q}, (b;q)-binomial at b = 0, elliptic objects at p = 0",
                vec![("q", Q), ("a", UNIT), ("b", UNIT), ("x", range(0.0, 5.0)), ("k", int(0, 4))],
                vec!["a<b"],
                rt,
            ),
            FKernelDerivative => def(
                self,
                Identity,
                "closed-form f' of the rational kernel vs central differences",
                vec![("q", Q), ("x", ARG), ("r", range(0.01, 4.0)), ("u", range(0.01, 0.99))],
                vec!["x>=r"],
                DERIVATIVE_TOL,
            ),
            ThetaKernelDerivative => def(
                self,
                Identity,
                "closed-form f' of the theta kernel vs central differences, u = delta + t (lambda - delta)",
                theta_kernel_vars(),
                vec!["x>=r", "p<q^(2*r)"],
                DERIVATIVE_TOL,
            ),
            LimitAbqBToZero => def(
                self,
                Limit,
                "[x]_{a,b;q} -> [x]_{a;q} along b = 10^-m, m = 2..8",
                vec![("q", range(0.3, 0.95)), ("a", range(0.1, 0.95)), ("x", ARG)],
                vec!["a*q^x>=0.05"],
                rt,
            ),
            LimitAbqAToZero => def(
                self,
                Limit,
                "[x]_{a,b;q} -> [x]_(b;q) along a = 10^-m, m = 2..8",
                vec![("q", range(0.3, 0.95)), ("b", range(0.05, 0.95)), ("x", ARG)],
                vec![],
                rt,
            ),
            LimitEllipticPToZero => def(
                self,
                Limit,
                "elliptic number, weight and binomial -> a,b;q counterparts along p = 1e-3, 1e-5, 1e-7",
                vec![
                    ("q", range(0.3, 0.95)),
                    ("a", range(0.05, 0.95)),
                    ("b", range(0.05, 0.95)),
                    ("x", ARG),
                    ("k", int(0, 3)),
                ],
                // smallest theta argument stays well above p
                vec!["a<b", "a*q^(2*x+2*k+1)>=0.01"],
                rt,
            ),
            LimitBinomialChain => def(
                self,
                Limit,
                "a,b;q-binomial -> (b;q)-binomial (a -> 0) -> q-binomial (b -> 0), x = k + n",
                vec![
                    ("q", range(0.3, 0.95)),
                    ("a", range(0.05, 0.95)),
                    ("b", range(0.05, 0.95)),
                    ("k", int(0, 3)),
                    ("n", ARG),
                ],
                vec!["a<b"],
                rt,
            ),
            FKernelD1Negative => def(
                self,
                Claim,
                "f'(u) <= 0 for the rational kernel on (0, 1)",
                vec![("q", Q), ("x", ARG), ("r", range(0.01, 4.0)), ("u", range(0.001, 0.999))],
                vec!["x>=r"],
                SLACK_TOL,
            ),
            FKernelD2Negative => def(
                self,
                Claim,
                "f''(u) <= 0 for the rational kernel on (0, 1)",
                vec![("q", Q), ("x", ARG), ("r", range(0.01, 4.0)), ("u", range(0.001, 0.999))],
                vec!["x>=r"],
                SLACK_TOL,
            ),
            ThetaKernelD1Negative => PropertyDef {
                in_suite: false,
                ..def(
                    self,
                    Claim,
                    "closed-form f'(u) <= 0 for the theta kernel on (delta, lambda)",
                    theta_kernel_vars(),
                    vec!["x>=r", "p<q^(2*r)"],
                    SLACK_TOL,
                )
            },
            ThetaKernelD2Negative => def(
                self,
                Claim,
                "f''(u) <= 0 for the theta kernel on (delta, lambda)",
                theta_kernel_vars(),
                vec!["x>=r", "p<q^(2*r)"],
                SLACK_TOL,
            ),
            ThetaKernelTermwise => PropertyDef {
                in_suite: false,
                ..def(
                    self,
                    Claim,
                    "term-wise logarithmic-derivative comparison behind f'' < 0 (theta kernel)",
                    {
                        let mut v = theta_kernel_vars();
                        v.push(("j", int(0, 5)));
                        v
                    },
                    vec!["x>=r", "p<q^(2*r)"],
                    SLACK_TOL,
                )
            },
            TuranFKernel => def(
                self,
                Claim,
                "f(1) f(s) <= f(t) f(s/t) for the rational kernel, 0 < s <= t < 1",
                vec![("q", Q), ("x", ARG), ("r", range(0.01, 4.0)), ("s", range(0.001, 0.999)), ("t", range(0.001, 0.999))],
                vec!["x>=r", "s<=t"],
                SLACK_TOL,
            ),
            TuranThetaKernel => def(
                self,
                Claim,
                "f(1) f(s) <= f(t) f(s/t) for the theta kernel, delta < s <= t < 1 (s, t as fractions of [delta, 1])",
                vec![
                    ("q", Q),
                    ("x", ARG),
                    ("r", range(0.01, 4.0)),
                    ("p", range(0.0001, 0.9)),
                    ("s", range(0.001, 0.999)),
                    ("t", range(0.001, 0.999)),
                ],
                vec!["x>=r", "p<q^(2*r)", "s<=t"],
                SLACK_TOL,
            ),
            BqBinomialLower => def(
                self,
                NegativeControl,
                "lower-index strong log-concavity of (b;q)-binomials (expected to fail)",
                binom_vars(vec![("q", Q), ("b", UNIT)]),
                BINOM_ORDER.to_vec(),
                SLACK_TOL,
            ),
            BqBinomialSymmetry => def(
                self,
                NegativeControl,
                "(b;q)-binomials symmetric in k and x-k (expected to fail)",
                vec![("q", Q), ("b", UNIT), ("x", int(0, 8)), ("k", int(0, 8))],
                vec!["k<=x"],
                10.0 * rt,
            ),
        };
        d.id = self;
        d
    }
}

/// Pointwise result of a property, before normalization to a slack.
#[derive(Clone, Copy, Debug)]
pub enum Outcome<R> {
    /// `lhs >= rhs` is claimed; `aux` is an optional normalized identity residual
    /// checked alongside.
    Ineq { lhs: R, rhs: R, aux: Option<R> },
    /// Normalized non-negative residual of an identity.
    Residual(R),
    /// Whether an error sequence decreased monotonically to zero, with its last term.
    Limit { ok: bool, last: f64 },
}

/// Normalized outcome of one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Score {
    /// `(lhs - rhs) / max(|lhs|, |rhs|, 1)` for inequalities, `-residual` for
    /// identities, `0` / `-1` for passing / failing limits.
    pub slack: f64,
    /// Identity residual, or the last error of a limit sequence.
    pub residual: Option<f64>,
    /// Residual of an identity checked alongside an inequality.
    pub aux: Option<f64>,
}

impl<R: Real> Outcome<R> {
    pub fn score(&self) -> Score {
        match *self {
            Outcome::Ineq { lhs, rhs, aux } => {
                let scale = lhs.abs().max(rhs.abs()).max(R::ONE);
                Score {
                    slack: ((lhs - rhs) / scale).to_f64(),
                    residual: None,
                    aux: aux.map(|a| a.to_f64()),
                }
            }
            Outcome::Residual(r) => Score {
                slack: -r.to_f64(),
                residual: Some(r.to_f64()),
                aux: None,
            },
            Outcome::Limit { ok, last } => Score {
                slack: if ok { 0.0 } else { -1.0 },
                residual: Some(last),
                aux: None,
            },
        }
    }
}

fn ineq<R: Real>(lhs: R, rhs: R) -> Outcome<R> {
    Outcome::Ineq { lhs, rhs, aux: None }
}

/// `|lhs - rhs| / max(|lhs|, |rhs|, 1)`.
fn rel1<R: Real>(lhs: R, rhs: R) -> R {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(R::ONE)
}

/// `|lhs - rhs| / max(|terms|)`, i.e. relative to the largest term.
fn rel_terms<R: Real>(lhs: R, rhs: R, terms: &[R]) -> R {
    let scale = terms.iter().fold(R::ZERO, |m, t| m.max(t.abs()));
    if scale.to_f64() == 0.0 {
        return (lhs - rhs).abs();
    }
    (lhs - rhs).abs() / scale
}

fn ep<R: Real>(q: R, a: R, b: R, p: R) -> Result<EllipticParamSet<R>> {
    EllipticParamSet::new(q, a, b, p)
}

fn log_concave<R: Real, F>(f: F, x: R, y: R, r: R) -> Result<Outcome<R>>
where
    F: Fn(R) -> Result<R>,
{
    Ok(ineq(f(x)? * f(y)?, f(x + r)? * f(y - r)?))
}

/// Relative errors at or below this are treated as exact when judging
/// monotonicity of a limit sequence.
pub const LIMIT_FLOOR: f64 = 1e-14;

/// A limit sequence passes when its errors never increase (beyond the floor)
/// and its last step decays at least a fifth as fast as linearly in the
/// parameter. Earlier steps may still be pre-asymptotic.
fn judge_limit(errors: &[f64], params: &[f64]) -> Outcome<f64> {
    let clamp = |e: f64| if e <= LIMIT_FLOOR { 0.0 } else { e };
    let e: Vec<f64> = errors.iter().map(|&v| clamp(v)).collect();
    let n = e.len();
    let monotone = e.windows(2).all(|w| w[1] <= w[0]);
    let rate_bound = 5.0 * e[n - 2] * params[n - 1] / params[n - 2];
    let ok = monotone && e[n - 1].is_finite() && e[n - 1] <= rate_bound;
    Outcome::Limit {
        ok,
        last: errors[n - 1],
    }
}

fn relerr<R: Real>(value: R, target: R) -> f64 {
    let t = target.abs().to_f64();
    let d = (value - target).abs().to_f64();
    if t == 0.0 {
        d
    } else {
        d / t
    }
}

fn limit_outcome<R: Real>(errors: Vec<Vec<f64>>, params: &[f64]) -> Outcome<R> {
    let mut ok = true;
    let mut last = 0.0f64;
    for seq in &errors {
        if let Outcome::Limit { ok: o, last: l } = judge_limit(seq, params) {
            ok &= o;
            last = last.max(l);
        }
    }
    Outcome::Limit { ok, last }
}

/// `u = delta + t (lambda - delta)` for a theta kernel.
fn kernel_point<R: Real>(k: &ThetaKernel<R>, t: R) -> R {
    k.delta() + t * (k.lambda() - k.delta())
}

fn as_u32<R: Real>(v: R) -> u32 {
    v.to_f64().round().max(0.0) as u32
}

/// Evaluates property `id` at the variable values `v` (ordered as in its
/// definition).
pub fn evaluate<R: Real>(id: PropertyId, v: &[R], pol: &PrecisionPolicy) -> Result<Outcome<R>> {
    use PropertyId::*;
    let two = R::from_f64(2.0);
    Ok(match id {
        Prop1Factor => {
            let (nu, q, x, y, r) = (v[0], v[1], v[2], v[3], v[4]);
            let f = |z: R| Ok(R::ONE - nu * qpow(q, z));
            log_concave(f, x, y, r)?
        }
        AqNumbers => {
            let (q, a, x, y, r) = (v[0], v[1], v[2], v[3], v[4]);
            log_concave(|z| aq_number(z, a, q), x, y, r)?
        }
        BqNumbers => {
            let (q, b, x, y, r) = (v[0], v[1], v[2], v[3], v[4]);
            let f = |z| bq_number(z, b, q);
            let (lhs, rhs) = (f(x)? * f(y)?, f(x + r)? * f(y - r)?);
            let closed = bq_difference(q, b, x, y, r)?;
            let aux = rel_terms(lhs - rhs, closed, &[lhs, rhs, R::ONE]);
            Outcome::Ineq {
                lhs,
                rhs,
                aux: Some(aux),
            }
        }
        AbqShifted => {
            let (q, a, b, x, y, r) = (v[0], v[1], v[2], v[3], v[4], v[5]);
            let p = ParamSet::new(q, a, b)?;
            let s = p.shifted(r);
            let lhs = abq_number(x, &s)? * abq_number(y, &p)?;
            let rhs = abq_number(x + r, &p)? * abq_number(y - r, &s)?;
            let diff = abq_number(r, &p)? * abq_weight(y - r, &s)? * abq_number(x - y + r, &p.shifted(y))?;
            Outcome::Ineq {
                lhs,
                rhs,
                aux: Some(rel_terms(lhs - rhs, diff, &[lhs, rhs, diff])),
            }
        }
        AbqDirect => {
            let (q, a, b, x, y, r) = (v[0], v[1], v[2], v[3], v[4], v[5]);
            let p = ParamSet::new(q, a, b)?;
            log_concave(|z| abq_number(z, &p), x, y, r)?
        }
        ContBinomial => {
            let (x, y, k, l, r) = (v[0], v[1], v[2], v[3], v[4]);
            ineq(
                continuous_binomial(x, k)? * continuous_binomial(y, l)?,
                continuous_binomial(x, k + r)? * continuous_binomial(y, l - r)?,
            )
        }
        AqBinomialLower => {
            let (q, a, x, y, k, l, r) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
            let c = |x, k| aq_binomial(x, k, a, q, pol);
            ineq(c(x, k)? * c(y, l)?, c(x, k + r)? * c(y, l - r)?)
        }
        BqBinomialLower => {
            let (q, b, x, y, k, l, r) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
            let c = |x, k| bq_binomial(x, k, b, q, pol);
            ineq(c(x, k)? * c(y, l)?, c(x, k + r)? * c(y, l - r)?)
        }
        AbqBinomialUpper => {
            let (q, a, b, k, y, n) = (v[0], v[1], v[2], as_u32(v[3]), v[4], v[5]);
            let p = ParamSet::new(q, a, b)?;
            let x = y + n;
            let c = |z| abq_binomial_finite(z, k, &p);
            ineq(c(x)? * c(y)?, c(x + R::ONE)? * c(y - R::ONE)?)
        }
        EllShifted => {
            let (q, p, a, b, x, y, r) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
            let e = ep(q, a, b, p)?;
            let s = e.shifted(r);
            let n = |z, e: &EllipticParamSet<R>| elliptic_number(z, e, pol);
            let lhs = n(x, &s)? * n(y, &e)?;
            let rhs = n(x + r, &e)? * n(y - r, &s)?;
            let diff = n(r, &e)? * elliptic_weight(y - r, &s, pol)? * n(x - y + r, &e.shifted(y))?;
            Outcome::Ineq {
                lhs,
                rhs,
                aux: Some(rel_terms(lhs - rhs, diff, &[lhs, rhs, diff])),
            }
        }
        EllDirect => {
            let (q, p, a, b, x, y, r) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
            let e = ep(q, a, b, p)?;
            log_concave(|z| elliptic_number(z, &e, pol), x, y, r)?
        }
        EllBinomialUpper => {
            let (q, p, a, b, k, y, n) = (v[0], v[1], v[2], v[3], as_u32(v[4]), v[5], v[6]);
            let e = ep(q, a, b, p)?;
            let x = y + n;
            let c = |z| elliptic_binomial(z, k, &e, pol);
            ineq(c(x)? * c(y)?, c(x + R::ONE)? * c(y - R::ONE)?)
        }
        ThetaInversion => {
            let (x, p) = (v[0], Nome::new(v[1])?);
            let lhs = theta(x, p, pol)?;
            let rhs = -(x * theta(R::ONE / x, p, pol)?);
            Outcome::Residual((lhs - rhs).abs() / lhs.abs().max(R::ONE))
        }
        ThetaQuasiPeriodicity => {
            let (x, p) = (v[0], Nome::new(v[1])?);
            let t = theta(x, p, pol)?;
            let lhs = theta(p.value() * x, p, pol)?;
            let rhs = -(t / x);
            Outcome::Residual((lhs - rhs).abs() / t.abs().max(R::ONE))
        }
        ThetaAddition => {
            let (x, y, u, t, p) = (v[0], v[1], v[2], v[3], Nome::new(v[4])?);
            let th = |args: [R; 4]| -> Result<R> {
                args.iter()
                    .try_fold(R::ONE, |acc, &z| Ok(acc * theta(z, p, pol)?))
            };
            let a = th([x * y, x / y, u * t, u / t])?;
            let b = th([x * t, x / t, u * y, u / y])?;
            let c = u / y * th([y * t, y / t, x * u, x / u])?;
            Outcome::Residual(rel_terms(a - b, c, &[a, b, c]))
        }
        SigmaAddition => {
            let (x, y, u, t) = (v[0], v[1], v[2], v[3]);
            let ctx = SigmaContext::new(Nome::new(v[4])?, pol)?;
            let s = |z| ctx.sigma(z);
            let a = s(x + y)? * s(x - y)? * s(u + t)? * s(u - t)?;
            let b = s(x + t)? * s(x - t)? * s(u + y)? * s(u - y)?;
            let c = s(y + t)? * s(y - t)? * s(x + u)? * s(x - u)?;
            Outcome::Residual(rel_terms(a - b, c, &[a, b, c]))
        }
        SigmaPrimeAtZero => {
            let ctx = SigmaContext::new(Nome::new(v[0])?, pol)?;
            let h = R::from_f64(1e-3);
            let d = crate::diff::richardson(|t| ctx.sigma(t), R::ZERO, h)?;
            Outcome::Residual((d - R::ONE).abs())
        }
        ZetaDifference => {
            let (x, y, t) = (v[0], v[1], v[2]);
            let ctx = SigmaContext::new(Nome::new(v[3])?, pol)?;
            let z = |w| ctx.zeta_w(w);
            let s = |w| ctx.sigma(w);
            let lhs = z(x + y)? + z(x - y)? - z(x + t)? - z(x - t)?;
            let den = s(x + y)? * s(x - y)? * s(x + t)? * s(x - t)?;
            let rhs = s(two * x)? * s(y + t)? * s(y - t)? / nonzero(den)?;
            Outcome::Residual(rel1(lhs, rhs))
        }
        ZetaDoubling => {
            let (u, w) = (v[0], v[1]);
            let ctx = SigmaContext::new(Nome::new(v[2])?, pol)?;
            let z = |t| ctx.zeta_w(t);
            let s = |t| ctx.sigma(t);
            let lhs = z(two * u)? + z(two * w)? - two * z(u + w)?;
            let suv = s(u + w)?;
            let smv = s(u - w)?;
            let den = s(two * u)? * s(two * w)? * suv * suv;
            let rhs = s(two * (u + w))? * smv * smv / nonzero(den)?;
            Outcome::Residual(rel1(lhs, rhs))
        }
        WpRelation => {
            let (u, w) = (v[0], v[1]);
            let ctx = SigmaContext::new(Nome::new(v[2])?, pol)?;
            let lhs = ctx.wp(w)? - ctx.wp(u)?;
            let rhs = ctx.wp_relation_rhs(u, w)?;
            Outcome::Residual(rel1(lhs, rhs))
        }
        AbqAddition => {
            let (q, a, b, x, y) = (v[0], v[1], v[2], v[3], v[4]);
            let p = ParamSet::new(q, a, b)?;
            let t1 = abq_number(x, &p)?;
            let t2 = abq_weight(x, &p)? * abq_number(y - x, &p.shifted(x))?;
            let rhs = abq_number(y, &p)?;
            Outcome::Residual(rel_terms(t1 + t2, rhs, &[t1, t2, rhs]))
        }
        AbqNegativeArgument => {
            let (q, a, b, x) = (v[0], v[1], v[2], v[3]);
            let p = ParamSet::new(q, a, b)?;
            Outcome::Residual(rel1(abq_number(x, &p)?, abq_number_negative(x, &p)?))
        }
        BqDifferenceFormula => {
            let (q, b, x, y, r) = (v[0], v[1], v[2], v[3], v[4]);
            let f = |z| bq_number(z, b, q);
            let (lhs, rhs) = (f(x)? * f(y)?, f(x + r)? * f(y - r)?);
            let closed = bq_difference(q, b, x, y, r)?;
            Outcome::Residual(rel_terms(lhs - rhs, closed, &[lhs, rhs, R::ONE]))
        }
        EllipticAddition => {
            let (q, p, a, b, x, y) = (v[0], v[1], v[2], v[3], v[4], v[5]);
            let e = ep(q, a, b, p)?;
            let t1 = elliptic_number(x, &e, pol)?;
            let t2 = elliptic_weight(x, &e, pol)? * elliptic_number(y - x, &e.shifted(x), pol)?;
            let rhs = elliptic_number(y, &e, pol)?;
            Outcome::Residual(rel_terms(t1 + t2, rhs, &[t1, t2, rhs]))
        }
        BinomialDualForms => {
            let (q, a, b, k, n) = (v[0], v[1], v[2], v[3], v[4]);
            let p = ParamSet::new(q, a, b)?;
            let x = k + n;
            let finite = abq_binomial_finite(x, as_u32(k), &p)?;
            let ratio = abq_binomial_ratio(x, k, &p, pol)?;
            Outcome::Residual(rel1(finite, ratio))
        }
        BinomialK1Reductions => {
            let (q, pn, a, b, x) = (v[0], v[1], v[2], v[3], v[4]);
            let p = ParamSet::new(q, a, b)?;
            let p_down = ParamSet::new(q, a, b / q)?;
            let r1 = rel1(abq_binomial(x, R::ONE, &p_down, pol)?, abq_number(x, &p)?);
            let r2 = rel1(aq_binomial(x, R::ONE, a, q, pol)?, aq_number(x, a, q)?);
            let r3 = rel1(bq_binomial(x, R::ONE, b / q, q, pol)?, bq_number(x, b, q)?);
            let e = ep(q, a, b, pn)?;
            let r4 = rel1(
                elliptic_binomial(x, 1, &e.with_b(b / q), pol)?,
                elliptic_number(x, &e, pol)?,
            );
            Outcome::Residual(r1.max(r2).max(r3).max(r4))
        }
        AqBinomialSymmetry => {
            let (q, a, x, k) = (v[0], v[1], v[2], v[3]);
            Outcome::Residual(rel1(
                aq_binomial(x, k, a, q, pol)?,
                aq_binomial(x, x - k, a, q, pol)?,
            ))
        }
        BqBinomialSymmetry => {
            let (q, b, x, k) = (v[0], v[1], v[2], v[3]);
            Outcome::Residual(rel1(
                bq_binomial(x, k, b, q, pol)?,
                bq_binomial(x, x - k, b, q, pol)?,
            ))
        }
        ZeroParameterSpecializations => {
            let (q, a, b, x, k) = (v[0], v[1], v[2], v[3], v[4]);
            let r1 = rel1(bq_number(x, R::ZERO, q)?, q_number(x, q)?);
            let r2 = rel1(aq_number(x, R::ZERO, q)?, q_number(x, R::ONE / q)?);
            let xk = x + k;
            let r3 = rel1(bq_binomial(xk, k, R::ZERO, q, pol)?, q_binomial(xk, k, q, pol)?);
            let p = ParamSet::new(q, a, b)?;
            let e = ep(q, a, b, R::ZERO)?;
            let r4 = rel1(elliptic_number(x, &e, pol)?, abq_number(x, &p)?);
            let r5 = rel1(elliptic_weight(x, &e, pol)?, abq_weight(x, &p)?);
            let r6 = rel1(
                elliptic_binomial(xk, as_u32(k), &e, pol)?,
                abq_binomial_finite(xk, as_u32(k), &p)?,
            );
            Outcome::Residual(r1.max(r2).max(r3).max(r4).max(r5).max(r6))
        }
        FKernelDerivative => {
            let (q, x, r, u) = (v[0], v[1], v[2], v[3]);
            let spec = KernelSpec::new(x, r, q)?;
            let h = R::from_f64(pol.fd_step);
            let fd = central(|t| spec.f(t), u, h)?;
            Outcome::Residual(rel1(spec.d1(u)?, fd))
        }
        ThetaKernelDerivative => {
            let (q, x, r, p, t) = (v[0], v[1], v[2], v[3], v[4]);
            let k = ThetaKernel::new(x, r, q, Nome::new(p)?, pol)?;
            let u = kernel_point(&k, t);
            let gap = (u - k.delta()).min(k.lambda() - u);
            let h = R::from_f64(pol.fd_step) * gap.min(R::ONE);
            let fd = k.d1_finite_difference(u, h)?;
            Outcome::Residual(rel1(k.d1_closed(u)?, fd))
        }
        LimitAbqBToZero => {
            let (q, a, x) = (v[0], v[1], v[2]);
            let target = aq_number(x, a, q)?;
            let params: Vec<f64> = (2..=8).map(|m| 10f64.powi(-m)).collect();
            let mut errs = Vec::new();
            for &b in &params {
                let p = ParamSet::new(q, a, R::from_f64(b))?;
                errs.push(relerr(abq_number(x, &p)?, target));
            }
            limit_outcome(vec![errs], &params)
        }
        LimitAbqAToZero => {
            let (q, b, x) = (v[0], v[1], v[2]);
            let target = bq_number(x, b, q)?;
            let params: Vec<f64> = (2..=8).map(|m| 10f64.powi(-m)).collect();
            let mut errs = Vec::new();
            for &a in &params {
                let p = ParamSet::new(q, R::from_f64(a), b)?;
                errs.push(relerr(abq_number(x, &p)?, target));
            }
            limit_outcome(vec![errs], &params)
        }
        LimitEllipticPToZero => {
            let (q, a, b, x, k) = (v[0], v[1], v[2], v[3], as_u32(v[4]));
            let base = ParamSet::new(q, a, b)?;
            let xk = x + R::from_f64(k as f64);
            let targets = [
                abq_number(x, &base)?,
                abq_weight(x, &base)?,
                abq_binomial_finite(xk, k, &base)?,
            ];
            let params = [1e-3, 1e-5, 1e-7];
            let mut seqs = vec![Vec::new(), Vec::new(), Vec::new()];
            for &pv in &params {
                let e = ep(q, a, b, R::from_f64(pv))?;
                seqs[0].push(relerr(elliptic_number(x, &e, pol)?, targets[0]));
                seqs[1].push(relerr(elliptic_weight(x, &e, pol)?, targets[1]));
                seqs[2].push(relerr(elliptic_binomial(xk, k, &e, pol)?, targets[2]));
            }
            limit_outcome(seqs, &params)
        }
        LimitBinomialChain => {
            let (q, a, b, k, n) = (v[0], v[1], v[2], v[3], v[4]);
            let x = k + n;
            let bq_target = bq_binomial(x, k, b, q, pol)?;
            let q_target = q_binomial(x, k, q, pol)?;
            let params: Vec<f64> = (2..=8).map(|m| 10f64.powi(-m)).collect();
            let (mut e1, mut e2) = (Vec::new(), Vec::new());
            for &s in &params {
                let sm = R::from_f64(s);
                let p = ParamSet::new(q, sm, b)?;
                e1.push(relerr(abq_binomial(x, k, &p, pol)?, bq_target));
                e2.push(relerr(bq_binomial(x, k, sm, q, pol)?, q_target));
            }
            let _ = a;
            limit_outcome(vec![e1, e2], &params)
        }
        FKernelD1Negative => {
            let (q, x, r, u) = (v[0], v[1], v[2], v[3]);
            ineq(R::ZERO, KernelSpec::new(x, r, q)?.d1(u)?)
        }
        FKernelD2Negative => {
            let (q, x, r, u) = (v[0], v[1], v[2], v[3]);
            ineq(R::ZERO, KernelSpec::new(x, r, q)?.d2(u)?)
        }
        ThetaKernelD1Negative => {
            let (q, x, r, p, t) = (v[0], v[1], v[2], v[3], v[4]);
            let k = ThetaKernel::new(x, r, q, Nome::new(p)?, pol)?;
            ineq(R::ZERO, k.d1_closed(kernel_point(&k, t))?)
        }
        ThetaKernelD2Negative => {
            let (q, x, r, p, t) = (v[0], v[1], v[2], v[3], v[4]);
            let k = ThetaKernel::new(x, r, q, Nome::new(p)?, pol)?;
            ineq(R::ZERO, k.d2(kernel_point(&k, t))?)
        }
        ThetaKernelTermwise => {
            let (q, x, r, p, t, j) = (v[0], v[1], v[2], v[3], v[4], as_u32(v[5]));
            let k = ThetaKernel::new(x, r, q, Nome::new(p)?, pol)?;
            let u = kernel_point(&k, t);
            let (l1, l2, r1, r2) = termwise_log_derivatives(j, u, x, q, p);
            ineq(l1 + l2, r1 + r2)
        }
        TuranFKernel => {
            let (q, x, r, s, t) = (v[0], v[1], v[2], v[3], v[4]);
            let spec = KernelSpec::new(x, r, q)?;
            ineq(R::ONE, turan_ratio(|u| spec.f(u), R::ONE, s, t)?)
        }
        TuranThetaKernel => {
            let (q, x, r, p, s, t) = (v[0], v[1], v[2], v[3], v[4], v[5]);
            let k = ThetaKernel::new(x, r, q, Nome::new(p)?, pol)?;
            let delta = k.delta();
            if delta.to_f64() >= 1.0 {
                return Err(Error::domain("turan_theta_kernel", "delta >= 1"));
            }
            let at = |f: R| delta + f * (R::ONE - delta);
            ineq(R::ONE, turan_ratio(|u| k.f(u), R::ONE, at(s), at(t))?)
        }
    })
}

fn nonzero<R: Real>(v: R) -> Result<R> {
    if v.to_f64() == 0.0 {
        Err(Error::pole("sigma quotient", "vanishing denominator"))
    } else {
        Ok(v)
    }
}

/// Closed form of `[x][y] - [x+r][y-r]` for the (b;q)-numbers.
fn bq_difference<R: Real>(q: R, b: R, x: R, y: R, r: R) -> Result<R> {
    let one = R::ONE;
    let qp = |z: R| qpow(q, z);
    let num = (one - qp(r))
        * (one - qp(x - y + r))
        * (one - b)
        * (one - b * q)
        * (one - b * q)
        * (one - b * qp(x + y));
    let den = (one - q)
        * (one - q)
        * (one - b * qp(x))
        * (one - b * qp(x + r))
        * (one - b * qp(y))
        * (one - b * qp(y - r));
    Ok(num / nonzero(den)? * qp(y - r))
}
