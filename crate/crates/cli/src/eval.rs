//! `abqp eval NAME key=value ...`

use std::collections::BTreeMap;

use abqp::binomial::{abq_binomial, aq_binomial, bq_binomial, continuous_binomial, q_binomial};
use abqp::gamma::gamma;
use abqp::{
    abq_number, abq_number_negative, abq_weight, aq_number, bq_number, elliptic_binomial, elliptic_number,
    elliptic_weight, q_number, q_pochhammer, q_pochhammer_inf, quantum_number, theta, theta_pochhammer,
    EllipticParamSet, KernelSpec, Nome, ParamSet, PrecisionPolicy, SigmaContext, ThetaKernel,
};

use crate::UsageError;

type Op = fn(&Args, &PrecisionPolicy) -> abqp::Result<f64>;

/// Name, argument list, evaluator.
const OPS: &[(&str, &[&str], Op)] = &[
    ("q_number", &["x", "q"], |a, _| q_number(a.f("x"), a.f("q"))),
    ("quantum_number", &["x", "q"], |a, _| {
        quantum_number(a.f("x"), a.f("q"))
    }),
    ("aq_number", &["x", "a", "q"], |a, _| {
        aq_number(a.f("x"), a.f("a"), a.f("q"))
    }),
    ("bq_number", &["x", "b", "q"], |a, _| {
        bq_number(a.f("x"), a.f("b"), a.f("q"))
    }),
    ("abq_number", &["x", "q", "a", "b"], |a, _| {
        abq_number(a.f("x"), &a.params()?)
    }),
    ("abq_weight", &["x", "q", "a", "b"], |a, _| {
        abq_weight(a.f("x"), &a.params()?)
    }),
    ("abq_number_negative", &["x", "q", "a", "b"], |a, _| {
        abq_number_negative(a.f("x"), &a.params()?)
    }),
    ("theta", &["x", "p"], |a, pol| {
        theta(a.f("x"), Nome::new(a.f("p"))?, pol)
    }),
    ("q_pochhammer", &["a", "q", "k"], |a, pol| {
        q_pochhammer(a.f("a"), a.f("q"), a.f("k"), pol)
    }),
    ("q_pochhammer_inf", &["a", "q"], |a, pol| {
        q_pochhammer_inf(a.f("a"), a.f("q"), pol)
    }),
    ("theta_pochhammer", &["a", "q", "p", "k"], |a, pol| {
        theta_pochhammer(a.f("a"), a.f("q"), Nome::new(a.f("p"))?, a.index("k")?, pol)
    }),
    ("gamma", &["x"], |a, _| gamma(a.f("x"))),
    ("continuous_binomial", &["x", "k"], |a, _| {
        continuous_binomial(a.f("x"), a.f("k"))
    }),
    ("q_binomial", &["x", "k", "q"], |a, pol| {
        q_binomial(a.f("x"), a.f("k"), a.f("q"), pol)
    }),
    ("aq_binomial", &["x", "k", "a", "q"], |a, pol| {
        aq_binomial(a.f("x"), a.f("k"), a.f("a"), a.f("q"), pol)
    }),
    ("bq_binomial", &["x", "k", "b", "q"], |a, pol| {
        bq_binomial(a.f("x"), a.f("k"), a.f("b"), a.f("q"), pol)
    }),
    ("abq_binomial", &["x", "k", "q", "a", "b"], |a, pol| {
        abq_binomial(a.f("x"), a.f("k"), &a.params()?, pol)
    }),
    ("elliptic_number", &["x", "q", "a", "b", "p"], |a, pol| {
        elliptic_number(a.f("x"), &a.elliptic()?, pol)
    }),
    ("elliptic_weight", &["x", "q", "a", "b", "p"], |a, pol| {
        elliptic_weight(a.f("x"), &a.elliptic()?, pol)
    }),
    ("elliptic_binomial", &["x", "k", "q", "a", "b", "p"], |a, pol| {
        elliptic_binomial(a.f("x"), a.index("k")?, &a.elliptic()?, pol)
    }),
    ("sigma", &["t", "p"], |a, pol| {
        SigmaContext::new(Nome::new(a.f("p"))?, pol)?.sigma(a.f("t"))
    }),
    ("zeta", &["t", "p"], |a, pol| {
        SigmaContext::new(Nome::new(a.f("p"))?, pol)?.zeta_w(a.f("t"))
    }),
    ("wp", &["t", "p"], |a, pol| {
        SigmaContext::new(Nome::new(a.f("p"))?, pol)?.wp(a.f("t"))
    }),
    ("f_kernel", &["u", "x", "r", "q"], |a, _| a.kernel()?.f(a.f("u"))),
    ("f_kernel_d1", &["u", "x", "r", "q"], |a, _| {
        a.kernel()?.d1(a.f("u"))
    }),
    ("f_kernel_d2", &["u", "x", "r", "q"], |a, _| {
        a.kernel()?.d2(a.f("u"))
    }),
    ("theta_kernel", &["u", "x", "r", "q", "p"], |a, pol| {
        a.theta_kernel(pol)?.f(a.f("u"))
    }),
    ("theta_kernel_d1", &["u", "x", "r", "q", "p"], |a, pol| {
        a.theta_kernel(pol)?.d1_closed(a.f("u"))
    }),
    ("theta_kernel_d2", &["u", "x", "r", "q", "p"], |a, pol| {
        a.theta_kernel(pol)?.d2(a.f("u"))
    }),
];

pub struct Args(BTreeMap<String, f64>);

impl Args {
    fn f(&self, k: &str) -> f64 {
        self.0[k]
    }

    fn index(&self, k: &str) -> abqp::Result<u32> {
        let v = self.f(k);
        if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as u32)
        } else {
            Err(abqp::Error::Domain {
                what: "eval",
                detail: format!("{k} = {v} must be a non-negative integer"),
            })
        }
    }

    fn params(&self) -> abqp::Result<ParamSet> {
        ParamSet::new(self.f("q"), self.f("a"), self.f("b"))
    }

    fn elliptic(&self) -> abqp::Result<EllipticParamSet> {
        EllipticParamSet::new(self.f("q"), self.f("a"), self.f("b"), self.f("p"))
    }

    fn kernel(&self) -> abqp::Result<KernelSpec> {
        KernelSpec::new(self.f("x"), self.f("r"), self.f("q"))
    }

    fn theta_kernel(&self, pol: &PrecisionPolicy) -> abqp::Result<ThetaKernel> {
        ThetaKernel::new(
            self.f("x"),
            self.f("r"),
            self.f("q"),
            Nome::new(self.f("p"))?,
            pol,
        )
    }
}

pub fn names() -> impl Iterator<Item = (&'static str, &'static [&'static str])> {
    OPS.iter().map(|(n, a, _)| (*n, *a))
}

/// Parses `key=value` assignments against the signature of `name`.
pub fn parse_args(name: &str, assignments: &[String]) -> Result<(Op, Args), UsageError> {
    let Some((_, wanted, op)) = OPS.iter().find(|(n, _, _)| *n == name) else {
        return Err(UsageError(format!(
            "unknown operation `{name}` (see `abqp eval --list`)"
        )));
    };
    let mut map = BTreeMap::new();
    for a in assignments {
        let (k, v) = a
            .split_once('=')
            .ok_or_else(|| UsageError(format!("expected key=value, got `{a}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if !wanted.contains(&k) {
            return Err(UsageError(format!(
                "`{name}` takes {}; unexpected `{k}`",
                wanted.join(", ")
            )));
        }
        let v: f64 = v
            .parse()
            .map_err(|_| UsageError(format!("`{k}`: `{v}` is not a number")))?;
        if map.insert(k.to_string(), v).is_some() {
            return Err(UsageError(format!("`{k}` given twice")));
        }
    }
    let missing: Vec<&str> = wanted.iter().copied().filter(|k| !map.contains_key(*k)).collect();
    if !missing.is_empty() {
        return Err(UsageError(format!("`{name}` is missing {}", missing.join(", "))));
    }
    Ok((*op, Args(map)))
}

/// `%.{digits}g`: shortest of fixed / scientific, trailing zeros removed.
pub fn format_g(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}"))
    }
}
