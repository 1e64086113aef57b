//! Exact big-rational evaluation of the a,b;q-number, weight and binomial
//! coefficient and the Gaussian binomial at integer arguments.

use abqp::{abq_binomial, abq_number, abq_weight, q_binomial, ParamSet, PrecisionPolicy};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{ORACLE_POINTS, ORACLE_RELATIVE};

type Q = BigRational;

fn r(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn pow(q: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

fn f(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// `(c; q)_n`
fn poch(c: &Q, q: &Q, n: i64) -> Q {
    (0..n).fold(Q::one(), |acc, j| acc * (Q::one() - c * pow(q, j)))
}

pub fn number(x: i64, q: &Q, a: &Q, b: &Q) -> Option<Q> {
    let one = Q::one();
    let qx = pow(q, x);
    let num = (&one - &qx) * (&one - a * &qx) * (&one - b * q) * (&one - a * q / b);
    let den = (&one - q) * (&one - a * q) * (&one - b * &qx) * (&one - a * &qx / b);
    (!den.is_zero()).then(|| num / den)
}

pub fn weight(x: i64, q: &Q, a: &Q, b: &Q) -> Option<Q> {
    let one = Q::one();
    let qx = pow(q, x);
    let num = (&one - a * q * &qx * &qx) * (&one - b) * (&one - b * q) * (&one - a / b) * (&one - a * q / b);
    let den = (&one - a * q)
        * (&one - b * &qx)
        * (&one - b * q * &qx)
        * (&one - a * &qx / b)
        * (&one - a * q * &qx / b);
    (!den.is_zero()).then(|| num / den * qx)
}

/// Length-`(x-k)` product form.
pub fn binomial(x: i64, k: i64, q: &Q, a: &Q, b: &Q) -> Option<Q> {
    let n = x - k;
    let t = pow(q, k + 1);
    let num =
        poch(&t, q, n) * poch(&(a * &t), q, n) * poch(&(b * &t), q, n) * poch(&(a * pow(q, 1 - k) / b), q, n);
    let den = poch(q, q, n)
        * poch(&(a * q), q, n)
        * poch(&(b * pow(q, 1 + 2 * k)), q, n)
        * poch(&(a * q / b), q, n);
    (!den.is_zero()).then(|| num / den)
}

/// Gaussian binomial from the q-Pascal rule.
pub fn gaussian(n: i64, k: i64, q: &Q) -> Q {
    let mut row = vec![Q::one()];
    for m in 1..=n as usize {
        let mut next = vec![Q::one(); m + 1];
        for j in 1..m {
            next[j] = &row[j - 1] + pow(q, j as i64) * &row[j];
        }
        row = next;
    }
    row[k as usize].clone()
}

fn rel(got: f64, exact: &Q) -> f64 {
    let e = f(exact);
    (got - e).abs() / e.abs().max(1.0)
}

#[derive(Default)]
struct Tally {
    points: usize,
    worst: f64,
}

impl Tally {
    fn add(&mut self, got: abqp::Result<f64>, exact: &Q) {
        self.points += 1;
        let err = got.map_or(f64::INFINITY, |g| rel(g, exact));
        self.worst = self.worst.max(err);
    }
}

/// Runs the four oracle comparisons; returns pass flag and summary.
pub fn oracle() -> abqp::Result<(bool, String)> {
    let sets = [
        (r(1, 2), r(1, 4), r(1, 2)),
        (r(1, 3), r(1, 5), r(2, 3)),
        (r(2, 3), r(1, 10), r(3, 10)),
        (r(3, 4), r(1, 7), r(5, 7)),
        (r(1, 5), r(1, 2), r(9, 10)),
    ];
    let pol = PrecisionPolicy::default();
    let (mut num, mut wt, mut bin, mut gauss) = (
        Tally::default(),
        Tally::default(),
        Tally::default(),
        Tally::default(),
    );
    for (q, a, b) in &sets {
        let p = ParamSet::new(f(q), f(a), f(b))?;
        for x in 0..=8i64 {
            if let Some(v) = number(x, q, a, b) {
                num.add(abq_number(x as f64, &p), &v);
            }
            if let Some(v) = weight(x, q, a, b) {
                wt.add(abq_weight(x as f64, &p), &v);
            }
            for k in 0..=x {
                if let Some(v) = binomial(x, k, q, a, b) {
                    bin.add(abq_binomial(x as f64, k as f64, &p, &pol), &v);
                }
                gauss.add(q_binomial(x as f64, k as f64, f(q), &pol), &gaussian(x, k, q));
            }
        }
    }
    let all = [
        ("abq_number", num),
        ("abq_weight", wt),
        ("abq_binomial", bin),
        ("q_binomial", gauss),
    ];
    let pass = all
        .iter()
        .all(|(_, t)| t.points >= ORACLE_POINTS && t.worst <= ORACLE_RELATIVE);
    let parts: Vec<String> = all
        .iter()
        .map(|(n, t)| format!("{n} {:.1e} over {}", t.worst, t.points))
        .collect();
    Ok((pass, format!("worst relative error: {}", parts.join(", "))))
}
