//! Exact rational oracles for integer arguments and rational parameters.

use abqp::{abq_binomial, abq_number, abq_weight, q_binomial, Error, ParamSet, PrecisionPolicy};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

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

fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap()
}

fn close(got: f64, exact: &Q) -> bool {
    let e = to_f64(exact);
    (got - e).abs() <= 1e-12 * e.abs().max(1.0)
}

/// (c; q)_n
fn poch(c: &Q, q: &Q, n: i64) -> Q {
    (0..n).fold(Q::one(), |acc, j| acc * (Q::one() - c * pow(q, j)))
}

/// (rational q, a, b) sets; the last few leave the positivity domain.
fn param_sets() -> Vec<(Q, Q, Q)> {
    vec![
        (r(1, 2), r(1, 4), r(1, 2)),
        (r(1, 3), r(1, 5), r(2, 3)),
        (r(2, 3), r(1, 10), r(3, 10)),
        (r(3, 4), r(1, 7), r(5, 7)),
        (r(1, 5), r(1, 2), r(9, 10)),
        (r(1, 2), r(3, 4), r(1, 4)),
        (r(2, 5), r(1, 3), r(3, 2)),
    ]
}

fn params(q: &Q, a: &Q, b: &Q) -> ParamSet {
    ParamSet::new(to_f64(q), to_f64(a), to_f64(b)).unwrap()
}

fn number_exact(x: i64, q: &Q, a: &Q, b: &Q) -> Option<Q> {
    let one = Q::one();
    let qx = pow(q, x);
    let num = (&one - &qx) * (&one - a * &qx) * (&one - b * q) * (&one - a * q / b);
    let den = (&one - q) * (&one - a * q) * (&one - b * &qx) * (&one - a * &qx / b);
    (!den.is_zero()).then(|| num / den)
}

fn weight_exact(x: i64, q: &Q, a: &Q, b: &Q) -> Option<Q> {
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

/// Length-(x-k) product form.
fn binomial_exact(x: i64, k: i64, q: &Q, a: &Q, b: &Q) -> Option<Q> {
    let n = x - k;
    let qk1 = pow(q, k + 1);
    let num = poch(&qk1, q, n)
        * poch(&(a * &qk1), q, n)
        * poch(&(b * &qk1), q, n)
        * poch(&(a * pow(q, 1 - k) / b), q, n);
    let den = poch(q, q, n)
        * poch(&(a * q), q, n)
        * poch(&(b * pow(q, 1 + 2 * k)), q, n)
        * poch(&(a * q / b), q, n);
    (!den.is_zero()).then(|| num / den)
}

/// Gaussian binomial by the q-Pascal recurrence.
fn gauss(n: i64, k: i64, q: &Q) -> Q {
    if k < 0 || k > n {
        return Q::zero();
    }
    let mut row = vec![Q::one()];
    for m in 1..=n {
        let mut next = vec![Q::one(); (m + 1) as usize];
        for j in 1..m as usize {
            next[j] = &row[j - 1] + pow(q, j as i64) * &row[j];
        }
        row = next;
    }
    row[k as usize].clone()
}

#[test]
fn abq_numbers_match_exact_rationals() {
    let (mut checked, mut poles) = (0, 0);
    for (q, a, b) in param_sets() {
        let p = params(&q, &a, &b);
        for x in -3..=9 {
            let Some(exact) = number_exact(x, &q, &a, &b) else {
                assert!(matches!(abq_number(x as f64, &p), Err(Error::Pole { .. })));
                poles += 1;
                continue;
            };
            let got = abq_number(x as f64, &p).unwrap();
            assert!(
                close(got, &exact),
                "x={x} q={q} a={a} b={b}: {got} vs {}",
                to_f64(&exact)
            );
            checked += 1;
        }
    }
    assert!(checked >= 25 && poles > 0);
    // hand-checkable value
    let v = abq_number(2.0, &ParamSet::new(0.5, 0.25, 0.5).unwrap()).unwrap();
    assert!(close(v, &number_exact(2, &r(1, 2), &r(1, 4), &r(1, 2)).unwrap()));
}

#[test]
fn abq_weights_match_exact_rationals() {
    let (mut checked, mut poles) = (0, 0);
    for (q, a, b) in param_sets() {
        let p = params(&q, &a, &b);
        for x in -2..=8 {
            let Some(exact) = weight_exact(x, &q, &a, &b) else {
                assert!(matches!(abq_weight(x as f64, &p), Err(Error::Pole { .. })));
                poles += 1;
                continue;
            };
            let got = abq_weight(x as f64, &p).unwrap();
            assert!(
                close(got, &exact),
                "x={x} q={q} a={a} b={b}: {got} vs {}",
                to_f64(&exact)
            );
            checked += 1;
        }
    }
    assert!(checked >= 25 && poles > 0);
    assert_eq!(
        to_f64(&weight_exact(0, &r(1, 2), &r(1, 4), &r(1, 2)).unwrap()),
        1.0
    );
}

#[test]
fn abq_binomials_match_exact_rationals() {
    let pol = PrecisionPolicy::default();
    let mut checked = 0;
    for (q, a, b) in param_sets().into_iter().take(5) {
        let p = params(&q, &a, &b);
        for x in 0..=8 {
            for k in 0..=x {
                let exact = binomial_exact(x, k, &q, &a, &b).expect("no poles for 0 < a < 1, b < 1");
                let got = abq_binomial(x as f64, k as f64, &p, &pol).unwrap();
                assert!(
                    close(got, &exact),
                    "x={x} k={k} q={q} a={a} b={b}: {got} vs {}",
                    to_f64(&exact)
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 25);
}

#[test]
fn q_binomials_match_pascal_recurrence() {
    let pol = PrecisionPolicy::default();
    let mut checked = 0;
    for q in [r(1, 2), r(1, 3), r(2, 3), r(9, 10)] {
        for n in 0..=10 {
            for k in 0..=n {
                let exact = gauss(n, k, &q);
                let got = q_binomial(n as f64, k as f64, to_f64(&q), &pol).unwrap();
                assert!(
                    close(got, &exact),
                    "n={n} k={k} q={q}: {got} vs {}",
                    to_f64(&exact)
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 25);
}
