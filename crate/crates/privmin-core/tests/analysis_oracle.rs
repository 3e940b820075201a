//! Exact-rational oracle for the binomial interval probability and the
//! DPSO epsilon built from it. The oracle converts the f64 inputs to
//! rationals exactly and sums the binomial terms without rounding, so any
//! disagreement beyond 1e-12 is a defect in the log/f64 implementation.

use num::{BigInt, BigRational, FromPrimitive, ToPrimitive};
use privmin_core::analysis::t_bounds;
use privmin_core::{approx_probability, conditional_dpso_epsilon, ApproxQuery, DpsoQuery};

fn binom_bigint(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k);
    let mut c = BigInt::from(1);
    for i in 1..=k {
        c = c * BigInt::from(n - k + i) / BigInt::from(i);
    }
    c
}

fn rational_pow(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::from_integer(1.into());
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn oracle_approx(k: usize, sigma: f64, theta: f64) -> f64 {
    let (lo, hi) = t_bounds(k, sigma, theta);
    if lo > hi {
        return 0.0;
    }
    let s = BigRational::from_f64(sigma).unwrap();
    let one = BigRational::from_integer(1.into());
    let oms = &one - &s;
    let mut sum = BigRational::from_integer(0.into());
    for t in lo..=hi {
        sum += BigRational::from_integer(binom_bigint(k, t))
            * rational_pow(&s, t)
            * rational_pow(&oms, k - t);
    }
    sum.to_f64().unwrap()
}

#[test]
fn approx_probability_matches_rational_oracle() {
    for k in 1..=20usize {
        for s in 1..=9 {
            let sigma = s as f64 / 10.0;
            for t in 0..=10 {
                let theta = t as f64 * 0.05;
                let got = approx_probability(&ApproxQuery::new(k, sigma, theta).unwrap());
                let want = oracle_approx(k, sigma, theta);
                assert!(
                    (got - want).abs() < 1e-12,
                    "k={k} sigma={sigma} theta={theta}: {got} vs oracle {want}"
                );
            }
        }
    }
}

#[test]
fn dpso_epsilon_matches_rational_oracle() {
    let q = DpsoQuery::new(10, 0.6, 0.5, 0.1, 10).unwrap();
    let got = conditional_dpso_epsilon(&q).unwrap();
    let want = (oracle_approx(10, 0.6, 0.1) / oracle_approx(10, 0.5, 0.2)).ln();
    assert!(
        (got - want).abs() < 1e-12,
        "dpso epsilon {got} vs oracle {want}"
    );
    // The numerator interval is narrower; with these parameters the ratio
    // must stay below one.
    assert!(got < 0.0);
}
