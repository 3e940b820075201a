//! Closed-form analysis utilities: the MinHash concentration probability,
//! the conditional set-operation epsilon derived from it, and the
//! usefulness bound of the randomized step selection.

use crate::error::{Error, Result};

/// Inputs of the concentration probability: how likely the K-function
/// estimate of a pair with true similarity `sigma` lands in
/// `[sigma - theta, sigma + theta]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxQuery {
    pub k: usize,
    pub sigma: f64,
    pub theta: f64,
}

impl ApproxQuery {
    pub fn new(k: usize, sigma: f64, theta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("K must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&sigma) {
            return Err(Error::Parameter(format!("sigma must be in [0,1], got {sigma}")));
        }
        if theta < 0.0 || !theta.is_finite() {
            return Err(Error::Parameter(format!("theta must be >= 0, got {theta}")));
        }
        Ok(Self { k, sigma, theta })
    }
}

/// Inputs of the conditional DPSO epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpsoQuery {
    pub k: usize,
    pub sigma: f64,
    pub sigma_prime: f64,
    pub theta: f64,
    /// Common profile cardinality; neighbor pairs satisfy
    /// |sigma - sigma_prime| <= 1/n.
    pub n: usize,
}

impl DpsoQuery {
    pub fn new(k: usize, sigma: f64, sigma_prime: f64, theta: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        if (sigma - sigma_prime).abs() > 1.0 / n as f64 + 1e-12 {
            return Err(Error::Parameter(format!(
                "|sigma - sigma_prime| must be <= 1/n, got |{sigma} - {sigma_prime}| > 1/{n}"
            )));
        }
        // Range checks are delegated to the two ApproxQuery constructions.
        ApproxQuery::new(k, sigma, theta)?;
        ApproxQuery::new(k, sigma_prime, theta + 1.0 / n as f64)?;
        Ok(Self {
            k,
            sigma,
            sigma_prime,
            theta,
            n,
        })
    }
}

/// Inputs of the usefulness bound check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsefulnessQuery {
    pub p_t: f64,
    pub alpha: f64,
    pub delta: f64,
}

impl UsefulnessQuery {
    pub fn new(p_t: f64, alpha: f64, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_t) {
            return Err(Error::Parameter(format!("P_t must be in [0,1], got {p_t}")));
        }
        if alpha <= 0.0 || delta <= 0.0 || alpha.is_nan() || delta.is_nan() {
            return Err(Error::Parameter(
                "alpha and delta must be positive".into(),
            ));
        }
        Ok(Self { p_t, alpha, delta })
    }
}

/// Integer summation bounds for the concentration probability: `t` runs
/// over `ceil(K(sigma-theta)) ..= floor(K(sigma+theta))`, clipped to
/// `[0, K]`. Products within 1e-9 of an integer snap to it so that
/// boundaries like `K(sigma+theta) = 7` are not lost to floating-point
/// representation error (0.6 + 0.1 rounds below 0.7 in binary).
pub fn t_bounds(k: usize, sigma: f64, theta: f64) -> (usize, usize) {
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() < 1e-9 {
            r
        } else {
            x
        }
    };
    let lo = snap(k as f64 * (sigma - theta)).ceil().max(0.0) as usize;
    let hi_f = snap(k as f64 * (sigma + theta)).floor();
    let hi = if hi_f < 0.0 {
        0
    } else {
        (hi_f as usize).min(k)
    };
    (lo, hi)
}

/// Compensated accumulation of ln(i); cheap at the sizes used here.
fn ln_factorial(n: usize) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 2..=n {
        let term = (i as f64).ln();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Exact up to C(56, 28); the stepwise division keeps every intermediate
/// an integer.
fn binom_exact_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (n - k + i) as u128 / i as u128;
    }
    c
}

/// Concentration probability of the MinHash estimate (a binomial interval
/// sum over the matching-position count). Terms are exact-integer binomial
/// products up to K = 56 (where C(K, t) still fits 2^53) and log-space
/// beyond, with compensated summation either way.
pub fn approx_probability(q: &ApproxQuery) -> f64 {
    let (lo, hi) = t_bounds(q.k, q.sigma, q.theta);
    if lo > hi {
        return 0.0;
    }
    let k = q.k;
    let sigma = q.sigma;
    // The whole pmf sums to one; shortcut keeps full-support queries exact.
    if lo == 0 && hi == k {
        return 1.0;
    }
    // Degenerate success probabilities put all mass on one endpoint.
    if sigma == 0.0 {
        return if lo == 0 { 1.0 } else { 0.0 };
    }
    if sigma == 1.0 {
        return if hi == k { 1.0 } else { 0.0 };
    }
    let ln_sigma = sigma.ln();
    let ln_one_minus = (1.0 - sigma).ln();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in lo..=hi {
        let term = if k <= 56 {
            binom_exact_u128(k, t) as f64
                * sigma.powi(t as i32)
                * (1.0 - sigma).powi((k - t) as i32)
        } else {
            let ln_c = ln_factorial(k) - ln_factorial(t) - ln_factorial(k - t);
            (ln_c + t as f64 * ln_sigma + (k - t) as f64 * ln_one_minus).exp()
        };
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum.min(1.0)
}

/// Conditional DPSO epsilon:
/// `ln(p(K, sigma, theta) / p(K, sigma', theta + 1/n))`.
pub fn conditional_dpso_epsilon(q: &DpsoQuery) -> Result<f64> {
    let numer = approx_probability(&ApproxQuery {
        k: q.k,
        sigma: q.sigma,
        theta: q.theta,
    });
    let denom = approx_probability(&ApproxQuery {
        k: q.k,
        sigma: q.sigma_prime,
        theta: q.theta + 1.0 / q.n as f64,
    });
    if denom == 0.0 {
        return Err(Error::UndefinedEpsilon);
    }
    Ok((numer / denom).ln())
}

/// Result of the usefulness bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsefulnessOutcome {
    /// `1 - (3/2) P_t + P_t^2`.
    pub lhs: f64,
    /// Whether `lhs <= delta * alpha`.
    pub satisfied: bool,
}

/// Evaluate the usefulness condition `1 - (3/2) P_t + P_t^2 <= delta*alpha`.
pub fn usefulness_bound(q: &UsefulnessQuery) -> UsefulnessOutcome {
    let lhs = 1.0 - 1.5 * q.p_t + q.p_t * q.p_t;
    UsefulnessOutcome {
        lhs,
        satisfied: lhs <= q.delta * q.alpha,
    }
}
