//! Regularized incomplete gamma and beta functions.
//!
//! `reg_upper_gamma(n, mu)` is Γ(n, μ)/(n−1)! for integer n, which equals the
//! Poisson CDF P(Y ≤ n−1) at mean μ — the form the multi-bit detector needs.
//! `reg_inc_beta(x, a, b)` is I_x(a, b), which yields binomial CDFs for the
//! single-bit detector. Both use a log-space prefactor so far-tail values
//! keep full relative accuracy down to the underflow limit.

use super::gamma::ln_gamma;
use super::SpecialError;

const MAX_ITER: usize = 4000;

/// Regularized upper incomplete gamma Q(n, μ) = Γ(n, μ)/(n−1)! for integer
/// n ≥ 1 and μ ≥ 0.
///
/// Equals Σ_{j=0}^{n−1} e^{−μ} μ^j / j!, the CDF P(Y ≤ n−1) of a Poisson(μ)
/// variable. Non-integer first arguments are rejected: the detector only
/// ever uses floored thresholds.
pub fn reg_upper_gamma(n: u64, mu: f64) -> Result<f64, SpecialError> {
    if n == 0 {
        return Err(SpecialError::Domain("reg_upper_gamma requires n >= 1".into()));
    }
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(SpecialError::Domain(format!(
            "reg_upper_gamma requires mu >= 0, got {mu}"
        )));
    }
    if mu == 0.0 {
        return Ok(1.0);
    }
    let a = n as f64;
    // exp(−μ + n ln μ − ln Γ(n)); may underflow to 0 in the extreme tail,
    // which is the correct limit for Q there.
    let log_prefactor = -mu + a * mu.ln() - ln_gamma(a);
    if mu < a + 1.0 {
        let p = lower_gamma_series(a, mu, log_prefactor)?;
        Ok((1.0 - p).clamp(0.0, 1.0))
    } else {
        upper_gamma_cf(a, mu, log_prefactor)
    }
}

/// Series for P(a, x) = 1 − Q(a, x), convergent for x < a + 1.
fn lower_gamma_series(a: f64, x: f64, log_prefactor: f64) -> Result<f64, SpecialError> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok((log_prefactor + sum.ln()).exp());
        }
    }
    Err(SpecialError::NoConvergence)
}

/// Modified Lentz continued fraction for Q(a, x), convergent for x ≥ a + 1.
fn upper_gamma_cf(a: f64, x: f64, log_prefactor: f64) -> Result<f64, SpecialError> {
    const TINY: f64 = 1e-300;
    let b0 = x + 1.0 - a;
    let mut f = if b0.abs() < TINY { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0;
    for i in 1..=MAX_ITER {
        let an = i as f64 * (a - i as f64);
        let bn = x + (2 * i + 1) as f64 - a;
        d = bn + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = bn + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok((log_prefactor - f.ln()).exp());
        }
    }
    Err(SpecialError::NoConvergence)
}

/// Regularized incomplete beta I_x(a, b) for x ∈ [0, 1], a > 0, b > 0.
///
/// Satisfies the reflection identity I_x(a, b) = 1 − I_{1−x}(b, a). For
/// integer a, b it reproduces the binomial CDF:
/// P(Bin(n, p) ≤ k) = I_{1−p}(n−k, k+1).
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(SpecialError::Domain(format!(
            "reg_inc_beta requires a, b > 0, got a={a}, b={b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(SpecialError::Domain(format!(
            "reg_inc_beta requires x in [0, 1], got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    // log of x^a (1-x)^b / (a B(a, b)); ln(1-x) via ln_1p for x near 0.
    let log_front =
        ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (-x).ln_1p() - a.ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok((log_front + beta_cf(x, a, b)?.ln()).exp().clamp(0.0, 1.0))
    } else {
        // Evaluate the complement in its convergent region.
        let log_front_c = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
            + b * (-x).ln_1p()
            + a * x.ln()
            - b.ln();
        let compl = (log_front_c + beta_cf(1.0 - x, b, a)?.ln()).exp();
        Ok((1.0 - compl).clamp(0.0, 1.0))
    }
}

/// Lentz continued fraction for the incomplete beta (Numerical-Recipes form).
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let mf = m as f64;
        let m2 = 2.0 * mf;
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(SpecialError::NoConvergence)
}
