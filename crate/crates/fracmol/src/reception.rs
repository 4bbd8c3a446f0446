//! Receptor-space reception: survival-weighted presence probability,
//! expected observed-molecule counts, and the peak observation time.
//!
//! A passive receiver counts molecules inside a ball of radius ρ centered a
//! distance a from the transmitter. In the far field (ρ ≪ a) the presence
//! probability of one molecule with degradation rate λ is
//!
//! ```text
//! P(t | V_ρ, λ) ≈ V_ρ · ω(a, t) · e^{−λt}
//! ```
//!
//! and the expected observed count is N̄_ob(t) = N · P(t | V_ρ, λ). N̄_ob is
//! concave in t with a single interior maximum, the peak time t_p. The
//! maximizer is computed by golden-section search and then cross-checked
//! against the implicit H-function identity that t_p must satisfy (the
//! derivative condition expressed in H-function form), which serves as the
//! built-in consistency check of the whole quadrature chain.

use crate::channel::{propagator_pdf_with, ChannelError, ChannelParams};
use crate::optimize::{bracket_max_geometric, golden_max};
use crate::special::{foxh_eval, HFunctionSpec, QuadratureConfig, SpecialError};
use std::f64::consts::PI;

/// Errors from the reception layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReceptionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("no interior maximum of the expected count was found in the scan range")]
    BracketNotFound,
    #[error("peak-time consistency check failed: relative H-identity residual {residual:.3e} at t = {t:.6e} s")]
    PeakConsistency { t: f64, residual: f64 },
}

impl From<SpecialError> for ReceptionError {
    fn from(e: SpecialError) -> Self {
        ReceptionError::Channel(ChannelError::Special(e))
    }
}

/// One transmitter–receiver link: channel physics plus link geometry,
/// molecule budget, and slot timing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    channel: ChannelParams,
    distance: f64,
    receptor_radius: f64,
    degradation_rate: f64,
    molecules_per_one: u64,
    bit_interval: f64,
}

impl LinkConfig {
    /// Validated constructor. The far-field form of the presence probability
    /// needs ρ ≪ a, enforced as ρ ≤ a/5. `degradation_rate` = 0 encodes
    /// immortal molecules.
    pub fn new(
        channel: ChannelParams,
        distance: f64,
        receptor_radius: f64,
        degradation_rate: f64,
        molecules_per_one: u64,
        bit_interval: f64,
    ) -> Result<Self, ReceptionError> {
        if !(distance > 0.0) || !distance.is_finite() {
            return Err(ReceptionError::Domain(format!(
                "distance must be positive, got {distance}"
            )));
        }
        if !(receptor_radius > 0.0) || receptor_radius > distance / 5.0 {
            return Err(ReceptionError::Domain(format!(
                "receptor radius must satisfy 0 < rho <= a/5 (far-field approximation), got rho={receptor_radius}, a={distance}"
            )));
        }
        if !(degradation_rate >= 0.0) || !degradation_rate.is_finite() {
            return Err(ReceptionError::Domain(format!(
                "degradation rate must be nonnegative, got {degradation_rate}"
            )));
        }
        if molecules_per_one == 0 {
            return Err(ReceptionError::Domain(
                "molecules_per_one must be positive".into(),
            ));
        }
        if !(bit_interval > 0.0) || !bit_interval.is_finite() {
            return Err(ReceptionError::Domain(format!(
                "bit interval must be positive, got {bit_interval}"
            )));
        }
        Ok(Self {
            channel,
            distance,
            receptor_radius,
            degradation_rate,
            molecules_per_one,
            bit_interval,
        })
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.channel
    }
    pub fn distance(&self) -> f64 {
        self.distance
    }
    pub fn receptor_radius(&self) -> f64 {
        self.receptor_radius
    }
    pub fn degradation_rate(&self) -> f64 {
        self.degradation_rate
    }
    pub fn molecules_per_one(&self) -> u64 {
        self.molecules_per_one
    }
    pub fn bit_interval(&self) -> f64 {
        self.bit_interval
    }

    /// Copy with a different degradation rate (sweep helper).
    pub fn with_degradation_rate(mut self, lambda: f64) -> Result<Self, ReceptionError> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(ReceptionError::Domain(format!(
                "degradation rate must be nonnegative, got {lambda}"
            )));
        }
        self.degradation_rate = lambda;
        Ok(self)
    }

    /// Copy with a different molecule budget (sweep helper).
    pub fn with_molecules(mut self, n: u64) -> Result<Self, ReceptionError> {
        if n == 0 {
            return Err(ReceptionError::Domain(
                "molecules_per_one must be positive".into(),
            ));
        }
        self.molecules_per_one = n;
        Ok(self)
    }
}

/// Receptor-space volume: 2ρ, πρ², or (4/3)πρ³ for dim = 1, 2, 3.
pub fn receptor_volume(dim: u32, rho: f64) -> Result<f64, ReceptionError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(ReceptionError::Domain(format!(
            "receptor radius must be positive, got {rho}"
        )));
    }
    match dim {
        1 => Ok(2.0 * rho),
        2 => Ok(PI * rho * rho),
        3 => Ok(4.0 / 3.0 * PI * rho.powi(3)),
        _ => Err(ReceptionError::Domain(format!(
            "receptor volume only defined for dim 1..3, got {dim}"
        ))),
    }
}

/// Presence probability together with the far-field clamp flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresenceSample {
    /// P(t | V_ρ, λ), clamped into [0, 1].
    pub value: f64,
    /// True when the unclamped far-field value exceeded 1, i.e. the
    /// geometry abuses the ρ ≪ a approximation at this t.
    pub clamped: bool,
}

/// P(t | V_ρ, λ) with the clamp diagnostic.
pub fn presence_probability_detail(
    cfg: &LinkConfig,
    t: f64,
) -> Result<PresenceSample, ReceptionError> {
    presence_detail_with(cfg, t, &QuadratureConfig::default())
}

pub(crate) fn presence_detail_with(
    cfg: &LinkConfig,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<PresenceSample, ReceptionError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(ReceptionError::Domain(format!(
            "observation time must be positive, got {t}"
        )));
    }
    let v = receptor_volume(cfg.channel.dim(), cfg.receptor_radius)?;
    let omega = propagator_pdf_with(&cfg.channel, cfg.distance, t, quad)?;
    let raw = v * omega * (-cfg.degradation_rate * t).exp();
    Ok(PresenceSample {
        value: raw.clamp(0.0, 1.0),
        clamped: raw > 1.0,
    })
}

/// P(t | V_ρ, λ): probability that a molecule emitted at time 0 is inside
/// the receptor space at time t and still alive.
pub fn presence_probability(cfg: &LinkConfig, t: f64) -> Result<f64, ReceptionError> {
    Ok(presence_probability_detail(cfg, t)?.value)
}

/// Expected number of observed molecules N̄_ob(t) = N · P(t | V_ρ, λ).
pub fn expected_observed(cfg: &LinkConfig, t: f64) -> Result<f64, ReceptionError> {
    Ok(cfg.molecules_per_one as f64 * presence_probability(cfg, t)?)
}

/// The natural diffusion timescale (a^α / K)^{1/β}: the time at which the
/// similarity variable at r = a is order one. Centers the peak bracket.
fn heuristic_timescale(cfg: &LinkConfig) -> f64 {
    let ch = &cfg.channel;
    (cfg.distance.powf(ch.alpha()) / ch.diff_coeff()).powf(1.0 / ch.beta())
}

/// Peak time t_p = argmax_t N̄_ob(t).
///
/// Computed by a geometric bracket scan around the natural timescale
/// followed by golden-section maximization (relative tolerance 1e-6 on t);
/// the result is validated against the H-function derivative identity with
/// a relative residual below 1e-3.
pub fn peak_time(cfg: &LinkConfig) -> Result<f64, ReceptionError> {
    let t_p = peak_time_unchecked(cfg)?;
    let residual = theorem1_relative_residual(cfg, t_p)?;
    if !(residual.abs() < 1e-3) {
        return Err(ReceptionError::PeakConsistency {
            t: t_p,
            residual,
        });
    }
    Ok(t_p)
}

/// Peak time without the H-identity validation (used internally and by the
/// validation itself).
pub(crate) fn peak_time_unchecked(cfg: &LinkConfig) -> Result<f64, ReceptionError> {
    let quad = QuadratureConfig::default();
    let mut objective = |t: f64| -> Result<f64, ReceptionError> {
        Ok(presence_detail_with(cfg, t, &quad)?.value)
    };
    let t0 = heuristic_timescale(cfg);
    let bracket = bracket_max_geometric(&mut objective, t0, 20)?
        .ok_or(ReceptionError::BracketNotFound)?;
    golden_max(&mut objective, bracket.lo, bracket.hi, 1e-6)
}

/// H-function spec of the left-hand side of the peak-time identity.
fn peak_identity_lhs(ch: &ChannelParams) -> HFunctionSpec {
    let (a, b, m) = (ch.alpha(), ch.beta(), ch.dim() as f64);
    HFunctionSpec::new(
        1,
        3,
        vec![
            (0.0, 1.0),
            (0.0, 1.0 / b),
            (0.5 * (2.0 - m), 0.5 * a / b),
            (0.0, 0.5 * a / b),
        ],
        vec![(0.0, 1.0 / b), (0.0, 1.0), (1.0, 1.0)],
    )
    .expect("peak-identity LHS spec is separable for valid channel parameters")
}

/// H-function spec of the right-hand side of the peak-time identity.
fn peak_identity_rhs(ch: &ChannelParams) -> HFunctionSpec {
    let (a, b, m) = (ch.alpha(), ch.beta(), ch.dim() as f64);
    HFunctionSpec::new(
        1,
        2,
        vec![
            (0.0, 1.0 / b),
            (0.5 * (2.0 - m), 0.5 * a / b),
            (0.0, 0.5 * a / b),
        ],
        vec![(0.0, 1.0 / b), (0.0, 1.0)],
    )
    .expect("peak-identity RHS spec is separable for valid channel parameters")
}

/// Argument K^{1/β} t / (a/2)^{α/β} of the peak-time identity.
fn peak_identity_argument(cfg: &LinkConfig, t: f64) -> f64 {
    let ch = cfg.channel();
    let (a, b) = (ch.alpha(), ch.beta());
    // log-space to dodge underflow of the fractional powers
    (ch.diff_coeff().ln() / b + t.ln() - (a / b) * (0.5 * cfg.distance).ln()).exp()
}

/// Raw residual LHS − λ t · RHS of the peak-time H-function identity.
/// Vanishes (within tolerance) exactly at t = t_p; positive while N̄_ob is
/// rising and negative once it falls.
pub fn theorem1_residual(cfg: &LinkConfig, t: f64) -> Result<f64, ReceptionError> {
    let (lhs, rhs) = theorem1_sides(cfg, t)?;
    Ok(lhs - cfg.degradation_rate * t * rhs)
}

/// Residual normalized by the magnitudes of both sides; the scale-free
/// quantity the peak check and the acceptance gate use.
pub fn theorem1_relative_residual(cfg: &LinkConfig, t: f64) -> Result<f64, ReceptionError> {
    let (lhs, rhs) = theorem1_sides(cfg, t)?;
    let lt = cfg.degradation_rate * t;
    let scale = lhs.abs() + rhs.abs() * (1.0 + lt);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((lhs - lt * rhs) / scale)
}

fn theorem1_sides(cfg: &LinkConfig, t: f64) -> Result<(f64, f64), ReceptionError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(ReceptionError::Domain(format!(
            "t must be positive, got {t}"
        )));
    }
    let quad = QuadratureConfig::default();
    let z = peak_identity_argument(cfg, t);
    let lhs = foxh_eval(&peak_identity_lhs(cfg.channel()), z, &quad)?;
    let rhs = foxh_eval(&peak_identity_rhs(cfg.channel()), z, &quad)?;
    Ok((lhs, rhs))
}

/// Closed-form peak time a²/(2 m K), valid for the normal channel with no
/// degradation.
pub fn normal_peak_closed_form(cfg: &LinkConfig) -> Option<f64> {
    let ch = cfg.channel();
    if (ch.alpha() - 2.0).abs() < 1e-12
        && (ch.beta() - 1.0).abs() < 1e-12
        && cfg.degradation_rate == 0.0
    {
        Some(cfg.distance.powi(2) / (2.0 * ch.dim() as f64 * ch.diff_coeff()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::gaussian_pdf;

    fn link(alpha: f64, beta: f64, dim: u32, lambda: f64) -> LinkConfig {
        let ch = ChannelParams::new(alpha, beta, 1e-10, dim).unwrap();
        LinkConfig::new(ch, 5e-6, 0.5e-6, lambda, 100_000, 2.0).unwrap()
    }

    #[test]
    fn receptor_volume_cases() {
        assert!((receptor_volume(3, 0.5e-6).unwrap() - 5.235_987_755_982_988e-19).abs() < 1e-27);
        assert_eq!(receptor_volume(1, 0.5e-6).unwrap(), 1e-6);
        assert!((receptor_volume(2, 1.0).unwrap() - PI).abs() < 1e-15);
        assert!(receptor_volume(4, 1.0).is_err());
        assert!(receptor_volume(3, 0.0).is_err());
    }

    #[test]
    fn far_field_guard() {
        let ch = ChannelParams::new(2.0, 1.0, 1e-10, 3).unwrap();
        assert!(LinkConfig::new(ch, 5e-6, 1.1e-6, 0.0, 1000, 2.0).is_err());
    }

    #[test]
    fn presence_matches_gaussian_oracle() {
        let cfg = link(2.0, 1.0, 3, 0.0);
        let t = 0.041_666_7;
        let expect = receptor_volume(3, 0.5e-6).unwrap() * gaussian_pdf(cfg.channel(), 5e-6, t);
        assert!((expect / 3.084e-4 - 1.0).abs() < 1e-3, "oracle sanity {expect:e}");
        let got = presence_probability(&cfg, t).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-8, "{got:e} vs {expect:e}");
    }

    #[test]
    fn presence_vanishes_at_small_t() {
        let cfg = link(2.0, 1.0, 3, 0.0);
        let p = presence_probability(&cfg, 1e-6).unwrap();
        assert!(p < 1e-30, "got {p}");
    }

    #[test]
    fn survival_factorization() {
        let cfg0 = link(2.0, 1.0, 3, 0.0);
        let cfg2 = cfg0.with_degradation_rate(2.0).unwrap();
        for &t in &[0.01, 0.05, 0.3] {
            let p0 = presence_probability(&cfg0, t).unwrap();
            let p2 = presence_probability(&cfg2, t).unwrap();
            assert!((p2 - p0 * (-2.0 * t).exp()).abs() < 1e-15 * p0.max(1.0));
        }
    }

    #[test]
    fn expected_count_at_peak() {
        let cfg = link(2.0, 1.0, 3, 0.0);
        let n = expected_observed(&cfg, 0.0417).unwrap();
        assert!((n / 30.8 - 1.0).abs() < 0.02, "got {n}");
    }

    #[test]
    fn normal_peak_matches_closed_form() {
        for dim in 1..=3u32 {
            let cfg = link(2.0, 1.0, dim, 0.0);
            let closed = normal_peak_closed_form(&cfg).unwrap();
            let t_p = peak_time(&cfg).unwrap();
            assert!(
                ((t_p - closed) / closed).abs() < 1e-4,
                "dim={dim}: {t_p} vs {closed}"
            );
        }
    }

    #[test]
    fn peak_derivative_vanishes() {
        let cfg = link(2.0, 1.0, 3, 0.0);
        let t_p = peak_time(&cfg).unwrap();
        let peak = expected_observed(&cfg, t_p).unwrap();
        let h = 1e-5 * t_p;
        let d = (expected_observed(&cfg, t_p + h).unwrap()
            - expected_observed(&cfg, t_p - h).unwrap())
            / (2.0 * h);
        assert!(d.abs() < 1e-6 * peak / t_p, "slope {d:e}, bound {:e}", 1e-6 * peak / t_p);
    }

    #[test]
    fn unimodality_on_log_grid() {
        for (alpha, beta, lambda) in [(2.0, 1.0, 0.0), (2.0, 0.5, 0.0), (1.8, 1.0, 1.0)] {
            let cfg = link(alpha, beta, 3, lambda);
            let t_p = peak_time(&cfg).unwrap();
            let n = 200;
            let vals: Vec<f64> = (0..n)
                .map(|i| {
                    let t = t_p * 1e-2 * (1e4_f64).powf(i as f64 / (n - 1) as f64);
                    expected_observed(&cfg, t).unwrap()
                })
                .collect();
            let argmax = vals
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            for i in 1..=argmax {
                assert!(
                    vals[i] >= vals[i - 1] - 1e-12 * vals[argmax],
                    "not rising at {i} (alpha={alpha}, beta={beta})"
                );
            }
            for i in argmax..n - 1 {
                assert!(
                    vals[i + 1] <= vals[i] + 1e-12 * vals[argmax],
                    "not falling at {i} (alpha={alpha}, beta={beta})"
                );
            }
        }
    }

    #[test]
    fn lambda_monotonicity() {
        let t = 0.05;
        let mut prev_count = f64::INFINITY;
        let mut prev_peak = f64::INFINITY;
        for lambda in [0.0, 1.0, 2.0] {
            let cfg = link(1.8, 1.0, 3, lambda);
            let c = expected_observed(&cfg, t).unwrap();
            assert!(c < prev_count);
            prev_count = c;
            let tp = peak_time(&cfg).unwrap();
            assert!(tp <= prev_peak);
            prev_peak = tp;
        }
    }

    #[test]
    fn theorem_identity_residual_normal() {
        let cfg = link(2.0, 1.0, 3, 0.0);
        let t_closed = normal_peak_closed_form(&cfg).unwrap();
        let rel = theorem1_relative_residual(&cfg, t_closed).unwrap();
        assert!(rel.abs() < 1e-3, "residual {rel:e}");
        // sign pattern around the peak
        assert!(theorem1_residual(&cfg, t_closed / 10.0).unwrap() > 0.0);
        assert!(theorem1_residual(&cfg, t_closed * 10.0).unwrap() < 0.0);
    }

    #[test]
    fn theorem_identity_residual_with_degradation() {
        let cfg = link(1.8, 1.0, 3, 1.0);
        let t_p = peak_time_unchecked(&cfg).unwrap();
        let rel = theorem1_relative_residual(&cfg, t_p).unwrap();
        assert!(rel.abs() < 1e-3, "residual {rel:e} at t_p={t_p}");
        assert!(theorem1_residual(&cfg, t_p / 5.0).unwrap() > 0.0);
        assert!(theorem1_residual(&cfg, t_p * 5.0).unwrap() < 0.0);
    }
}
