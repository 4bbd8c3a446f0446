//! Counting-statistics detection: single-bit-interval (SBIT) and
//! multi-bit-interval (MBIT) bit error rates, decision thresholds, and
//! transmit diversity gains.
//!
//! The receiver thresholds the molecule count y_i at the i-th decision
//! instant. For SBIT the count is binomial and the BER has the closed form
//! ½ I_q(N − γ + 1, γ) with q = 1 − P(t_o | V_ρ, λ). For MBIT the summed
//! binomials are modeled as Poisson (the regime where that approximation is
//! indistinguishable), giving ½ (1 − F₀ + F₁) with F_k the Poisson CDF below
//! the threshold under hypothesis k.
//!
//! Diversity gains are the asymptotic decay rates of −log₁₀ BER in the
//! molecule budget N. Base 10 reproduces the published gain values; the
//! closed form is ξ = log₁₀(1/(1 − P)).

use crate::optimize::{bracket_max_geometric, golden_max};
use crate::reception::{presence_probability, LinkConfig, ReceptionError};
use crate::special::{reg_inc_beta, reg_upper_gamma, SpecialError};

/// Errors from the detection layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DetectionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Reception(#[from] ReceptionError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("diversity-gain fit degenerate: {0}")]
    DegenerateFit(String),
}

/// One decision within a burst: the information sequence, which bit is being
/// decided, and the observation offset into its slot.
#[derive(Debug, Clone, PartialEq)]
pub struct BitFrame {
    bits: Vec<u8>,
    bit_index: usize,
    observe_offset: f64,
}

impl BitFrame {
    /// `bit_index` is 1-based; `observe_offset` is the time into the
    /// bit-interval at which the count is taken (must satisfy
    /// 0 < t_o ≤ T_b, checked against the link at evaluation time).
    pub fn new(bits: Vec<u8>, bit_index: usize, observe_offset: f64) -> Result<Self, DetectionError> {
        if bits.is_empty() {
            return Err(DetectionError::Domain("bit sequence is empty".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(DetectionError::Domain("bits must be 0 or 1".into()));
        }
        if bit_index == 0 || bit_index > bits.len() {
            return Err(DetectionError::Domain(format!(
                "bit_index {bit_index} outside 1..={}",
                bits.len()
            )));
        }
        if !(observe_offset > 0.0) || !observe_offset.is_finite() {
            return Err(DetectionError::Domain(format!(
                "observe_offset must be positive, got {observe_offset}"
            )));
        }
        Ok(Self {
            bits,
            bit_index,
            observe_offset,
        })
    }

    /// Worst-case interference frame: all-ones history before bit i.
    pub fn all_ones(bit_index: usize, observe_offset: f64) -> Result<Self, DetectionError> {
        Self::new(vec![1; bit_index], bit_index, observe_offset)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
    pub fn bit_index(&self) -> usize {
        self.bit_index
    }
    /// The ISI history S_i = (s_1, …, s_{i−1}).
    pub fn isi_history(&self) -> &[u8] {
        &self.bits[..self.bit_index - 1]
    }
    pub fn observe_offset(&self) -> f64 {
        self.observe_offset
    }
}

/// Threshold rule: decide '1' when the count reaches `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRule {
    threshold: f64,
}

impl DecisionRule {
    pub fn new(threshold: f64) -> Result<Self, DetectionError> {
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(DetectionError::Domain(format!(
                "decision threshold must be positive, got {threshold}"
            )));
        }
        Ok(Self { threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

fn check_offset(link: &LinkConfig, t_o: f64) -> Result<(), DetectionError> {
    if !(t_o > 0.0) || t_o > link.bit_interval() {
        return Err(DetectionError::Domain(format!(
            "observation offset must lie in (0, T_b], got {t_o} with T_b = {}",
            link.bit_interval()
        )));
    }
    Ok(())
}

/// Decision-instant presence probabilities for every cohort age of a frame:
/// element j (0-based) is P((i−1−j) T_b + t_o), i.e. index i−1 is the
/// signal-slot probability P(t_o).
pub(crate) fn cohort_presences(
    link: &LinkConfig,
    frame: &BitFrame,
) -> Result<Vec<f64>, DetectionError> {
    check_offset(link, frame.observe_offset())?;
    let i = frame.bit_index();
    (0..i)
        .map(|j| {
            let age = (i - 1 - j) as f64 * link.bit_interval() + frame.observe_offset();
            Ok(presence_probability(link, age)?)
        })
        .collect()
}

/// Poisson mean μ^{(k)} of the count y_i under hypothesis s_i = k: the ISI
/// history contributes N·P at its cohort ages, the decided slot contributes
/// k·N·P(t_o).
pub fn count_mean(link: &LinkConfig, frame: &BitFrame, hypothesis: u8) -> Result<f64, DetectionError> {
    if hypothesis > 1 {
        return Err(DetectionError::Domain("hypothesis must be 0 or 1".into()));
    }
    let p = cohort_presences(link, frame)?;
    let n = link.molecules_per_one() as f64;
    let i = frame.bit_index();
    let mut mu = 0.0;
    for (j, &bit) in frame.isi_history().iter().enumerate() {
        mu += bit as f64 * n * p[j];
    }
    mu += hypothesis as f64 * n * p[i - 1];
    Ok(mu)
}

/// P(Y < γ) for Y ~ Bin(n, p): the binomial miss/quiet probability below a
/// real threshold. Equals I_{1−p}(n−⌈γ⌉+1, ⌈γ⌉) for integer γ.
pub fn binomial_count_cdf(n: u64, p: f64, threshold: f64) -> Result<f64, DetectionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DetectionError::Domain(format!(
            "success probability must lie in [0, 1], got {p}"
        )));
    }
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(DetectionError::Domain(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    // P(Y < γ) = P(Y ≤ ⌈γ⌉ − 1)
    let k = threshold.ceil() as i64 - 1;
    if k < 0 {
        return Ok(0.0);
    }
    let k = k as u64;
    if k >= n {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    Ok(reg_inc_beta(1.0 - p, (n - k) as f64, k as f64 + 1.0)?)
}

/// SBIT bit error rate ½ I_q(N − γ + 1, γ) with q = 1 − P(t_o | V_ρ, λ) and
/// γ = ⌈threshold⌉.
///
/// A threshold above N makes missed detection certain and the BER degenerates
/// to ½.
pub fn ber_sbit(link: &LinkConfig, t_o: f64, threshold: f64) -> Result<f64, DetectionError> {
    check_offset(link, t_o)?;
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(DetectionError::Domain(format!(
            "decision threshold must be positive, got {threshold}"
        )));
    }
    let n = link.molecules_per_one();
    let gamma = threshold.ceil();
    if gamma > n as f64 {
        return Ok(0.5);
    }
    let p = presence_probability(link, t_o)?;
    Ok(0.5 * binomial_count_cdf(n, p, gamma)?)
}

/// Optimal SBIT observation time: the argmin of the BER over t_o. Coincides
/// with the peak time of the expected count, since the BER is monotone
/// decreasing in the presence probability.
pub fn optimal_observation_time(link: &LinkConfig) -> Result<f64, DetectionError> {
    // Minimize the BER directly (γ = 1, where the SBIT BER is (1/2)(1−P)^N);
    // equivalently maximize P. Same scan/golden schedule as peak_time so the
    // two agree to the optimizer tolerance.
    let mut objective = |t: f64| -> Result<f64, DetectionError> {
        // guard: the scan explores t beyond T_b; the BER itself is defined
        // for any positive age, so evaluate the presence directly.
        let p = presence_probability(link, t)?;
        Ok(p)
    };
    let t0 = (link.distance().powf(link.channel().alpha()) / link.channel().diff_coeff())
        .powf(1.0 / link.channel().beta());
    let bracket = bracket_max_geometric(&mut objective, t0, 20)?
        .ok_or(ReceptionError::BracketNotFound)?;
    golden_max(&mut objective, bracket.lo, bracket.hi, 1e-6).map_err(Into::into)
}

/// SBIT transmit diversity gain ξ = log₁₀(1/(1 − P(t_o | V_ρ, λ))): the
/// asymptotic slope of −log₁₀ BER in N. Independent of the threshold.
pub fn diversity_gain_sbit(link: &LinkConfig, t_o: f64) -> Result<f64, DetectionError> {
    check_offset(link, t_o)?;
    let p = presence_probability(link, t_o)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(DetectionError::Domain(format!(
            "diversity gain degenerate: presence probability {p} not in (0, 1)"
        )));
    }
    Ok(-(-p).ln_1p() / std::f64::consts::LN_10)
}

/// Poisson CDF below a real threshold, P(Y < γ) = P(Y ≤ ⌊γ⌋) for non-integer
/// γ and P(Y ≤ γ − 1) for integer γ.
pub(crate) fn poisson_cdf_below(threshold: f64, mu: f64) -> Result<f64, DetectionError> {
    debug_assert!(threshold > 0.0);
    let n = if threshold.fract() == 0.0 {
        threshold as u64
    } else {
        threshold.floor() as u64 + 1
    };
    Ok(reg_upper_gamma(n, mu)?)
}

/// Conditional MBIT bit error rate P_{b|S_i} = ½ (1 − F₀ + F₁), with
/// F_k = P(Y < γ_i) for Y ~ Poisson(μ^{(k)}_i).
pub fn ber_mbit(link: &LinkConfig, frame: &BitFrame, rule: &DecisionRule) -> Result<f64, DetectionError> {
    let mu0 = count_mean(link, frame, 0)?;
    let mu1 = count_mean(link, frame, 1)?;
    ber_mbit_from_means(mu0, mu1, rule.threshold())
}

/// MBIT BER from precomputed hypothesis means (sweep helper).
pub fn ber_mbit_from_means(mu0: f64, mu1: f64, threshold: f64) -> Result<f64, DetectionError> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(DetectionError::Domain(format!(
            "decision threshold must be positive, got {threshold}"
        )));
    }
    let f0 = poisson_cdf_below(threshold, mu0)?;
    let f1 = poisson_cdf_below(threshold, mu1)?;
    Ok(0.5 * (1.0 - f0 + f1))
}

/// Maximum-likelihood Poisson decision threshold
/// γ = (μ⁽⁰⁾ − μ⁽¹⁾)/(ln μ⁽⁰⁾ − ln μ⁽¹⁾), the log-mean of the two
/// hypothesis means. Falls back to γ = 1 when μ⁽⁰⁾ = 0: with no interference
/// any nonzero count implies bit one.
pub fn ml_threshold(mu0: f64, mu1: f64) -> Result<f64, DetectionError> {
    if !(mu0 >= 0.0) || !mu1.is_finite() || !(mu1 > mu0) {
        return Err(DetectionError::Domain(format!(
            "ml_threshold requires 0 <= mu0 < mu1, got mu0={mu0}, mu1={mu1}"
        )));
    }
    if mu0 == 0.0 {
        return Ok(1.0);
    }
    let d = mu1 - mu0;
    let r = (d / mu0).ln_1p(); // ln(mu1/mu0)
    if r == 0.0 {
        return Ok(mu0);
    }
    Ok(d / r)
}

/// Default molecule-budget grid for numeric diversity-gain fits: 8
/// log-spaced values over [2·10³, 2·10⁴], the range with clean exponential
/// BER decay and no underflow.
pub fn default_diversity_grid() -> Vec<u64> {
    let lo: f64 = 2e3;
    let hi: f64 = 2e4;
    (0..8)
        .map(|i| (lo * (hi / lo).powf(i as f64 / 7.0)).round() as u64)
        .collect()
}

/// Numeric MBIT transmit diversity gain: the least-squares slope of
/// −log₁₀ P_{b|S_i} versus N over `n_grid`, with the ML threshold
/// re-optimized at every N. Grid points whose BER underflows below 1e-300
/// are dropped from the fit.
pub fn diversity_gain_mbit(
    link: &LinkConfig,
    frame: &BitFrame,
    n_grid: &[u64],
) -> Result<f64, DetectionError> {
    if n_grid.len() < 5 {
        return Err(DetectionError::Domain(
            "diversity-gain grid needs at least 5 points".into(),
        ));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DetectionError::Domain(
            "diversity-gain grid must be strictly increasing".into(),
        ));
    }
    let p = cohort_presences(link, frame)?;
    let i = frame.bit_index();
    let mut isi_per_n = 0.0;
    for (j, &bit) in frame.isi_history().iter().enumerate() {
        isi_per_n += bit as f64 * p[j];
    }
    let sig_per_n = p[i - 1];
    if sig_per_n <= 0.0 {
        return Err(DetectionError::DegenerateFit(
            "signal presence probability is zero".into(),
        ));
    }

    let mut xs = Vec::with_capacity(n_grid.len());
    let mut ys = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let nf = n as f64;
        let mu0 = nf * isi_per_n;
        let mu1 = mu0 + nf * sig_per_n;
        let gamma = ml_threshold(mu0, mu1)?;
        let ber = ber_mbit_from_means(mu0, mu1, gamma)?;
        if ber > 1e-300 && ber < 1.0 {
            xs.push(nf);
            ys.push(-ber.log10());
        }
    }
    if xs.len() < 2 {
        return Err(DetectionError::DegenerateFit(
            "fewer than two usable BER points in the grid".into(),
        ));
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
