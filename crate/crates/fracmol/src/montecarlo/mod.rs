//! Independent stochastic oracle for the analytic chain.
//!
//! Molecule positions under space-time fractional diffusion are sampled by
//! subordination (exact single-time marginals, no time-step bias), lifetimes
//! are exponential, and counting in the receptor space reproduces presence
//! probabilities, expected counts, and empirical bit error rates.
//!
//! Every estimator is deterministic for a fixed seed: units draw from
//! counter-based substreams keyed by (frame, molecule) and partial results
//! are reduced in index order, so the outputs are bit-identical regardless
//! of thread count.
//!
//! Within one frame, the same cohort is re-sampled independently at each
//! decision instant: per-bit error rates only depend on the single-time
//! marginal statistics, which the fresh draws reproduce exactly; joint
//! statistics across decision instants of one molecule are not modeled.

mod rng;
mod stable;

pub use stable::{sample_one_sided_stable, sample_position};

use crate::channel::ChannelParams;
use crate::reception::{LinkConfig, ReceptionError};
use rayon::prelude::*;
use rng::StreamFamily;

/// Errors from the Monte Carlo layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonteCarloError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Reception(#[from] ReceptionError),
}

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Seeded molecule-population plan for one simulated frame: emission slot
/// starts of the '1' bits and the per-bit decision instants. Lifetimes and
/// positions are drawn lazily from the (frame, molecule) substreams; they
/// are i.i.d. Exponential(λ) (infinite when λ = 0) and single-time marginal
/// draws of the subordinated position process.
#[derive(Debug, Clone, PartialEq)]
pub struct SimEnsemble {
    pub master_seed: u64,
    pub n_molecules: u64,
    pub emission_times: Vec<f64>,
    pub observation_times: Vec<f64>,
}

impl SimEnsemble {
    /// Plan a frame: bit j (1-based) emits at (j−1)·T_b when it is a '1';
    /// bit j is decided at (j−1)·T_b + t_o.
    pub fn from_frame(
        link: &LinkConfig,
        bits: &[u8],
        t_o: f64,
        master_seed: u64,
    ) -> Result<Self, MonteCarloError> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(MonteCarloError::Domain(
                "bits must be a nonempty 0/1 sequence".into(),
            ));
        }
        if !(t_o > 0.0) || t_o > link.bit_interval() {
            return Err(MonteCarloError::Domain(format!(
                "observation offset must lie in (0, T_b], got {t_o}"
            )));
        }
        let tb = link.bit_interval();
        let emission_times = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(j, _)| j as f64 * tb)
            .collect();
        let observation_times = (0..bits.len()).map(|j| j as f64 * tb + t_o).collect();
        Ok(Self {
            master_seed,
            n_molecules: link.molecules_per_one(),
            emission_times,
            observation_times,
        })
    }
}

const CHUNK: u64 = 1 << 14;

/// Empirical presence probability: the fraction of `n` molecules released at
/// the origin at time 0 that are inside the receptor ball (distance `a`
/// along the first axis, radius ρ) at time t and still alive.
pub fn estimate_presence(
    link: &LinkConfig,
    t: f64,
    n: u64,
    seed: u64,
) -> Result<Estimate, MonteCarloError> {
    if n == 0 {
        return Err(MonteCarloError::Domain("need at least one molecule".into()));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(MonteCarloError::Domain(format!(
            "t must be positive, got {t}"
        )));
    }
    let fam = StreamFamily::new(seed, 0);
    let lambda = link.degradation_rate();
    let a = link.distance();
    let rho2 = link.receptor_radius() * link.receptor_radius();
    let params = *link.channel();
    let n_chunks = n.div_ceil(CHUNK);
    let count: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let lo = ci * CHUNK;
            let hi = ((ci + 1) * CHUNK).min(n);
            let mut cnt = 0u64;
            for unit in lo..hi {
                let mut rng = fam.stream(unit);
                if in_receptor(&params, t, lambda, a, rho2, &mut rng) {
                    cnt += 1;
                }
            }
            cnt
        })
        .sum();
    let p = count as f64 / n as f64;
    Ok(Estimate {
        value: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
    })
}

#[inline]
fn in_receptor(
    params: &ChannelParams,
    age: f64,
    lambda: f64,
    a: f64,
    rho2: f64,
    rng: &mut impl rand::Rng,
) -> bool {
    if lambda > 0.0 {
        let u: f64 = rng.gen::<f64>().clamp(1e-16, 1.0 - 1e-16);
        let lifetime = -u.ln() / lambda;
        if lifetime <= age {
            return false;
        }
    }
    let x = sample_position(params, age, rng);
    let dx = x[0] - a;
    dx * dx + x[1] * x[1] + x[2] * x[2] <= rho2
}

/// Empirical characteristic function E[cos(k·X(t))] on a grid of wavenumbers
/// (k along the first axis; the law is isotropic), with standard errors.
pub fn estimate_char_fn(
    params: &ChannelParams,
    t: f64,
    ks: &[f64],
    n: u64,
    seed: u64,
) -> Result<Vec<Estimate>, MonteCarloError> {
    if n == 0 || ks.is_empty() {
        return Err(MonteCarloError::Domain(
            "need at least one molecule and one wavenumber".into(),
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(MonteCarloError::Domain(format!(
            "t must be positive, got {t}"
        )));
    }
    let fam = StreamFamily::new(seed, 0);
    let params = *params;
    let n_chunks = n.div_ceil(CHUNK);
    let partials: Vec<(Vec<f64>, Vec<f64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let lo = ci * CHUNK;
            let hi = ((ci + 1) * CHUNK).min(n);
            let mut sums = vec![0.0_f64; ks.len()];
            let mut sqs = vec![0.0_f64; ks.len()];
            for unit in lo..hi {
                let mut rng = fam.stream(unit);
                let x = sample_position(&params, t, &mut rng);
                for (i, &k) in ks.iter().enumerate() {
                    let c = (k * x[0]).cos();
                    sums[i] += c;
                    sqs[i] += c * c;
                }
            }
            (sums, sqs)
        })
        .collect();
    // index-ordered reduction keeps the result thread-count independent
    let mut sums = vec![0.0_f64; ks.len()];
    let mut sqs = vec![0.0_f64; ks.len()];
    for (s, q) in partials {
        for i in 0..ks.len() {
            sums[i] += s[i];
            sqs[i] += q[i];
        }
    }
    let nf = n as f64;
    Ok((0..ks.len())
        .map(|i| {
            let mean = sums[i] / nf;
            let var = (sqs[i] / nf - mean * mean).max(0.0);
            Estimate {
                value: mean,
                std_error: (var / nf).sqrt(),
            }
        })
        .collect())
}

/// Per-bit statistics from a frame simulation.
///
/// `literal_*` rates decode the frame exactly as given (an all-zero frame
/// therefore has zero literal errors). `conditional_ber` evaluates the i-th
/// decision under both hypotheses of s_i with the frame's own interference
/// draws — the empirical counterpart of the equiprobable-bit conditional
/// BER, ½(miss + false alarm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitStats {
    pub literal_error_rate: f64,
    pub literal_se: f64,
    pub conditional_ber: f64,
    pub conditional_se: f64,
    pub miss_rate: f64,
    pub false_alarm_rate: f64,
}

/// Simulate `n_trials` independent frames of the burst `bits` and return
/// per-bit error statistics under the threshold rule.
///
/// Each '1' bit emits N molecules at its slot start; the count for bit i is
/// taken at (i−1)·T_b + t_o over all surviving molecules inside the receptor
/// ball. Counting happens at a single physical time per bit, so single-time
/// marginal sampling is exact in distribution.
pub fn simulate_ber(
    link: &LinkConfig,
    bits: &[u8],
    t_o: f64,
    thresholds: &[f64],
    n_trials: u64,
    seed: u64,
) -> Result<Vec<BitStats>, MonteCarloError> {
    let ensemble = SimEnsemble::from_frame(link, bits, t_o, seed)?;
    let kappa = bits.len();
    let thresholds: Vec<f64> = if thresholds.len() == 1 {
        vec![thresholds[0]; kappa]
    } else {
        thresholds.to_vec()
    };
    if thresholds.len() != kappa {
        return Err(MonteCarloError::Domain(format!(
            "need 1 or {kappa} thresholds, got {}",
            thresholds.len()
        )));
    }
    if thresholds.iter().any(|&g| !(g > 0.0)) {
        return Err(MonteCarloError::Domain("thresholds must be positive".into()));
    }
    if n_trials == 0 {
        return Err(MonteCarloError::Domain("need at least one trial".into()));
    }

    let n = ensemble.n_molecules;
    let lambda = link.degradation_rate();
    let a = link.distance();
    let rho2 = link.receptor_radius() * link.receptor_radius();
    let tb = link.bit_interval();
    let params = *link.channel();
    let kappa_u = kappa as u64;

    // per frame, per bit: (false alarm, miss, literal error) as 0/1
    let frame_results: Vec<Vec<[u8; 3]>> = (0..n_trials)
        .into_par_iter()
        .map(|frame| {
            let fam = StreamFamily::new(seed, frame + 1);
            let mut out = Vec::with_capacity(kappa);
            for i in 1..=kappa {
                let gamma = thresholds[i - 1];
                let mut interference = 0u64;
                let mut signal = 0u64;
                for j in 1..=i {
                    let is_signal_slot = j == i;
                    if !is_signal_slot && bits[j - 1] == 0 {
                        continue;
                    }
                    let age = (i - j) as f64 * tb + t_o;
                    let base_unit = ((i as u64 - 1) * kappa_u + (j as u64 - 1)) * n;
                    let mut cnt = 0u64;
                    for mol in 0..n {
                        let mut rng = fam.stream(base_unit + mol);
                        if in_receptor(&params, age, lambda, a, rho2, &mut rng) {
                            cnt += 1;
                        }
                    }
                    if is_signal_slot {
                        signal = cnt;
                    } else {
                        interference += cnt;
                    }
                }
                let y0 = interference as f64;
                let y1 = (interference + signal) as f64;
                let false_alarm = (y0 >= gamma) as u8;
                let miss = (y1 < gamma) as u8;
                let literal = if bits[i - 1] == 1 { miss } else { false_alarm };
                out.push([false_alarm, miss, literal]);
            }
            out
        })
        .collect();

    let nf = n_trials as f64;
    Ok((0..kappa)
        .map(|i| {
            let mut fa = 0u64;
            let mut miss = 0u64;
            let mut lit = 0u64;
            let mut cond_sum = 0.0;
            let mut cond_sq = 0.0;
            for frame in &frame_results {
                let [f, m, l] = frame[i];
                fa += f as u64;
                miss += m as u64;
                lit += l as u64;
                let v = 0.5 * (f as f64 + m as f64);
                cond_sum += v;
                cond_sq += v * v;
            }
            let lit_rate = lit as f64 / nf;
            let cond = cond_sum / nf;
            let cond_var = (cond_sq / nf - cond * cond).max(0.0);
            BitStats {
                literal_error_rate: lit_rate,
                literal_se: (lit_rate * (1.0 - lit_rate) / nf).sqrt(),
                conditional_ber: cond,
                conditional_se: (cond_var / nf).sqrt(),
                miss_rate: miss as f64 / nf,
                false_alarm_rate: fa as f64 / nf,
            }
        })
        .collect())
}
