//! Lévy-stable sampling and the subordinated position draw.
//!
//! The fractional-diffusion position at a fixed time t is sampled exactly in
//! distribution by subordination: an isotropic α-stable vector evaluated at
//! the operational time E(t), the inverse β-stable subordinator marginal.
//! Both stable ingredients come from the Kanter construction (one uniform
//! plus one exponential per draw), which is exact and constant-time.

use crate::channel::ChannelParams;
use rand::Rng;
use std::f64::consts::PI;

#[inline]
fn clamp_open01(u: f64) -> f64 {
    u.clamp(1e-16, 1.0 - 1e-16)
}

/// One draw of the standard positive (one-sided) stable law with Laplace
/// transform E[e^{−sD}] = exp(−s^order), 0 < order < 1, via the Kanter
/// (trigonometric) construction.
pub fn sample_one_sided_stable<R: Rng + ?Sized>(order: f64, rng: &mut R) -> f64 {
    debug_assert!(order > 0.0 && order < 1.0);
    let u = PI * clamp_open01(rng.gen::<f64>());
    let w = -clamp_open01(rng.gen::<f64>()).ln();
    let s1 = (order * u).sin() / u.sin().powf(1.0 / order);
    let s2 = (((1.0 - order) * u).sin() / w).powf((1.0 - order) / order);
    s1 * s2
}

/// A pair of independent standard normals (Box–Muller).
#[inline]
fn gauss_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1 = clamp_open01(rng.gen::<f64>());
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * PI * u2;
    (r * th.cos(), r * th.sin())
}

/// Sample the molecule displacement X(t) for one molecule released at the
/// origin at time 0.
///
/// X(t) = L_α(E) with E = (t/D₁)^β (D₁ a standard one-sided β-stable draw;
/// E = t exactly when β = 1) and L_α(u) an isotropic α-stable vector with
/// characteristic function exp(−K u |k|^α), realized as √(2S)·(Ku)^{1/α}
/// times a standard Gaussian vector with S one-sided (α/2)-stable (S ≡ 1
/// when α = 2). Only the first `dim` components are populated.
pub fn sample_position<R: Rng + ?Sized>(params: &ChannelParams, t: f64, rng: &mut R) -> [f64; 3] {
    let alpha = params.alpha();
    let beta = params.beta();
    let operational_time = if beta >= 1.0 {
        t
    } else {
        let d1 = sample_one_sided_stable(beta, rng);
        (t / d1).powf(beta)
    };
    let s = if alpha >= 2.0 {
        1.0
    } else {
        sample_one_sided_stable(0.5 * alpha, rng)
    };
    let sigma = (params.diff_coeff() * operational_time).powf(1.0 / alpha);
    let scale = (2.0 * s).sqrt() * sigma;
    let dim = params.dim() as usize;
    let mut x = [0.0_f64; 3];
    let mut i = 0;
    while i < dim {
        let (z1, z2) = gauss_pair(rng);
        x[i] = scale * z1;
        i += 1;
        if i < dim {
            x[i] = scale * z2;
            i += 1;
        }
    }
    x
}
