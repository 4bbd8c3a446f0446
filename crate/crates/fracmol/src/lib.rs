//! Molecular communication over anomalous (space-time fractional) diffusion
//! channels with a passive receptor-space receiver.
//!
//! The crate covers the full analytical chain for an m-dimensional channel
//! (m = 1, 2, 3):
//!
//! - [`special`] — Fox H-function evaluation by Mellin–Barnes contour
//!   quadrature, the Mittag-Leffler function, and regularized incomplete
//!   gamma/beta functions.
//! - [`channel`] — the fractional-diffusion propagator, its Gaussian
//!   reduction, the Fourier symbol, and diffusion-class bookkeeping.
//! - [`reception`] — presence probability inside the receptor space,
//!   expected observed-molecule counts, and peak-time computation with a
//!   built-in consistency check against the implicit H-function peak
//!   condition.
//! - [`detection`] — single- and multi-bit-interval bit error rates,
//!   ML decision thresholds, and transmit diversity gains.
//! - [`montecarlo`] — an independent stochastic oracle built on subordinated
//!   Lévy sampling with reproducible, splittable random streams.
//! - [`cli`] — the command-line front end used by the `fracmol` binary.
//!
//! All analytic operations are pure functions of their arguments and safe to
//! call from any number of threads.

pub mod channel;
pub mod cli;
pub mod detection;
pub mod montecarlo;
pub(crate) mod optimize;
pub mod reception;
pub mod special;

// The guide chapters under book/src are compiled as doctests so their code
// blocks stay in sync with the public API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/diffusion.md")]
    mod diffusion {}
    #[doc = include_str!("../../../book/src/h_function.md")]
    mod h_function {}
    #[doc = include_str!("../../../book/src/reception.md")]
    mod reception {}
    #[doc = include_str!("../../../book/src/detection.md")]
    mod detection {}
    #[doc = include_str!("../../../book/src/montecarlo.md")]
    mod montecarlo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
