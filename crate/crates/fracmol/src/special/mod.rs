//! Special functions underpinning the channel, reception, and detection
//! layers: Fox's H-function via Mellin–Barnes contour quadrature, the
//! one-parameter Mittag-Leffler function, and regularized incomplete
//! gamma/beta functions.
//!
//! Everything here is a pure function of its arguments; no global state.

mod foxh;
mod gamma;
mod inc;
mod mittag_leffler;
pub(crate) mod quad;

pub use foxh::{foxh_eval, HFunctionSpec, QuadratureConfig};
pub use inc::{reg_inc_beta, reg_upper_gamma};
pub use mittag_leffler::mittag_leffler;

/// Errors from the special-function layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    /// An argument lies outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The Mellin–Barnes integral does not converge for these parameters
    /// and argument.
    #[error("Mellin-Barnes integral does not converge for these parameters")]
    NonConvergent,
    /// The two gamma pole families cannot be separated by a vertical contour.
    #[error("pole families cannot be separated by a vertical contour")]
    PoleCollision,
    /// Contour truncation failed to meet the requested tolerance.
    #[error("quadrature tolerance not met: estimated error {estimated:.3e} > required {required:.3e}")]
    ToleranceNotMet { estimated: f64, required: f64 },
    /// A series or continued fraction failed to converge.
    #[error("series/continued fraction failed to converge")]
    NoConvergence,
}
