//! Scalar special functions: complex log-Gamma, the Mittag-Leffler function
//! on the negative axis, the Riemann–Liouville fractional integral and the
//! per-mode Volterra residual.

mod fractional;
mod gamma;
mod mittag_leffler;

pub use fractional::{fourier_mode_residual, fractional_integral, TimeGrid};
pub use gamma::{gamma_real, ln_gamma_real, log_gamma, recip_gamma};
pub(crate) use gamma::log_gamma_unchecked;
pub use mittag_leffler::{mittag_leffler_neg, MLEvalPolicy, MLRoute, MLValue, MittagLefflerNeg};
