//! Fundamental solution `Z(t, x)`: spectral inversion on a periodic grid,
//! pointwise Mellin–Barnes quadrature and the two-sided asymptotic envelopes.

pub mod grid;
pub mod mellin;
pub mod params;
pub mod regime;
pub mod symbol;

pub use grid::{Field, GridSpec, MAX_GRID_POINTS};
pub use mellin::{
    eval_kernel_mellin, eval_kernel_mellin_detailed, pole_free_strip, radial_derivative_via_shift, saddle_abscissa,
    ContourSpec, MellinValue,
};
pub use params::EquationParams;
pub use regime::{classify_regime, gaussian_sigma, similarity_variable, Regime, RegimeReport};
pub use symbol::{eval_kernel_grid, fourier_symbol, Multiplier, NYQUIST_TOLERANCE};
