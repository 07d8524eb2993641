use num_complex::Complex;

use super::grid::{Field, GridSpec};
use super::params::EquationParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{NdFft, RadialMultiplier};
use crate::specfun::{MLEvalPolicy, MittagLefflerNeg};

/// Largest symbol value, relative to its peak, tolerated at the Nyquist
/// wavenumber of a grid.
pub const NYQUIST_TOLERANCE: f64 = 1e-3;

/// `ρ ↦ E_α(-ρ^β t^α)`, the Fourier multiplier of the solution operator at
/// time `t` (without the `(2π)^{-d/2}` factor).
#[derive(Debug, Clone)]
pub struct Multiplier<T> {
    ml: MittagLefflerNeg<T>,
    beta: T,
    t_alpha: T,
}

impl<T: Real> Multiplier<T> {
    pub fn new(params: &EquationParams<T>, t: T) -> Result<Self> {
        Self::with_policy(params, t, MLEvalPolicy::default())
    }

    pub fn with_policy(params: &EquationParams<T>, t: T, policy: MLEvalPolicy<T>) -> Result<Self> {
        params.validate()?;
        if !(t > T::zero() && t.is_finite()) {
            return Err(Error::Domain(format!("time {t} must be positive")));
        }
        Ok(Self { ml: MittagLefflerNeg::new(params.alpha, policy)?, beta: params.beta, t_alpha: t.powf(params.alpha) })
    }

    pub fn eval(&self, rho: T) -> Result<T> {
        if !(rho >= T::zero()) {
            return Err(Error::Domain(format!("wavenumber {rho} must be nonnegative")));
        }
        self.ml.eval(rho.powf(self.beta) * self.t_alpha)
    }
}

/// Fourier transform `(2π)^{-d/2} E_α(-ρ^β t^α)` of `Z(t, ·)` at `|ξ| = ρ`.
pub fn fourier_symbol<T: Real>(params: &EquationParams<T>, rho: T, t: T) -> Result<T> {
    let m = Multiplier::new(params, t)?.eval(rho)?;
    Ok(m * (T::TAU()).powf(-params.dim_t() * T::lit(0.5)))
}

/// Checks that a multiplier has decayed at the axis Nyquist wavenumber `π/h`.
pub(crate) fn check_nyquist<T: Real>(grid: &GridSpec<T>, value_at_nyquist: T, peak: T, what: &str) -> Result<()> {
    let ratio = value_at_nyquist.abs() / peak.abs();
    if ratio > T::lit(NYQUIST_TOLERANCE) {
        return Err(Error::Resolution(format!(
            "{what} at the Nyquist wavenumber π/h = {} is {ratio:e} of its peak (limit {NYQUIST_TOLERANCE:e}); \
             refine the grid (h = {})",
            T::PI() / grid.spacing(),
            grid.spacing()
        )));
    }
    Ok(())
}

/// `Z(t, ·)` sampled on `grid` by inverse FFT of its symbol.
///
/// The discrete sum approximates the continuous inverse transform, so the
/// field has unit mass by construction. For β < 2 the algebraic tail
/// `~ t^α |x|^{-d-β}` wraps around the periodic box and near the origin the
/// band-limited field cannot follow the singularity of `Z` when `d ≥ β`;
/// pointwise values there are the Mellin route's job.
pub fn eval_kernel_grid<T: Real>(params: &EquationParams<T>, t: T, grid: &GridSpec<T>) -> Result<Field<T>> {
    params.validate()?;
    grid.validate()?;
    if grid.dim != params.dim {
        return Err(Error::Domain(format!("grid dimension {} ≠ equation dimension {}", grid.dim, params.dim)));
    }
    if grid.dim > 3 {
        return Err(Error::Domain("grid evaluation supports dimensions 1 to 3".into()));
    }
    let symbol = Multiplier::new(params, t)?;
    check_nyquist(grid, symbol.eval(T::PI() / grid.spacing())?, T::one(), "symbol")?;
    let mult = RadialMultiplier::new(grid, |rho| symbol.eval(rho))?;
    let mut buf: Vec<Complex<T>> =
        (0..grid.len()).map(|i| Complex::new(mult.value(i) * mult.shift_sign(i), T::zero())).collect();
    NdFft::new(grid).inverse(&mut buf);
    let scale = (T::lit(2.0) * grid.half_extent).powi(grid.dim as i32).recip();
    Field::new(*grid, buf.into_iter().map(|c| c.re * scale).collect())
}
