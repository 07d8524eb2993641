use num_complex::Complex;

use crate::error::{Error, Result};
use crate::kernel::symbol::{check_nyquist, Multiplier};
use crate::kernel::{EquationParams, Field, GridSpec};
use crate::scalar::Real;
use crate::spectral::{NdFft, RadialMultiplier};

/// Relative undershoot below zero tolerated in a solution before it is
/// reported as aliasing.
pub const RINGING_FLOOR: f64 = 1e-9;

/// Solution operator `u₀ ↦ Z(t, ·) ⋆ u₀` on one grid, with the FFT plans and
/// the multiplier `E_α(-|ξ|^β t^α)` precomputed.
pub struct Propagator<T: Real> {
    grid: GridSpec<T>,
    t: T,
    fft: NdFft<T>,
    multiplier: RadialMultiplier<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(params: &EquationParams<T>, t: T, grid: &GridSpec<T>) -> Result<Self> {
        params.validate()?;
        grid.validate()?;
        if grid.dim != params.dim {
            return Err(Error::Domain(format!("grid dimension {} ≠ equation dimension {}", grid.dim, params.dim)));
        }
        if grid.dim > 3 {
            return Err(Error::Domain("the grid solver supports dimensions 1 to 3".into()));
        }
        let symbol = Multiplier::new(params, t)?;
        let multiplier = RadialMultiplier::new(grid, |rho| symbol.eval(rho))?;
        Ok(Self { grid: *grid, t, fft: NdFft::new(grid), multiplier })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn time(&self) -> T {
        self.t
    }

    /// Applies the solution operator to `u0`.
    ///
    /// The spectrum of the solution must have decayed to
    /// [`NYQUIST_TOLERANCE`](crate::kernel::NYQUIST_TOLERANCE) of its peak on
    /// the Nyquist faces of the frequency box, and the solution may not dip
    /// below `-RINGING_FLOOR · max`.
    pub fn apply(&self, u0: &Field<T>) -> Result<Field<T>> {
        if u0.grid != self.grid {
            return Err(Error::Domain("initial data lives on a different grid".into()));
        }
        let n = self.grid.points_per_axis;
        let mut buf: Vec<Complex<T>> = u0.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.fft.forward(&mut buf);
        let mut peak = T::zero();
        let mut nyquist = T::zero();
        let mut idx = vec![0; self.grid.dim];
        for (flat, c) in buf.iter_mut().enumerate() {
            *c = *c * self.multiplier.value(flat);
            let mag = c.norm();
            peak = peak.max(mag);
            self.grid.unflatten(flat, &mut idx);
            if idx.contains(&(n / 2)) {
                nyquist = nyquist.max(mag);
            }
        }
        if peak > T::zero() {
            check_nyquist(&self.grid, nyquist, peak, "solution spectrum")?;
        }
        self.fft.inverse(&mut buf);
        let scale = T::from_usize_lossy(self.grid.len()).recip();
        let values: Vec<T> = buf.into_iter().map(|c| c.re * scale).collect();
        let out = Field::new(self.grid, values)?;
        let (lo, hi) = (out.min(), out.max());
        if lo < -T::lit(RINGING_FLOOR) * hi.abs().max(lo.abs()) && u0.min() >= T::zero() {
            return Err(Error::Aliasing { undershoot: (-lo / hi.abs().max(lo.abs())).as_f64() });
        }
        Ok(out)
    }
}

/// Mild solution `u(t) = Z(t, ·) ⋆ u₀`, computed as a Fourier multiplier on
/// the periodic grid of `u0`.
///
/// Mass is preserved exactly up to rounding. For β < 2 the algebraic tail of
/// `Z` wraps around the box; choose `L` well beyond `t^{α/β}` and the data
/// radius.
pub fn mild_solve<T: Real>(params: &EquationParams<T>, u0: &Field<T>, t: T) -> Result<Field<T>> {
    Propagator::new(params, t, &u0.grid)?.apply(u0)
}
