//! N-dimensional FFT on a [`GridSpec`] and radially symmetric Fourier
//! multipliers evaluated once per distinct `|k|`.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::kernel::grid::{signed_index, GridSpec};
use crate::scalar::Real;

pub(crate) struct NdFft<T: Real> {
    n: usize,
    dim: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

const LINE_BATCH: usize = 64;

impl<T: Real> NdFft<T> {
    pub fn new(grid: &GridSpec<T>) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.points_per_axis;
        Self { n, dim: grid.dim, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    /// Unnormalized `Σ_j a_j e^{-2πi kj/N}` along every axis.
    pub fn forward(&self, buf: &mut [Complex<T>]) {
        self.run(buf, &self.forward);
    }

    /// Unnormalized `Σ_k a_k e^{+2πi kj/N}` along every axis.
    pub fn inverse(&self, buf: &mut [Complex<T>]) {
        self.run(buf, &self.inverse);
    }

    fn run(&self, buf: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>) {
        let n = self.n;
        let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
        // batch buffer for strided axes; empty in 1-D
        let batch = if self.dim > 1 { LINE_BATCH.min(n.pow(self.dim as u32 - 1)) } else { 0 };
        let mut lines = vec![Complex::default(); n * batch];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                fft.process_with_scratch(buf, &mut scratch);
                continue;
            }
            let block = n * stride;
            for outer in (0..buf.len()).step_by(block) {
                for inner0 in (0..stride).step_by(LINE_BATCH) {
                    let count = LINE_BATCH.min(stride - inner0);
                    for b in 0..count {
                        for j in 0..n {
                            lines[b * n + j] = buf[outer + j * stride + inner0 + b];
                        }
                    }
                    fft.process_with_scratch(&mut lines[..count * n], &mut scratch);
                    for b in 0..count {
                        for j in 0..n {
                            buf[outer + j * stride + inner0 + b] = lines[b * n + j];
                        }
                    }
                }
            }
        }
    }
}

/// Evaluates a radial function of the wavenumber at every DFT index of a
/// grid, calling the (possibly expensive) function once per distinct radius.
pub(crate) struct RadialMultiplier<T> {
    /// per flat index: key into `values`
    keys: Vec<u32>,
    values: Vec<T>,
    /// per flat index: `(-1)^{Σ k_i}` for the unsigned DFT indices
    parity: Vec<bool>,
}

impl<T: Real> RadialMultiplier<T> {
    pub fn new<F: FnMut(T) -> Result<T>>(grid: &GridSpec<T>, mut f: F) -> Result<Self> {
        let n = grid.points_per_axis;
        let d = grid.dim;
        let scale = T::PI() / grid.half_extent;
        // d = 1 keys on |k|, higher dimensions on Σ k_i²
        let key_of = |idx: &[usize]| -> usize {
            if d == 1 {
                signed_index(idx[0], n).unsigned_abs()
            } else {
                idx.iter().map(|&k| signed_index(k, n).pow(2) as usize).sum()
            }
        };
        let max_key = if d == 1 { n / 2 } else { d * (n / 2) * (n / 2) };
        let mut slots: Vec<Option<T>> = vec![None; max_key + 1];
        let mut keys = Vec::with_capacity(grid.len());
        let mut parity = Vec::with_capacity(grid.len());
        let mut idx = vec![0; d];
        for flat in 0..grid.len() {
            grid.unflatten(flat, &mut idx);
            let key = key_of(&idx);
            if slots[key].is_none() {
                let rho = if d == 1 {
                    scale * T::from_usize_lossy(key)
                } else {
                    scale * T::from_usize_lossy(key).sqrt()
                };
                slots[key] = Some(f(rho)?);
            }
            keys.push(key as u32);
            parity.push(idx.iter().sum::<usize>() % 2 == 1);
        }
        let values = slots.into_iter().map(|s| s.unwrap_or_else(T::nan)).collect();
        Ok(Self { keys, values, parity })
    }

    pub fn value(&self, flat: usize) -> T {
        self.values[self.keys[flat] as usize]
    }

    /// `(-1)^{Σ k_i}`: the phase that recentres a DFT on `x = 0`.
    pub fn shift_sign(&self, flat: usize) -> T {
        if self.parity[flat] {
            -T::one()
        } else {
            T::one()
        }
    }
}
