use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest number of grid points accepted.
pub const MAX_GRID_POINTS: usize = 1 << 24;

/// Uniform periodic grid on `[-L, L)^d` with `N` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub dim: usize,
    pub half_extent: T,
    pub points_per_axis: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(dim: usize, half_extent: T, points_per_axis: usize) -> Result<Self> {
        let g = Self { dim, half_extent, points_per_axis };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.points_per_axis;
        if self.dim == 0 {
            return Err(Error::Domain("grid dimension must be positive".into()));
        }
        if !(self.half_extent > T::zero() && self.half_extent.is_finite()) {
            return Err(Error::Domain(format!("half extent {} must be positive", self.half_extent)));
        }
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::Domain(format!("{n} points per axis: need a power of two ≥ 64")));
        }
        match n.checked_pow(self.dim as u32) {
            Some(total) if total <= MAX_GRID_POINTS => Ok(()),
            _ => Err(Error::Domain(format!("{n}^{} points exceed the cap of 2^24", self.dim))),
        }
    }

    pub fn spacing(&self) -> T {
        T::lit(2.0) * self.half_extent / T::from_usize_lossy(self.points_per_axis)
    }

    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate of node `i` along any axis.
    pub fn coord(&self, i: usize) -> T {
        -self.half_extent + T::from_usize_lossy(i) * self.spacing()
    }

    /// Index of the node at the origin along each axis.
    pub fn origin_index(&self) -> usize {
        self.points_per_axis / 2
    }

    /// Per-axis indices of a row-major flat index, last axis fastest.
    pub fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        let n = self.points_per_axis;
        for slot in out.iter_mut().rev() {
            *slot = flat % n;
            flat /= n;
        }
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points_per_axis + i)
    }

    /// Physical position of a flat index.
    pub fn point(&self, flat: usize) -> Vec<T> {
        let mut idx = vec![0; self.dim];
        self.unflatten(flat, &mut idx);
        idx.into_iter().map(|i| self.coord(i)).collect()
    }

    /// Angular wavenumber of DFT index `k` along an axis.
    pub fn wavenumber(&self, k: usize) -> T {
        T::PI() * T::from_isize(signed_index(k, self.points_per_axis)).unwrap_or_else(T::nan) / self.half_extent
    }

    /// Whether the closed ball lies inside `[-L, L)^d`.
    pub fn contains_ball(&self, center: &[T], radius: T) -> bool {
        center.len() == self.dim
            && center
                .iter()
                .all(|&c| c - radius >= -self.half_extent && c + radius < self.half_extent)
    }
}

/// Signed frequency index in `[-N/2, N/2)` for DFT index `k`.
pub(crate) fn signed_index(k: usize, n: usize) -> isize {
    if k < n / 2 {
        k as isize
    } else {
        k as isize - n as isize
    }
}

/// Real samples on a [`GridSpec`] in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<T>,
}

impl<T: Real> Field<T> {
    pub fn new(grid: GridSpec<T>, values: Vec<T>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::Domain(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at flat index {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec<T>) -> Result<Self> {
        grid.validate()?;
        Ok(Self { values: vec![T::zero(); grid.len()], grid })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F: FnMut(&[T]) -> T>(grid: GridSpec<T>, mut f: F) -> Result<Self> {
        grid.validate()?;
        let mut idx = vec![0; grid.dim];
        let mut x = vec![T::zero(); grid.dim];
        let values = (0..grid.len())
            .map(|flat| {
                grid.unflatten(flat, &mut idx);
                for (xi, &i) in x.iter_mut().zip(&idx) {
                    *xi = grid.coord(i);
                }
                f(&x)
            })
            .collect();
        Self::new(grid, values)
    }

    /// `h^d Σ values`.
    pub fn mass(&self) -> T {
        self.grid.cell_volume() * self.values.iter().fold(T::zero(), |s, &v| s + v)
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |m, &v| m.max(v))
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |m, &v| m.min(v))
    }
}
