use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orders and dimension of `∂_t^α (u - u₀) + (-Δ)^{β/2} u = 0` on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationParams<T> {
    pub alpha: T,
    pub beta: T,
    pub dim: usize,
}

impl<T: Real> EquationParams<T> {
    pub fn new(alpha: T, beta: T, dim: usize) -> Result<Self> {
        let p = Self { alpha, beta, dim };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero() && self.alpha <= T::one()) {
            return Err(Error::Domain(format!("α = {} outside (0, 1]", self.alpha)));
        }
        if !(self.beta > T::zero() && self.beta <= T::lit(2.0)) {
            return Err(Error::Domain(format!("β = {} outside (0, 2]", self.beta)));
        }
        if !(1..=5).contains(&self.dim) {
            return Err(Error::Domain(format!("dimension {} outside 1..=5", self.dim)));
        }
        Ok(())
    }

    pub fn dim_t(&self) -> T {
        T::from_usize_lossy(self.dim)
    }

    /// Same orders in dimension `d + 2`.
    pub fn shifted(&self) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.dim + 2)
    }

    pub(crate) fn is_heat_like(&self) -> bool {
        self.alpha == T::one()
    }

    pub(crate) fn is_gaussian(&self) -> bool {
        self.beta == T::lit(2.0)
    }
}
