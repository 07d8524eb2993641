//! Fundamental solution, mild solver and Harnack-inequality experiments for
//! the fully non-local diffusion equation
//! `∂_t^α (u - u₀) + (-Δ)^{β/2} u = 0` on `R^d`.

// `!(x > 0)` is used on purpose throughout: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod kernel;
pub mod potential;
pub mod quad;
pub mod scalar;
pub mod solver;
pub mod specfun;
mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations of the main generic types.
pub type Params = kernel::EquationParams<f64>;
pub type Grid = kernel::GridSpec<f64>;
pub type GridField = kernel::Field<f64>;
pub type DataSpec = solver::InitialDataSpec<f64>;
pub type Tuple = potential::HarnackTuple<f64>;
pub type MLFunction = specfun::MittagLefflerNeg<f64>;
