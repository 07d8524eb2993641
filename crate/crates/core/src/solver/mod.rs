//! Mild solution of the Cauchy problem on a periodic grid, the initial-data
//! families used in the counter-examples, and field utilities.

pub mod initial;
pub mod mild;
pub mod norms;

pub use initial::{mollifier_constant, sample_initial_data, InitialDataKind, InitialDataSpec, MIN_POINTS_ACROSS};
pub use mild::{mild_solve, Propagator, RINGING_FLOOR};
pub use norms::{lp_norm, point_value};
