//! Riesz-type potentials over balls, the data-dependent Harnack bound factor
//! and its admissibility window.

pub mod harnack;
pub mod riesz;

pub use harnack::{
    admissible_window, harnack_bound, harnack_bound_factor, initial_harnack_ratio, HarnackBound, HarnackTuple,
};
pub use riesz::{riesz_kernel, riesz_potential_ball, RieszNormalization};
