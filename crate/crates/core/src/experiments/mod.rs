//! Parameter sweeps reproducing the blow-up counter-examples and the
//! Harnack verifications, with fitted exponents and CSV output.
//!
//! Drivers run in `f64`.

mod counterexample;
mod fit;
mod harnack;
mod sweep;

pub use counterexample::{check_lp_case, run_lp_counterexample, run_mollifier_counterexample, LpReport, MollifierReport};
pub use fit::{fit, fit_line, FitModel, FitResult, MIN_R_SQUARED};
pub use harnack::{
    run_harnack_local, run_harnack_nonlocal, HarnackRecord, HarnackReport, LocalCase, LocalHarnackReport, TupleSampler,
    DEFAULT_SEED, TIME_RATIO_BANDS,
};
pub use sweep::{emit_csv, meta_path, Provenance, SweepResult};
