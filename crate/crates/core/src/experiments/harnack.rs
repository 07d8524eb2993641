use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fit::{fit, FitModel, FitResult};
use super::sweep::{Provenance, SweepResult};
use crate::error::{Error, Result};
use crate::kernel::{EquationParams, Field, GridSpec};
use crate::potential::{harnack_bound_factor, HarnackTuple};
use crate::solver::{point_value, sample_initial_data, InitialDataKind, InitialDataSpec, Propagator};

pub const DEFAULT_SEED: u64 = 0xF0C5;

/// Upper edges of the `t2/t1` bands used to aggregate the empirical constant.
pub const TIME_RATIO_BANDS: [f64; 4] = [1.25, 1.5, 2.0, f64::INFINITY];

/// Seeded generator of Harnack tuples: `x1, x2` uniform in `B_r(0)`,
/// `t1` uniform in `[t1_min, t1_max]`, `t2` uniform in `(t1, t1 + lag]`
/// with `lag = (2r)^{β/α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleSampler {
    pub r: f64,
    pub t1_min: f64,
    pub t1_max: f64,
    pub lag: f64,
    pub horizon: f64,
    pub seed: u64,
}

impl TupleSampler {
    /// Tuples inside the admissible window with final time `horizon`;
    /// `t1` is additionally kept `≥ t1_floor`.
    pub fn admissible(params: &EquationParams<f64>, r: f64, horizon: f64, t1_floor: f64, seed: u64) -> Result<Self> {
        let lag = (2.0 * r).powf(params.beta / params.alpha);
        let t1_min = lag.max(t1_floor);
        let t1_max = horizon - lag;
        if !(r > 0.0) || !(t1_max >= t1_min) {
            return Err(Error::Admissibility(format!(
                "no admissible t1: need max(lag, {t1_floor}) ≤ T - lag with lag = {lag}, T = {horizon}"
            )));
        }
        Ok(Self { r, t1_min, t1_max, lag, horizon, seed })
    }

    /// Tuples that break only the lower bound `(2r)^{β/α} ≤ t1`: `t1` is
    /// drawn from `[lag/2, lag)`.
    pub fn without_time_lag(params: &EquationParams<f64>, r: f64, seed: u64) -> Result<Self> {
        let lag = (2.0 * r).powf(params.beta / params.alpha);
        if !(r > 0.0) {
            return Err(Error::Domain("radius must be positive".into()));
        }
        let t1_max = lag * (1.0 - f64::EPSILON);
        Ok(Self { r, t1_min: 0.5 * lag, t1_max, lag, horizon: t1_max + lag, seed })
    }

    pub fn sample(&self, dim: usize, n: usize) -> Vec<HarnackTuple<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let point = |rng: &mut ChaCha8Rng| loop {
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-self.r..self.r)).collect();
            if x.iter().map(|v| v * v).sum::<f64>() < self.r * self.r {
                return x;
            }
        };
        (0..n)
            .map(|_| {
                let x1 = point(&mut rng);
                let x2 = point(&mut rng);
                let t1 = if self.t1_max > self.t1_min { rng.gen_range(self.t1_min..=self.t1_max) } else { self.t1_min };
                // (t1, t1 + lag]
                let t2 = t1 + self.lag * (1.0 - rng.gen::<f64>());
                HarnackTuple { t1, t2, x1, x2, r: self.r, horizon: self.horizon.max(t2) }
            })
            .collect()
    }
}

/// One (data, tuple) comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnackRecord {
    pub data: usize,
    pub tuple: usize,
    pub t1: f64,
    pub t2: f64,
    pub u1: f64,
    pub u2: f64,
    pub ratio: f64,
    /// bound factor (non-local runs only)
    pub factor: Option<f64>,
}

impl HarnackRecord {
    /// `ratio / factor`, or the plain ratio when there is no factor.
    pub fn c_hat(&self) -> f64 {
        self.factor.map_or(self.ratio, |f| self.ratio / f)
    }
}

#[derive(Debug, Clone)]
pub struct HarnackReport {
    pub labels: Vec<String>,
    pub tuples: Vec<HarnackTuple<f64>>,
    pub records: Vec<HarnackRecord>,
    /// tuples dropped because a factor denominator vanished
    pub skipped: usize,
    pub provenance: Provenance,
}

fn band_of(q: f64) -> usize {
    TIME_RATIO_BANDS.iter().position(|&e| q <= e).unwrap_or(TIME_RATIO_BANDS.len() - 1)
}

impl HarnackReport {
    fn max_by_data(&self, f: impl Fn(&HarnackRecord) -> f64) -> Vec<f64> {
        let mut out = vec![f64::NAN; self.labels.len()];
        for rec in &self.records {
            let v = f(rec);
            if out[rec.data].is_nan() || v > out[rec.data] {
                out[rec.data] = v;
            }
        }
        out
    }

    /// Max plain ratio per data member.
    pub fn max_ratio_by_data(&self) -> Vec<f64> {
        self.max_by_data(|r| r.ratio)
    }

    /// Max empirical constant per data member.
    pub fn max_c_hat_by_data(&self) -> Vec<f64> {
        self.max_by_data(HarnackRecord::c_hat)
    }

    /// Max empirical constant per `t2/t1` band (NaN for empty bands).
    pub fn max_c_hat_by_band(&self) -> Vec<f64> {
        let mut out = vec![f64::NAN; TIME_RATIO_BANDS.len()];
        for rec in &self.records {
            let b = band_of(rec.t2 / rec.t1);
            let v = rec.c_hat();
            if out[b].is_nan() || v > out[b] {
                out[b] = v;
            }
        }
        out
    }

    pub fn max_c_hat(&self) -> f64 {
        self.records.iter().map(HarnackRecord::c_hat).fold(f64::NAN, f64::max)
    }

    pub fn max_ratio(&self) -> f64 {
        self.records.iter().map(|r| r.ratio).fold(f64::NAN, f64::max)
    }

    /// Flattened table, one row per record, swept over the data index.
    pub fn to_sweep(&self, label: &str) -> SweepResult {
        let mut s = SweepResult::new(
            label,
            "data_index",
            &["tuple_index", "t1", "t2", "u_t1_x1", "u_t2_x2", "ratio", "factor", "c_hat"],
            self.provenance.clone(),
        );
        for r in &self.records {
            s.push(
                r.data as f64,
                vec![r.tuple as f64, r.t1, r.t2, r.u1, r.u2, r.ratio, r.factor.unwrap_or(f64::NAN), r.c_hat()],
            );
        }
        s
    }
}

/// Applies `t1` and `t2` propagators tuple by tuple; the propagator pair is
/// reused across data.
fn evaluate(
    params: &EquationParams<f64>,
    data: &[Field<f64>],
    tuples: &[HarnackTuple<f64>],
    grid: &GridSpec<f64>,
    mut factor: impl FnMut(&Field<f64>, &HarnackTuple<f64>) -> Result<Option<f64>>,
) -> Result<(Vec<HarnackRecord>, usize)> {
    let mut records = Vec::with_capacity(data.len() * tuples.len());
    let mut skipped = 0;
    for (j, tup) in tuples.iter().enumerate() {
        let p1 = Propagator::new(params, tup.t1, grid)?;
        let p2 = Propagator::new(params, tup.t2, grid)?;
        for (i, u0) in data.iter().enumerate() {
            let f = match factor(u0, tup) {
                Ok(f) => f,
                Err(Error::DegenerateData(msg)) => {
                    log::debug!("tuple {j}, data {i} skipped: {msg}");
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let u1 = point_value(&p1.apply(u0)?, &tup.x1)?;
            let u2 = point_value(&p2.apply(u0)?, &tup.x2)?;
            records.push(HarnackRecord { data: i, tuple: j, t1: tup.t1, t2: tup.t2, u1, u2, ratio: u1 / u2, factor: f });
        }
    }
    Ok((records, skipped))
}

fn sample_all(data_specs: &[InitialDataSpec<f64>], grid: &GridSpec<f64>) -> Result<Vec<Field<f64>>> {
    data_specs.iter().map(|s| sample_initial_data(s, grid)).collect()
}

fn provenance(params: &EquationParams<f64>, grid: &GridSpec<f64>, tuples: &[HarnackTuple<f64>], seed: Option<u64>) -> Provenance {
    let mut times: Vec<f64> = tuples.iter().flat_map(|t| [t.t1, t.t2]).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    Provenance { params: *params, grid: *grid, times, seed }
}

/// Empirical constant `Ĉ = u(t1,x1) / (factor · u(t2,x2))` of the
/// non-local Harnack inequality over every (data, tuple) pair.
pub fn run_harnack_nonlocal(
    params: &EquationParams<f64>,
    data_specs: &[InitialDataSpec<f64>],
    tuples: &[HarnackTuple<f64>],
    grid: &GridSpec<f64>,
    seed: Option<u64>,
) -> Result<HarnackReport> {
    params.validate()?;
    if params.dim_t() < params.beta {
        return Err(Error::Domain(format!("non-local Harnack needs d ≥ β, got d = {}, β = {}", params.dim, params.beta)));
    }
    for t in tuples {
        t.validate(params)?;
    }
    let data = sample_all(data_specs, grid)?;
    let (records, skipped) = evaluate(params, &data, tuples, grid, |u0, tup| harnack_bound_factor(params, u0, tup).map(Some))?;
    Ok(HarnackReport {
        labels: data_specs.iter().map(InitialDataSpec::label).collect(),
        tuples: tuples.to_vec(),
        records,
        skipped,
        provenance: provenance(params, grid, tuples, seed),
    })
}

/// The two settings of the local Harnack inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalCase {
    /// α < 1 and d = 1 < β
    TimeFractionalDLtBeta,
    /// α = 1 and β < 2
    SpaceFractionalAlpha1,
}

impl LocalCase {
    pub fn check(&self, params: &EquationParams<f64>) -> Result<()> {
        let ok = match self {
            LocalCase::TimeFractionalDLtBeta => params.alpha < 1.0 && params.dim == 1 && params.beta > 1.0,
            LocalCase::SpaceFractionalAlpha1 => params.alpha == 1.0 && params.beta < 2.0 && (1..=3).contains(&params.dim),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{self:?} does not apply to α = {}, β = {}, d = {}",
                params.alpha, params.beta, params.dim
            )))
        }
    }
}

/// Local report: the plain ratio, plus its trend over a mollifier family.
#[derive(Debug, Clone)]
pub struct LocalHarnackReport {
    pub report: HarnackReport,
    /// `max / min` over data of the per-data max ratio
    pub family_spread: f64,
    /// log-log fit of the per-data max ratio against ε, when every member is a mollifier
    pub eps_trend: Option<FitResult>,
}

/// Plain ratio `u(t1,x1) / u(t2,x2)` over every (data, tuple) pair.
/// Without the time lag only `t1 < t2` is required of the tuples.
pub fn run_harnack_local(
    case: LocalCase,
    params: &EquationParams<f64>,
    data_specs: &[InitialDataSpec<f64>],
    tuples: &[HarnackTuple<f64>],
    grid: &GridSpec<f64>,
    with_time_lag: bool,
    seed: Option<u64>,
) -> Result<LocalHarnackReport> {
    params.validate()?;
    case.check(params)?;
    if !with_time_lag && case != LocalCase::SpaceFractionalAlpha1 {
        return Err(Error::Domain("dropping the time lag is only supported for α = 1".into()));
    }
    for t in tuples {
        if with_time_lag {
            t.validate(params)?;
        } else if !(t.t1 > 0.0 && t.t2 > t.t1) || t.x1.len() != params.dim || t.x2.len() != params.dim {
            return Err(Error::Admissibility(format!("need 0 < t1 < t2, got t1 = {}, t2 = {}", t.t1, t.t2)));
        }
    }
    let data = sample_all(data_specs, grid)?;
    let (records, skipped) = evaluate(params, &data, tuples, grid, |_, _| Ok(None))?;
    let report = HarnackReport {
        labels: data_specs.iter().map(InitialDataSpec::label).collect(),
        tuples: tuples.to_vec(),
        records,
        skipped,
        provenance: provenance(params, grid, tuples, seed),
    };
    let maxima = report.max_ratio_by_data();
    let hi = maxima.iter().cloned().fold(f64::NAN, f64::max);
    let lo = maxima.iter().cloned().fold(f64::NAN, f64::min);
    let eps: Option<Vec<f64>> = data_specs
        .iter()
        .map(|s| match s.kind {
            InitialDataKind::Mollifier { epsilon } => Some(epsilon),
            _ => None,
        })
        .collect();
    let eps_trend = match eps {
        Some(e) if e.len() >= 3 => Some(fit(FitModel::LogLog, &e, &maxima)?),
        _ => None,
    };
    Ok(LocalHarnackReport { report, family_spread: hi / lo, eps_trend })
}
