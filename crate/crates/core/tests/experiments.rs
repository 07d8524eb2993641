use std::fs;

use fracdiff::experiments::*;
use fracdiff::kernel::{EquationParams, Field, GridSpec};
use fracdiff::solver::InitialDataSpec;
use fracdiff::Error;
use proptest::prelude::*;

fn params(a: f64, b: f64, d: usize) -> EquationParams<f64> {
    EquationParams::new(a, b, d).unwrap()
}

fn grid(d: usize, l: f64, n: usize) -> GridSpec<f64> {
    GridSpec::new(d, l, n).unwrap()
}

fn provenance() -> Provenance {
    Provenance { params: params(0.5, 0.5, 1), grid: grid(1, 10.0, 64), times: vec![1.0, 2.0], seed: Some(DEFAULT_SEED) }
}

#[test]
fn csv_header_only_for_empty_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    let s = SweepResult::new("empty", "epsilon", &["a", "b"], provenance());
    emit_csv(&s, &path).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), "sweep_param,a,b\n");
    let meta = fs::read_to_string(meta_path(&path)).unwrap();
    for key in ["alpha = 0.5", "beta = 0.5", "dim = 1", "grid_points_per_axis = 64", "seed = 0xf0c5", "version = fracdiff"] {
        assert!(meta.contains(key), "missing {key} in\n{meta}");
    }
}

#[test]
fn csv_rows_sorted_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let mut s = SweepResult::new("s", "epsilon", &["x"], provenance());
    let vals = [0.1 + 0.2, 1.0 / 3.0, 2f64.sqrt()];
    s.push(0.5, vec![vals[0]]);
    s.push(0.125, vec![vals[1]]);
    s.push(0.25, vec![vals[2]]);
    emit_csv(&s, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    let parsed: Vec<(f64, f64)> = lines[1..]
        .iter()
        .map(|l| {
            let (p, x) = l.split_once(',').unwrap();
            (p.parse().unwrap(), x.parse().unwrap())
        })
        .collect();
    assert_eq!(parsed, vec![(0.125, vals[1]), (0.25, vals[2]), (0.5, vals[0])]);
}

#[test]
fn csv_io_error_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.csv");
    let s = SweepResult::new("s", "n", &["x"], provenance());
    match emit_csv(&s, &path) {
        Err(Error::Io { path: p, .. }) => assert_eq!(p, path),
        other => panic!("expected an I/O error, got {other:?}"),
    }
}

#[test]
fn flagged_observables() {
    let mut s = SweepResult::new("s", "n", &["x", "y"], provenance());
    s.push(1.0, vec![1.0, f64::NAN]);
    s.push(2.0, vec![f64::INFINITY, 2.0]);
    assert_eq!(s.flagged(), vec![(0, "y".to_string()), (1, "x".to_string())]);
}

#[test]
fn lp_case_conditions() {
    assert!(check_lp_case(&params(0.5, 0.5, 1), 1.0).is_ok());
    assert!(check_lp_case(&params(0.5, 1.0, 1), 1.0).is_ok());
    assert!(matches!(check_lp_case(&params(0.5, 0.5, 1), 2.0), Err(Error::Domain(m)) if m.contains("d/β")));
    assert!(matches!(check_lp_case(&params(0.5, 1.0, 1), 1.5), Err(Error::Domain(m)) if m.contains("p = 1")));
    assert!(matches!(check_lp_case(&params(0.5, 1.5, 1), 1.0), Err(Error::Domain(m)) if m.contains("d ≥ β")));
}

#[test]
fn mollifier_sweep_preconditions() {
    let g = grid(1, 50.0, 1 << 12);
    let eps = [0.5, 0.25, 0.125];
    assert!(matches!(run_mollifier_counterexample(&params(0.5, 1.5, 1), 1.0, 2.0, &[1.0], &eps, &g), Err(Error::Domain(_))));
    assert!(matches!(run_mollifier_counterexample(&params(0.5, 0.5, 1), 1.0, 2.0, &[0.0], &eps, &g), Err(Error::Domain(_))));
    assert!(matches!(
        run_mollifier_counterexample(&params(0.5, 0.5, 1), 1.0, 2.0, &[1.0], &[0.25, 0.5, 0.125], &g),
        Err(Error::Domain(_))
    ));
}

#[test]
fn mollifier_sweep_stops_at_unresolved_eps() {
    // h ≈ 0.024: the support of ε = 2^-4 spans about 5 points
    let g = grid(1, 50.0, 1 << 12);
    let eps: Vec<f64> = (1..=6).map(|k| 2f64.powi(-k)).collect();
    let r = run_mollifier_counterexample(&params(1.0, 1.0, 1), 1.0, 2.0, &[1.0], &eps, &g).unwrap();
    assert_eq!(r.sweep.rows.len(), 3);
    assert!(r.stopped.as_deref().unwrap().contains("0.0625"));
    assert!(r.ratio_increasing);
    assert!(r.expected_slope.is_none());
}

#[test]
fn lp_sweep_norm_never_grows() {
    let r = run_lp_counterexample(&params(0.7, 0.5, 1), 1.0, 1.0, 2.0, &[1.0, 2.0, 4.0, 8.0], &grid(1, 200.0, 1 << 15)).unwrap();
    assert!(r.max_norm_ratio <= 1.0 + 1e-12, "{}", r.max_norm_ratio);
    assert!((r.initial_norm - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    let u = r.sweep.column("u_t1_origin").unwrap();
    assert!(u.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sampler_is_deterministic_and_admissible() {
    let p = params(0.5, 0.5, 2);
    let s = TupleSampler::admissible(&p, 0.5, 4.0, 1.0, DEFAULT_SEED).unwrap();
    let a = s.sample(2, 50);
    assert_eq!(a, s.sample(2, 50));
    for t in &a {
        t.validate(&p).unwrap();
        assert!(t.t1 >= 1.0);
    }
    let other = TupleSampler { seed: 1, ..s }.sample(2, 50);
    assert_ne!(a, other);
}

#[test]
fn sampler_rejects_empty_window() {
    assert!(matches!(TupleSampler::admissible(&params(0.5, 0.5, 1), 0.5, 1.5, 1.0, 0), Err(Error::Admissibility(_))));
}

#[test]
fn no_lag_sampler_breaks_only_the_lower_bound() {
    let p = params(1.0, 1.0, 1);
    let s = TupleSampler::without_time_lag(&p, 0.5, DEFAULT_SEED).unwrap();
    for t in s.sample(1, 100) {
        assert!(t.t1 < 1.0 && t.t1 >= 0.5 && t.t2 > t.t1 && t.t2 <= t.t1 + 1.0);
        assert!(matches!(t.validate(&p), Err(Error::Admissibility(_))));
    }
}

#[test]
fn broad_gaussian_constant_is_finite_and_factor_small() {
    let p = params(0.5, 0.5, 1);
    let s = TupleSampler::admissible(&p, 0.5, 3.0, 1.0, DEFAULT_SEED).unwrap();
    let tuples = s.sample(1, 8);
    let g = grid(1, 200.0, 1 << 14);
    let broad = Field::from_fn(g, |x| (-x[0] * x[0] / 400.0).exp()).unwrap();
    let data = [InitialDataSpec::sampled(broad)];
    let r = run_harnack_nonlocal(&p, &data, &tuples, &g, Some(s.seed)).unwrap();
    assert_eq!(r.records.len(), 8);
    for rec in &r.records {
        let f = rec.factor.unwrap();
        assert!(f > 1.0 && f < 2.5, "factor {f}");
        assert!(rec.c_hat().is_finite() && rec.c_hat() > 0.0);
    }
    let bands = r.max_c_hat_by_band();
    assert_eq!(bands.len(), TIME_RATIO_BANDS.len());
    assert!(bands.iter().any(|b| b.is_finite()));
}

#[test]
fn harnack_runs_are_deterministic() {
    let p = params(1.0, 1.0, 1);
    let s = TupleSampler::admissible(&p, 0.5, 3.0, 1.0, 7).unwrap();
    let tuples = s.sample(1, 5);
    let data = [InitialDataSpec::mollifier(0.25), InitialDataSpec::plain_gaussian()];
    let g = grid(1, 64.0, 1 << 12);
    let a = run_harnack_local(LocalCase::SpaceFractionalAlpha1, &p, &data, &tuples, &g, true, Some(7)).unwrap();
    let b = run_harnack_local(LocalCase::SpaceFractionalAlpha1, &p, &data, &tuples, &g, true, Some(7)).unwrap();
    assert_eq!(a.report.records, b.report.records);
    assert!(a.eps_trend.is_none());

    let dir = tempfile::tempdir().unwrap();
    let (pa, pb) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    emit_csv(&a.report.to_sweep("local"), &pa).unwrap();
    emit_csv(&b.report.to_sweep("local"), &pb).unwrap();
    assert_eq!(fs::read(&pa).unwrap(), fs::read(&pb).unwrap());
    assert_eq!(fs::read(meta_path(&pa)).unwrap(), fs::read(meta_path(&pb)).unwrap());
}

#[test]
fn local_case_mismatch_is_a_domain_error() {
    let g = grid(1, 64.0, 1 << 12);
    let data = [InitialDataSpec::plain_gaussian()];
    let e = run_harnack_local(LocalCase::TimeFractionalDLtBeta, &params(0.5, 0.5, 1), &data, &[], &g, true, None);
    assert!(matches!(e, Err(Error::Domain(_))));
    let e = run_harnack_local(LocalCase::SpaceFractionalAlpha1, &params(0.5, 1.5, 1), &data, &[], &g, true, None);
    assert!(matches!(e, Err(Error::Domain(_))));
    let e = run_harnack_local(LocalCase::TimeFractionalDLtBeta, &params(0.5, 1.5, 1), &data, &[], &g, false, None);
    assert!(matches!(e, Err(Error::Domain(_))));
}

#[test]
fn nonlocal_rejects_inadmissible_tuples() {
    let p = params(0.5, 0.5, 1);
    let s = TupleSampler::without_time_lag(&p, 0.5, 0).unwrap();
    let e = run_harnack_nonlocal(&p, &[InitialDataSpec::plain_gaussian()], &s.sample(1, 3), &grid(1, 64.0, 1 << 12), None);
    assert!(matches!(e, Err(Error::Admissibility(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_rows_stay_sorted(params in proptest::collection::vec(-1e3f64..1e3, 0..40)) {
        let mut s = SweepResult::new("p", "x", &["v"], provenance());
        for (i, p) in params.iter().enumerate() {
            s.push(*p, vec![i as f64]);
        }
        let xs = s.sweep_values();
        prop_assert!(xs.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(xs.len(), params.len());
    }

    #[test]
    fn loglog_fit_recovers_exponent(k in -3.0f64..3.0, c in 0.1f64..10.0) {
        let xs: Vec<f64> = (0..8).map(|i| 2f64.powi(i)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c * x.powf(k)).collect();
        let f = fit(FitModel::LogLog, &xs, &ys).unwrap();
        prop_assert!((f.slope - k).abs() < 1e-12);
        prop_assert!(f.is_conclusive());
    }
}
