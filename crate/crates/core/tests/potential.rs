use std::f64::consts::{E, PI};

use fracdiff::kernel::{EquationParams, Field, GridSpec};
use fracdiff::potential::{
    admissible_window, harnack_bound, harnack_bound_factor, initial_harnack_ratio, riesz_kernel,
    riesz_potential_ball, HarnackTuple, RieszNormalization,
};
use fracdiff::quad::integrate_adaptive;
use fracdiff::solver::{sample_initial_data, InitialDataSpec};
use fracdiff::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use RieszNormalization::{Custom, SignedLog, Unit};

fn grid(d: usize, l: f64, n: usize) -> GridSpec<f64> {
    GridSpec::new(d, l, n).unwrap()
}

fn params(a: f64, b: f64, d: usize) -> EquationParams<f64> {
    EquationParams::new(a, b, d).unwrap()
}

#[test]
fn kernel_values() {
    assert_eq!(riesz_kernel(2, 1.0, &[2.0, 0.0], Unit).unwrap(), 0.5);
    let v = riesz_kernel(1, 1.0, &[E], SignedLog).unwrap();
    assert!((v + 1.0 / PI.sqrt()).abs() < 1e-15);
    assert_eq!(riesz_kernel(3, 2.0, &[0.0, 1.0, 0.0], Unit).unwrap(), 1.0);
    assert!(matches!(riesz_kernel(2, 1.0, &[0.0, 0.0], Unit), Err(Error::Singularity(_))));
    assert!(matches!(riesz_kernel(1, 1.5, &[1.0], Unit), Err(Error::Domain(_))));
}

#[test]
fn potential_of_constants() {
    let g = grid(2, 2.0, 256);
    let one = Field::from_fn(g, |_| 1.0).unwrap();
    let v = riesz_potential_ball(2, 1.0, &one, &[0.0, 0.0], 1.0, &[0.0, 0.0], Unit).unwrap();
    assert!((v - 2.0 * PI).abs() < 1e-12, "{v}");
    let zero = Field::zeros(g).unwrap();
    assert_eq!(riesz_potential_ball(2, 1.0, &zero, &[0.0, 0.0], 1.0, &[0.3, 0.1], Unit).unwrap(), 0.0);
    // off-centre evaluation on the constant: ∫_{-1}^{1} |x - y|^{-1/2} dy at x = 0.5
    let g = grid(1, 4.0, 1024);
    let one = Field::from_fn(g, |_| 1.0).unwrap();
    let v = riesz_potential_ball(1, 0.5, &one, &[0.0], 1.0, &[0.5], Unit).unwrap();
    let want = 2.0 * (1.5f64.sqrt() + 0.5f64.sqrt());
    assert!((v / want - 1.0).abs() < 1e-7, "{v} vs {want}");
}

#[test]
fn gaussian_potential_matches_monte_carlo() {
    let g = grid(2, 2.0, 512);
    let u0 = Field::from_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1])).exp()).unwrap();
    let v = riesz_potential_ball(2, 1.0, &u0, &[0.0, 0.0], 1.0, &[0.0, 0.0], Unit).unwrap();
    // sample y with density |y|^{-1}/(2π) on the unit disk, so the weight is 2π e^{-|y|²}
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0C5);
    let n = 10_000_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let rho: f64 = rng.gen();
        let _theta: f64 = rng.gen::<f64>() * 2.0 * PI;
        let w = 2.0 * PI * (-rho * rho).exp();
        s += w;
        s2 += w * w;
    }
    let mean = s / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((v - mean).abs() < 3.0 * se, "{v} vs {mean} ± {se}");
}

#[test]
fn potential_converges_under_refinement() {
    let value = |n: usize| {
        let g = grid(1, 4.0, n);
        let u0 = sample_initial_data(&InitialDataSpec::mollifier(0.5).with_center(vec![0.2]), &g).unwrap();
        riesz_potential_ball(1, 0.5, &u0, &[0.0], 1.0, &[0.0], Unit).unwrap()
    };
    let (a, b, c) = (value(256), value(512), value(1024));
    let ratio = (a - b).abs() / (b - c).abs();
    assert!(ratio >= 2.0, "{a} {b} {c}: ratio {ratio}");
    assert!((b - c).abs() <= 1e-3 * c.abs());
}

#[test]
fn bound_factor_for_constant_data() {
    let p = params(0.5, 1.0, 2);
    let g = grid(2, 4.0, 256);
    let one = Field::from_fn(g, |_| 1.0).unwrap();
    let tuple = HarnackTuple { t1: 1.0, t2: 1.2, x1: vec![0.0, 0.0], x2: vec![0.0, 0.0], r: 0.25, horizon: 2.0 };
    let f = harnack_bound_factor(&p, &one, &tuple).unwrap();
    let want = 1.0 + (1.0f64 / 1.2).powf(0.5);
    assert!((f - want).abs() < 1e-12, "{f} vs {want}");
}

#[test]
fn bound_factor_rejects_degenerate_and_inadmissible() {
    let p = params(0.5, 0.5, 1);
    let g = grid(1, 40.0, 4096);
    let far = sample_initial_data(&InitialDataSpec::mollifier(1.0).with_center(vec![30.0]), &g).unwrap();
    let tuple = HarnackTuple { t1: 1.0, t2: 1.5, x1: vec![0.0], x2: vec![0.1], r: 0.25, horizon: 4.0 };
    assert!(matches!(harnack_bound_factor(&p, &far, &tuple), Err(Error::DegenerateData(_))));
    let late = HarnackTuple { t2: 2.0, ..tuple.clone() };
    assert!(matches!(harnack_bound_factor(&p, &far, &late), Err(Error::Admissibility(_))));
    assert!(harnack_bound_factor(&params(0.5, 1.5, 1), &far, &tuple).is_err());
}

#[test]
fn log_case_factor_matches_direct_quadrature() {
    let (a, b) = (0.5, 1.0);
    let p = params(a, b, 1);
    let g = grid(1, 12.0, 1 << 13);
    let u0 = sample_initial_data(&InitialDataSpec::plain_gaussian(), &g).unwrap();
    let tuple = HarnackTuple { t1: 1.0, t2: 1.5, x1: vec![0.0], x2: vec![0.0], r: 0.5, horizon: 3.0 };
    let f = harnack_bound_factor(&p, &u0, &tuple).unwrap();
    let q = |t: f64| {
        let r = 2.0 * t.powf(a / b);
        let c = 1.0 + b * 2f64.ln() + a * t.ln();
        2.0 * integrate_adaptive(|y: f64| (c - b * y.ln()) * (-y * y).exp(), 0.0, r, 1e-14, 1e-12, 100_000).unwrap().value
    };
    let want = 1.0 + q(1.0) / q(1.5);
    assert!(f.is_finite() && f > 1.0);
    assert!((f / want - 1.0).abs() < 1e-3, "{f} vs {want}");
}

#[test]
fn factor_independent_of_kernel_normalization() {
    let p = params(0.6, 0.7, 1);
    let g = grid(1, 20.0, 1 << 12);
    let u0 = sample_initial_data(&InitialDataSpec::mollifier(0.3).with_center(vec![0.1]), &g).unwrap();
    let tuple = HarnackTuple { t1: 1.0, t2: 1.4, x1: vec![0.05], x2: vec![-0.2], r: 0.4, horizon: 3.0 };
    let base = harnack_bound(&p, &u0, &tuple, Unit).unwrap();
    for norm in [SignedLog, Custom(3.7), Custom(1e-5)] {
        let other = harnack_bound(&p, &u0, &tuple, norm).unwrap();
        assert_eq!(other.factor.to_bits(), base.factor.to_bits());
        assert!((other.numerator / other.denominator / (base.numerator / base.denominator) - 1.0).abs() < 1e-15);
    }
}

#[test]
fn initial_ratio_examples() {
    let g = grid(1, 8.0, 256);
    let three = Field::from_fn(g, |_| 3.0).unwrap();
    assert_eq!(initial_harnack_ratio(&three, &[0.0], 1.0, &[1.0], 2.0).unwrap(), 1.0);
    let bump = sample_initial_data(&InitialDataSpec::mollifier(0.5), &g).unwrap();
    assert_eq!(initial_harnack_ratio(&bump, &[0.0], 1.0, &[4.0], 1.0).unwrap(), f64::INFINITY);
    let zero = Field::zeros(g).unwrap();
    assert!(matches!(initial_harnack_ratio(&zero, &[0.0], 1.0, &[0.0], 1.0), Err(Error::UndefinedRatio)));
    let gauss = sample_initial_data(&InitialDataSpec::plain_gaussian(), &g).unwrap();
    let h = initial_harnack_ratio(&gauss, &[0.0], 1.0, &[0.0], 1.0).unwrap();
    assert!((h - E).abs() < 1e-12);
}

#[test]
fn window_examples() {
    let p = params(0.5, 1.0, 1);
    assert!(admissible_window(0.5, &p, 1.0, 1.5, 3.0));
    assert!(!admissible_window(0.5, &p, 1.0, 2.5, 3.0));
    assert!(!admissible_window(0.5, &p, 1.0, 1.0, 3.0));
}

#[test]
fn enlarging_the_ball_never_decreases_the_potential() {
    let g = grid(2, 8.0, 256);
    let u0 = sample_initial_data(&InitialDataSpec::plain_gaussian().with_center(vec![0.5, -0.3]), &g).unwrap();
    let mut last = 0.0;
    for r in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let v = riesz_potential_ball(2, 1.3, &u0, &[0.2, 0.2], r, &[0.2, 0.2], Unit).unwrap();
        assert!(v >= last);
        last = v;
    }
}

fn gaussian_mixture(g: GridSpec<f64>, rng: &mut ChaCha8Rng) -> Field<f64> {
    let k = rng.gen_range(1..=3);
    let comps: Vec<(Vec<f64>, f64, f64)> = (0..k)
        .map(|_| {
            let c = (0..g.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (c, rng.gen_range(0.2..2.0), rng.gen_range(0.5..2.0))
        })
        .collect();
    Field::from_fn(g, |x| {
        comps
            .iter()
            .map(|(c, w, a)| {
                let r2: f64 = x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
                a * (-r2 / (w * w)).exp()
            })
            .sum()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn factor_bounded_by_initial_harnack_constant(seed in any::<u64>(), d in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = rng.gen_range(0.3..0.95);
        let beta = rng.gen_range(alpha..(d as f64).min(2.0) - 0.01);
        let p = params(alpha, beta, d);
        let g = if d == 1 { grid(1, 16.0, 4096) } else { grid(2, 10.0, 256) };
        let u0 = gaussian_mixture(g, &mut rng);
        let r: f64 = rng.gen_range(0.1..0.5);
        let lag = (2.0 * r).powf(beta / alpha);
        let t1 = lag * rng.gen_range(1.0..2.0);
        let t2 = t1 + lag * rng.gen_range(0.05..1.0);
        let point = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            loop {
                let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-r..r)).collect();
                if x.iter().map(|v| v * v).sum::<f64>() < r * r {
                    return x;
                }
            }
        };
        let tuple = HarnackTuple { t1, t2, x1: point(&mut rng), x2: point(&mut rng), r, horizon: t1 + lag };
        let (r1, r2) = tuple.radii(&p);
        prop_assume!(r2 >= r1);
        let f = harnack_bound_factor(&p, &u0, &tuple).unwrap();
        // interpolated values inside a ball are bounded by nodes within one cell diagonal
        let slack = g.spacing() * (d as f64).sqrt();
        let h0 = initial_harnack_ratio(&u0, &tuple.x1, r1 + slack, &tuple.x2, r2 + slack).unwrap();
        prop_assert!(f >= 1.0 && f <= 1.0 + h0, "factor {} vs 1 + H0 = {}", f, 1.0 + h0);
    }
}
