use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracdiff::experiments::{
    emit_csv, run_harnack_local, run_harnack_nonlocal, run_lp_counterexample, run_mollifier_counterexample, FitResult,
    LocalCase, Provenance, SweepResult, TupleSampler, DEFAULT_SEED, TIME_RATIO_BANDS,
};
use fracdiff::kernel::{classify_regime, eval_kernel_grid, eval_kernel_mellin, ContourSpec, EquationParams, GridSpec};
use fracdiff::solver::{mild_solve, point_value, sample_initial_data, InitialDataSpec};
use fracdiff::specfun::{fourier_mode_residual, mittag_leffler_neg, MLEvalPolicy, TimeGrid};

/// Fundamental solution, mild solver and Harnack experiments for
/// `∂_t^α (u - u₀) + (-Δ)^{β/2} u = 0`.
#[derive(Parser)]
#[command(name = "fracdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the fundamental solution Z(t, r)
    KernelEval(KernelEvalArgs),
    /// Solve with sampled initial data and write the solution as CSV
    Solve(SolveArgs),
    /// Mollifier sweep: u^ε(t1, 0) blows up while u^ε(t2, x0) converges
    CounterexampleMollifier(MollifierArgs),
    /// Scaled-Gaussian sweep: u_n(t1, 0) blows up at fixed L^p norm
    CounterexampleLp(LpArgs),
    /// Empirical constant of the non-local Harnack inequality
    HarnackNonlocal(NonlocalArgs),
    /// Plain Harnack ratio in the local cases
    HarnackLocal(LocalArgs),
    /// Quick invariant checks
    Selftest,
}

#[derive(Args, Clone, Copy)]
struct EquationArgs {
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
}

impl EquationArgs {
    fn params(&self) -> Result<EquationParams<f64>> {
        Ok(EquationParams::new(self.alpha, self.beta, self.dim)?)
    }
}

#[derive(Args, Clone, Copy)]
struct GridArgs {
    /// points per axis (power of two)
    #[arg(long = "grid-n", default_value_t = 1 << 14)]
    n: usize,
    /// half extent L of the box [-L, L)^d
    #[arg(long = "grid-l", default_value_t = 200.0)]
    l: f64,
}

impl GridArgs {
    fn grid(&self, dim: usize) -> Result<GridSpec<f64>> {
        Ok(GridSpec::new(dim, self.l, self.n)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fft,
    Mellin,
    Asymptotic,
}

#[derive(Args)]
struct KernelEvalArgs {
    #[command(flatten)]
    eq: EquationArgs,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    r: f64,
    #[arg(long, value_enum, default_value_t = Method::Mellin)]
    method: Method,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    eq: EquationArgs,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// mollifier:<eps> | gauss-n:<n>,<p> | gauss
    #[arg(long, default_value = "gauss")]
    data: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    t1: f64,
    #[arg(long, default_value_t = 2.0)]
    t2: f64,
    /// comma-separated sweep values
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MollifierArgs {
    #[command(flatten)]
    eq: EquationArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    /// far point x0, comma-separated
    #[arg(long, value_delimiter = ',', default_value = "1")]
    x0: Vec<f64>,
    #[arg(long = "grid-n", default_value_t = 1 << 20)]
    grid_n: usize,
    #[arg(long = "grid-l", default_value_t = 200.0)]
    grid_l: f64,
}

#[derive(Args)]
struct LpArgs {
    #[command(flatten)]
    eq: EquationArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct NonlocalArgs {
    #[command(flatten)]
    eq: EquationArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// number of sampled tuples; 0 uses the single tuple (t1, 0), (t2, r/2)
    #[arg(long, default_value_t = 0)]
    n_tuples: usize,
    #[arg(long, default_value_t = 3.0)]
    horizon: f64,
    #[arg(long = "grid-n", default_value_t = 1 << 20)]
    grid_n: usize,
    #[arg(long = "grid-l", default_value_t = 200.0)]
    grid_l: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    /// α < 1, d = 1 < β
    A,
    /// α = 1, β < 2
    B,
}

#[derive(Args)]
struct LocalArgs {
    #[arg(long, value_enum, default_value_t = CaseArg::A)]
    case: CaseArg,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    #[arg(long, default_value_t = 200)]
    n_tuples: usize,
    #[arg(long, default_value_t = 3.0)]
    horizon: f64,
    /// sample t1 below the lag (α = 1 only)
    #[arg(long)]
    no_time_lag: bool,
    #[arg(long = "grid-n", default_value_t = 1 << 18)]
    grid_n: usize,
    #[arg(long = "grid-l", default_value_t = 64.0)]
    grid_l: f64,
}

/// Result of a run: passed, or a fit that missed the r² gate.
enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    fn exit(self) -> ExitCode {
        match self {
            Verdict::Pass => ExitCode::SUCCESS,
            Verdict::Fail => ExitCode::from(1),
            Verdict::Inconclusive => ExitCode::from(2),
        }
    }
}

fn parse_data(s: &str) -> Result<InitialDataSpec<f64>> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    Ok(match kind {
        "gauss" => InitialDataSpec::plain_gaussian(),
        "mollifier" => InitialDataSpec::mollifier(arg.parse().with_context(|| format!("bad epsilon in {s:?}"))?),
        "gauss-n" => {
            let (n, p) = arg.split_once(',').with_context(|| format!("expected gauss-n:<n>,<p>, got {s:?}"))?;
            InitialDataSpec::scaled_gaussian(n.parse()?, p.parse()?)
        }
        _ => bail!("unknown data kind {kind:?}; use mollifier:<eps>, gauss-n:<n>,<p> or gauss"),
    })
}

fn powers_of_two(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}

fn print_fit(name: &str, f: &FitResult, expected: Option<f64>) {
    println!("{name}.model: {:?}", f.model);
    println!("{name}.slope: {}", f.slope);
    println!("{name}.intercept: {}", f.intercept);
    println!("{name}.r_squared: {}", f.r_squared);
    if let Some(e) = expected {
        println!("{name}.expected_slope: {e}");
    }
}

fn write(sweep: &SweepResult, out: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = out {
        emit_csv(sweep, path)?;
        println!("csv: {}", path.display());
    }
    Ok(())
}

/// Growth verdict: slope within 10% of `expected`, or positive when there is no expected slope.
fn growth_verdict(f: &FitResult, expected: Option<f64>) -> Verdict {
    if !f.is_conclusive() {
        return Verdict::Inconclusive;
    }
    let ok = match expected {
        Some(e) => f.matches(e, 0.10),
        None => f.slope > 0.0,
    };
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn kernel_eval(a: &KernelEvalArgs) -> Result<Verdict> {
    let params = a.eq.params()?;
    match a.method {
        Method::Mellin => println!("value: {}", eval_kernel_mellin(&params, a.t, a.r, &ContourSpec::default())?),
        Method::Fft => {
            let g = a.grid.grid(params.dim)?;
            let field = eval_kernel_grid(&params, a.t, &g)?;
            let mut x = vec![0.0; params.dim];
            x[0] = a.r;
            println!("value: {}", point_value(&field, &x)?);
        }
        Method::Asymptotic => {
            let rep = classify_regime(&params, a.t, a.r)?;
            println!("regime: {:?}", rep.regime);
            println!("similarity_r: {}", rep.similarity_r);
            println!("envelope: {}", rep.envelope);
            if let Some(s) = rep.sigma {
                println!("sigma: {s}");
            }
        }
    }
    Ok(Verdict::Pass)
}

fn solve(a: &SolveArgs) -> Result<Verdict> {
    let params = a.eq.params()?;
    let g = a.grid.grid(params.dim)?;
    let spec = parse_data(&a.data)?;
    let u0 = sample_initial_data(&spec, &g)?;
    let u = mild_solve(&params, &u0, a.t)?;
    let names: Vec<String> = (0..params.dim).map(|i| format!("x{i}")).chain(["u".to_string()]).collect();
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let provenance = Provenance { params, grid: g, times: vec![a.t], seed: None };
    let mut sweep = SweepResult::new(&format!("solve {}", spec.label()), "index", &cols, provenance);
    for (i, v) in u.values.iter().enumerate() {
        let mut row = g.point(i);
        row.push(*v);
        sweep.push(i as f64, row);
    }
    emit_csv(&sweep, &a.out)?;
    println!("mass: {}", u.mass());
    println!("max: {}", u.max());
    println!("csv: {}", a.out.display());
    Ok(Verdict::Pass)
}

fn mollifier(a: &MollifierArgs) -> Result<Verdict> {
    let params = a.eq.params()?;
    let g = GridSpec::new(params.dim, a.grid_l, a.grid_n)?;
    let eps = a.sweep.sweep.clone().unwrap_or_else(|| powers_of_two(-9, -4).into_iter().rev().collect());
    let r = run_mollifier_counterexample(&params, a.sweep.t1, a.sweep.t2, &a.x0, &eps, &g)?;
    print_fit("growth", &r.growth, r.expected_slope);
    print_fit("ratio_growth", &r.ratio_growth, r.expected_slope);
    println!("limit_z_t2_x0: {}", r.limit);
    println!("limit_deviation: {}", r.limit_deviation);
    println!("ratio_increasing: {}", r.ratio_increasing);
    if let Some(s) = &r.stopped {
        println!("stopped: {s}");
    }
    write(&r.sweep, &a.sweep.out)?;
    Ok(match growth_verdict(&r.growth, r.expected_slope) {
        Verdict::Pass if !(r.ratio_increasing && r.limit_deviation <= 0.02) => Verdict::Fail,
        v => v,
    })
}

fn lp(a: &LpArgs) -> Result<Verdict> {
    let params = a.eq.params()?;
    let g = a.grid.grid(params.dim)?;
    let ns = a.sweep.sweep.clone().unwrap_or_else(|| powers_of_two(0, 6));
    let r = run_lp_counterexample(&params, a.p, a.sweep.t1, a.sweep.t2, &ns, &g)?;
    print_fit("growth", &r.growth, r.expected_slope);
    println!("initial_norm: {}", r.initial_norm);
    println!("max_norm_ratio: {}", r.max_norm_ratio);
    if let Some(s) = &r.stopped {
        println!("stopped: {s}");
    }
    write(&r.sweep, &a.sweep.out)?;
    Ok(match growth_verdict(&r.growth, r.expected_slope) {
        Verdict::Pass if r.max_norm_ratio > 1.02 => Verdict::Fail,
        v => v,
    })
}

fn spread(xs: &[f64]) -> f64 {
    xs.iter().cloned().fold(f64::NAN, f64::max) / xs.iter().cloned().fold(f64::NAN, f64::min)
}

fn harnack_nonlocal(a: &NonlocalArgs) -> Result<Verdict> {
    let params = a.eq.params()?;
    let g = GridSpec::new(params.dim, a.grid_l, a.grid_n)?;
    let eps = a.sweep.sweep.clone().unwrap_or_else(|| powers_of_two(-9, -4).into_iter().rev().collect());
    let data: Vec<_> = eps.iter().map(|&e| InitialDataSpec::mollifier(e)).collect();
    let tuples = if a.n_tuples == 0 {
        let mut x2 = vec![0.0; params.dim];
        x2[0] = 0.5 * a.r;
        let horizon = a.horizon.max(a.sweep.t2);
        vec![fracdiff::potential::HarnackTuple { t1: a.sweep.t1, t2: a.sweep.t2, x1: vec![0.0; params.dim], x2, r: a.r, horizon }]
    } else {
        TupleSampler::admissible(&params, a.r, a.horizon, 1.0, a.sweep.seed)?.sample(params.dim, a.n_tuples)
    };
    let r = run_harnack_nonlocal(&params, &data, &tuples, &g, Some(a.sweep.seed))?;
    let c = r.max_c_hat_by_data();
    let ratios = r.max_ratio_by_data();
    for (i, label) in r.labels.iter().enumerate() {
        println!("data[{i}]: {label} max_ratio = {} max_c_hat = {}", ratios[i], c[i]);
    }
    for (edge, v) in TIME_RATIO_BANDS.iter().zip(r.max_c_hat_by_band()) {
        println!("band t2/t1 <= {edge}: max_c_hat = {v}");
    }
    println!("skipped: {}", r.skipped);
    let c_spread = spread(&c);
    println!("c_hat_spread: {c_spread}");
    println!("ratio_spread: {}", spread(&ratios));
    write(&r.to_sweep("harnack-nonlocal"), &a.sweep.out)?;
    Ok(if c_spread <= 2.0 { Verdict::Pass } else { Verdict::Fail })
}

fn harnack_local(a: &LocalArgs) -> Result<Verdict> {
    let (case, alpha, beta) = match a.case {
        CaseArg::A => (LocalCase::TimeFractionalDLtBeta, a.alpha.unwrap_or(0.5), a.beta.unwrap_or(1.5)),
        CaseArg::B => (LocalCase::SpaceFractionalAlpha1, a.alpha.unwrap_or(1.0), a.beta.unwrap_or(1.0)),
    };
    let params = EquationParams::new(alpha, beta, a.dim)?;
    let g = GridSpec::new(params.dim, a.grid_l, a.grid_n)?;
    let eps = a.sweep.sweep.clone().unwrap_or_else(|| powers_of_two(-8, -4).into_iter().rev().collect());
    let data: Vec<_> = eps.iter().map(|&e| InitialDataSpec::mollifier(e)).collect();
    let sampler = if a.no_time_lag {
        TupleSampler::without_time_lag(&params, a.r, a.sweep.seed)?
    } else {
        TupleSampler::admissible(&params, a.r, a.horizon, 1.0, a.sweep.seed)?
    };
    let tuples = sampler.sample(params.dim, a.n_tuples);
    let r = run_harnack_local(case, &params, &data, &tuples, &g, !a.no_time_lag, Some(a.sweep.seed))?;
    for (label, m) in r.report.labels.iter().zip(r.report.max_ratio_by_data()) {
        println!("{label}: max_ratio = {m}");
    }
    println!("family_spread: {}", r.family_spread);
    if let Some(f) = &r.eps_trend {
        print_fit("eps_trend", f, Some(0.0));
    }
    write(&r.report.to_sweep("harnack-local"), &a.sweep.out)?;
    let flat = r.eps_trend.is_none_or(|f| f.slope.abs() <= 0.05);
    Ok(if r.family_spread <= 2.0 && flat { Verdict::Pass } else { Verdict::Fail })
}

fn selftest() -> Result<Verdict> {
    let mut ok = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    let pol = MLEvalPolicy::default();
    let e = (mittag_leffler_neg(1.0, 3.0, &pol)? / (-3f64).exp() - 1.0).abs();
    check("E_1(-x) = exp(-x)", e <= 1e-12, format!("{e:.1e}"));

    let heat = EquationParams::new(1.0, 2.0, 1)?;
    let g = GridSpec::new(1, 40.0, 4096)?;
    // a grid node, so interpolation plays no part
    let x: f64 = g.coord(g.origin_index() + 64);
    let want = (4.0 * std::f64::consts::PI).powf(-0.5) * (-x * x / 4.0).exp();
    let e = (eval_kernel_mellin(&heat, 1.0, x, &ContourSpec::default())? / want - 1.0).abs();
    check("heat kernel, contour route", e <= 1e-10, format!("{e:.1e}"));
    let f = eval_kernel_grid(&heat, 1.0, &g)?;
    let e = (point_value(&f, &[x])? / want - 1.0).abs();
    check("heat kernel, grid route", e <= 1e-8, format!("{e:.1e}"));

    let p = EquationParams::new(0.6, 1.2, 1)?;
    let g = GridSpec::new(1, 100.0, 1 << 18)?;
    let m: f64 = eval_kernel_grid(&p, 1.0, &g)?.mass();
    check("mass of Z", (m - 1.0).abs() <= 2e-2, format!("{m}"));
    let (t, r) = (3.0f64, 0.7);
    let lhs = eval_kernel_mellin(&p, t, r, &ContourSpec::default())?;
    let rhs = t.powf(-0.5) * eval_kernel_mellin(&p, 1.0, r * t.powf(-0.5), &ContourSpec::default())?;
    check("self-similar scaling", (lhs / rhs - 1.0).abs() <= 1e-6, format!("{:.1e}", (lhs / rhs - 1.0).abs()));
    let z1 = eval_kernel_mellin(&p, 1.0, 0.5, &ContourSpec::default())?;
    let z2 = eval_kernel_mellin(&p, 1.0, 0.6, &ContourSpec::default())?;
    check("radial decrease", z2 < z1, format!("{z1} > {z2}"));

    let res = fourier_mode_residual(0.5, 1.0, &TimeGrid::new(1.0, 1000)?, &pol)?;
    check("equation residual", res <= 1e-4, format!("{res:.1e}"));
    Ok(if ok { Verdict::Pass } else { Verdict::Fail })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::KernelEval(a) => kernel_eval(a),
        Command::Solve(a) => solve(a),
        Command::CounterexampleMollifier(a) => mollifier(a),
        Command::CounterexampleLp(a) => lp(a),
        Command::HarnackNonlocal(a) => harnack_nonlocal(a),
        Command::HarnackLocal(a) => harnack_local(a),
        Command::Selftest => selftest(),
    };
    match result {
        Ok(v) => v.exit(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
