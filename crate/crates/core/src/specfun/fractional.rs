//! Riemann–Liouville fractional integral `J^α f = g_α * f` on a uniform
//! time grid, and the per-Fourier-mode residual of the integrated equation
//! `y = 1 - λ J^α y`.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::gamma::gamma_real;
use super::mittag_leffler::{MLEvalPolicy, MittagLefflerNeg};

/// Uniform partition of `[0, t_end]` into `n_steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub t_end: T,
    pub n_steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_end: T, n_steps: usize) -> Result<Self> {
        let g = Self { t_end, n_steps };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() || self.n_steps == 0 {
            return Err(Error::Domain(format!(
                "time grid needs t_end > 0 and n_steps > 0 (got {}, {})",
                self.t_end, self.n_steps
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> T {
        self.t_end / T::from_usize_lossy(self.n_steps)
    }

    /// `n_steps + 1` nodes; the last one is exactly `t_end`.
    pub fn nodes(&self) -> Vec<T> {
        let h = self.step();
        let mut v: Vec<T> = (0..=self.n_steps).map(|k| h * T::from_usize_lossy(k)).collect();
        v[self.n_steps] = self.t_end;
        v
    }
}

// binomial(a, k) for real a
fn binom<T: Real>(a: T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| {
        let i = T::from_usize_lossy(i);
        acc * (a - i) / (i + T::one())
    })
}

/// Interior weights `b_m = (m+1)^{α+1} - 2 m^{α+1} + (m-1)^{α+1}`, `m = 1..=n`.
/// For large `m` the second difference is summed as a series in `1/m` to
/// avoid cancellation.
fn interior_weights<T: Real>(alpha: T, n: usize) -> Vec<T> {
    let p = alpha + T::one();
    let coefs: Vec<T> = (1..=12).map(|k| binom(p, 2 * k)).collect();
    let mut b = vec![T::zero(); n + 1];
    for (m, slot) in b.iter_mut().enumerate().skip(1) {
        let mf = T::from_usize_lossy(m);
        *slot = if m < 16 {
            (mf + T::one()).powf(p) - T::lit(2.0) * mf.powf(p) + (mf - T::one()).powf(p)
        } else {
            let inv2 = (mf * mf).recip();
            let mut s = T::zero();
            let mut pw = inv2;
            for &c in &coefs {
                s = s + c * pw;
                pw = pw * inv2;
            }
            T::lit(2.0) * mf.powf(p) * s
        };
    }
    b
}

/// First weight `a_{0,n} = (n-1)^{α+1} - (n-1-α) n^α`.
fn first_weight<T: Real>(alpha: T, n: usize) -> T {
    let p = alpha + T::one();
    let nf = T::from_usize_lossy(n);
    if n < 16 {
        (nf - T::one()).powf(p) - (nf - T::one() - alpha) * nf.powf(alpha)
    } else {
        // n^{α+1} Σ_{k>=2} C(α+1, k) (-1/n)^k
        let x = -nf.recip();
        let mut s = T::zero();
        let mut pw = x * x;
        for k in 2..30 {
            s = s + binom(p, k) * pw;
            pw = pw * x;
        }
        nf.powf(p) * s
    }
}

fn check_inputs<T: Real>(alpha: T, samples: &[T], grid: &TimeGrid<T>) -> Result<()> {
    grid.validate()?;
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::Domain(format!("fractional order {alpha} outside [0, 1]")));
    }
    if samples.len() != grid.n_steps + 1 {
        return Err(Error::Domain(format!(
            "{} samples supplied for a grid with {} nodes",
            samples.len(),
            grid.n_steps + 1
        )));
    }
    Ok(())
}

/// `(J^α f)(t_k)` at every node by product-trapezoidal quadrature: `f` is
/// interpolated piecewise linearly and integrated exactly against
/// `(t - τ)^{α-1} / Γ(α)`. `α = 0` returns the samples unchanged.
pub fn fractional_integral<T: Real>(alpha: T, samples: &[T], grid: &TimeGrid<T>) -> Result<Vec<T>> {
    check_inputs(alpha, samples, grid)?;
    if alpha == T::zero() {
        return Ok(samples.to_vec());
    }
    let n = grid.n_steps;
    let scale = grid.step().powf(alpha) / gamma_real(alpha + T::lit(2.0))?;
    let b = interior_weights(alpha, n);
    let mut out = vec![T::zero(); n + 1];
    for k in 1..=n {
        let mut acc = first_weight(alpha, k) * samples[0] + samples[k];
        for j in 1..k {
            acc = acc + b[k - j] * samples[j];
        }
        out[k] = scale * acc;
    }
    Ok(out)
}

/// Product integration of `J^α y` at `t` over a nonuniform mesh: `y` is
/// interpolated piecewise linearly between the mesh points `tau[0] = 0 <
/// tau[1] < ... <= t` and integrated exactly against `(t - τ)^{α-1}/Γ(α)`.
fn product_integral_to<T: Real>(alpha: T, tau: &[T], y: &[T], t: T, inv_gamma: T) -> T {
    let mut acc = T::zero();
    for i in 0..tau.len() - 1 {
        let (w_left, w_right) = interval_weights(alpha, t - tau[i], tau[i + 1] - tau[i]);
        acc = acc + y[i] * w_left + y[i + 1] * w_right;
    }
    acc * inv_gamma
}

/// Moments of `(t - τ)^{α-1}` against the two hat functions of `[a, b]`,
/// given `A = t - a` and the width `b - a`. Written in `u = (b-a)/A` so that
/// short intervals far from `t` do not cancel.
fn interval_weights<T: Real>(alpha: T, big_a: T, width: T) -> (T, T) {
    let u = (width / big_a).min(T::one());
    let a_pow = big_a.powf(alpha);
    // e = 1 - (1-u)^α
    let e = if u == T::one() { T::one() } else { -(alpha * (-u).ln_1p()).exp_m1() };
    let total = a_pow * e / alpha;
    // (e/α - u(1-u)^α) / u, a series for small u where the difference cancels
    let bracket = if u < T::lit(0.25) {
        let mut binom = alpha; // C(α, k-1) at k = 2
        let mut upow = u;
        let mut sum = T::zero();
        let mut sign = -T::one();
        for k in 2..60 {
            let kf = T::from_usize_lossy(k);
            let c = binom * (alpha - kf + T::one() - kf * alpha) / (kf * alpha);
            let term = sign * c * upow;
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() {
                break;
            }
            binom = binom * (alpha - kf + T::one()) / kf;
            upow = upow * u;
            sign = -sign;
        }
        sum
    } else {
        (e / alpha - u * (T::one() - e)) / u
    };
    let w_right = a_pow * bracket / (alpha + T::one());
    (total - w_right, w_right)
}

/// Mesh for the residual: the grid nodes, refined on `[0, t_end/4]` by
/// points graded like `(i/n)^{2/α}` toward the origin.
fn graded_mesh<T: Real>(alpha: T, grid: &TimeGrid<T>) -> Vec<T> {
    let n = grid.n_steps;
    let edge = grid.t_end * T::lit(0.25);
    let g = T::lit(2.0) / alpha;
    let mut mesh: Vec<T> = (0..=n)
        .map(|i| edge * (T::from_usize_lossy(i) / T::from_usize_lossy(n)).powf(g))
        .chain(grid.nodes())
        .collect();
    mesh.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    mesh.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * grid.t_end);
    mesh
}

/// Maximum over the grid nodes of `|y(t_k) - 1 + λ (J^α y)(t_k)|` for
/// `y(t) = E_α(-λ t^α)`.
///
/// `y` is evaluated on the grid nodes plus a mesh graded toward `t = 0`,
/// where `y` behaves like a series in `t^α`; product integration on that
/// mesh is second order in `1/n_steps`, so the residual measures the
/// Mittag-Leffler values against the equation rather than the start-up
/// error of a uniform rule.
pub fn fourier_mode_residual<T: Real>(
    alpha: T,
    lambda: T,
    grid: &TimeGrid<T>,
    policy: &MLEvalPolicy<T>,
) -> Result<T> {
    grid.validate()?;
    if !(lambda >= T::zero()) {
        return Err(Error::Domain(format!("mode eigenvalue λ = {lambda} must be nonnegative")));
    }
    let ml = MittagLefflerNeg::new(alpha, *policy)?;
    let mesh = graded_mesh(alpha, grid);
    let y = mesh
        .iter()
        .map(|&t| ml.eval(lambda * t.powf(alpha)))
        .collect::<Result<Vec<_>>>()?;
    let inv_gamma = gamma_real(alpha)?.recip();
    let mut worst = T::zero();
    let mut end = 1;
    for t in grid.nodes().into_iter().skip(1) {
        while mesh[end] < t {
            end += 1;
        }
        let j = product_integral_to(alpha, &mesh[..=end], &y[..=end], t, inv_gamma);
        worst = worst.max((y[end] - T::one() + lambda * j).abs());
    }
    Ok(worst)
}
