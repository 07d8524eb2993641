use crate::error::{Error, Result};
use crate::kernel::Field;
use crate::quad::GaussLegendre;
use crate::scalar::Real;
use crate::solver::point_value;

/// Choice of the constant `c(d, β)` in `G = |x|^{β-d} / c` (d > β) or
/// `G = log|x| / c` (d = β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RieszNormalization<T> {
    /// `c = 1`
    Unit,
    /// `c = -(dπ)^{d/2}` for `d = β`, `c = 1` for `d > β`
    SignedLog,
    Custom(T),
}

impl<T: Real> RieszNormalization<T> {
    pub(crate) fn constant(self, d: usize, log_case: bool) -> T {
        match self {
            Self::Unit => T::one(),
            Self::SignedLog if log_case => {
                let d = T::from_usize_lossy(d);
                -(d * T::PI()).powf(d * T::lit(0.5))
            }
            Self::SignedLog => T::one(),
            Self::Custom(c) => c,
        }
    }
}

/// Radial profile `g(ρ)` of a kernel `G(x) = g(|x|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RadialProfile<T> {
    /// `ρ^{β-d}`
    Power { beta: T },
    /// `log ρ`
    Log,
    /// `a - β log ρ`
    AffineLog { a: T, beta: T },
}

impl<T: Real> RadialProfile<T> {
    fn eval(self, d: usize, rho: T) -> T {
        match self {
            Self::Power { beta } => rho.powf(beta - T::from_usize_lossy(d)),
            Self::Log => rho.ln(),
            Self::AffineLog { a, beta } => a - beta * rho.ln(),
        }
    }

    /// Exponent `p` of the substitution `ρ = ρ₁ v^p` on the innermost panel
    /// that makes `g(ρ) ρ^{d-1} dρ` bounded in `v`.
    fn grading(self, d: usize) -> T {
        match self {
            Self::Power { beta } => beta.recip(),
            Self::Log | Self::AffineLog { .. } => T::lit(2.0) / T::from_usize_lossy(d),
        }
    }
}

fn check_orders<T: Real>(d: usize, beta: T) -> Result<bool> {
    if !(1..=3).contains(&d) {
        return Err(Error::Domain(format!("dimension {d} outside 1..=3")));
    }
    let d_t = T::from_usize_lossy(d);
    if !(beta > T::zero() && beta <= d_t) {
        return Err(Error::Domain(format!("Riesz kernel needs 0 < β ≤ d (β = {beta}, d = {d})")));
    }
    Ok(beta == d_t)
}

/// `G(x)`: `|x|^{β-d}/c` for d > β, `log|x|/c` for d = β.
pub fn riesz_kernel<T: Real>(d: usize, beta: T, x: &[T], normalization: RieszNormalization<T>) -> Result<T> {
    let log_case = check_orders(d, beta)?;
    if x.len() != d {
        return Err(Error::Domain(format!("point has {} coordinates, expected {d}", x.len())));
    }
    let rho = x.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
    if rho == T::zero() {
        return Err(Error::Singularity("Riesz kernel evaluated at the origin".into()));
    }
    let g = if log_case { rho.ln() } else { rho.powf(beta - T::from_usize_lossy(d)) };
    Ok(g / normalization.constant(d, log_case))
}

/// `∫_{B(center, radius)} G(eval_at - y) u0(y) dy`.
///
/// Polar coordinates around `eval_at`: per direction, the chord through the
/// ball is split into panels of one grid spacing with 4-point Gauss rules,
/// and the innermost panel is graded so that the kernel singularity cancels
/// against the Jacobian. `u0` is interpolated multilinearly.
pub fn riesz_potential_ball<T: Real>(
    d: usize,
    beta: T,
    u0: &Field<T>,
    center: &[T],
    radius: T,
    eval_at: &[T],
    normalization: RieszNormalization<T>,
) -> Result<T> {
    let log_case = check_orders(d, beta)?;
    let profile = if log_case { RadialProfile::Log } else { RadialProfile::Power { beta } };
    let raw = ball_integral(profile, u0, center, radius, eval_at)?;
    Ok(raw / normalization.constant(d, log_case))
}

/// Quadrature directions on the unit sphere with weights summing to `|S^{d-1}|`.
fn sphere_rule<T: Real>(d: usize, resolution: usize) -> Vec<(Vec<T>, T)> {
    match d {
        1 => vec![(vec![T::one()], T::one()), (vec![-T::one()], T::one())],
        2 => {
            let m = resolution.clamp(16, 4096);
            let w = T::TAU() / T::from_usize_lossy(m);
            (0..m)
                .map(|k| {
                    let th = (T::from_usize_lossy(k) + T::lit(0.5)) * w;
                    (vec![th.cos(), th.sin()], w)
                })
                .collect()
        }
        _ => {
            let nt = (resolution / 2).clamp(8, 256);
            let np = 2 * nt;
            let gl = GaussLegendre::<T>::new(nt);
            let wp = T::TAU() / T::from_usize_lossy(np);
            let mut out = Vec::with_capacity(nt * np);
            for (&ct, &wt) in gl.nodes.iter().zip(&gl.weights) {
                let st = (T::one() - ct * ct).max(T::zero()).sqrt();
                for k in 0..np {
                    let ph = (T::from_usize_lossy(k) + T::lit(0.5)) * wp;
                    out.push((vec![st * ph.cos(), st * ph.sin(), ct], wt * wp));
                }
            }
            out
        }
    }
}

/// `∫_{B(center, radius)} g(|x - y|) u0(y) dy` with `x = eval_at`.
pub(crate) fn ball_integral<T: Real>(
    profile: RadialProfile<T>,
    u0: &Field<T>,
    center: &[T],
    radius: T,
    eval_at: &[T],
) -> Result<T> {
    let g = &u0.grid;
    let d = g.dim;
    if center.len() != d || eval_at.len() != d {
        return Err(Error::Domain("ball center and evaluation point must match the grid dimension".into()));
    }
    if !(radius > T::zero()) {
        return Err(Error::Domain(format!("ball radius {radius} must be positive")));
    }
    if !g.contains_ball(center, radius) {
        return Err(Error::Domain(format!("ball of radius {radius} leaves the grid box")));
    }
    let h = g.spacing();
    let offset: Vec<T> = eval_at.iter().zip(center).map(|(&x, &c)| x - c).collect();
    let dist2 = offset.iter().fold(T::zero(), |s, &v| s + v * v);
    if ((dist2.sqrt() - radius).abs()) < h {
        log::warn!("evaluation point within one grid spacing of the ball boundary; the potential is ill-conditioned");
    }
    let inside = dist2 < radius * radius;

    let panel = GaussLegendre::<T>::new(4);
    let graded = GaussLegendre::<T>::new(8);
    let p = profile.grading(d);
    let weight = |rho: T| profile.eval(d, rho) * rho.powi(d as i32 - 1);
    let resolution = (T::TAU() * radius / h).ceil().to_usize().unwrap_or(16);
    let mut point = vec![T::zero(); d];
    let mut total = T::zero();
    for (omega, w_dir) in sphere_rule::<T>(d, resolution) {
        // chord {ρ ≥ 0 : |offset + ρω| ≤ radius}
        let b = offset.iter().zip(&omega).fold(T::zero(), |s, (&o, &w)| s + o * w);
        let disc = b * b - (dist2 - radius * radius);
        if disc <= T::zero() {
            continue;
        }
        let root = disc.sqrt();
        let (lo, hi) = ((-b - root).max(T::zero()), -b + root);
        if hi <= lo {
            continue;
        }
        let mut f = |rho: T| -> Result<T> {
            for k in 0..d {
                point[k] = eval_at[k] + rho * omega[k];
            }
            point_value(u0, &point)
        };
        let mut ray = T::zero();
        let mut start = lo;
        if inside {
            // graded innermost panel [0, ρ₁]
            let rho1 = h.min(hi);
            let mut acc = T::zero();
            for (&x, &wq) in graded.nodes.iter().zip(&graded.weights) {
                let v = (x + T::one()) * T::lit(0.5);
                let rho = rho1 * v.powf(p);
                let jac = rho1 * p * v.powf(p - T::one());
                acc = acc + wq * T::lit(0.5) * weight(rho) * jac * f(rho)?;
            }
            ray = ray + acc;
            start = rho1;
        }
        let panels = ((hi - start) / h).ceil().to_usize().unwrap_or(0);
        if panels > 0 {
            let width = (hi - start) / T::from_usize_lossy(panels);
            for j in 0..panels {
                let a = start + T::from_usize_lossy(j) * width;
                let mut acc = T::zero();
                for (&x, &wq) in panel.nodes.iter().zip(&panel.weights) {
                    let rho = a + (x + T::one()) * T::lit(0.5) * width;
                    acc = acc + wq * weight(rho) * f(rho)?;
                }
                ray = ray + acc * width * T::lit(0.5);
            }
        }
        total = total + w_dir * ray;
    }
    Ok(total)
}
