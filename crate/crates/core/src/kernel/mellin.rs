use num_complex::Complex;

use super::params::EquationParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{ln_gamma_real, log_gamma_unchecked};

/// Vertical line `Re s = c` of the Mellin–Barnes integral, truncated to
/// `|Im s| ≤ half_height` and split into `nodes` trapezoid intervals.
///
/// `abscissa: None` places the line through the real saddle point of the
/// integrand inside the pole-free strip, which minimizes cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec<T> {
    pub abscissa: Option<T>,
    pub half_height: T,
    pub nodes: usize,
}

impl<T: Real> Default for ContourSpec<T> {
    fn default() -> Self {
        Self { abscissa: None, half_height: T::lit(200.0), nodes: 8192 }
    }
}

impl<T: Real> ContourSpec<T> {
    pub fn with_abscissa(c: T) -> Self {
        Self { abscissa: Some(c), ..Self::default() }
    }
}

/// Diagnostics of one contour evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue<T> {
    pub value: T,
    /// `ln Z`, finite even where `value` underflows
    pub ln_value: T,
    pub abscissa: T,
    pub half_height: T,
    pub nodes: usize,
    /// `Σ|integrand| / |Σ integrand|` over the nodes
    pub cancellation: T,
    /// difference to the rule on every other node, relative to the value
    pub discretization: T,
}

const MAX_NODES: usize = 1 << 20;
const MAX_HEIGHT_DOUBLINGS: u32 = 4;
const TAIL_LIMIT: f64 = 1e-14;
const NEGLIGIBLE: f64 = 1e-18;
const DISCRETIZATION_TOL: f64 = 1e-11;
const CANCELLATION_LIMIT: f64 = 1e6;
const POLE_MARGIN: f64 = 0.25;

/// `𝓗(s) = Γ(d/2+βs/2) Γ(1+s) Γ(-s) / (Γ(1+αs) Γ(-βs/2))`, with the factors
/// that cancel identically at `α = 1` or `β = 2` left out.
struct Integrand<T> {
    half_d: T,
    alpha: T,
    half_beta: T,
    with_time: bool,
    with_space: bool,
}

impl<T: Real> Integrand<T> {
    fn new(p: &EquationParams<T>) -> Self {
        Self {
            half_d: p.dim_t() * T::lit(0.5),
            alpha: p.alpha,
            half_beta: p.beta * T::lit(0.5),
            with_time: !p.is_heat_like(),
            with_space: !p.is_gaussian(),
        }
    }

    fn log_h(&self, s: Complex<T>) -> Complex<T> {
        let one = T::one();
        let mut acc = log_gamma_unchecked(s * self.half_beta + self.half_d);
        if self.with_time {
            acc = acc + log_gamma_unchecked(s + one) - log_gamma_unchecked(s * self.alpha + one);
        }
        if self.with_space {
            acc = acc + log_gamma_unchecked(-s) - log_gamma_unchecked(-s * self.half_beta);
        }
        acc
    }

    /// `ln 𝓗(c)` on the real axis of the strip, where `𝓗 > 0`.
    fn log_h_real(&self, c: T) -> Result<T> {
        let one = T::one();
        let mut acc = ln_gamma_real(self.half_d + self.half_beta * c)?;
        if self.with_time {
            acc = acc + ln_gamma_real(one + c)? - ln_gamma_real(one + self.alpha * c)?;
        }
        if self.with_space {
            acc = acc + ln_gamma_real(-c)? - ln_gamma_real(-self.half_beta * c)?;
        }
        Ok(acc)
    }
}

/// Open interval of abscissae free of poles of `𝓗`.
///
/// Left poles come from `Γ(d/2+βs/2)` (at `-d/β - 2k/β`) and, for α < 1,
/// from `Γ(1+s)` (at `-1-k`). The pole of `Γ(-s)` at 0 is cancelled by
/// `Γ(-βs/2)`, so the first right pole is `s = 1` for β < 2; for β = 2 the
/// right half-plane is pole free.
pub fn pole_free_strip<T: Real>(params: &EquationParams<T>) -> (T, T) {
    let d_over_beta = params.dim_t() / params.beta;
    let lo = if params.is_heat_like() { -d_over_beta } else { -d_over_beta.min(T::one()) };
    let hi = if params.is_gaussian() { T::infinity() } else { T::one() };
    (lo, hi)
}

fn log_similarity<T: Real>(params: &EquationParams<T>, t: T, r: T) -> T {
    // z = 2^{-β} t^{-α} r^β
    params.beta * (r.ln() - T::LN_2()) - params.alpha * t.ln()
}

/// Abscissa through the minimum of `|𝓗(c) z^{-c}|` over real `c`, kept a
/// quarter unit away from the poles and from the removable point `s = 0`.
pub fn saddle_abscissa<T: Real>(params: &EquationParams<T>, t: T, r: T) -> Result<T> {
    params.validate()?;
    let h = Integrand::new(params);
    let log_z = log_similarity(params, t, r);
    let (lo, hi) = pole_free_strip(params);
    let margin = T::lit(POLE_MARGIN);
    let a = lo + margin;
    let b = if hi.is_finite() {
        hi - margin
    } else {
        // the saddle sits near z^{1/(2-α)} for large z
        a + T::lit(4.0) + T::lit(4.0) * (log_z.max(T::zero()) / (T::lit(2.0) - params.alpha)).exp()
    };
    let phi = |c: T| h.log_h_real(c).map(|v| v - c * log_z);
    let c = golden_min(phi, a, b)?;
    if !h.with_space || c.abs() >= margin {
        return Ok(c);
    }
    let (left, right) = (-margin, margin.min(b));
    Ok(if phi(left)? <= phi(right)? { left } else { right })
}

fn golden_min<T: Real, F: Fn(T) -> Result<T>>(f: F, mut a: T, mut b: T) -> Result<T> {
    let g = T::lit(0.618_033_988_749_894_8);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if (b - a).abs() <= T::lit(1e-6) * (T::one() + a.abs() + b.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok((a + b) * T::lit(0.5))
}

/// `Z(t, x)` at `|x| = r` from its Mellin–Barnes representation
/// `π^{-d/2} r^{-d} (1/2πi) ∫ 𝓗(s) z^{-s} ds`, `z = 2^{-β} t^{-α} r^β`.
pub fn eval_kernel_mellin<T: Real>(params: &EquationParams<T>, t: T, r: T, contour: &ContourSpec<T>) -> Result<T> {
    eval_kernel_mellin_detailed(params, t, r, contour).map(|v| v.value)
}

/// As [`eval_kernel_mellin`], with the contour actually used and the
/// quadrature diagnostics.
///
/// The trapezoid rule is applied on `τ ≥ 0` only: the integrand at `-τ` is
/// the complex conjugate of the one at `τ`, so the sum is real by
/// construction. Nodes are doubled until the rule agrees with its
/// every-other-node subrule, and the height is doubled while the integrand
/// has not decayed at the ends.
pub fn eval_kernel_mellin_detailed<T: Real>(
    params: &EquationParams<T>,
    t: T,
    r: T,
    contour: &ContourSpec<T>,
) -> Result<MellinValue<T>> {
    params.validate()?;
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::Domain(format!("time {t} must be positive")));
    }
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::Domain(format!(
            "radius {r} must be positive: the contour representation is not defined at the origin"
        )));
    }
    if !(contour.half_height > T::zero()) || contour.nodes < 512 {
        return Err(Error::Domain("contour needs a positive half height and at least 512 nodes".into()));
    }
    let integrand = Integrand::new(params);
    let (lo, hi) = pole_free_strip(params);
    let c = match contour.abscissa {
        Some(c) => c,
        None => saddle_abscissa(params, t, r)?,
    };
    if !(c > lo && c < hi) {
        return Err(Error::Contour(format!("abscissa {c} outside the pole-free strip ({lo}, {hi})")));
    }
    if integrand.with_space && c.abs() < T::lit(1e-8) {
        return Err(Error::Contour(format!("abscissa {c} sits on the removable point s = 0")));
    }

    let log_z = log_similarity(params, t, r);
    let log_prefactor = -(params.dim_t() * T::lit(0.5)) * T::PI().ln() - params.dim_t() * r.ln();
    let log_term = |tau: T| {
        let s = Complex::new(c, tau);
        integrand.log_h(s) - s * log_z
    };
    let reference = log_term(T::zero()).re;

    let mut half_height = contour.half_height;
    let mut nodes = contour.nodes;
    let mut height_doublings = 0;
    loop {
        let step = T::lit(2.0) * half_height / T::from_usize_lossy(nodes);
        let last = nodes / 2;
        // terms[j] = integrand(j·step) / e^{reference}
        let mut terms: Vec<Complex<T>> = Vec::with_capacity(last + 1);
        let mut peak = T::zero();
        let mut quiet = 0;
        for j in 0..=last {
            let v = (log_term(T::from_usize_lossy(j) * step) - reference).exp();
            let mag = v.norm();
            peak = peak.max(mag);
            terms.push(v);
            quiet = if mag < T::lit(NEGLIGIBLE) * peak { quiet + 1 } else { 0 };
            if quiet >= 16 {
                break;
            }
        }
        let reached_end = terms.len() == last + 1;
        let tail = terms.last().map_or(T::zero(), |v| v.norm()) / peak;
        if reached_end && tail > T::lit(TAIL_LIMIT) {
            if height_doublings < MAX_HEIGHT_DOUBLINGS && nodes < MAX_NODES {
                half_height = half_height * T::lit(2.0);
                nodes *= 2;
                height_doublings += 1;
                continue;
            }
            return Err(Error::Truncation { tail: tail.as_f64() });
        }

        let rule = |stride: usize| -> (T, T) {
            let mut sum = T::zero();
            let mut abs = T::zero();
            for (j, v) in terms.iter().enumerate().step_by(stride) {
                let w = if j == 0 { T::one() } else { T::lit(2.0) };
                sum = sum + w * v.re;
                abs = abs + w * v.norm();
            }
            let h = step * T::from_usize_lossy(stride);
            (sum * h, abs * h)
        };
        let (fine, fine_abs) = rule(1);
        let (coarse, _) = rule(2);
        let discretization = (fine - coarse).abs() / fine.abs();
        if !(discretization <= T::lit(DISCRETIZATION_TOL)) {
            if nodes < MAX_NODES {
                nodes *= 2;
                continue;
            }
            return Err(Error::NonConvergence { method: "Mellin-Barnes trapezoid rule", achieved: discretization.as_f64() });
        }
        let cancellation = fine_abs / fine.abs();
        if !(fine > T::zero()) || cancellation > T::lit(CANCELLATION_LIMIT) {
            return Err(Error::Precision(format!(
                "contour sum cancels by a factor {cancellation:e} at r = {r}, t = {t} (abscissa {c})"
            )));
        }
        let ln_value = log_prefactor + reference + (fine / T::TAU()).ln();
        return Ok(MellinValue { value: ln_value.exp(), ln_value, abscissa: c, half_height, nodes, cancellation, discretization });
    }
}

/// `∂Z_d/∂r` through the dimension-shift identity `∂_r Z_d = -2π r Z_{d+2}`.
pub fn radial_derivative_via_shift<T: Real>(
    params: &EquationParams<T>,
    t: T,
    r: T,
    contour: &ContourSpec<T>,
) -> Result<T> {
    let shifted = params.shifted()?;
    Ok(-T::TAU() * r * eval_kernel_mellin(&shifted, t, r, contour)?)
}
