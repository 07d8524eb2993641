//! Mittag-Leffler function `E_α(-x)` on the negative real axis, `0 < α <= 1`.
//!
//! Three routes are available; [`MittagLefflerNeg::eval`] picks the cheapest
//! one whose own error estimate meets the policy target:
//!
//! * power series `Σ (-x)^k / Γ(1 + αk)` for `x <= series_cutoff`, rejected
//!   when cancellation (tracked through `Σ |term|`) would eat the target;
//! * the algebraic asymptotic expansion `Σ_{k>=1} (-1)^{k+1} x^{-k} / Γ(1 - αk)`,
//!   accepted only when its smallest term is negligible;
//! * the complete-monotonicity representation
//!   `E_α(-s^α) = ∫_0^∞ e^{-sr} K_α(r) dr` with `s = x^{1/α}` and
//!   `K_α(r) = r^{α-1} sin(απ) / (π (r^{2α} + 2 r^α cos(απ) + 1))`, folded
//!   onto `u ∈ [0, 1]` by `r = u^{1/α}` and `r = u^{-1/α}`. This removes the
//!   `r^{α-1}` endpoint singularity and leaves
//!   `sin(απ)/(απ) ∫_0^1 (e^{-(xu)^{1/α}} + e^{-(x/u)^{1/α}}) / (1 + 2u cos(απ) + u²) du`.

use crate::error::{Error, Result};
use crate::quad::integrate_adaptive;
use crate::scalar::Real;

use super::gamma::{ln_gamma_real, recip_gamma};

/// Evaluation policy for [`mittag_leffler_neg`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLEvalPolicy<T> {
    /// Largest `x` for which the power series is attempted.
    pub series_cutoff: T,
    pub series_terms_max: usize,
    /// Function-evaluation budget of the adaptive quadrature route.
    pub quad_nodes: usize,
    pub target_rel_err: T,
}

impl<T: Real> Default for MLEvalPolicy<T> {
    fn default() -> Self {
        Self {
            series_cutoff: T::lit(5.0),
            series_terms_max: 500,
            quad_nodes: 6000,
            target_rel_err: T::lit(1e-12).max(T::lit(8.0) * T::epsilon()),
        }
    }
}

impl<T: Real> MLEvalPolicy<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_cutoff > T::zero()) {
            return Err(Error::Domain("series_cutoff must be positive".into()));
        }
        if !(self.target_rel_err > T::zero() && self.target_rel_err <= T::lit(1e-6)) {
            return Err(Error::Domain("target_rel_err must lie in (0, 1e-6]".into()));
        }
        if self.series_terms_max == 0 || self.quad_nodes == 0 {
            return Err(Error::Domain("series_terms_max and quad_nodes must be positive".into()));
        }
        Ok(())
    }
}

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MLRoute {
    Exponential,
    Series,
    Asymptotic,
    Integral,
}

/// A value together with its route and relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLValue<T> {
    pub value: T,
    pub rel_err: T,
    pub route: MLRoute,
}

const ASYMPTOTIC_TERMS: usize = 60;

/// Reusable evaluator for a fixed `α`; caches the series and asymptotic
/// coefficients so that evaluating many arguments (a Fourier symbol on a
/// grid) does not recompute Gamma values.
#[derive(Debug, Clone)]
pub struct MittagLefflerNeg<T> {
    alpha: T,
    policy: MLEvalPolicy<T>,
    // ln(1/Γ(1 + αk)), k = 0..series_terms_max
    series_ln_coef: Vec<T>,
    // 1/Γ(1 - αk), k = 1..=ASYMPTOTIC_TERMS
    asym_coef: Vec<T>,
    integral_prefactor: T,
    cos_alpha_pi: T,
}

impl<T: Real> MittagLefflerNeg<T> {
    pub fn new(alpha: T, policy: MLEvalPolicy<T>) -> Result<Self> {
        policy.validate()?;
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::Domain(format!("Mittag-Leffler order {alpha} outside (0, 1]")));
        }
        let (series_ln_coef, asym_coef) = if alpha < T::one() {
            let s = (0..=policy.series_terms_max)
                .map(|k| ln_gamma_real(T::one() + alpha * T::from_usize_lossy(k)).map(|v| -v))
                .collect::<Result<Vec<_>>>()?;
            let a = (1..=ASYMPTOTIC_TERMS)
                .map(|k| recip_gamma(T::one() - alpha * T::from_usize_lossy(k)))
                .collect::<Result<Vec<_>>>()?;
            (s, a)
        } else {
            (Vec::new(), Vec::new())
        };
        let api = alpha * T::PI();
        Ok(Self {
            alpha,
            policy,
            series_ln_coef,
            asym_coef,
            integral_prefactor: api.sin() / api,
            cos_alpha_pi: api.cos(),
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn policy(&self) -> &MLEvalPolicy<T> {
        &self.policy
    }

    /// `E_α(-x)` to the policy's relative accuracy.
    pub fn eval(&self, x: T) -> Result<T> {
        self.eval_detailed(x).map(|v| v.value)
    }

    pub fn eval_detailed(&self, x: T) -> Result<MLValue<T>> {
        if !(x >= T::zero()) || !x.is_finite() {
            return Err(Error::Domain(format!("Mittag-Leffler argument -{x} must be finite and nonpositive")));
        }
        if self.alpha == T::one() {
            return Ok(MLValue { value: (-x).exp(), rel_err: T::epsilon(), route: MLRoute::Exponential });
        }
        if x == T::zero() {
            return Ok(MLValue { value: T::one(), rel_err: T::zero(), route: MLRoute::Series });
        }
        let target = self.policy.target_rel_err;
        if x <= self.policy.series_cutoff {
            if let Ok(v) = self.series(x) {
                if v.rel_err <= target {
                    return Ok(v);
                }
            }
        } else if let Ok(v) = self.asymptotic(x) {
            if v.rel_err <= target {
                return Ok(v);
            }
        }
        self.integral(x)
    }

    /// Power-series route with cancellation-aware error estimate.
    pub fn series(&self, x: T) -> Result<MLValue<T>> {
        self.require_fractional()?;
        let lnx = x.ln();
        let mut sum = T::zero();
        let mut abs_sum = T::zero();
        let mut prev = T::infinity();
        let mut last = T::zero();
        let mut converged = false;
        for (k, &lc) in self.series_ln_coef.iter().enumerate() {
            let kf = T::from_usize_lossy(k);
            let mag = if k == 0 { T::one() } else { (kf * lnx + lc).exp() };
            let term = if k % 2 == 0 { mag } else { -mag };
            sum = sum + term;
            abs_sum = abs_sum + mag;
            last = mag;
            if k > 0 && mag < prev && mag <= T::epsilon() * T::lit(1e-3) * sum.abs() {
                converged = true;
                break;
            }
            prev = mag;
        }
        let trunc = if converged { T::zero() } else { last };
        let rel_err = (T::lit(4.0) * T::epsilon() * abs_sum + trunc) / sum.abs();
        if !converged {
            return Err(Error::NonConvergence { method: "Mittag-Leffler series", achieved: rel_err.as_f64() });
        }
        Ok(MLValue { value: sum, rel_err, route: MLRoute::Series })
    }

    /// Asymptotic-expansion route; valid for large `x`.
    pub fn asymptotic(&self, x: T) -> Result<MLValue<T>> {
        self.require_fractional()?;
        let inv = x.recip();
        let mut sum = T::zero();
        let mut xp = T::one();
        let mut prev = T::infinity();
        let mut best_omitted = T::infinity();
        for (i, &c) in self.asym_coef.iter().enumerate() {
            xp = xp * inv;
            let mag = (c * xp).abs();
            if mag == T::zero() {
                continue;
            }
            if mag > prev || mag <= T::epsilon() * T::lit(1e-3) * sum.abs() {
                best_omitted = mag;
                break;
            }
            // (-1)^{k+1} with k = i + 1
            let term = if i % 2 == 0 { c * xp } else { -c * xp };
            sum = sum + term;
            prev = mag;
        }
        let rel_err = (best_omitted.min(prev) + T::lit(4.0) * T::epsilon() * sum.abs()) / sum.abs();
        if !(sum > T::zero()) || !rel_err.is_finite() {
            return Err(Error::NonConvergence { method: "Mittag-Leffler asymptotic expansion", achieved: f64::INFINITY });
        }
        Ok(MLValue { value: sum, rel_err, route: MLRoute::Asymptotic })
    }

    /// Spectral-integral route; valid for every `x > 0`.
    pub fn integral(&self, x: T) -> Result<MLValue<T>> {
        self.require_fractional()?;
        let p = self.alpha.recip();
        let c = self.cos_alpha_pi;
        let two = T::lit(2.0);
        let f = |u: T| {
            let near = (-(x * u).powf(p)).exp();
            let far = if u > T::zero() { (-(x / u).powf(p)).exp() } else { T::zero() };
            (near + far) / (T::one() + two * u * c + u * u)
        };
        let tol = self.policy.target_rel_err * T::lit(0.1);
        // each exponential switches between 1 and 0 across a band where its
        // exponent runs from 1 to 40: u ∈ [1/x, 40^α/x] for the near term and
        // u ∈ [40^{-α} x, x] for the far term; split at the band edges
        let wide = T::lit(40.0).powf(self.alpha);
        let mut cuts: Vec<T> = [x.recip(), wide / x, x / wide, x]
            .into_iter()
            .filter(|&c| c > T::zero() && c < T::one())
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut edges = vec![T::zero()];
        edges.extend(cuts);
        edges.push(T::one());
        let pieces: Vec<(T, T)> = edges.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1])).collect();
        let budget = self.policy.quad_nodes / pieces.len();
        let (mut value, mut err, mut ok) = (T::zero(), T::zero(), true);
        for &(a, b) in &pieces {
            let r = integrate_adaptive(f, a, b, T::min_positive_value(), tol, budget).unwrap_or_else(|r| {
                ok = false;
                r
            });
            value = value + r.value;
            err = err + r.abs_err;
        }
        let rel_err = err / value.abs();
        if ok || rel_err <= tol {
            Ok(MLValue { value: self.integral_prefactor * value, rel_err, route: MLRoute::Integral })
        } else {
            Err(Error::NonConvergence { method: "Mittag-Leffler spectral integral", achieved: rel_err.as_f64() })
        }
    }

    fn require_fractional(&self) -> Result<()> {
        if self.alpha == T::one() {
            Err(Error::Domain("α = 1 is evaluated as exp(-x); the fractional routes are undefined".into()))
        } else {
            Ok(())
        }
    }
}

/// `E_α(-x)` for `α ∈ (0, 1]`, `x >= 0`.
pub fn mittag_leffler_neg<T: Real>(alpha: T, x: T, policy: &MLEvalPolicy<T>) -> Result<T> {
    MittagLefflerNeg::new(alpha, *policy)?.eval(x)
}
