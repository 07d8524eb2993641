use std::cmp::Ordering;

use super::params::EquationParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Case of the two-sided asymptotic table for `Z(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `R ≤ 1`, `d < β`, `α < 1`: `t^{-αd/β}`
    NearFieldDLtBeta,
    /// `R ≤ 1`, `d = β`, `α < 1`: `t^{-α}(|log(r^β t^{-α})| + 1)`
    NearFieldDEqBeta,
    /// `R ≤ 1`, `d > β`, `α < 1`: `t^{-α} r^{β-d}`
    NearFieldDGtBeta,
    /// `R ≤ 1`, `α = 1`: `t^{-d/β}`
    NearFieldAlpha1,
    /// `R > 1`, `β < 2`: `t^α r^{-d-β}`
    FarFieldStable,
    /// `R > 1`, `β = 2`: `t^{-αd/2} R^{d(α-1)/(2(2-α))} exp(-σ R^{1/(2-α)})`
    FarFieldGaussian,
}

impl Regime {
    pub fn is_near_field(self) -> bool {
        matches!(
            self,
            Self::NearFieldDLtBeta | Self::NearFieldDEqBeta | Self::NearFieldDGtBeta | Self::NearFieldAlpha1
        )
    }
}

/// Regime of a space-time point and the envelope of `Z` there, with all
/// multiplicative constants set to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport<T> {
    pub similarity_r: T,
    pub regime: Regime,
    /// `+∞` at `r = 0` in the singular near-field cases
    pub envelope: T,
    /// decay rate of the stretched exponential, `FarFieldGaussian` only
    pub sigma: Option<T>,
    pub singular: bool,
}

/// `R = 2^{-β} r^β t^{-α}`.
pub fn similarity_variable<T: Real>(params: &EquationParams<T>, t: T, r: T) -> T {
    (r * T::lit(0.5)).powf(params.beta) * t.powf(-params.alpha)
}

/// `σ = (2-α)(α^α/4)^{1/(2-α)}`.
pub fn gaussian_sigma<T: Real>(alpha: T) -> T {
    let two = T::lit(2.0);
    (two - alpha) * (alpha.powf(alpha) / T::lit(4.0)).powf((two - alpha).recip())
}

/// Selects the asymptotic case for `(t, r)` and evaluates its envelope.
/// Ties at `R = 1` go to the near field.
pub fn classify_regime<T: Real>(params: &EquationParams<T>, t: T, r: T) -> Result<RegimeReport<T>> {
    params.validate()?;
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::Domain(format!("time {t} must be positive")));
    }
    if !(r >= T::zero() && r.is_finite()) {
        return Err(Error::Domain(format!("radius {r} must be non-negative")));
    }
    let (alpha, beta, d) = (params.alpha, params.beta, params.dim_t());
    let big_r = similarity_variable(params, t, r);
    let two = T::lit(2.0);

    if big_r > T::one() {
        return Ok(if params.is_gaussian() {
            let sigma = gaussian_sigma(alpha);
            let envelope = t.powf(-alpha * d / two)
                * big_r.powf(d * (alpha - T::one()) / (two * (two - alpha)))
                * (-sigma * big_r.powf((two - alpha).recip())).exp();
            RegimeReport { similarity_r: big_r, regime: Regime::FarFieldGaussian, envelope, sigma: Some(sigma), singular: false }
        } else {
            let envelope = t.powf(alpha) * r.powf(-d - beta);
            RegimeReport { similarity_r: big_r, regime: Regime::FarFieldStable, envelope, sigma: None, singular: false }
        });
    }

    let (regime, envelope) = if params.is_heat_like() {
        (Regime::NearFieldAlpha1, t.powf(-alpha * d / beta))
    } else {
        match d.partial_cmp(&beta).expect("validated parameters are finite") {
            Ordering::Less => (Regime::NearFieldDLtBeta, t.powf(-alpha * d / beta)),
            Ordering::Equal => {
                let log_term = (beta * r.ln() - alpha * t.ln()).abs();
                (Regime::NearFieldDEqBeta, t.powf(-alpha) * (log_term + T::one()))
            }
            Ordering::Greater => (Regime::NearFieldDGtBeta, t.powf(-alpha) * r.powf(beta - d)),
        }
    };
    let singular = r == T::zero() && matches!(regime, Regime::NearFieldDEqBeta | Regime::NearFieldDGtBeta);
    let envelope = if singular { T::infinity() } else { envelope };
    Ok(RegimeReport { similarity_r: big_r, regime, envelope, sigma: None, singular })
}
