use super::riesz::{ball_integral, RadialProfile, RieszNormalization};
use crate::error::{Error, Result};
use crate::kernel::{EquationParams, Field};
use crate::scalar::Real;

/// Space-time points and ball radius of one Harnack comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnackTuple<T> {
    pub t1: T,
    pub t2: T,
    pub x1: Vec<T>,
    pub x2: Vec<T>,
    /// both points lie in `B_r(0)`
    pub r: T,
    /// final time `T` of the admissibility window
    pub horizon: T,
}

impl<T: Real> HarnackTuple<T> {
    /// `r_i = 2 t_i^{α/β}`.
    pub fn radii(&self, params: &EquationParams<T>) -> (T, T) {
        let e = params.alpha / params.beta;
        (T::lit(2.0) * self.t1.powf(e), T::lit(2.0) * self.t2.powf(e))
    }

    pub fn validate(&self, params: &EquationParams<T>) -> Result<()> {
        if self.x1.len() != params.dim || self.x2.len() != params.dim {
            return Err(Error::Domain("tuple points must match the equation dimension".into()));
        }
        let norm = |x: &[T]| x.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
        if !(norm(&self.x1) < self.r && norm(&self.x2) < self.r) {
            return Err(Error::Admissibility(format!("x1, x2 must lie in the open ball of radius {}", self.r)));
        }
        if !admissible_window(self.r, params, self.t1, self.t2, self.horizon) {
            return Err(Error::Admissibility(format!(
                "times t1 = {}, t2 = {} violate (2r)^(β/α) ≤ t1 < t2 ≤ t1 + (2r)^(β/α) ≤ T with r = {}, T = {}",
                self.t1, self.t2, self.r, self.horizon
            )));
        }
        Ok(())
    }
}

/// `(2r)^{β/α} ≤ t1 < t2 ≤ t1 + (2r)^{β/α} ≤ T`.
pub fn admissible_window<T: Real>(r: T, params: &EquationParams<T>, t1: T, t2: T, horizon: T) -> bool {
    let lag = (T::lit(2.0) * r).powf(params.beta / params.alpha);
    lag <= t1 && t1 < t2 && t2 <= t1 + lag && t1 + lag <= horizon
}

/// Data-dependent factor of the non-local Harnack inequality,
/// `u(t1, x1) ≤ C · factor · u(t2, x2)`, with the two potentials it is
/// built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnackBound<T> {
    pub factor: T,
    pub numerator: T,
    pub denominator: T,
}

/// `1 + P₁/P₂` for d > β, with `P_i = [G ⋆ (u0 χ_{B_{r_i}(x_i)})](x_i)` and
/// `G = |x|^{β-d}/c`. The constant `c` cancels and is applied to the
/// reported potentials only, so `factor` is identical for every
/// normalization.
///
/// For d = β, `1 + Q₁/Q₂` with
/// `Q_i = ∫_{B_{r_i}(x_i)} [1 + β log 2 + α log t_i - β log|x_i - y|] u0(y) dy`,
/// the bracket being `1 - log R_i ≥ 1` on the ball; `normalization` does not
/// enter.
pub fn harnack_bound<T: Real>(
    params: &EquationParams<T>,
    u0: &Field<T>,
    tuple: &HarnackTuple<T>,
    normalization: RieszNormalization<T>,
) -> Result<HarnackBound<T>> {
    params.validate()?;
    tuple.validate(params)?;
    if u0.grid.dim != params.dim {
        return Err(Error::Domain("data grid and equation dimensions differ".into()));
    }
    let d = params.dim_t();
    if params.beta > d {
        return Err(Error::Domain(format!(
            "the Harnack bound factor needs d ≥ β (d = {}, β = {})",
            params.dim, params.beta
        )));
    }
    let log_case = params.beta == d;
    let (r1, r2) = tuple.radii(params);
    let profile = |t: T| {
        if log_case {
            let a = T::one() + params.beta * T::LN_2() + params.alpha * t.ln();
            RadialProfile::AffineLog { a, beta: params.beta }
        } else {
            RadialProfile::Power { beta: params.beta }
        }
    };
    let num = ball_integral(profile(tuple.t1), u0, &tuple.x1, r1, &tuple.x1)?;
    let den = ball_integral(profile(tuple.t2), u0, &tuple.x2, r2, &tuple.x2)?;
    if den == T::zero() {
        return Err(Error::DegenerateData(format!(
            "initial data vanishes on the ball of radius {r2} around x2"
        )));
    }
    let c = if log_case { T::one() } else { normalization.constant(params.dim, false) };
    Ok(HarnackBound { factor: T::one() + num / den, numerator: num / c, denominator: den / c })
}

/// [`harnack_bound`] with unit normalization, factor only.
pub fn harnack_bound_factor<T: Real>(params: &EquationParams<T>, u0: &Field<T>, tuple: &HarnackTuple<T>) -> Result<T> {
    harnack_bound(params, u0, tuple, RieszNormalization::Unit).map(|b| b.factor)
}

/// `sup_{B_{r1}(x1)} u0 / inf_{B_{r2}(x2)} u0` over grid nodes in the
/// closed balls; `+∞` when the infimum is zero.
pub fn initial_harnack_ratio<T: Real>(u0: &Field<T>, x1: &[T], r1: T, x2: &[T], r2: T) -> Result<T> {
    let g = &u0.grid;
    for (x, r) in [(x1, r1), (x2, r2)] {
        if !g.contains_ball(x, r) {
            return Err(Error::Domain(format!("ball of radius {r} leaves the grid box")));
        }
    }
    let mut sup = T::neg_infinity();
    let mut inf = T::infinity();
    let r1sq = r1 * r1;
    let r2sq = r2 * r2;
    let mut idx = vec![0; g.dim];
    for (flat, &v) in u0.values.iter().enumerate() {
        g.unflatten(flat, &mut idx);
        let (mut a, mut b) = (T::zero(), T::zero());
        for k in 0..g.dim {
            let c = g.coord(idx[k]);
            a = a + (c - x1[k]) * (c - x1[k]);
            b = b + (c - x2[k]) * (c - x2[k]);
        }
        if a <= r1sq {
            sup = sup.max(v);
        }
        if b <= r2sq {
            inf = inf.min(v);
        }
    }
    if sup == T::neg_infinity() || inf == T::infinity() {
        return Err(Error::Domain("a ball contains no grid nodes".into()));
    }
    if inf <= T::zero() {
        return if sup > T::zero() { Ok(T::infinity()) } else { Err(Error::UndefinedRatio) };
    }
    Ok(sup / inf)
}
