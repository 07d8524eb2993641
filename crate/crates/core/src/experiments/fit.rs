use crate::error::{Error, Result};

/// Coefficient of determination required before a fitted slope is used.
pub const MIN_R_SQUARED: f64 = 0.98;

/// Transformation applied before the least-squares line fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `ln y` against `ln x`
    LogLog,
    /// `y` against `ln x`
    LogAbscissa,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub model: FitModel,
}

impl FitResult {
    pub fn is_conclusive(&self) -> bool {
        self.r_squared >= MIN_R_SQUARED
    }

    /// `|slope / expected - 1| ≤ rel_tol`, and the fit is conclusive.
    pub fn matches(&self, expected: f64, rel_tol: f64) -> bool {
        self.is_conclusive() && (self.slope / expected - 1.0).abs() <= rel_tol
    }
}

/// Ordinary least squares `y ≈ slope·x + intercept`, with `r²`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 paired samples, got {} and {}", xs.len(), ys.len())));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::Domain("fit data must be finite".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok((slope, my - slope * mx, r2))
}

pub fn fit(model: FitModel, xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain("log-transformed abscissae must be positive".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ty: Vec<f64> = match model {
        FitModel::LogLog => {
            if ys.iter().any(|&y| !(y > 0.0)) {
                return Err(Error::Domain("log-log fit needs positive ordinates".into()));
            }
            ys.iter().map(|y| y.ln()).collect()
        }
        FitModel::LogAbscissa => ys.to_vec(),
    };
    let (slope, intercept, r_squared) = fit_line(&lx, &ty)?;
    Ok(FitResult { slope, intercept, r_squared, model })
}
