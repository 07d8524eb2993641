use crate::error::{Error, Result};
use crate::kernel::{Field, GridSpec};
use crate::quad::integrate_adaptive;
use crate::scalar::Real;
use crate::specfun::gamma_real;

/// Shape of the initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDataKind<T> {
    /// `ε^{-d} ψ(x/ε)`, `ψ(x) = c_d e^{-1/(1-|x|²)}` on the unit ball
    Mollifier { epsilon: T },
    /// `n^{d/p} e^{-|nx|²}`, which keeps the `L^p` norm independent of `n`
    ScaledGaussian { n: T, p: T },
    /// `e^{-|x|²}`
    PlainGaussian,
    /// an already sampled field, used as is
    Sampled(Field<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialDataSpec<T> {
    pub kind: InitialDataKind<T>,
    /// `None` is the origin
    pub center: Option<Vec<T>>,
}

/// Grid points required across the diameter of the data's support.
pub const MIN_POINTS_ACROSS: usize = 8;

impl<T: Real> InitialDataSpec<T> {
    pub fn new(kind: InitialDataKind<T>) -> Self {
        Self { kind, center: None }
    }

    pub fn mollifier(epsilon: T) -> Self {
        Self::new(InitialDataKind::Mollifier { epsilon })
    }

    pub fn scaled_gaussian(n: T, p: T) -> Self {
        Self::new(InitialDataKind::ScaledGaussian { n, p })
    }

    pub fn plain_gaussian() -> Self {
        Self::new(InitialDataKind::PlainGaussian)
    }

    pub fn sampled(field: Field<T>) -> Self {
        Self::new(InitialDataKind::Sampled(field))
    }

    pub fn with_center(mut self, center: Vec<T>) -> Self {
        self.center = Some(center);
        self
    }

    /// Short human-readable tag, e.g. `mollifier(eps=0.25)`.
    pub fn label(&self) -> String {
        match &self.kind {
            InitialDataKind::Mollifier { epsilon } => format!("mollifier(eps={epsilon})"),
            InitialDataKind::ScaledGaussian { n, p } => format!("gauss(n={n},p={p})"),
            InitialDataKind::PlainGaussian => "gauss".into(),
            InitialDataKind::Sampled(_) => "sampled".into(),
        }
    }
}

/// `c_d` with `∫_{|x|<1} c_d e^{-1/(1-|x|²)} dx = 1`, from the radial
/// integral `|S^{d-1}| ∫₀¹ e^{-1/(1-r²)} r^{d-1} dr`.
pub fn mollifier_constant<T: Real>(dim: usize) -> Result<T> {
    if !(1..=5).contains(&dim) {
        return Err(Error::Domain(format!("dimension {dim} outside 1..=5")));
    }
    let half_d = T::from_usize_lossy(dim) * T::lit(0.5);
    let sphere = T::lit(2.0) * T::PI().powf(half_d) / gamma_real(half_d)?;
    let radial = |r: T| {
        let q = T::one() - r * r;
        if q <= T::zero() {
            T::zero()
        } else {
            (-q.recip()).exp() * r.powi(dim as i32 - 1)
        }
    };
    let tol = T::lit(1e-14).max(T::epsilon() * T::lit(64.0));
    let integral = integrate_adaptive(radial, T::zero(), T::one(), T::zero(), tol, 100_000).map_err(|r| {
        Error::NonConvergence { method: "mollifier normalization", achieved: (r.abs_err / r.value).as_f64() }
    })?;
    Ok((sphere * integral.value).recip())
}

/// Samples the initial data on `grid`.
pub fn sample_initial_data<T: Real>(spec: &InitialDataSpec<T>, grid: &GridSpec<T>) -> Result<Field<T>> {
    grid.validate()?;
    let d = grid.dim;
    let center = match &spec.center {
        Some(c) if c.len() != d => {
            return Err(Error::Domain(format!("center has {} coordinates, grid has {d}", c.len())));
        }
        Some(c) => c.clone(),
        None => vec![T::zero(); d],
    };
    let dist2 = |x: &[T]| x.iter().zip(&center).fold(T::zero(), |s, (&a, &b)| s + (a - b) * (a - b));
    let h = grid.spacing();
    let resolved = |width: T, what: &str| -> Result<()> {
        if width < T::from_usize_lossy(MIN_POINTS_ACROSS) * h {
            return Err(Error::Resolution(format!(
                "{what} of width {width} spans fewer than {MIN_POINTS_ACROSS} grid spacings (h = {h})"
            )));
        }
        Ok(())
    };
    let inside = |radius: T, what: &str| -> Result<()> {
        if !grid.contains_ball(&center, radius) {
            return Err(Error::Domain(format!("{what} does not fit inside the grid box [-{0}, {0})^{d}", grid.half_extent)));
        }
        Ok(())
    };
    // Gaussians are cut where e^{-|y|²} < 1e-16
    let gauss_reach = T::lit(6.1);

    match &spec.kind {
        InitialDataKind::Mollifier { epsilon } => {
            let eps = *epsilon;
            if !(eps > T::zero()) || eps > grid.half_extent / T::lit(4.0) {
                return Err(Error::Domain(format!("mollifier width {eps} outside (0, L/4]")));
            }
            resolved(T::lit(2.0) * eps, "mollifier support")?;
            inside(eps, "mollifier support")?;
            let c = mollifier_constant::<T>(d)? * eps.powi(-(d as i32));
            let eps2 = eps * eps;
            Field::from_fn(*grid, |x| {
                let q = T::one() - dist2(x) / eps2;
                if q <= T::zero() {
                    T::zero()
                } else {
                    c * (-q.recip()).exp()
                }
            })
        }
        InitialDataKind::ScaledGaussian { n, p } => {
            let (n, p) = (*n, *p);
            if !(n >= T::one() && n.is_finite()) || !(p >= T::one() && p.is_finite()) {
                return Err(Error::Domain(format!("scaled Gaussian needs n ≥ 1 and p ≥ 1 (n = {n}, p = {p})")));
            }
            resolved(T::lit(2.0) / n, "scaled Gaussian")?;
            inside(gauss_reach / n, "scaled Gaussian")?;
            let amp = n.powf(T::from_usize_lossy(d) / p);
            let n2 = n * n;
            Field::from_fn(*grid, |x| amp * (-n2 * dist2(x)).exp())
        }
        InitialDataKind::PlainGaussian => {
            resolved(T::lit(2.0), "Gaussian")?;
            inside(gauss_reach, "Gaussian")?;
            Field::from_fn(*grid, |x| (-dist2(x)).exp())
        }
        InitialDataKind::Sampled(field) => {
            if field.grid != *grid {
                return Err(Error::Domain("sampled field lives on a different grid".into()));
            }
            Ok(field.clone())
        }
    }
}
