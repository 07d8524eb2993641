use crate::error::{Error, Result};
use crate::kernel::Field;
use crate::scalar::Real;

/// Discrete `L^p` norm `(h^d Σ |v|^p)^{1/p}`; `p = ∞` gives `max |v|`.
pub fn lp_norm<T: Real>(field: &Field<T>, p: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::Domain(format!("L^p exponent {p} must be at least 1")));
    }
    if p.is_infinite() {
        return Ok(field.values.iter().fold(T::zero(), |m, v| m.max(v.abs())));
    }
    let vol = field.grid.cell_volume();
    if p == T::one() {
        return Ok(field.values.iter().fold(T::zero(), |s, v| s + v.abs()) * vol);
    }
    // scale by the maximum to keep |v|^p in range
    let m = field.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if m == T::zero() {
        return Ok(T::zero());
    }
    let s = field.values.iter().fold(T::zero(), |s, v| s + (v.abs() / m).powf(p));
    Ok(m * (s * vol).powf(p.recip()))
}

/// Multilinear interpolation of `field` at `x`, exact at grid nodes. Points
/// in the last cell `[L - h, L)` interpolate towards the periodic image of
/// the first node.
pub fn point_value<T: Real>(field: &Field<T>, x: &[T]) -> Result<T> {
    let g = &field.grid;
    if x.len() != g.dim {
        return Err(Error::Domain(format!("point has {} coordinates, grid has {}", x.len(), g.dim)));
    }
    let n = g.points_per_axis;
    let h = g.spacing();
    let mut base = vec![0usize; g.dim];
    let mut frac = vec![T::zero(); g.dim];
    for (axis, &xi) in x.iter().enumerate() {
        if !(xi >= -g.half_extent && xi < g.half_extent) {
            return Err(Error::Domain(format!("coordinate {xi} outside [-{0}, {0})", g.half_extent)));
        }
        let s = (xi + g.half_extent) / h;
        let i = s.floor().to_usize().unwrap_or(0).min(n - 1);
        base[axis] = i;
        frac[axis] = s - T::from_usize_lossy(i);
    }
    let mut acc = T::zero();
    let mut idx = vec![0usize; g.dim];
    for corner in 0..(1usize << g.dim) {
        let mut w = T::one();
        for axis in 0..g.dim {
            let up = (corner >> axis) & 1 == 1;
            idx[axis] = if up { (base[axis] + 1) % n } else { base[axis] };
            w = w * if up { frac[axis] } else { T::one() - frac[axis] };
        }
        if w != T::zero() {
            acc = acc + w * field.values[g.flatten(&idx)];
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::GridSpec;

    #[test]
    fn norms_of_simple_fields() {
        let g = GridSpec::new(2, 1.0f64, 64).unwrap();
        let mut f = Field::zeros(g).unwrap();
        assert_eq!(lp_norm(&f, 2.0).unwrap(), 0.0);
        f.values[100] = 1.0;
        assert!((lp_norm(&f, 1.0).unwrap() - g.cell_volume()).abs() < 1e-18);
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn interpolation_exact_at_nodes_and_linear_between() {
        let g = GridSpec::new(2, 4.0f64, 64).unwrap();
        let f = Field::from_fn(g, |x| 1.0 + 2.0 * x[0] - 0.5 * x[1]).unwrap();
        let node = [g.coord(10), g.coord(40)];
        assert_eq!(point_value(&f, &node).unwrap(), f.values[g.flatten(&[10, 40])]);
        let p = [0.123, -1.777];
        assert!((point_value(&f, &p).unwrap() - (1.0 + 0.246 + 0.8885)).abs() < 1e-12);
        assert!(point_value(&f, &[4.0, 0.0]).is_err());
    }
}
