//! Gamma function via the Lanczos approximation (g = 7, nine terms) with
//! reflection into the right half-plane.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole<T: Real>(z: Complex<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && z.re == z.re.round()
}

/// Complex log-Gamma.
///
/// The real part is `ln|Γ(z)|`; the imaginary part is the continuous
/// log-gamma branch (it agrees with `arg Γ(z)` up to a multiple of 2π, and
/// is exactly zero on the positive real axis). `exp` of the result is
/// `Γ(z)` in every case.
pub fn log_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if is_pole(z) {
        return Err(Error::GammaPole { re: z.re.as_f64() });
    }
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        let one = Complex::new(T::one(), T::zero());
        let pi = T::PI();
        Complex::new(pi.ln(), T::zero()) - log_sin_pi(z) - lanczos_ln(one - z)
    } else {
        lanczos_ln(z)
    }
}

fn lanczos_ln<T: Real>(z: Complex<T>) -> Complex<T> {
    let zz = z - T::one();
    let mut acc = Complex::new(T::lit(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + Complex::new(T::lit(c), T::zero()) / (zz + T::from_usize_lossy(i));
    }
    let t = zz + T::lit(LANCZOS_G + 0.5);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    (zz + T::lit(0.5)) * t.ln() - t + acc.ln() + half_ln_2pi
}

/// `ln(sin(πz))` without overflow for large `|Im z|`.
fn log_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let pi = T::PI();
    let i = Complex::new(T::zero(), T::one());
    let ln2 = T::LN_2();
    let half_pi = T::FRAC_PI_2();
    if z.im.abs() < T::lit(5.0) {
        return (z * pi).sin().ln();
    }
    let one = Complex::new(T::one(), T::zero());
    if z.im > T::zero() {
        // sin(πz) = e^{-iπz} (1 - e^{2iπz}) · i/2
        -i * pi * z + (one - (i * pi * z * T::lit(2.0)).exp()).ln() + Complex::new(-ln2, half_pi)
    } else {
        // sin(πz) = e^{iπz} (1 - e^{-2iπz}) / (2i)
        i * pi * z + (one - (-i * pi * z * T::lit(2.0)).exp()).ln() + Complex::new(-ln2, -half_pi)
    }
}

/// `sin(πx)` with argument reduction so that zeros at the integers are exact.
pub(crate) fn sin_pi<T: Real>(x: T) -> T {
    let n = x.round();
    let r = x - n;
    let s = (T::PI() * r).sin();
    // (-1)^n
    if (n * T::lit(0.5)).fract() == T::zero() {
        s
    } else {
        -s
    }
}

fn lanczos_real<T: Real>(x: T) -> (T, T) {
    // returns (ln Γ(x), Γ sign) for x >= 0.5
    let xx = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (xx + T::from_usize_lossy(i));
    }
    let t = xx + T::lit(LANCZOS_G + 0.5);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    ((xx + T::lit(0.5)) * t.ln() - t + acc.ln() + half_ln_2pi, T::one())
}

/// `ln|Γ(x)|` for real `x` that is not a nonpositive integer.
pub fn ln_gamma_real<T: Real>(x: T) -> Result<T> {
    if x <= T::zero() && x == x.round() {
        return Err(Error::GammaPole { re: x.as_f64() });
    }
    if x < T::lit(0.5) {
        let (lg, _) = lanczos_real(T::one() - x);
        Ok(T::PI().ln() - sin_pi(x).abs().ln() - lg)
    } else {
        Ok(lanczos_real(x).0)
    }
}

/// `Γ(x)` for real `x`.
pub fn gamma_real<T: Real>(x: T) -> Result<T> {
    Ok(T::one() / recip_gamma(x).and_then(|r| {
        if r == T::zero() {
            Err(Error::GammaPole { re: x.as_f64() })
        } else {
            Ok(r)
        }
    })?)
}

/// Reciprocal Gamma `1/Γ(x)`, entire: exactly zero at the poles of Γ.
pub fn recip_gamma<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("recip_gamma of non-finite {x}")));
    }
    if x <= T::zero() && x == x.round() {
        return Ok(T::zero());
    }
    if x < T::lit(0.5) {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let (lg, _) = lanczos_real(T::one() - x);
        Ok(sin_pi(x) * lg.exp() / T::PI())
    } else {
        Ok((-lanczos_real(x).0).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    /// Independent oracle: upward recurrence to Re z >= 30 followed by the
    /// Stirling series with eight Bernoulli terms.
    fn stirling_log_gamma(z: C) -> C {
        let mut shift = C::new(0.0, 0.0);
        let mut w = z;
        while w.re < 30.0 {
            shift += w.ln();
            w += 1.0;
        }
        let b = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360360.0,
            1.0 / 156.0,
            -3617.0 / 122400.0,
        ];
        let mut series = C::new(0.0, 0.0);
        let w2 = w * w;
        let mut wp = w;
        for c in b {
            series += c / wp;
            wp *= w2;
        }
        (w - 0.5) * w.ln() - w + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
    }

    fn same_gamma(a: C, b: C, tol: f64) -> bool {
        // compare Γ values in log space modulo 2πi
        let d = a - b;
        let k = (d.im / (2.0 * std::f64::consts::PI)).round();
        let d = C::new(d.re, d.im - 2.0 * std::f64::consts::PI * k);
        d.norm() <= tol
    }

    #[test]
    fn value_at_one_is_zero() {
        let v = log_gamma(C::new(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn value_at_half_is_log_sqrt_pi() {
        let v = log_gamma(C::new(0.5, 0.0)).unwrap();
        assert!((v.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn reflection_identity_holds() {
        let z = C::new(0.3, 0.4);
        let one = C::new(1.0, 0.0);
        let lhs = (log_gamma(z).unwrap() + log_gamma(one - z).unwrap()).exp();
        let rhs = std::f64::consts::PI / (z * std::f64::consts::PI).sin();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-10);
        // and against the Stirling oracle
        let oracle = (stirling_log_gamma(z) + stirling_log_gamma(one - z)).exp();
        assert!((oracle - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn agrees_with_stirling_oracle_on_disc_of_radius_50() {
        for &(re, im) in &[
            (0.3, 0.4),
            (2.5, -7.0),
            (-3.7, 1.2),
            (-0.1, 45.0),
            (0.05, -40.0),
            (20.0, 20.0),
            (49.0, 0.5),
            (-12.5, 0.0),
            (1.0, 1.0),
        ] {
            let z = C::new(re, im);
            let got = log_gamma(z).unwrap();
            let want = stirling_log_gamma(z);
            // relative error of Γ is |Δ ln Γ|
            assert!(same_gamma(got, want, 1e-12), "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn large_imaginary_part_on_mellin_contour() {
        for &(re, im) in &[(0.125, 180.0), (-0.0625, -250.0), (0.9, 300.0)] {
            let z = C::new(re, im);
            let got = log_gamma(z).unwrap();
            let want = stirling_log_gamma(z);
            assert!((got.re - want.re).abs() < 1e-9 * want.re.abs().max(1.0), "z={z}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for k in 0..5 {
            let e = log_gamma(C::new(-(k as f64), 0.0)).unwrap_err();
            assert!(matches!(e, Error::GammaPole { .. }));
        }
        assert!(log_gamma(C::new(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn real_helpers() {
        assert!((gamma_real(5.0f64).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma_real(1.5f64).unwrap() - 0.886_226_925_452_758).abs() < 1e-14);
        assert!((gamma_real(-0.5f64).unwrap() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert_eq!(recip_gamma(-3.0f64).unwrap(), 0.0);
        assert_eq!(recip_gamma(0.0f64).unwrap(), 0.0);
        assert!((ln_gamma_real(100.0f64).unwrap() - 359.134_205_369_575_4).abs() < 1e-10);
        assert!(gamma_real(-2.0f64).is_err());
    }

    #[test]
    fn single_precision_instantiation() {
        let v = log_gamma(Complex::new(0.5f32, 0.0)).unwrap();
        assert!((v.re - 0.572_364_9f32).abs() < 1e-5);
    }
}
