//! Complex scalar helpers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entries of every matrix in this crate: a pair of `f64` components.
pub type ComplexScalar = Complex64;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

/// `1 - |z|^2`.
#[inline]
pub fn defect(z: ComplexScalar) -> f64 {
    1.0 - z.norm_sqr()
}

/// `(1 - |u|^2)(1 - |v|^2)`.
///
/// Satisfies `|1 - conj(u) v|^2 - |u - v|^2 = defect_product(u, v)` for all
/// `u`, `v`; the Möbius reductions lean on this identity to move inequalities
/// between a matrix and its transform.
#[inline]
pub fn defect_product(u: ComplexScalar, v: ComplexScalar) -> f64 {
    defect(u) * defect(v)
}

/// Right-hand side of the defect identity, evaluated directly.
#[inline]
pub fn defect_identity_rhs(u: ComplexScalar, v: ComplexScalar) -> f64 {
    (ONE - u.conj() * v).norm_sqr() - (u - v).norm_sqr()
}

pub(crate) fn ensure_finite(field: &str, z: ComplexScalar) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::range(field))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defect_product_trivial_cases() {
        assert_eq!(defect_product(ZERO, ZERO), 1.0);
        assert_eq!(defect_product(ONE, c(0.3, -0.7)), 0.0);
        assert_eq!(defect_product(ONE, c(5.0, 2.0)), 0.0);
    }

    #[test]
    fn defect_product_matches_identity_at_mixed_point() {
        let u = c(0.6, 0.0);
        let v = c(0.0, 0.8);
        let lhs = defect_product(u, v);
        assert!((lhs - 0.2304).abs() < 1e-15);
        // |1 - 0.48i|^2 - |0.6 - 0.8i|^2 = 1.2304 - 1.0
        assert!((defect_identity_rhs(u, v) - 0.2304).abs() < 1e-15);
    }

    #[test]
    fn ensure_finite_rejects_nan_and_inf() {
        assert!(ensure_finite("x", c(1.0, 2.0)).is_ok());
        assert_eq!(
            ensure_finite("omega[0]", c(f64::NAN, 0.0)),
            Err(Error::range("omega[0]"))
        );
        assert!(ensure_finite("x", c(0.0, f64::INFINITY)).is_err());
    }
}
