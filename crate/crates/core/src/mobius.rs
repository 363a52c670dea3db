//! Möbius maps `M_w(z) = (w - z) / (1 - conj(w) z)` on scalars and matrices.
//!
//! For an upper-triangular `T`, `M_w(T)` is computed from divided differences
//! of `M_w` at the diagonal entries. Those have the closed form
//! `(|w|^2 - 1) conj(w)^(m-1) / prod(1 - conj(w) z_i)` for `m + 1` points,
//! which stays valid when points repeat.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, ONE};
use crate::tri::TriMatrix4;

const POLE_GUARD: f64 = 1e-300;
const MIN_POINT_SEPARATION: f64 = 1e-12;
const MAX_CONDITION: f64 = 1e12;

fn ensure_inside_disk(omega: ComplexScalar) -> Result<()> {
    if !omega.is_finite() || omega.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "Möbius parameter must lie in the open unit disk, got |omega| = {}",
            omega.norm()
        )));
    }
    Ok(())
}

/// `1 - conj(omega) z`, rejected when it is within the pole guard of zero.
fn denominator(omega: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    let den = ONE - omega.conj() * z;
    if den.norm().is_nan() || den.norm() <= POLE_GUARD {
        return Err(Error::domain(format!("{z} is at the pole of M_{omega}")));
    }
    Ok(den)
}

pub fn mobius_scalar(omega: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    ensure_inside_disk(omega)?;
    Ok((omega - z) / denominator(omega, z)?)
}

/// Newton divided differences; `table[j][k]` is `[f(z_k), ..., f(z_{k+j})]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDifferenceTable {
    pub points: Vec<ComplexScalar>,
    pub table: Vec<Vec<ComplexScalar>>,
}

impl DividedDifferenceTable {
    /// `[f(z_start), ..., f(z_{start+order})]`.
    pub fn get(&self, start: usize, order: usize) -> Option<ComplexScalar> {
        self.table.get(order)?.get(start).copied()
    }

    /// The Newton coefficients `[f(z_0)], [f(z_0), f(z_1)], ...`.
    pub fn leading(&self) -> Vec<ComplexScalar> {
        self.table.iter().map(|row| row[0]).collect()
    }
}

pub fn divided_differences(
    points: &[ComplexScalar],
    values: &[ComplexScalar],
) -> Result<DividedDifferenceTable> {
    if points.len() != values.len() {
        return Err(Error::Shape(format!(
            "{} points but {} values",
            points.len(),
            values.len()
        )));
    }
    if points.is_empty() {
        return Err(Error::domain("divided differences need at least one point"));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() <= MIN_POINT_SEPARATION {
                return Err(Error::domain(format!(
                    "points {i} and {j} coincide; repeated nodes are not supported"
                )));
            }
        }
    }
    let mut table = vec![values.to_vec()];
    for order in 1..points.len() {
        let prev = &table[order - 1];
        let row = (0..points.len() - order)
            .map(|k| (prev[k + 1] - prev[k]) / (points[k + order] - points[k]))
            .collect();
        table.push(row);
    }
    Ok(DividedDifferenceTable {
        points: points.to_vec(),
        table,
    })
}

/// Divided difference of `M_omega` at 2, 3 or 4 (not necessarily distinct)
/// points.
pub fn mobius_divided_closed_form(omega: ComplexScalar, points: &[ComplexScalar]) -> Result<ComplexScalar> {
    ensure_inside_disk(omega)?;
    if !(2..=4).contains(&points.len()) {
        return Err(Error::domain(format!(
            "closed form needs 2 to 4 points, got {}",
            points.len()
        )));
    }
    let mut den = ONE;
    for &z in points {
        den *= denominator(omega, z)?;
    }
    let order = points.len() as i32 - 1;
    Ok(omega.conj().powi(order - 1) * (omega.norm_sqr() - 1.0) / den)
}

/// `M_omega(T)` for an upper-triangular 4×4 record, entry by entry.
pub fn mobius_transform_triangular(omega: ComplexScalar, t: &TriMatrix4) -> Result<TriMatrix4> {
    ensure_inside_disk(omega)?;
    t.ensure_finite()?;
    let w = t.omega;
    let [a1, a2, a3] = t.alpha;
    let [b1, b2] = t.beta;
    let dd = |idx: &[usize]| {
        let pts: Vec<ComplexScalar> = idx.iter().map(|&i| w[i]).collect();
        mobius_divided_closed_form(omega, &pts)
    };

    let diag = [
        mobius_scalar(omega, w[0])?,
        mobius_scalar(omega, w[1])?,
        mobius_scalar(omega, w[2])?,
        mobius_scalar(omega, w[3])?,
    ];
    let alpha = [
        a1 * dd(&[0, 1])?,
        a2 * dd(&[1, 2])?,
        a3 * dd(&[2, 3])?,
    ];
    let lambda1 = a1 * a2 * dd(&[0, 1, 2])? + b1 * dd(&[0, 2])?;
    let lambda2 = a2 * a3 * dd(&[1, 2, 3])? + b2 * dd(&[1, 3])?;
    let mu = a1 * a2 * a3 * dd(&[0, 1, 2, 3])?
        + a1 * b2 * dd(&[0, 1, 3])?
        + a3 * b1 * dd(&[0, 2, 3])?
        + t.gamma * dd(&[0, 3])?;
    Ok(TriMatrix4 {
        omega: diag,
        alpha,
        beta: [lambda1, lambda2],
        gamma: mu,
    })
}

/// `(omega I - m)(I - conj(omega) m)^{-1}` by LU solve.
pub fn mobius_transform_dense(omega: ComplexScalar, m: &DenseMatrix) -> Result<DenseMatrix> {
    ensure_inside_disk(omega)?;
    if !m.is_square() {
        return Err(Error::domain(format!(
            "Möbius transform needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::range("matrix"));
    }
    let n = m.rows();
    let id = DenseMatrix::identity(n);
    let den = &id - &m.scale(omega.conj());
    let num = &id.scale(omega) - m;
    let lu = den.lu()?;
    let inv = lu.solve(&id)?;
    let cond = den.norm_1() * inv.norm_1();
    if cond.is_nan() || cond >= MAX_CONDITION {
        return Err(Error::domain(format!(
            "I - conj(omega) m is numerically singular (condition {cond:.3e})"
        )));
    }
    // The two factors commute, so solving from the left gives the same
    // product as multiplying by the inverse on the right.
    lu.solve(&num)
}
