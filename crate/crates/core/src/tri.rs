//! Upper-triangular entry records.
//!
//! Layout of the 4×4 record:
//!
//! ```text
//! [ omega[0]  alpha[0]  beta[0]   gamma    ]
//! [    0      omega[1]  alpha[1]  beta[1]  ]
//! [    0         0      omega[2]  alpha[2] ]
//! [    0         0         0      omega[3] ]
//! ```
//!
//! The 3×3 record drops the last row and column and calls its corner `beta`.

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{ensure_finite, ComplexScalar, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriMatrix4 {
    pub omega: [ComplexScalar; 4],
    pub alpha: [ComplexScalar; 3],
    pub beta: [ComplexScalar; 2],
    pub gamma: ComplexScalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriMatrix3 {
    pub omega: [ComplexScalar; 3],
    pub alpha: [ComplexScalar; 2],
    pub beta: ComplexScalar,
}

impl Default for TriMatrix4 {
    fn default() -> Self {
        TriMatrix4 {
            omega: [ZERO; 4],
            alpha: [ZERO; 3],
            beta: [ZERO; 2],
            gamma: ZERO,
        }
    }
}

impl Default for TriMatrix3 {
    fn default() -> Self {
        TriMatrix3 {
            omega: [ZERO; 3],
            alpha: [ZERO; 2],
            beta: ZERO,
        }
    }
}

impl TriMatrix4 {
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(4, 4);
        for i in 0..4 {
            m[(i, i)] = self.omega[i];
        }
        for i in 0..3 {
            m[(i, i + 1)] = self.alpha[i];
        }
        for i in 0..2 {
            m[(i, i + 2)] = self.beta[i];
        }
        m[(0, 3)] = self.gamma;
        m
    }

    /// Reads the upper triangle of a 4×4 matrix, ignoring anything below it.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Shape(format!(
                "expected 4x4, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(TriMatrix4 {
            omega: [m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(3, 3)]],
            alpha: [m[(0, 1)], m[(1, 2)], m[(2, 3)]],
            beta: [m[(0, 2)], m[(1, 3)]],
            gamma: m[(0, 3)],
        })
    }

    pub fn with_gamma(mut self, gamma: ComplexScalar) -> Self {
        self.gamma = gamma;
        self
    }

    /// Multiplies every entry by a real factor.
    pub fn scaled(&self, s: f64) -> Self {
        TriMatrix4 {
            omega: self.omega.map(|z| z * s),
            alpha: self.alpha.map(|z| z * s),
            beta: self.beta.map(|z| z * s),
            gamma: self.gamma * s,
        }
    }

    /// Entries paired with their schema field names, in document order.
    pub fn labelled_entries(&self) -> Vec<(String, ComplexScalar)> {
        let mut out = Vec::with_capacity(10);
        out.extend(self.omega.iter().enumerate().map(|(i, &z)| (format!("omega[{i}]"), z)));
        out.extend(self.alpha.iter().enumerate().map(|(i, &z)| (format!("alpha[{i}]"), z)));
        out.extend(self.beta.iter().enumerate().map(|(i, &z)| (format!("beta[{i}]"), z)));
        out.push(("gamma".to_string(), self.gamma));
        out
    }

    pub fn ensure_finite(&self) -> Result<()> {
        self.labelled_entries()
            .iter()
            .try_for_each(|(name, z)| ensure_finite(name, *z))
    }
}

impl TriMatrix3 {
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(3, 3);
        for i in 0..3 {
            m[(i, i)] = self.omega[i];
        }
        m[(0, 1)] = self.alpha[0];
        m[(1, 2)] = self.alpha[1];
        m[(0, 2)] = self.beta;
        m
    }

    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.rows() != 3 || m.cols() != 3 {
            return Err(Error::Shape(format!(
                "expected 3x3, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(TriMatrix3 {
            omega: [m[(0, 0)], m[(1, 1)], m[(2, 2)]],
            alpha: [m[(0, 1)], m[(1, 2)]],
            beta: m[(0, 2)],
        })
    }

    pub fn with_beta(mut self, beta: ComplexScalar) -> Self {
        self.beta = beta;
        self
    }

    pub fn scaled(&self, s: f64) -> Self {
        TriMatrix3 {
            omega: self.omega.map(|z| z * s),
            alpha: self.alpha.map(|z| z * s),
            beta: self.beta * s,
        }
    }

    pub fn labelled_entries(&self) -> Vec<(String, ComplexScalar)> {
        let mut out = Vec::with_capacity(6);
        out.extend(self.omega.iter().enumerate().map(|(i, &z)| (format!("omega[{i}]"), z)));
        out.extend(self.alpha.iter().enumerate().map(|(i, &z)| (format!("alpha[{i}]"), z)));
        out.push(("beta".to_string(), self.beta));
        out
    }

    pub fn ensure_finite(&self) -> Result<()> {
        self.labelled_entries()
            .iter()
            .try_for_each(|(name, z)| ensure_finite(name, *z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, ONE};

    #[test]
    fn zero_record_is_zero_matrix() {
        assert_eq!(TriMatrix4::default().to_dense(), DenseMatrix::zeros(4, 4));
        assert_eq!(TriMatrix3::default().to_dense(), DenseMatrix::zeros(3, 3));
    }

    #[test]
    fn unit_diagonal_is_identity() {
        let t = TriMatrix4 {
            omega: [ONE; 4],
            ..Default::default()
        };
        assert_eq!(t.to_dense(), DenseMatrix::identity(4));
    }

    #[test]
    fn alpha1_lands_on_first_superdiagonal() {
        let t = TriMatrix4 {
            alpha: [ONE, ZERO, ZERO],
            ..Default::default()
        };
        let m = t.to_dense();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (0, 1) { ONE } else { ZERO };
                assert_eq!(m[(i, j)], expected);
            }
        }
    }

    #[test]
    fn dense_layout_round_trips() {
        let t = TriMatrix4 {
            omega: [c(0.1, 0.2), c(0.3, -0.1), c(-0.4, 0.0), c(0.0, 0.5)],
            alpha: [c(1.0, 1.0), c(2.0, -2.0), c(3.0, 0.5)],
            beta: [c(-0.7, 0.7), c(0.9, 0.1)],
            gamma: c(0.123, -0.456),
        };
        let m = t.to_dense();
        assert!(m.is_upper_triangular());
        assert_eq!(TriMatrix4::from_dense(&m).unwrap(), t);

        let s = TriMatrix3 {
            omega: [c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0)],
            alpha: [c(0.4, 0.1), c(0.5, 0.2)],
            beta: c(0.6, 0.3),
        };
        assert_eq!(TriMatrix3::from_dense(&s.to_dense()).unwrap(), s);
    }

    #[test]
    fn non_finite_entries_are_named() {
        let mut t = TriMatrix4::default();
        t.beta[1] = c(f64::NAN, 0.0);
        assert_eq!(t.ensure_finite(), Err(Error::range("beta[1]")));
    }
}
