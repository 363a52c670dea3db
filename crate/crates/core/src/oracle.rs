//! Eigenvalue-based ground truth.
//!
//! Nothing here knows about the closed-form criteria: a matrix `m` is a
//! contraction exactly when `I - m* m` is positive semidefinite, and that is
//! decided from the spectrum computed by cyclic complex Jacobi rotations.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, ONE, ZERO};
use crate::tolerance::Tolerances;
use crate::verdict::{Branch, Verdict};

pub const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_RTOL: f64 = 1e-14;
const HERMITIAN_RTOL: f64 = 1e-12;

/// Spectral decomposition `h = V diag(eigenvalues) V*` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `eigenvalues`.
    pub eigenvectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<ComplexScalar> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V diag(f(lambda)) V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = DenseMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * fk;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.map_spectrum(|x| x)
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// The input is symmetrised before iterating; inputs further than `1e-12`
/// (relative) from Hermitian are rejected.
pub fn hermitian_eigen(h: &DenseMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::domain(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::range("matrix"));
    }
    let n = h.rows();
    let scale = h.frobenius_norm();
    let defect = h.hermitian_defect().unwrap_or(0.0);
    if defect > HERMITIAN_RTOL * scale.max(1.0) {
        return Err(Error::domain(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }

    let mut a = h.hermitian_part();
    for i in 0..n {
        a[(i, i)] = ComplexScalar::new(a[(i, i)].re, 0.0);
    }
    let mut v = DenseMatrix::identity(n);
    let threshold = OFF_DIAGONAL_RTOL * scale;

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p][q]` with the unitary
/// `U = diag(1, e^{-i phi}) · [[c, s], [-s, c]]` acting on the `(p, q)` plane,
/// where `a[p][q] = r e^{i phi}`.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    let u_pp = ComplexScalar::new(cs, 0.0);
    let u_pq = ComplexScalar::new(sn, 0.0);
    let u_qp = -phase.conj() * sn;
    let u_qq = phase.conj() * cs;

    let n = a.rows();
    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // A <- U* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = ComplexScalar::new(a[(p, p)].re, 0.0);
    a[(q, q)] = ComplexScalar::new(a[(q, q)].re, 0.0);
    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Largest singular value, `sqrt(lambda_max(m* m))` clamped at zero.
pub fn operator_norm(m: &DenseMatrix) -> Result<f64> {
    let eig = hermitian_eigen(&m.gram())?;
    Ok(eig.max_eigenvalue().max(0.0).sqrt())
}

/// `I - m* m`.
pub fn defect_gram(m: &DenseMatrix) -> DenseMatrix {
    &DenseMatrix::identity(m.cols()) - &m.gram()
}

/// Decides contractivity from the smallest eigenvalue of `I - m* m`.
///
/// Residuals: `min_eigenvalue` (of `I - m* m`, the deciding quantity) and
/// `norm_margin` (`1 - ||m||`, informational).
pub fn is_contraction_oracle(m: &DenseMatrix, tol: &Tolerances) -> Result<Verdict> {
    let eig = hermitian_eigen(&defect_gram(m))?;
    let min_eig = eig.min_eigenvalue();
    // eigenvalues of I - m*m are 1 - sigma_i^2
    let norm = (1.0 - min_eig).max(0.0).sqrt();
    let mut verdict = Verdict::new(Branch::Oracle);
    verdict.record("min_eigenvalue", min_eig);
    verdict.record("norm_margin", 1.0 - norm);
    verdict.is_contraction = min_eig >= -tol.psd;
    verdict.note(format!("operator norm {norm:.15}"));
    Ok(verdict)
}

/// A unitary assembled from Givens-type rotations with the given angles and
/// phases; used to probe unitary invariance.
pub fn unitary_from_rotations(n: usize, params: &[(usize, usize, f64, f64)]) -> DenseMatrix {
    let mut u = DenseMatrix::identity(n);
    for &(p, q, theta, phi) in params {
        let mut g = DenseMatrix::identity(n);
        let e = ComplexScalar::from_polar(1.0, phi);
        g[(p, p)] = ONE * theta.cos();
        g[(p, q)] = e * theta.sin();
        g[(q, p)] = -e.conj() * theta.sin();
        g[(q, q)] = ONE * theta.cos();
        u = &u * &g;
    }
    u
}
