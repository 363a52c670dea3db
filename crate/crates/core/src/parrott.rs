//! Corner completion for 4×4 block matrices `[[A, B], [C, D]]`.
//!
//! `A` is 1×3, `B` a scalar, `C` 3×3 and `D` 3×1. When `[A; C]` and `[C D]`
//! are contractions, write `A = Z D_C` and `D = D_{C*} Y` with the minimal
//! solutions `Z0`, `Y0`. The whole matrix is then a contraction exactly when
//! `|B + Z0 C* Y0| <= sqrt(1 - Z0 Z0*) sqrt(1 - Y0* Y0)`.

use crate::criteria::Disk;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::mobius::{mobius_divided_closed_form, mobius_transform_triangular};
use crate::oracle::{defect_gram, hermitian_eigen, is_contraction_oracle, EigenDecomposition};
use crate::scalar::{ComplexScalar, ZERO};
use crate::tolerance::Tolerances;
use crate::tri::TriMatrix4;
use crate::verdict::{Branch, Verdict};

/// Below this radius the disk is a single point and membership is decided
/// with an absolute slack.
const POINT_DISK_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ParrottBlocks {
    pub a: DenseMatrix,
    pub b: ComplexScalar,
    pub c: DenseMatrix,
    pub d: DenseMatrix,
}

impl ParrottBlocks {
    pub fn new(a: DenseMatrix, b: ComplexScalar, c: DenseMatrix, d: DenseMatrix) -> Result<Self> {
        let shapes = [
            ("A", &a, 1, 3),
            ("C", &c, 3, 3),
            ("D", &d, 3, 1),
        ];
        for (name, m, r, k) in shapes {
            if m.rows() != r || m.cols() != k {
                return Err(Error::Shape(format!(
                    "block {name} must be {r}x{k}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(ParrottBlocks { a, b, c, d })
    }

    /// Splits a 4×4 matrix: first row is `[A B]`, the rest is `[C D]`.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Shape(format!(
                "expected a 4x4 matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(ParrottBlocks {
            a: m.block(0, 1, 0, 3),
            b: m[(0, 3)],
            c: m.block(1, 4, 0, 3),
            d: m.block(1, 4, 3, 4),
        })
    }

    pub fn from_tri(t: &TriMatrix4) -> Self {
        Self::from_dense(&t.to_dense()).expect("a 4x4 record is 4x4")
    }

    pub fn assemble(&self) -> DenseMatrix {
        let top = self
            .a
            .hstack(&DenseMatrix::from_rows(&[[self.b]]))
            .expect("A is 1x3");
        let bottom = self.c.hstack(&self.d).expect("C and D share rows");
        top.vstack(&bottom).expect("both halves are 4 wide")
    }

    /// `[A; C]`.
    pub fn column_block(&self) -> DenseMatrix {
        self.a.vstack(&self.c).expect("A and C share columns")
    }

    /// `[C D]`.
    pub fn row_block(&self) -> DenseMatrix {
        self.c.hstack(&self.d).expect("C and D share rows")
    }
}

/// `(I - m* m)^{1/2}`, with eigenvalues within `tol.psd` below zero clamped.
pub fn defect_operator(m: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
    let eig = hermitian_eigen(&defect_gram(m))?;
    if eig.min_eigenvalue() < -tol.psd {
        return Err(Error::domain(format!(
            "not a contraction: I - m* m has eigenvalue {:.3e}",
            eig.min_eigenvalue()
        )));
    }
    Ok(eig.map_spectrum(|x| x.max(0.0).sqrt()))
}

/// Upper-triangular `S` with `S* S = h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    pub factor: DenseMatrix,
    /// Rows whose pivot vanished. When this is non-empty the factor is one
    /// of many.
    pub skipped_pivots: Vec<usize>,
}

pub fn cholesky_upper(h: &DenseMatrix, tol: &Tolerances) -> Result<Cholesky> {
    let eig = hermitian_eigen(h)?;
    let scale = eig.max_eigenvalue().abs().max(1.0);
    if eig.min_eigenvalue() < -tol.psd * scale {
        return Err(Error::domain(format!(
            "matrix is indefinite (eigenvalue {:.3e})",
            eig.min_eigenvalue()
        )));
    }
    let n = h.rows();
    let h = h.hermitian_part();
    let pivot_floor = tol.psd * scale;
    let mut s = DenseMatrix::zeros(n, n);
    let mut skipped = Vec::new();
    for k in 0..n {
        let taken: f64 = (0..k).map(|l| s[(l, k)].norm_sqr()).sum();
        let pivot = h[(k, k)].re - taken;
        if pivot <= pivot_floor {
            // Semidefinite: the rest of the row must vanish as well, up to
            // what a pivot of size `pivot_floor` could hide.
            let limit = 4.0 * (pivot_floor * scale).sqrt() + 1e-12;
            for j in k + 1..n {
                let rem = h[(k, j)] - (0..k).map(|l| s[(l, k)].conj() * s[(l, j)]).sum::<ComplexScalar>();
                if rem.norm() > limit {
                    return Err(Error::domain(format!(
                        "matrix is indefinite (zero pivot {k} with coupling {:.3e})",
                        rem.norm()
                    )));
                }
            }
            skipped.push(k);
            continue;
        }
        let root = pivot.sqrt();
        s[(k, k)] = ComplexScalar::new(root, 0.0);
        for j in k + 1..n {
            let rem = h[(k, j)] - (0..k).map(|l| s[(l, k)].conj() * s[(l, j)]).sum::<ComplexScalar>();
            s[(k, j)] = rem / root;
        }
    }
    Ok(Cholesky {
        factor: s,
        skipped_pivots: skipped,
    })
}

/// Applies `g^{-1/2}` on the range of `g` to `x`, after checking that `x`
/// has no component along (numerically) null eigenvectors.
fn pseudo_inverse_root(
    eig: &EigenDecomposition,
    tol: &Tolerances,
    component: impl Fn(&[ComplexScalar]) -> ComplexScalar,
) -> Result<Vec<(usize, ComplexScalar)>> {
    let cutoff = tol.psd * eig.max_eigenvalue().max(1.0);
    if eig.min_eigenvalue() < -cutoff {
        return Err(Error::domain(format!(
            "defect matrix is not semidefinite (eigenvalue {:.3e})",
            eig.min_eigenvalue()
        )));
    }
    let consistency = 2.0 * (cutoff + tol.psd).sqrt() + 1e-12;
    let mut coeffs = Vec::new();
    for k in 0..eig.dim() {
        let coeff = component(&eig.eigenvector(k));
        let lambda = eig.eigenvalues[k];
        if lambda > cutoff {
            coeffs.push((k, coeff / lambda.sqrt()));
        } else if coeff.norm() > consistency {
            return Err(Error::domain(format!(
                "inconsistent system: component {:.3e} along a null direction",
                coeff.norm()
            )));
        }
    }
    Ok(coeffs)
}

/// Minimal-norm `Z` with `Z g^{1/2} = a` for a 1×n row `a`.
pub fn minimal_row_solution(a: &DenseMatrix, g: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
    let n = g.rows();
    if a.rows() != 1 || a.cols() != n || !g.is_square() {
        return Err(Error::Shape(format!(
            "expected a 1x{n} row against an {n}x{n} matrix"
        )));
    }
    let eig = hermitian_eigen(g)?;
    // Z = sum_k (a v_k / sqrt(l_k)) v_k*
    let coeffs = pseudo_inverse_root(&eig, tol, |v| {
        (0..n).map(|i| a[(0, i)] * v[i]).sum()
    })?;
    let mut z = DenseMatrix::zeros(1, n);
    for (k, coeff) in coeffs {
        for j in 0..n {
            z[(0, j)] += coeff * eig.eigenvectors[(j, k)].conj();
        }
    }
    Ok(z)
}

/// Minimal-norm `Y` with `g^{1/2} Y = d` for an n×1 column `d`.
pub fn minimal_column_solution(g: &DenseMatrix, d: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
    let n = g.rows();
    if d.cols() != 1 || d.rows() != n || !g.is_square() {
        return Err(Error::Shape(format!(
            "expected an {n}x1 column against an {n}x{n} matrix"
        )));
    }
    let eig = hermitian_eigen(g)?;
    // Y = sum_k v_k (v_k* d / sqrt(l_k))
    let coeffs = pseudo_inverse_root(&eig, tol, |v| {
        (0..n).map(|i| v[i].conj() * d[(i, 0)]).sum()
    })?;
    let mut y = DenseMatrix::zeros(n, 1);
    for (k, coeff) in coeffs {
        for i in 0..n {
            y[(i, 0)] += eig.eigenvectors[(i, k)] * coeff;
        }
    }
    Ok(y)
}

/// Intermediate quantities of the completion, kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub z0: DenseMatrix,
    pub y0: DenseMatrix,
    pub disk: Disk,
}

fn scalar_of(m: &DenseMatrix) -> ComplexScalar {
    m[(0, 0)]
}

/// Minimal solutions and the admissible corners; `blocks.b` is ignored.
/// Returns `None` for the solutions when `[A; C]` or `[C D]` fails.
pub fn parrott_completion(blocks: &ParrottBlocks, tol: &Tolerances) -> Result<(Option<(DenseMatrix, DenseMatrix)>, Disk)> {
    let column = is_contraction_oracle(&blocks.column_block(), tol)?;
    let row = is_contraction_oracle(&blocks.row_block().adjoint(), tol)?;
    let mut failures = Vec::new();
    if !column.is_contraction {
        failures.push(format!(
            "column block [A; C] is not a contraction ({})",
            column.notes.join(", ")
        ));
    }
    if !row.is_contraction {
        failures.push(format!(
            "row block [C D] is not a contraction ({})",
            row.notes.join(", ")
        ));
    }
    if !failures.is_empty() {
        return Ok((None, Disk::empty(failures.join("; "))));
    }

    let c = &blocks.c;
    let z0 = minimal_row_solution(&blocks.a, &defect_gram(c), tol);
    let y0 = minimal_column_solution(&defect_gram(&c.adjoint()), &blocks.d, tol);
    let (z0, y0) = match (z0, y0) {
        (Ok(z), Ok(y)) => (z, y),
        (Err(e), _) | (_, Err(e)) => return Ok((None, Disk::empty(e.to_string()))),
    };
    let zz = scalar_of(&(&z0 * &z0.adjoint())).re;
    let yy = scalar_of(&(&y0.adjoint() * &y0)).re;
    let center = -scalar_of(&(&(&z0 * &c.adjoint()) * &y0));
    let radius = (1.0 - zz).max(0.0).sqrt() * (1.0 - yy).max(0.0).sqrt();
    let disk = Disk::new(center, radius)
        .with_note(format!("|Z0| = {:.15}", zz.max(0.0).sqrt()))
        .with_note(format!("|Y0| = {:.15}", yy.max(0.0).sqrt()));
    Ok((Some((z0, y0)), disk))
}

/// Admissible corners `B` for the given `A`, `C`, `D`.
pub fn parrott_corner_disk(blocks: &ParrottBlocks, tol: &Tolerances) -> Result<Disk> {
    parrott_completion(blocks, tol).map(|(_, disk)| disk)
}

/// Decides contractivity of the assembled matrix by corner-disk membership.
///
/// Residuals: `column_block` and `row_block` (smallest eigenvalues of the
/// defect matrices) and `corner_disk` (`radius - |B - center|`).
pub fn parrott_check(blocks: &ParrottBlocks, tol: &Tolerances) -> Result<Verdict> {
    let mut v = Verdict::new(Branch::Parrott);
    let column = is_contraction_oracle(&blocks.column_block(), tol)?;
    let row = is_contraction_oracle(&blocks.row_block().adjoint(), tol)?;
    v.record("column_block", column.residual("min_eigenvalue").unwrap_or(f64::NAN));
    v.record("row_block", row.residual("min_eigenvalue").unwrap_or(f64::NAN));
    let (_, disk) = parrott_completion(blocks, tol)?;
    v.notes.extend(disk.notes.iter().cloned());
    if disk.empty {
        return Ok(v);
    }
    let margin = disk.radius - (blocks.b - disk.center).norm();
    v.record("corner_disk", margin);
    if disk.radius > 0.0 {
        v.note(format!("W0 = {}", (blocks.b - disk.center) / disk.radius));
    }
    v.note(format!("disk center {} radius {:.15}", disk.center, disk.radius));
    let slack = if disk.radius == 0.0 {
        POINT_DISK_SLACK
    } else {
        tol.residual
    };
    v.is_contraction = column.is_contraction && row.is_contraction && margin >= -slack;
    Ok(v)
}

/// The admissible `gamma` of a 4×4 record, obtained by completing the
/// corner of `M_w(T)` with `w = omega3` and pulling the disk back. The
/// corner of `M_w(T)` depends affinely on `gamma`, so disks map to disks.
pub fn gamma_disk_via_parrott(t: &TriMatrix4, tol: &Tolerances) -> Result<Disk> {
    let t = t.with_gamma(ZERO);
    t.ensure_finite()?;
    if let Some(i) = t.omega.iter().position(|w| w.norm() > 1.0 + tol.boundary) {
        return Ok(Disk::empty(format!("omega{}_modulus fails", i + 1)));
    }
    let w = if t.omega[2].norm() < 1.0 { t.omega[2] } else { ZERO };
    let image = mobius_transform_triangular(w, &t)?;
    let slope = mobius_divided_closed_form(w, &[t.omega[0], t.omega[3]])?;
    let disk = parrott_corner_disk(&ParrottBlocks::from_tri(&image), tol)?;
    if disk.empty {
        return Ok(disk);
    }
    // mu = offset + slope * gamma, and image.gamma is the offset
    let mut back = Disk::new((disk.center - image.gamma) / slope, disk.radius / slope.norm());
    back.notes = disk.notes;
    Ok(back.with_note(format!("Möbius parameter {w}")))
}

/// `M^s` for `M = [[1 - |w|^2, -conj(w) a], [-conj(a) w, 1 - |a|^2]]`.
///
/// `M` has eigenvalues `1` and `l = 1 - |a|^2 - |w|^2`, so `M^s` only needs
/// `l^s`, computed as `exp(s log1p(-sigma))` to keep small `sigma` accurate.
pub fn matrix_power_2x2(omega: ComplexScalar, alpha: ComplexScalar, s: f64) -> Result<DenseMatrix> {
    if !(omega.is_finite() && alpha.is_finite() && s.is_finite()) {
        return Err(Error::range("matrix_power_2x2"));
    }
    let (aa, ww) = (alpha.norm_sqr(), omega.norm_sqr());
    let sigma = aa + ww;
    if sigma == 0.0 {
        return Ok(DenseMatrix::identity(2));
    }
    let lambda = 1.0 - sigma;
    // (l^s, 1 - l^s)
    let (pow, one_minus_pow) = if lambda > 0.0 {
        let e = s * (-sigma).ln_1p();
        (e.exp(), -e.exp_m1())
    } else if lambda == 0.0 {
        if s <= 0.0 {
            return Err(Error::domain("zero eigenvalue raised to a non-positive power"));
        }
        (0.0, 1.0)
    } else {
        if s.fract() != 0.0 {
            return Err(Error::domain(format!(
                "negative eigenvalue {lambda} raised to fractional power {s}"
            )));
        }
        let p = lambda.powi(s as i32);
        (p, 1.0 - p)
    };
    let off = -alpha * omega.conj() * one_minus_pow / sigma;
    Ok(DenseMatrix::from_rows(&[
        [ComplexScalar::new((aa + ww * pow) / sigma, 0.0), off],
        [off.conj(), ComplexScalar::new((ww + aa * pow) / sigma, 0.0)],
    ]))
}
