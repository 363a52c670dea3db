//! Small dense complex matrices.
//!
//! Everything in this crate works at 4×4 or below, so storage is a flat
//! row-major `Vec` and the algorithms are the textbook ones.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ComplexScalar>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        DenseMatrix {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[ComplexScalar]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<ComplexScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[ComplexScalar]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            entries.extend_from_slice(r.as_ref());
        }
        Self::from_row_major(rows.len(), cols, entries).expect("non-empty rows")
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<ComplexScalar>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| ComplexScalar::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[ComplexScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<ComplexScalar> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(ComplexScalar::new(s, 0.0))
    }

    /// `self* · self`.
    pub fn gram(&self) -> Self {
        &self.adjoint() * self
    }

    /// Copies the block `rows[r0..r1] × cols[c0..c1]`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 < r1 && r1 <= self.rows && c0 < c1 && c1 <= self.cols);
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)];
            }
        }
        out
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &DenseMatrix) -> Result<Self> {
        if self.cols != below.cols {
            return Err(Error::Shape(format!(
                "cannot stack {} columns over {}",
                self.cols, below.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        Self::from_row_major(self.rows + below.rows, self.cols, entries)
    }

    /// Places `right` beside `self`.
    pub fn hstack(&self, right: &DenseMatrix) -> Result<Self> {
        if self.rows != right.rows {
            return Err(Error::Shape(format!(
                "cannot join {} rows beside {}",
                self.rows, right.rows
            )));
        }
        let cols = self.cols + right.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..right.cols {
                out[(i, self.cols + j)] = right[(i, j)];
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_column_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self[(i, j)].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|h_ij - conj(h_ji)|`; `None` for non-square input.
    pub fn hermitian_defect(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        Some(worst)
    }

    /// `(h + h*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale_real(0.5)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)] == ZERO))
    }

    /// LU factorisation with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::Shape("LU needs a square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot_mag) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag == 0.0 {
                return Err(Error::domain("matrix is singular"));
            }
            if p != k {
                for j in 0..n {
                    a.entries.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[(k, k)];
            for i in (k + 1)..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                if factor != ZERO {
                    for j in (k + 1)..n {
                        let t = a[(k, j)];
                        a[(i, j)] -= factor * t;
                    }
                }
            }
        }
        Ok(Lu { packed: a, perm })
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.lu()?.solve(rhs)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve(&DenseMatrix::identity(self.rows))
    }

    /// `self^k` for a non-negative integer power.
    pub fn powi(&self, k: u32) -> DenseMatrix {
        assert!(self.is_square());
        let mut out = DenseMatrix::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

/// Packed LU factors with the row permutation applied to the input.
#[derive(Debug, Clone)]
pub struct Lu {
    packed: DenseMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.packed.rows;
        if rhs.rows != n {
            return Err(Error::Shape(format!(
                "right-hand side has {} rows, system has {n}",
                rhs.rows
            )));
        }
        let mut x = DenseMatrix::zeros(n, rhs.cols);
        for col in 0..rhs.cols {
            let mut y: Vec<ComplexScalar> = self.perm.iter().map(|&p| rhs[(p, col)]).collect();
            for i in 0..n {
                for k in 0..i {
                    let l = self.packed[(i, k)];
                    y[i] = y[i] - l * y[k];
                }
            }
            for i in (0..n).rev() {
                let acc = y[i]
                    - ((i + 1)..n)
                        .map(|k| self.packed[(i, k)] * y[k])
                        .sum::<ComplexScalar>();
                y[i] = acc / self.packed[(i, i)];
            }
            for i in 0..n {
                x[(i, col)] = y[i];
            }
        }
        Ok(x)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = ComplexScalar;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
