//! Dense complex linear algebra with explicit tolerance contracts.
//!
//! Everything downstream (quadrature, frame calculus, operator calculus)
//! goes through this module. Conventions are fixed here once:
//! eigenvalues ascending, singular values descending, all tolerances
//! relative with a 1e-10 default.

mod eig;
mod geneig;
mod svd;

pub use eig::hermitian_eig;
pub(crate) use eig::symmetric_tridiag_eig;
pub use geneig::{general_eigenvalues, invert, solve_general};
pub use svd::svd;

use num_complex::Complex64;
use thiserror::Error;

/// Default relative tolerance used wherever a caller does not override.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (relative symmetry defect {defect:.3e})")]
    NonHermitian { defect: f64 },
    #[error("tolerance {0} outside the open interval (0, 1)")]
    BadTolerance(f64),
    #[error("ill-conditioned system: lambda_min/lambda_max = {lambda_min:.6e}/{lambda_max:.6e}")]
    IllConditioned { lambda_min: f64, lambda_max: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{algorithm} did not converge after {iterations} iterations")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
    },
    #[error("singular values must be non-negative and descending")]
    NotDescending,
    #[error("singular matrix encountered in {0}")]
    Singular(&'static str),
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Wraps `data` (row-major, length rows*cols). Rejects non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        let m = Self { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn diagonal_real(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = Complex64::new(e, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn check_finite(&self) -> Result<(), NumericsError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(NumericsError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NumericsError> {
        if self.cols != other.rows {
            return Err(NumericsError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
        if v.len() != self.cols {
            return Err(NumericsError::DimensionMismatch(format!(
                "matvec: {}x{} against vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumericsError> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NumericsError> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value).
    pub fn norm_two(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        svd(self).map(|s| s.singulars[0]).unwrap_or(f64::NAN)
    }

    /// max |a_ij - conj(a_ji)| over the square matrix.
    pub fn hermitian_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    fn same_shape(&self, other: &Self) -> Result<(), NumericsError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(NumericsError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// `values` are ascending; the k-th column of `vectors` is a unit
/// eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct EigResult {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Singular value decomposition `A = left * diag(singulars) * right^H`.
///
/// `singulars` are descending; `left` is rows x k and `right` is cols x k
/// with k = min(rows, cols).
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: ComplexMatrix,
    pub singulars: Vec<f64>,
    pub right: ComplexMatrix,
}

/// Number of singular values above `rel_tol * sigma_max`; 0 for a zero list.
pub fn numerical_rank(singulars: &[f64], rel_tol: f64) -> Result<usize, NumericsError> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(NumericsError::BadTolerance(rel_tol));
    }
    for w in singulars.windows(2) {
        if w[1] > w[0] {
            return Err(NumericsError::NotDescending);
        }
    }
    if singulars.iter().any(|&s| s < 0.0) {
        return Err(NumericsError::NotDescending);
    }
    let sigma_max = singulars.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(0);
    }
    Ok(singulars.iter().filter(|&&s| s > rel_tol * sigma_max).count())
}

/// Solves `H X = B` for Hermitian positive definite `H`.
///
/// Rejects systems with lambda_min <= 1e-12 * lambda_max. One step of
/// iterative refinement keeps the residual near machine level even for
/// conditioning close to the gate.
pub fn solve_hpd(h: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
    if !h.is_square() {
        return Err(NumericsError::NonSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    if h.rows() != b.rows() {
        return Err(NumericsError::DimensionMismatch(format!(
            "solve_hpd: {}x{} system against {}x{} right-hand side",
            h.rows(),
            h.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let eig = hermitian_eig(h)?;
    let n = h.rows();
    let lambda_min = eig.values.first().copied().unwrap_or(0.0);
    let lambda_max = eig.values.last().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 || lambda_min <= 1e-12 * lambda_max {
        return Err(NumericsError::IllConditioned {
            lambda_min,
            lambda_max,
        });
    }
    let apply_inverse = |rhs: &ComplexMatrix| -> Result<ComplexMatrix, NumericsError> {
        // V diag(1/lambda) V^H rhs
        let mut y = eig.vectors.adjoint().mul(rhs)?;
        for i in 0..n {
            for j in 0..y.cols() {
                y[(i, j)] /= eig.values[i];
            }
        }
        eig.vectors.mul(&y)
    };
    let mut x = apply_inverse(b)?;
    for _ in 0..2 {
        let residual = b.sub(&h.mul(&x)?)?;
        let correction = apply_inverse(&residual)?;
        x = x.add(&correction)?;
    }
    Ok(x)
}
