//! The truncated test-function space: the span of the first N orthonormal
//! Hermite functions.
//!
//! The dense space, the Hilbert space and its conjugate dual all collapse
//! onto one N-dimensional coefficient space at finite truncation, with the
//! duality pairing realized by the Euclidean inner product: <f|g> =
//! sum_n c_n(f) conj(c_n(g)), linear in the first argument. That
//! convention is fixed here for the whole crate. Distinctions that only
//! exist in infinite dimensions (unboundedness, topologies) are recovered
//! by sweeps over N, not modeled directly.

use crate::numerics::ComplexMatrix;
use crate::quadrature::QuadratureGrid;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TestSpaceError {
    #[error("test space needs at least one basis function")]
    EmptySpace,
    #[error("grid does not cover the space's truncation interval [-{0}, {0}]")]
    GridMismatch(f64),
    #[error("coefficient vector length {got} does not match space dimension {dim}")]
    DimensionMismatch { got: usize, dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Hermite,
}

/// Truncated orthonormal basis of dimension N with a suggested domain
/// half-width L = sqrt(2N) + 4 (Hermite function n is negligible beyond
/// |x| ~ sqrt(2n+1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestSpace {
    dim: usize,
    basis: BasisKind,
    truncation: f64,
}

impl TestSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    /// Suggested half-width of a bounded grid for this space.
    pub fn truncation(&self) -> f64 {
        self.truncation
    }
}

/// The N-dimensional Hermite test space.
pub fn hermite_space(n: usize) -> Result<TestSpace, TestSpaceError> {
    if n == 0 {
        return Err(TestSpaceError::EmptySpace);
    }
    Ok(TestSpace {
        dim: n,
        basis: BasisKind::Hermite,
        truncation: (2.0 * n as f64).sqrt() + 4.0,
    })
}

/// Coefficients of a test function against the space's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    space: TestSpace,
    coords: Vec<Complex64>,
}

impl CoeffVector {
    pub fn new(space: TestSpace, coords: Vec<Complex64>) -> Result<Self, TestSpaceError> {
        if coords.len() != space.dim() {
            return Err(TestSpaceError::DimensionMismatch {
                got: coords.len(),
                dim: space.dim(),
            });
        }
        Ok(Self { space, coords })
    }

    pub fn zero(space: TestSpace) -> Self {
        Self {
            coords: vec![Complex64::new(0.0, 0.0); space.dim()],
            space,
        }
    }

    /// The n-th basis vector as a coefficient vector.
    pub fn basis_vector(space: TestSpace, n: usize) -> Self {
        let mut v = Self::zero(space);
        v.coords[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn space(&self) -> TestSpace {
        self.space
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// <self|other>, linear in self, conjugate-linear in other.
    pub fn pairing(&self, other: &Self) -> Complex64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.coords
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Samples of the basis functions: entry (j, n) is h_n(points[j]).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl EvalMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, n: usize) -> f64 {
        self.values[j * self.cols + n]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(self.get(i, j), 0.0)
        })
    }
}

/// Samples all N basis functions at the given points via the stable
/// three-term recurrence
/// h_0(x) = pi^{-1/4} exp(-x^2/2),
/// h_{n+1}(x) = x sqrt(2/(n+1)) h_n(x) - sqrt(n/(n+1)) h_{n-1}(x).
pub fn evaluate_basis(space: &TestSpace, points: &[f64]) -> EvalMatrix {
    let n = space.dim();
    let m = points.len();
    let mut values = vec![0.0f64; m * n];
    let h0_scale = std::f64::consts::PI.powf(-0.25);
    for (j, &x) in points.iter().enumerate() {
        let row = &mut values[j * n..(j + 1) * n];
        let h0 = h0_scale * (-0.5 * x * x).exp();
        row[0] = h0;
        if n > 1 {
            row[1] = x * 2f64.sqrt() * h0;
        }
        for k in 1..n.saturating_sub(1) {
            let kf = k as f64;
            row[k + 1] =
                x * (2.0 / (kf + 1.0)).sqrt() * row[k] - (kf / (kf + 1.0)).sqrt() * row[k - 1];
        }
    }
    EvalMatrix {
        rows: m,
        cols: n,
        values,
    }
}

/// Discrete Gram matrix G[m][n] = sum_j w_j h_m(x_j) h_n(x_j).
///
/// How close G is to the identity measures how faithfully the grid
/// represents the Hilbert inner product on this space. The grid must
/// cover [-L, L] (or be an unbounded rule).
pub fn discrete_gram(
    space: &TestSpace,
    grid: &QuadratureGrid,
) -> Result<ComplexMatrix, TestSpaceError> {
    if !grid.covers(space.truncation()) {
        return Err(TestSpaceError::GridMismatch(space.truncation()));
    }
    Ok(gram_unchecked(space, grid))
}

/// Gram matrix with no domain-coverage precondition; used by gates that
/// want the defect value even for inadequate grids.
pub(crate) fn gram_unchecked(space: &TestSpace, grid: &QuadratureGrid) -> ComplexMatrix {
    let e = evaluate_basis(space, grid.nodes());
    let n = space.dim();
    let w = grid.weights();
    let mut g = ComplexMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut acc = 0.0;
            for (j, wj) in w.iter().enumerate() {
                acc += wj * e.get(j, a) * e.get(j, b);
            }
            g[(a, b)] = Complex64::new(acc, 0.0);
            g[(b, a)] = Complex64::new(acc, 0.0);
        }
    }
    g
}

/// max |G - I| over entries: the adequacy measure used by classification
/// gates.
pub fn gram_defect(space: &TestSpace, grid: &QuadratureGrid) -> f64 {
    let g = gram_unchecked(space, grid);
    let n = space.dim();
    let mut d = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let target = if a == b { 1.0 } else { 0.0 };
            d = d.max((g[(a, b)] - Complex64::new(target, 0.0)).norm());
        }
    }
    d
}
