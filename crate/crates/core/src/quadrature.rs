//! Quadrature grids standing in for the measure space: integrals over the
//! space become weighted sums over nodes.
//!
//! Three rules ship: Gauss-Legendre and trapezoid on a bounded interval,
//! and a Lebesgue-reweighted Gauss-Hermite rule on the whole line (weights
//! multiplied by exp(node^2), so plain integrals of rapidly decaying
//! functions come out right). Only absolutely continuous measures on
//! intervals or the line are modeled; discrete measures are out of scope.

use crate::numerics::symmetric_tridiag_eig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("bad domain: need finite a < b, got a={a}, b={b}")]
    BadDomain { a: f64, b: f64 },
    #[error("grid needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("overflow risk: exp(node^2) is not representable for node {node}")]
    OverflowRisk { node: f64 },
    #[error("node function does not belong to this grid")]
    GridMismatch,
    #[error("quadrature rule did not converge")]
    NoConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    GaussLegendre,
    Trapezoid,
    GaussHermiteLebesgue,
}

impl GridKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridKind::GaussLegendre => "gauss_legendre",
            GridKind::Trapezoid => "trapezoid",
            GridKind::GaussHermiteLebesgue => "gauss_hermite_lebesgue",
        }
    }
}

/// Integration domain: a bounded interval or the whole real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Bounded { a: f64, b: f64 },
    RealLine,
}

/// Nodes and positive weights for one quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    kind: GridKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: Domain,
}

impl QuadratureGrid {
    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// True when the rule integrates over [-half_width, half_width] or more.
    pub fn covers(&self, half_width: f64) -> bool {
        match self.domain {
            Domain::RealLine => true,
            Domain::Bounded { a, b } => a <= -half_width && b >= half_width,
        }
    }
}

/// Builds a grid. `a`, `b` bound the interval for the bounded kinds and are
/// ignored by `gauss_hermite_lebesgue`.
pub fn make_grid(kind: GridKind, m: usize, a: f64, b: f64) -> Result<QuadratureGrid, QuadratureError> {
    if m < 2 {
        return Err(QuadratureError::TooFewNodes(m));
    }
    match kind {
        GridKind::Trapezoid => {
            check_interval(a, b)?;
            let h = (b - a) / (m - 1) as f64;
            let nodes: Vec<f64> = (0..m).map(|i| a + h * i as f64).collect();
            let mut weights = vec![h; m];
            weights[0] = 0.5 * h;
            weights[m - 1] = 0.5 * h;
            Ok(QuadratureGrid {
                kind,
                nodes,
                weights,
                domain: Domain::Bounded { a, b },
            })
        }
        GridKind::GaussLegendre => {
            check_interval(a, b)?;
            // Golub-Welsch: Jacobi matrix for Legendre polynomials
            let diag = vec![0.0; m];
            let off: Vec<f64> = (1..m)
                .map(|k| {
                    let k = k as f64;
                    k / (4.0 * k * k - 1.0).sqrt()
                })
                .collect();
            let (t, firsts) =
                symmetric_tridiag_eig(&diag, &off).map_err(|_| QuadratureError::NoConvergence)?;
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let nodes: Vec<f64> = t.iter().map(|x| mid + half * x).collect();
            let weights: Vec<f64> = firsts.iter().map(|z| 2.0 * z * z * half).collect();
            Ok(QuadratureGrid {
                kind,
                nodes,
                weights,
                domain: Domain::Bounded { a, b },
            })
        }
        GridKind::GaussHermiteLebesgue => {
            let diag = vec![0.0; m];
            let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
            let (nodes, firsts) =
                symmetric_tridiag_eig(&diag, &off).map_err(|_| QuadratureError::NoConvergence)?;
            let sqrt_pi = std::f64::consts::PI.sqrt();
            let mut weights = Vec::with_capacity(m);
            for (x, z) in nodes.iter().zip(&firsts) {
                if x * x > 700.0 {
                    return Err(QuadratureError::OverflowRisk { node: *x });
                }
                weights.push(sqrt_pi * z * z * (x * x).exp());
            }
            Ok(QuadratureGrid {
                kind,
                nodes,
                weights,
                domain: Domain::RealLine,
            })
        }
    }
}

fn check_interval(a: f64, b: f64) -> Result<(), QuadratureError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadratureError::BadDomain { a, b });
    }
    Ok(())
}

/// Complex samples of a function on the nodes of one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFunction {
    grid: QuadratureGrid,
    values: Vec<Complex64>,
}

impl NodeFunction {
    pub fn new(grid: &QuadratureGrid, values: Vec<Complex64>) -> Result<Self, QuadratureError> {
        if values.len() != grid.len() {
            return Err(QuadratureError::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn from_fn(grid: &QuadratureGrid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_real_fn(grid: &QuadratureGrid, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zero(grid: &QuadratureGrid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Weighted squared L2 norm: sum_j w_j |f_j|^2.
    pub fn norm_sqr(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }
}

/// Weighted sum over the grid nodes.
pub fn integrate(grid: &QuadratureGrid, f: &NodeFunction) -> Result<Complex64, QuadratureError> {
    if f.grid != *grid {
        return Err(QuadratureError::GridMismatch);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, v) in grid.weights().iter().zip(f.values()) {
        acc += v * *w;
    }
    Ok(acc)
}
