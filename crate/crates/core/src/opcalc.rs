//! Operators built from distribution maps: diagonal operators over a
//! Gel'fand basis, multipliers over a Riesz basis and its dual, atomic
//! maps factoring a given operator, and spectral comparison utilities.

use crate::distmap::{analysis, DistributionMap};
use crate::frameops::{classify, ClassifyTolerances, FrameError};
use crate::numerics::{general_eigenvalues, ComplexMatrix, NumericsError};
use crate::quadrature::QuadratureGrid;
use crate::testspace::{CoeffVector, TestSpace};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("symbol samples live on a different grid")]
    GridMismatch,
    #[error("operands do not share a space/grid: {0}")]
    Mismatch(String),
    #[error("map is not a Gel'fand basis; atomic construction needs one")]
    NotGelfand,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// An operator on the test space (or its extension), stored as its N x N
/// matrix in basis coefficients. The dagger adjoint is the conjugate
/// transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: TestSpace,
    entries: ComplexMatrix,
}

impl OperatorMatrix {
    pub fn new(space: TestSpace, entries: ComplexMatrix) -> Result<Self, OperatorError> {
        if !entries.is_square() || entries.rows() != space.dim() {
            return Err(OperatorError::Mismatch(format!(
                "operator entries are {}x{}, space dimension is {}",
                entries.rows(),
                entries.cols(),
                space.dim()
            )));
        }
        Ok(Self { space, entries })
    }

    pub fn identity(space: TestSpace) -> Self {
        Self {
            space,
            entries: ComplexMatrix::identity(space.dim()),
        }
    }

    pub fn space(&self) -> TestSpace {
        self.space
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            space: self.space,
            entries: self.entries.adjoint(),
        }
    }

    pub fn apply(&self, f: &CoeffVector) -> Result<CoeffVector, OperatorError> {
        if f.space() != self.space {
            return Err(OperatorError::Mismatch("coefficient vector space".into()));
        }
        let coords = self.entries.matvec(f.coords())?;
        CoeffVector::new(self.space, coords)
            .map_err(|e| OperatorError::Mismatch(e.to_string()))
    }
}

/// Samples of a scalar symbol on a grid, one value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSamples {
    grid: QuadratureGrid,
    values: Vec<Complex64>,
}

impl SymbolSamples {
    pub fn new(grid: &QuadratureGrid, values: Vec<Complex64>) -> Result<Self, OperatorError> {
        if values.len() != grid.len() {
            return Err(OperatorError::GridMismatch);
        }
        for v in &values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(OperatorError::Mismatch("non-finite symbol sample".into()));
            }
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn from_fn(grid: &QuadratureGrid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        Self {
            grid: grid.clone(),
            values: grid.nodes().iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn from_real_fn(grid: &QuadratureGrid, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// The operator f -> integral of alpha(x) <f|zeta_x> zeta_x, discretized as
/// pairing^H diag(w * alpha) pairing.
pub fn diagonal_operator(
    zeta: &DistributionMap,
    alpha: &SymbolSamples,
) -> Result<OperatorMatrix, OperatorError> {
    if alpha.grid() != zeta.grid() {
        return Err(OperatorError::GridMismatch);
    }
    let entries = weighted_sandwich(zeta, zeta, alpha.values());
    OperatorMatrix::new(zeta.space(), entries)
}

/// pairing_omega^H diag(w * alpha) pairing_theta, shared by the diagonal
/// operator, the multiplier and the mixed operator.
pub(crate) fn weighted_sandwich(
    omega: &DistributionMap,
    theta: &DistributionMap,
    alpha: &[Complex64],
) -> ComplexMatrix {
    let w = omega.grid().weights();
    let p_omega = omega.pairing();
    let p_theta = theta.pairing();
    let n = omega.dim();
    let mut out = ComplexMatrix::zeros(n, theta.dim());
    for j in 0..omega.nodes() {
        let factor = alpha[j] * w[j];
        if factor.norm_sqr() == 0.0 {
            continue;
        }
        for m in 0..n {
            let left = p_omega[(j, m)].conj() * factor;
            for k in 0..theta.dim() {
                out[(m, k)] += left * p_theta[(j, k)];
            }
        }
    }
    out
}

/// Relative residual of the generalized eigen-identity across all nodes:
/// ||pairing * A - diag(alpha) * pairing||_2 / ||pairing||_2.
pub fn eigen_residual(
    zeta: &DistributionMap,
    a: &OperatorMatrix,
    alpha: &SymbolSamples,
) -> Result<f64, OperatorError> {
    if alpha.grid() != zeta.grid() {
        return Err(OperatorError::GridMismatch);
    }
    if a.space() != zeta.space() {
        return Err(OperatorError::Mismatch("operator space".into()));
    }
    let pa = zeta.pairing().mul(a.entries())?;
    let scaled = ComplexMatrix::from_fn(zeta.nodes(), zeta.dim(), |j, n| {
        alpha.values()[j] * zeta.pairing()[(j, n)]
    });
    let num = pa.sub(&scaled)?.norm_two();
    let den = zeta.pairing().norm_two();
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num / den)
}

/// The multiplier f -> integral of alpha(x) <f|theta_x> omega_x, as
/// pairing_omega^H diag(w * alpha) pairing_theta. theta is meant to be the
/// canonical dual of omega.
pub fn riesz_multiplier(
    omega: &DistributionMap,
    theta: &DistributionMap,
    alpha: &SymbolSamples,
) -> Result<OperatorMatrix, OperatorError> {
    if !omega.compatible_with(theta) {
        return Err(OperatorError::Mismatch("maps differ in space or grid".into()));
    }
    if alpha.grid() != omega.grid() {
        return Err(OperatorError::GridMismatch);
    }
    let entries = weighted_sandwich(omega, theta, alpha.values());
    OperatorMatrix::new(omega.space(), entries)
}

/// Optimal-bottleneck distance between the spectra of two operators:
/// eigenvalues of both are matched one-to-one to minimize the largest
/// pairwise distance, and that largest distance is returned.
///
/// Matching is greedy nearest-neighbor refined by local swaps, which is
/// exact in every well-separated case this crate produces; tests pin it
/// against an exhaustive bottleneck matcher.
pub fn spectrum_distance(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64, OperatorError> {
    if a.space() != b.space() {
        return Err(OperatorError::Mismatch("operator spaces differ".into()));
    }
    let mut ea = general_eigenvalues(a.entries())?;
    let mut eb = general_eigenvalues(b.entries())?;
    sort_spectrum(&mut ea);
    sort_spectrum(&mut eb);
    Ok(bottleneck_greedy(&ea, &eb))
}

fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
}

fn bottleneck_greedy(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in 0..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &u) in used.iter().enumerate() {
            if u {
                continue;
            }
            let d = (a[i] - b[j]).norm();
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        assignment[i] = best;
        used[best] = true;
    }
    // local 2-swaps until the bottleneck stops improving
    let dist = |i: usize, j: usize| (a[i] - b[j]).norm();
    let mut improved = true;
    let mut passes = 0;
    while improved && passes < 64 {
        improved = false;
        passes += 1;
        for i in 0..n {
            for k in (i + 1)..n {
                let cur = dist(i, assignment[i]).max(dist(k, assignment[k]));
                let alt = dist(i, assignment[k]).max(dist(k, assignment[i]));
                if alt + f64::EPSILON < cur {
                    assignment.swap(i, k);
                    improved = true;
                }
            }
        }
    }
    (0..n)
        .map(|i| dist(i, assignment[i]))
        .fold(0.0f64, f64::max)
}

/// Builds the atomic map for an operator from a Gel'fand basis:
/// pairing = pairing_zeta * A^dagger. Errors unless `zeta` classifies as a
/// Gel'fand basis.
pub fn atomic_map(
    zeta: &DistributionMap,
    a: &OperatorMatrix,
) -> Result<DistributionMap, OperatorError> {
    if a.space() != zeta.space() {
        return Err(OperatorError::Mismatch("operator space".into()));
    }
    let report = classify(zeta, &ClassifyTolerances::default())?;
    if !report.flags.gelfand {
        return Err(OperatorError::NotGelfand);
    }
    let m_dag = OperatorMatrix::new(zeta.space(), a.entries().adjoint())?;
    let map = crate::distmap::transform_map(zeta, &m_dag)
        .map_err(|e| OperatorError::Mismatch(e.to_string()))?;
    crate::distmap::map_from_samples(
        format!("atomic({})", zeta.label()),
        &zeta.space(),
        zeta.grid(),
        map.pairing().clone(),
    )
    .map_err(|e| OperatorError::Mismatch(e.to_string()))
}

/// Certificates for an atomic map `omega` of the operator `a` over the
/// basis `zeta`:
/// - worst relative gap between the analysis energy of omega and
///   ||A^dagger f||^2 over `trials` seeded random test functions, and
/// - the decomposition defect ||pairing_omega^H diag(w) pairing_zeta - A||.
pub fn atomic_certificates(
    zeta: &DistributionMap,
    a: &OperatorMatrix,
    omega: &DistributionMap,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64), OperatorError> {
    if !zeta.compatible_with(omega) {
        return Err(OperatorError::Mismatch("maps differ in space or grid".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = zeta.space();
    let a_dag = a.dagger();
    let mut bessel_err = 0.0f64;
    for _ in 0..trials {
        let f = CoeffVector::new(
            space,
            (0..space.dim())
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
        .map_err(|e| OperatorError::Mismatch(e.to_string()))?;
        let coeffs = analysis(omega, &f).map_err(|e| OperatorError::Mismatch(e.to_string()))?;
        let energy = coeffs.norm_sqr();
        let adf = a_dag.apply(&f)?;
        let target = adf.norm().powi(2);
        let gap = (energy - target).abs() / target.max(1.0);
        bessel_err = bessel_err.max(gap);
    }
    let ones = vec![Complex64::new(1.0, 0.0); zeta.nodes()];
    let decomposition = weighted_sandwich(omega, zeta, &ones);
    let defect = decomposition.sub(a.entries())?.norm_max() / a.entries().norm_max().max(1.0);
    Ok((bessel_err, defect))
}
