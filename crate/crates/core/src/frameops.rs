//! The core frame calculus: frame operator and bounds, classification of a
//! distribution map, canonical dual, reconstruction residual, and
//! unboundedness detection by sweeping the truncation dimension.
//!
//! Frame-ness at finite N is a conditioning statement, not an existence
//! statement: the lower bound must clear a floor relative to the upper
//! bound. Sweeps over N recover the asymptotic distinctions (bounded
//! versus unbounded Bessel maps) that a single truncation cannot see.

use crate::distmap::{auto_grid, builtin_map, BuiltinKind, DistributionMap, GRAM_GATE_TOL};
use crate::numerics::{
    hermitian_eig, numerical_rank, solve_hpd, svd, ComplexMatrix, NumericsError,
};
use crate::opcalc::weighted_sandwich;
use crate::quadrature::QuadratureError;
use crate::report::JsonValue;
use crate::testspace::gram_defect;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("grid inadequate for the space: gram defect {defect:.3e} exceeds {gate:.1e}")]
    InadequateGrid { defect: f64, gate: f64 },
    #[error("map is not a frame: lower bound {lower:.3e} under floor {floor:.3e}")]
    NotAFrame { lower: f64, floor: f64 },
    #[error("maps do not share a space and grid")]
    Mismatch,
    #[error("sweep sizes must be non-empty and strictly ascending")]
    BadSweepSizes,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Extremes of the frame inequality: lower A and upper B with
/// A ||f||^2 <= analysis energy <= B ||f||^2 on the truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Tolerances steering classification. All relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyTolerances {
    /// ceiling on ||S - I||_2 for the Parseval flag
    pub parseval_tol: f64,
    /// relative singular-value cutoff for rank decisions
    pub rank_tol: f64,
    /// floor on lower/upper for the frame flag
    pub frame_floor: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        Self {
            parseval_tol: 1e-6,
            rank_tol: 1e-10,
            frame_floor: 1e-8,
        }
    }
}

/// Classification flags. At finite truncation every map is Bessel; the
/// interesting flags are the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFlags {
    pub bessel: bool,
    pub frame: bool,
    pub parseval: bool,
    pub mu_independent: bool,
    pub total: bool,
    pub riesz: bool,
    pub gelfand: bool,
}

/// Everything classification produced, including the evidence (singular
/// values of the weighted pairing) and the tolerances used.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub bounds: FrameBounds,
    pub flags: FrameFlags,
    pub tolerances: ClassifyTolerances,
    pub gram_defect: f64,
    pub singulars: Vec<f64>,
}

impl FrameReport {
    /// gelfand implies riesz implies (frame and mu-independent and total);
    /// parseval implies frame.
    pub fn flags_consistent(&self) -> bool {
        let f = &self.flags;
        let riesz_chain = !f.riesz || (f.frame && f.mu_independent && f.total);
        let gelfand_chain = !f.gelfand || f.riesz;
        let parseval_chain = !f.parseval || f.frame;
        riesz_chain && gelfand_chain && parseval_chain && f.bessel
    }

    /// JSON form with the exact key set of the report contract.
    pub fn to_json(&self) -> JsonValue {
        JsonValue::object(vec![
            ("label", JsonValue::Str(self.label.clone())),
            ("N", JsonValue::Int(self.n as i64)),
            ("M", JsonValue::Int(self.m as i64)),
            (
                "bounds",
                JsonValue::object(vec![
                    ("A", JsonValue::Float(self.bounds.lower)),
                    ("B", JsonValue::Float(self.bounds.upper)),
                ]),
            ),
            (
                "flags",
                JsonValue::object(vec![
                    ("frame", JsonValue::Bool(self.flags.frame)),
                    ("parseval", JsonValue::Bool(self.flags.parseval)),
                    ("mu_independent", JsonValue::Bool(self.flags.mu_independent)),
                    ("total", JsonValue::Bool(self.flags.total)),
                    ("riesz", JsonValue::Bool(self.flags.riesz)),
                    ("gelfand", JsonValue::Bool(self.flags.gelfand)),
                ]),
            ),
            ("gram_defect", JsonValue::Float(self.gram_defect)),
            ("singulars", JsonValue::float_array(&self.singulars)),
            (
                "tolerances",
                JsonValue::object(vec![
                    ("parseval_tol", JsonValue::Float(self.tolerances.parseval_tol)),
                    ("rank_tol", JsonValue::Float(self.tolerances.rank_tol)),
                    ("frame_floor", JsonValue::Float(self.tolerances.frame_floor)),
                ]),
            ),
        ])
    }
}

/// The frame operator S = pairing^H diag(w) pairing, Hermitian positive
/// semidefinite by construction. Coincides with synthesis composed with
/// analysis.
pub fn frame_operator(map: &DistributionMap) -> ComplexMatrix {
    let ones = vec![Complex64::new(1.0, 0.0); map.nodes()];
    let mut s = weighted_sandwich(map, map, &ones);
    let n = map.dim();
    // symmetrize exactly; rounding is the only possible asymmetry
    for a in 0..n {
        s[(a, a)] = Complex64::new(s[(a, a)].re, 0.0);
        for b in (a + 1)..n {
            let avg = (s[(a, b)] + s[(b, a)].conj()) * Complex64::new(0.5, 0.0);
            s[(a, b)] = avg;
            s[(b, a)] = avg.conj();
        }
    }
    s
}

/// Entrywise re-evaluation of the frame operator as an explicit double
/// sum, with no matrix algebra. This is the oracle the matrix path is
/// tested against.
pub fn frame_operator_oracle(map: &DistributionMap) -> ComplexMatrix {
    let n = map.dim();
    let w = map.grid().weights();
    let p = map.pairing();
    let mut s = ComplexMatrix::zeros(n, n);
    for row in 0..n {
        for col in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..map.nodes() {
                acc += p[(j, row)].conj() * p[(j, col)] * w[j];
            }
            s[(row, col)] = acc;
        }
    }
    s
}

/// Spectral extremes of the frame operator.
pub fn frame_bounds(map: &DistributionMap) -> FrameBounds {
    let s = frame_operator(map);
    // S is Hermitian by construction, so the eigensolver cannot reject it
    let eig = hermitian_eig(&s).expect("frame operator is Hermitian by construction");
    FrameBounds {
        lower: eig.values.first().copied().unwrap_or(0.0).max(0.0),
        upper: eig.values.last().copied().unwrap_or(0.0).max(0.0),
    }
}

/// Full classification of a map against the given tolerances.
///
/// With U = diag(sqrt(w)) pairing and its singular values sigma:
/// - total: column rank of U equals N
/// - mu_independent: row rank of U equals M (trivial synthesis kernel)
/// - frame: lower bound clears frame_floor * upper bound
/// - parseval: ||S - I||_2 within parseval_tol
/// - gelfand: parseval, mu-independent, total and square
/// - riesz: square, total and sigma_min above sqrt(frame_floor) * sigma_max
pub fn classify(
    map: &DistributionMap,
    tolerances: &ClassifyTolerances,
) -> Result<FrameReport, FrameError> {
    let defect = gram_defect(&map.space(), map.grid());
    if defect > GRAM_GATE_TOL {
        return Err(FrameError::InadequateGrid {
            defect,
            gate: GRAM_GATE_TOL,
        });
    }
    let n = map.dim();
    let m = map.nodes();
    let u = map.weighted_pairing();
    let svd_u = svd(&u)?;
    let singulars = svd_u.singulars;
    let rank = numerical_rank(&singulars, tolerances.rank_tol)?;

    let s = frame_operator(map);
    let eig = hermitian_eig(&s)?;
    let lower = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let upper = eig.values.last().copied().unwrap_or(0.0).max(0.0);

    let total = rank == n;
    let mu_independent = rank == m;
    let frame = upper > 0.0 && lower >= tolerances.frame_floor * upper;
    // ||S - I||_2 = max |eig(S) - 1| for Hermitian S
    let parseval_defect = eig
        .values
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0f64, f64::max);
    let parseval = parseval_defect <= tolerances.parseval_tol;
    let sigma_max = singulars.first().copied().unwrap_or(0.0);
    let sigma_min = singulars.last().copied().unwrap_or(0.0);
    let riesz =
        m == n && total && sigma_max > 0.0 && sigma_min > tolerances.frame_floor.sqrt() * sigma_max;
    let gelfand = parseval && mu_independent && total && m == n;

    let report = FrameReport {
        label: map.label().to_string(),
        n,
        m,
        bounds: FrameBounds { lower, upper },
        flags: FrameFlags {
            bessel: true,
            frame,
            parseval,
            mu_independent,
            total,
            riesz,
            gelfand,
        },
        tolerances: *tolerances,
        gram_defect: defect,
        singulars,
    };
    debug_assert!(report.flags_consistent(), "classification monotonicity");
    Ok(report)
}

/// The canonical dual: pairing_dual = pairing * S^{-1}. Requires the frame
/// gate (lower bound above the floor relative to the upper bound).
pub fn canonical_dual(map: &DistributionMap) -> Result<DistributionMap, FrameError> {
    let s = frame_operator(map);
    let eig = hermitian_eig(&s)?;
    let lower = eig.values.first().copied().unwrap_or(0.0);
    let upper = eig.values.last().copied().unwrap_or(0.0);
    let floor = ClassifyTolerances::default().frame_floor;
    if upper <= 0.0 || lower < floor * upper {
        return Err(FrameError::NotAFrame {
            lower,
            floor: floor * upper,
        });
    }
    // Theta = P S^{-1}  via  S X = P^H, Theta = X^H
    let x = solve_hpd(&s, &map.pairing().adjoint())?;
    let dual_pairing = x.adjoint();
    crate::distmap::map_from_samples(
        format!("dual({})", map.label()),
        &map.space(),
        map.grid(),
        dual_pairing,
    )
    .map_err(|_| FrameError::Mismatch)
}

/// Spectral distance of the mixed Gram pairing_omega^H diag(w)
/// pairing_theta from the identity. Small values certify the weak
/// reconstruction identity for all test functions at once.
pub fn reconstruction_residual(
    omega: &DistributionMap,
    theta: &DistributionMap,
) -> Result<f64, FrameError> {
    if !omega.compatible_with(theta) {
        return Err(FrameError::Mismatch);
    }
    let ones = vec![Complex64::new(1.0, 0.0); omega.nodes()];
    let mixed = weighted_sandwich(omega, theta, &ones);
    let delta = mixed.sub(&ComplexMatrix::identity(omega.dim()))?;
    Ok(delta.norm_two())
}

/// One row of a truncation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Frame bounds of a builtin kernel across truncation dimensions. The
/// UNBOUNDED_UPPER flag fires when the upper bounds grow strictly and the
/// last-to-first ratio exceeds 10: the finite-dimensional signature of an
/// unbounded Bessel map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub kind: BuiltinKind,
    pub rows: Vec<SweepRow>,
    pub unbounded_upper: bool,
}

impl SweepReport {
    pub fn to_json(&self) -> JsonValue {
        JsonValue::object(vec![
            ("kind", JsonValue::Str(self.kind.as_str().to_string())),
            (
                "rows",
                JsonValue::Array(
                    self.rows
                        .iter()
                        .map(|r| {
                            JsonValue::object(vec![
                                ("N", JsonValue::Int(r.n as i64)),
                                ("A", JsonValue::Float(r.lower)),
                                ("B", JsonValue::Float(r.upper)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("unbounded_upper", JsonValue::Bool(self.unbounded_upper)),
        ])
    }
}

/// Builds the builtin on its auto grid for each size and records the frame
/// bounds.
pub fn unboundedness_sweep(
    kind: BuiltinKind,
    sizes: &[usize],
) -> Result<SweepReport, FrameError> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FrameError::BadSweepSizes);
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let space = crate::testspace::hermite_space(n).map_err(|_| FrameError::BadSweepSizes)?;
        let grid = auto_grid(&space, kind)?;
        let map = builtin_map(kind, &space, &grid).map_err(|e| match e {
            crate::distmap::MapError::InadequateGrid { defect, gate } => {
                FrameError::InadequateGrid { defect, gate }
            }
            _ => FrameError::Mismatch,
        })?;
        let bounds = frame_bounds(&map);
        rows.push(SweepRow {
            n,
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    let strictly_increasing = rows.windows(2).all(|w| w[1].upper > w[0].upper);
    let ratio = rows.last().unwrap().upper / rows.first().unwrap().upper.max(f64::MIN_POSITIVE);
    let unbounded_upper = strictly_increasing && ratio > 10.0;
    Ok(SweepReport {
        kind,
        rows,
        unbounded_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distmap::{map_from_samples, transform_map};
    use crate::opcalc::OperatorMatrix;
    use crate::quadrature::{make_grid, GridKind};
    use crate::testspace::hermite_space;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn builtin(n: usize, kind: BuiltinKind) -> DistributionMap {
        let space = hermite_space(n).unwrap();
        let grid = auto_grid(&space, kind).unwrap();
        builtin_map(kind, &space, &grid).unwrap()
    }

    fn random_map(rng: &mut impl Rng, m: usize, n: usize) -> DistributionMap {
        let space = hermite_space(n).unwrap();
        let grid = make_grid(GridKind::Trapezoid, m.max(2), -1.0, 1.0).unwrap();
        let pairing = ComplexMatrix::from_fn(grid.len(), n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        map_from_samples("random", &space, &grid, pairing).unwrap()
    }

    #[test]
    fn zero_map_has_zero_frame_operator() {
        let space = hermite_space(3).unwrap();
        let grid = make_grid(GridKind::Trapezoid, 8, -9.0, 9.0).unwrap();
        let map = map_from_samples("zero", &space, &grid, ComplexMatrix::zeros(8, 3)).unwrap();
        assert_eq!(frame_operator(&map).norm_max(), 0.0);
        assert_eq!(frame_operator_oracle(&map).norm_max(), 0.0);
    }

    #[test]
    fn delta_frame_operator_is_identity() {
        let map = builtin(16, BuiltinKind::Delta);
        let s = frame_operator(&map);
        let defect = s.sub(&ComplexMatrix::identity(16)).unwrap().norm_max();
        assert!(defect <= 1e-8, "defect {defect}");
    }

    #[test]
    fn frame_operator_matches_oracle_on_builtins() {
        for kind in [
            BuiltinKind::Fourier,
            BuiltinKind::Delta,
            BuiltinKind::WeightedFourier,
        ] {
            let map = builtin(8, kind);
            let s = frame_operator(&map);
            let o = frame_operator_oracle(&map);
            let defect = s.sub(&o).unwrap().norm_max();
            assert!(defect <= 1e-12, "{kind:?}: defect {defect}");
        }
    }

    #[test]
    fn frame_operator_matches_oracle_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for _ in 0..20 {
            let m = rng.random_range(2..=32);
            let n = rng.random_range(1..=32);
            let map = random_map(&mut rng, m, n);
            let s = frame_operator(&map);
            let o = frame_operator_oracle(&map);
            let defect = s.sub(&o).unwrap().norm_max();
            assert!(defect <= 1e-12, "defect {defect} at m={m} n={n}");
        }
    }

    #[test]
    fn rank_one_map_oracle() {
        // a single nonzero row r makes S = w_j r^H r
        let space = hermite_space(3).unwrap();
        let grid = make_grid(GridKind::Trapezoid, 5, -9.0, 9.0).unwrap();
        let mut pairing = ComplexMatrix::zeros(5, 3);
        let row = [
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 1.5),
        ];
        for (k, v) in row.iter().enumerate() {
            pairing[(2, k)] = *v;
        }
        let map = map_from_samples("rank1", &space, &grid, pairing).unwrap();
        let s = frame_operator_oracle(&map);
        let w = grid.weights()[2];
        for a in 0..3 {
            for b in 0..3 {
                let expected = row[a].conj() * row[b] * w;
                assert!((s[(a, b)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn frame_operator_equals_synthesis_compose_analysis() {
        use crate::distmap::{analysis, synthesis};
        use crate::testspace::CoeffVector;
        let map = builtin(6, BuiltinKind::WeightedFourier);
        let s = frame_operator(&map);
        for n in 0..6 {
            let basis = CoeffVector::basis_vector(map.space(), n);
            let through = synthesis(&map, &analysis(&map, &basis).unwrap()).unwrap();
            for row in 0..6 {
                // S e_n is the n-th column
                assert!(
                    (s[(row, n)] - through.coords()[row]).norm() <= 1e-12,
                    "entry ({row}, {n})"
                );
            }
        }
    }

    #[test]
    fn delta_and_fourier_bounds_are_parseval() {
        for kind in [BuiltinKind::Delta, BuiltinKind::Fourier] {
            let map = builtin(12, kind);
            let b = frame_bounds(&map);
            assert!((b.lower - 1.0).abs() < 1e-8, "{kind:?} lower {}", b.lower);
            assert!((b.upper - 1.0).abs() < 1e-8, "{kind:?} upper {}", b.upper);
        }
    }

    #[test]
    fn weighted_fourier_bounds_show_sobolev_growth() {
        let map = builtin(8, BuiltinKind::WeightedFourier);
        let b = frame_bounds(&map);
        assert!(b.lower >= 1.0 - 1e-6, "lower {}", b.lower);
        assert!(b.upper > 100.0, "upper {}", b.upper);
    }

    #[test]
    fn fourier_classifies_as_gelfand_basis() {
        let map = builtin(16, BuiltinKind::Fourier);
        let r = classify(&map, &ClassifyTolerances::default()).unwrap();
        assert!(r.flags.frame);
        assert!(r.flags.parseval);
        assert!(r.flags.mu_independent);
        assert!(r.flags.total);
        assert!(r.flags.riesz);
        assert!(r.flags.gelfand);
        assert!(r.flags_consistent());
        assert_eq!(r.singulars.len(), 16);
    }

    #[test]
    fn oversampled_delta_loses_mu_independence() {
        let space = hermite_space(16).unwrap();
        let grid = make_grid(GridKind::GaussHermiteLebesgue, 32, 0.0, 0.0).unwrap();
        let map = builtin_map(BuiltinKind::Delta, &space, &grid).unwrap();
        let r = classify(&map, &ClassifyTolerances::default()).unwrap();
        assert!(r.flags.parseval);
        assert!(r.flags.total);
        assert!(!r.flags.mu_independent);
        assert!(!r.flags.gelfand);
        assert!(!r.flags.riesz);
        // the synthesis kernel has dimension M - N = 16, confirmed by
        // brute-force SVD of the weighted evaluation matrix
        let rank = numerical_rank(&r.singulars, r.tolerances.rank_tol).unwrap();
        assert_eq!(rank, 16);
        assert_eq!(r.m - rank, 16);
    }

    #[test]
    fn square_delta_evaluation_matrix_has_full_rank() {
        // brute-force SVD of the weighted evaluation matrix
        let map = builtin(16, BuiltinKind::Delta);
        let s = svd(&map.weighted_pairing()).unwrap();
        assert_eq!(numerical_rank(&s.singulars, 1e-10).unwrap(), 16);
    }

    #[test]
    fn diagonal_transform_is_riesz_but_not_parseval() {
        let map = builtin(12, BuiltinKind::Fourier);
        let d: Vec<f64> = (1..=12).map(|k| k as f64).collect();
        let op = OperatorMatrix::new(map.space(), ComplexMatrix::diagonal_real(&d)).unwrap();
        let transformed = transform_map(&map, &op).unwrap();
        let r = classify(&transformed, &ClassifyTolerances::default()).unwrap();
        assert!(r.flags.riesz);
        assert!(!r.flags.parseval);
        assert!(r.flags.frame);
        // bounds are the squared extreme singular values of the diagonal
        assert!((r.bounds.lower - 1.0).abs() < 1e-8);
        assert!((r.bounds.upper - 144.0).abs() < 144.0 * 1e-10);
    }

    #[test]
    fn zero_map_is_bessel_only() {
        let space = hermite_space(4).unwrap();
        let grid = make_grid(GridKind::Trapezoid, 90, -9.0, 9.0).unwrap();
        let map = map_from_samples("zero", &space, &grid, ComplexMatrix::zeros(90, 4)).unwrap();
        let r = classify(&map, &ClassifyTolerances::default()).unwrap();
        assert!(r.flags.bessel);
        assert!(!r.flags.frame);
        assert!(!r.flags.parseval);
        assert!(!r.flags.total);
        assert!(!r.flags.mu_independent);
        assert!(!r.flags.riesz);
        assert!(!r.flags.gelfand);
        assert!(r.flags_consistent());
    }

    #[test]
    fn classify_rejects_inadequate_grid() {
        let space = hermite_space(16).unwrap();
        let grid = make_grid(GridKind::GaussHermiteLebesgue, 8, 0.0, 0.0).unwrap();
        let pairing = ComplexMatrix::zeros(8, 16);
        let map = map_from_samples("under", &space, &grid, pairing).unwrap();
        match classify(&map, &ClassifyTolerances::default()) {
            Err(FrameError::InadequateGrid { defect, .. }) => assert!(defect > 0.1),
            other => panic!("expected inadequate grid, got {other:?}"),
        }
    }

    #[test]
    fn classification_monotonicity_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(321);
        for _ in 0..40 {
            let n = rng.random_range(1..=6);
            let space = hermite_space(n).unwrap();
            let l = space.truncation();
            let grid = make_grid(GridKind::Trapezoid, 10 * n.max(2), -l, l).unwrap();
            let pairing = ComplexMatrix::from_fn(grid.len(), n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let map = map_from_samples("rand", &space, &grid, pairing).unwrap();
            let r = classify(&map, &ClassifyTolerances::default()).unwrap();
            assert!(r.flags_consistent(), "{:?}", r.flags);
        }
    }

    #[test]
    fn parseval_map_is_self_dual() {
        let map = builtin(10, BuiltinKind::Fourier);
        let dual = canonical_dual(&map).unwrap();
        let defect = dual.pairing().sub(map.pairing()).unwrap().norm_max();
        assert!(defect <= 1e-10, "defect {defect}");
    }

    #[test]
    fn dual_frame_operator_is_inverse() {
        let map = builtin(9, BuiltinKind::WeightedFourier);
        let dual = canonical_dual(&map).unwrap();
        let s = frame_operator(&map);
        let s_dual = frame_operator(&dual);
        let product = s.mul(&s_dual).unwrap();
        let defect = product.sub(&ComplexMatrix::identity(9)).unwrap().norm_max();
        assert!(defect <= 1e-9, "defect {defect}");
    }

    #[test]
    fn dual_of_dual_returns_original() {
        let map = builtin(8, BuiltinKind::WeightedFourier);
        let dual2 = canonical_dual(&canonical_dual(&map).unwrap()).unwrap();
        let defect = dual2.pairing().sub(map.pairing()).unwrap().norm_max();
        let scale = map.pairing().norm_max();
        assert!(defect <= 1e-9 * scale, "defect {defect}");
    }

    #[test]
    fn dual_bounds_are_reciprocal() {
        let map = builtin(12, BuiltinKind::Fourier);
        let d: Vec<f64> = (1..=12).map(|k| k as f64).collect();
        let op = OperatorMatrix::new(map.space(), ComplexMatrix::diagonal_real(&d)).unwrap();
        let omega = transform_map(&map, &op).unwrap();
        let bounds = frame_bounds(&omega);
        let dual = canonical_dual(&omega).unwrap();
        let dual_bounds = frame_bounds(&dual);
        let eps = 1e-8 / bounds.lower;
        assert!(dual_bounds.lower >= 1.0 / bounds.upper - eps);
        assert!(dual_bounds.upper <= 1.0 / bounds.lower + eps);
    }

    #[test]
    fn zero_map_is_not_a_frame() {
        let space = hermite_space(2).unwrap();
        let grid = make_grid(GridKind::Trapezoid, 60, -8.0, 8.0).unwrap();
        let map = map_from_samples("zero", &space, &grid, ComplexMatrix::zeros(60, 2)).unwrap();
        assert!(matches!(
            canonical_dual(&map),
            Err(FrameError::NotAFrame { .. })
        ));
    }

    #[test]
    fn reconstruction_residual_of_canonical_dual_is_tiny() {
        let map = builtin(10, BuiltinKind::WeightedFourier);
        let dual = canonical_dual(&map).unwrap();
        let r = reconstruction_residual(&map, &dual).unwrap();
        assert!(r <= 1e-9, "residual {r}");
    }

    #[test]
    fn parseval_map_reconstructs_against_itself() {
        let map = builtin(16, BuiltinKind::Fourier);
        let r = reconstruction_residual(&map, &map).unwrap();
        assert!(r <= 1e-8, "residual {r}");
    }

    #[test]
    fn mismatched_pair_has_large_residual() {
        let fourier = builtin(16, BuiltinKind::Fourier);
        let space = hermite_space(16).unwrap();
        let delta = builtin_map(BuiltinKind::Delta, &space, fourier.grid()).unwrap();
        let r = reconstruction_residual(&fourier, &delta).unwrap();
        assert!(r > 0.5, "residual {r}");
    }

    #[test]
    fn riesz_dual_uniqueness() {
        // for an invertible square pairing the mixed-Gram equation has one
        // solution: every map whose reconstruction residual clears the
        // 1e-10 gate must sit within 1e-8 of the canonical dual
        use crate::numerics::invert;
        let map = builtin(8, BuiltinKind::Fourier);
        let d: Vec<f64> = (1..=8).map(|k| 1.0 + 0.5 * k as f64).collect();
        let op = OperatorMatrix::new(map.space(), ComplexMatrix::diagonal_real(&d)).unwrap();
        let omega = transform_map(&map, &op).unwrap();
        assert!(classify(&omega, &ClassifyTolerances::default())
            .unwrap()
            .flags
            .riesz);
        let canonical = canonical_dual(&omega).unwrap();

        // build a candidate dual from a perturbed identity: solve
        // pairing_omega^H diag(w) P = I + E with ||E|| = 1e-11
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 8;
        let target = {
            let mut t = ComplexMatrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    t[(i, j)] += Complex64::new(
                        rng.random_range(-1e-11..1e-11),
                        rng.random_range(-1e-11..1e-11),
                    );
                }
            }
            t
        };
        let w = omega.grid().weights();
        let lhs = ComplexMatrix::from_fn(n, n, |j, k| omega.pairing()[(j, k)].conj() * w[j])
            .transpose();
        let candidate_pairing = invert(&lhs).unwrap().mul(&target).unwrap();
        let candidate = map_from_samples(
            "candidate",
            &omega.space(),
            omega.grid(),
            candidate_pairing,
        )
        .unwrap();
        let r = reconstruction_residual(&omega, &candidate).unwrap();
        assert!(r <= 1e-10, "candidate residual {r}");
        let gap = candidate
            .pairing()
            .sub(canonical.pairing())
            .unwrap()
            .norm_max();
        assert!(gap <= 1e-8, "gap {gap}");

        // a visibly perturbed map fails the gate
        let mut perturbed_pairing = canonical.pairing().clone();
        perturbed_pairing[(0, 0)] += Complex64::new(1e-4, 0.0);
        let perturbed =
            map_from_samples("perturbed", &omega.space(), omega.grid(), perturbed_pairing)
                .unwrap();
        let r_perturbed = reconstruction_residual(&omega, &perturbed).unwrap();
        assert!(r_perturbed > 1e-10);
    }

    #[test]
    fn weighted_fourier_sweep_flags_unbounded_upper() {
        let report = unboundedness_sweep(BuiltinKind::WeightedFourier, &[4, 8, 16, 32]).unwrap();
        assert!(report.unbounded_upper);
        for row in &report.rows {
            assert!(row.lower >= 1.0 - 1e-6, "N={}: lower {}", row.n, row.lower);
        }
        let uppers: Vec<f64> = report.rows.iter().map(|r| r.upper).collect();
        assert!(uppers.windows(2).all(|w| w[1] > w[0]));
        assert!(uppers[3] / uppers[0] > 10.0);
    }

    #[test]
    fn fourier_sweep_stays_flat() {
        let report = unboundedness_sweep(BuiltinKind::Fourier, &[4, 8, 16, 32]).unwrap();
        assert!(!report.unbounded_upper);
        for row in &report.rows {
            assert!((row.lower - 1.0).abs() < 1e-8);
            assert!((row.upper - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn delta_sweep_stays_flat() {
        let report = unboundedness_sweep(BuiltinKind::Delta, &[4, 8, 16]).unwrap();
        assert!(!report.unbounded_upper);
    }

    #[test]
    fn weighted_fourier_sweep_regression_values() {
        // frozen from the first run; the pipeline is deterministic
        let expected = [
            (4usize, 1.6262756430420553e0, 4.685_687_091_920_548e1),
            (8, 1.3117201563678982e0, 1.961_651_245_129_24e2),
            (16, 1.1551775908960076e0, 8.376_241_639_999_628e2),
            (32, 1.0773670120336762e0, 3.5520622637019483e3),
        ];
        let report = unboundedness_sweep(BuiltinKind::WeightedFourier, &[4, 8, 16, 32]).unwrap();
        for (row, (n, lower, upper)) in report.rows.iter().zip(expected) {
            assert_eq!(row.n, n);
            assert!(
                (row.lower - lower).abs() <= 1e-9 * lower,
                "N={n}: lower {} vs frozen {lower}",
                row.lower
            );
            assert!(
                (row.upper - upper).abs() <= 1e-9 * upper,
                "N={n}: upper {} vs frozen {upper}",
                row.upper
            );
        }
    }

    #[test]
    fn sweep_rejects_unsorted_sizes() {
        assert!(matches!(
            unboundedness_sweep(BuiltinKind::Delta, &[8, 4]),
            Err(FrameError::BadSweepSizes)
        ));
        assert!(matches!(
            unboundedness_sweep(BuiltinKind::Delta, &[]),
            Err(FrameError::BadSweepSizes)
        ));
    }

    #[test]
    fn report_json_has_contract_keys() {
        let map = builtin(4, BuiltinKind::Fourier);
        let r = classify(&map, &ClassifyTolerances::default()).unwrap();
        let json = r.to_json().render();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in ["label", "N", "M", "bounds", "flags", "gram_defect", "singulars", "tolerances"] {
            assert!(parsed.get(key).is_some(), "missing {key}");
        }
        assert_eq!(parsed["flags"]["gelfand"], serde_json::json!(true));
        assert_eq!(parsed["bounds"].as_object().unwrap().len(), 2);
        assert_eq!(parsed["flags"].as_object().unwrap().len(), 6);
    }
}
