//! Mixed sesquilinear forms and compatible pairs: the mixed operator of
//! two maps, the compatibility verdict, and coefficient-space structure.
//!
//! Compatibility of a pair is certified by the mixed operator being
//! invertible with margin: the hypothesis flags (both maps mu-independent
//! and total) are evaluated from ranks, never assumed. The completeness
//! hypothesis on the coefficient space has no finite-dimensional content
//! and is vacuously true here.

use crate::distmap::DistributionMap;
use crate::numerics::{numerical_rank, svd, NumericsError};
use crate::opcalc::{weighted_sandwich, OperatorMatrix};
use crate::report::JsonValue;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PairsError {
    #[error("maps do not share a space and grid")]
    Mismatch,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Tolerances for the compatibility verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairTolerances {
    /// floor on sigma_min relative to sigma_max for the mixed operator to
    /// count as an isomorphism
    pub iso_floor: f64,
    /// relative singular-value cutoff for the hypothesis ranks
    pub rank_tol: f64,
}

impl Default for PairTolerances {
    fn default() -> Self {
        Self {
            iso_floor: 1e-8,
            rank_tol: 1e-10,
        }
    }
}

/// Verdict and evidence for one ordered pair of maps.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub omega_label: String,
    pub theta_label: String,
    /// condition number of the mixed operator; +inf when rank-deficient
    pub cond_mixed: f64,
    pub mu_independent_omega: bool,
    pub mu_independent_theta: bool,
    pub total_omega: bool,
    pub total_theta: bool,
    pub compatible: bool,
    pub tolerances: PairTolerances,
}

impl PairReport {
    pub fn invariants_hold(&self) -> bool {
        !self.compatible
            || (self.mu_independent_omega
                && self.mu_independent_theta
                && self.total_omega
                && self.total_theta
                && self.cond_mixed.is_finite())
    }

    pub fn to_json(&self) -> JsonValue {
        JsonValue::object(vec![
            (
                "labels",
                JsonValue::object(vec![
                    ("omega", JsonValue::Str(self.omega_label.clone())),
                    ("theta", JsonValue::Str(self.theta_label.clone())),
                ]),
            ),
            ("cond_mixed", JsonValue::float_or_null(self.cond_mixed)),
            (
                "flags",
                JsonValue::object(vec![
                    (
                        "mu_independent_omega",
                        JsonValue::Bool(self.mu_independent_omega),
                    ),
                    (
                        "mu_independent_theta",
                        JsonValue::Bool(self.mu_independent_theta),
                    ),
                    ("total_omega", JsonValue::Bool(self.total_omega)),
                    ("total_theta", JsonValue::Bool(self.total_theta)),
                ]),
            ),
            ("compatible", JsonValue::Bool(self.compatible)),
            (
                "tolerances",
                JsonValue::object(vec![
                    ("iso_floor", JsonValue::Float(self.tolerances.iso_floor)),
                    ("rank_tol", JsonValue::Float(self.tolerances.rank_tol)),
                ]),
            ),
        ])
    }
}

/// The mixed operator of the pair: entries pairing_omega^H diag(w)
/// pairing_theta. Its conjugate transpose is the mixed operator of the
/// swapped pair.
pub fn mixed_operator(
    theta: &DistributionMap,
    omega: &DistributionMap,
) -> Result<OperatorMatrix, PairsError> {
    if !theta.compatible_with(omega) {
        return Err(PairsError::Mismatch);
    }
    let ones = vec![Complex64::new(1.0, 0.0); omega.nodes()];
    let entries = weighted_sandwich(omega, theta, &ones);
    OperatorMatrix::new(omega.space(), entries).map_err(|_| PairsError::Mismatch)
}

/// Evaluates the compatibility hypotheses and verdict for a pair.
///
/// compatible = both maps mu-independent and total, and the mixed operator
/// invertible with sigma_min above iso_floor * sigma_max.
pub fn compatibility_report(
    theta: &DistributionMap,
    omega: &DistributionMap,
    tolerances: &PairTolerances,
) -> Result<PairReport, PairsError> {
    if !theta.compatible_with(omega) {
        return Err(PairsError::Mismatch);
    }
    let (mu_omega, total_omega) = rank_flags(omega, tolerances.rank_tol)?;
    let (mu_theta, total_theta) = rank_flags(theta, tolerances.rank_tol)?;

    let mixed = mixed_operator(theta, omega)?;
    let s = svd(mixed.entries())?;
    let sigma_max = s.singulars.first().copied().unwrap_or(0.0);
    let sigma_min = s.singulars.last().copied().unwrap_or(0.0);
    let cond_mixed = if sigma_min > 0.0 {
        sigma_max / sigma_min
    } else {
        f64::INFINITY
    };
    let iso = sigma_max > 0.0 && sigma_min > tolerances.iso_floor * sigma_max;
    let compatible = mu_omega && mu_theta && total_omega && total_theta && iso;

    let report = PairReport {
        omega_label: omega.label().to_string(),
        theta_label: theta.label().to_string(),
        cond_mixed,
        mu_independent_omega: mu_omega,
        mu_independent_theta: mu_theta,
        total_omega,
        total_theta,
        compatible,
        tolerances: *tolerances,
    };
    debug_assert!(report.invariants_hold());
    Ok(report)
}

fn rank_flags(map: &DistributionMap, rank_tol: f64) -> Result<(bool, bool), PairsError> {
    let u = map.weighted_pairing();
    let s = svd(&u)?;
    let rank = numerical_rank(&s.singulars, rank_tol)?;
    Ok((rank == map.nodes(), rank == map.dim()))
}

/// Kernel and range structure of the synthesis operator on the grid's
/// coefficient space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffSpaceReport {
    pub kernel_dim: usize,
    pub range_dim: usize,
    pub mu_independent: bool,
}

/// kernel_dim = M - rank(diag(sqrt(w)) pairing); the map is mu-independent
/// exactly when the kernel is trivial.
pub fn coefficient_space_report(
    map: &DistributionMap,
    rank_tol: f64,
) -> Result<CoeffSpaceReport, PairsError> {
    let u = map.weighted_pairing();
    let s = svd(&u)?;
    let rank = numerical_rank(&s.singulars, rank_tol)?;
    Ok(CoeffSpaceReport {
        kernel_dim: map.nodes() - rank,
        range_dim: rank,
        mu_independent: rank == map.nodes(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distmap::{auto_grid, builtin_map, map_from_samples, transform_map, BuiltinKind};
    use crate::frameops::{canonical_dual, classify, frame_operator, ClassifyTolerances};
    use crate::numerics::ComplexMatrix;
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

    fn riesz_map(n: usize) -> DistributionMap {
        let map = builtin(n, BuiltinKind::Fourier);
        let d: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        let op = OperatorMatrix::new(map.space(), ComplexMatrix::diagonal_real(&d)).unwrap();
        transform_map(&map, &op).unwrap()
    }

    #[test]
    fn parseval_pair_with_itself_is_identity() {
        let map = builtin(10, BuiltinKind::Fourier);
        let s = mixed_operator(&map, &map).unwrap();
        let defect = s
            .entries()
            .sub(&ComplexMatrix::identity(10))
            .unwrap()
            .norm_max();
        assert!(defect <= 1e-8, "defect {defect}");
    }

    #[test]
    fn canonical_dual_pair_is_identity() {
        let omega = riesz_map(9);
        let theta = canonical_dual(&omega).unwrap();
        let s = mixed_operator(&theta, &omega).unwrap();
        let defect = s
            .entries()
            .sub(&ComplexMatrix::identity(9))
            .unwrap()
            .norm_max();
        assert!(defect <= 1e-9, "defect {defect}");
    }

    #[test]
    fn self_pair_equals_frame_operator() {
        let map = builtin(8, BuiltinKind::WeightedFourier);
        let s = mixed_operator(&map, &map).unwrap();
        let defect = s.entries().sub(&frame_operator(&map)).unwrap().norm_max();
        assert!(defect <= 1e-12, "defect {defect}");
    }

    #[test]
    fn mixed_operator_adjoint_swaps_arguments() {
        let omega = riesz_map(7);
        let theta = canonical_dual(&omega).unwrap();
        let s_to = mixed_operator(&theta, &omega).unwrap();
        let s_ot = mixed_operator(&omega, &theta).unwrap();
        let defect = s_to
            .entries()
            .adjoint()
            .sub(s_ot.entries())
            .unwrap()
            .norm_max();
        assert!(defect <= 1e-12, "defect {defect}");
    }

    #[test]
    fn synthesis_analysis_composition_matches_mixed_matrix() {
        use crate::distmap::{analysis, synthesis};
        use crate::testspace::CoeffVector;
        // Q = T_omega T_zeta^x as a matrix, built column by column
        let space = hermite_space(6).unwrap();
        let grid = auto_grid(&space, BuiltinKind::WeightedFourier).unwrap();
        let omega = builtin_map(BuiltinKind::WeightedFourier, &space, &grid).unwrap();
        let zeta = builtin_map(BuiltinKind::Delta, &space, &grid).unwrap();
        let q = mixed_operator(&zeta, &omega).unwrap();
        for n in 0..6 {
            let basis = CoeffVector::basis_vector(space, n);
            let through = synthesis(&omega, &analysis(&zeta, &basis).unwrap()).unwrap();
            for row in 0..6 {
                assert!(
                    (q.entries()[(row, n)] - through.coords()[row]).norm() <= 1e-12,
                    "entry ({row}, {n})"
                );
            }
        }
    }

    #[test]
    fn riesz_map_with_canonical_dual_is_compatible() {
        let omega = riesz_map(12);
        let theta = canonical_dual(&omega).unwrap();
        let r = compatibility_report(&theta, &omega, &PairTolerances::default()).unwrap();
        assert!(r.compatible);
        assert!(r.invariants_hold());
        assert!((r.cond_mixed - 1.0).abs() <= 1e-8, "cond {}", r.cond_mixed);
    }

    #[test]
    fn zeroed_row_breaks_compatibility() {
        let omega = riesz_map(12);
        let theta = canonical_dual(&omega).unwrap().with_zeroed_row(0).unwrap();
        let r = compatibility_report(&theta, &omega, &PairTolerances::default()).unwrap();
        assert!(!r.compatible);
        // square map with a zero row cannot be total
        assert!(!r.total_theta);
        assert!(r.invariants_hold());
    }

    #[test]
    fn compatibility_verdict_is_symmetric() {
        let omega = riesz_map(10);
        let theta = canonical_dual(&omega).unwrap();
        let ab = compatibility_report(&theta, &omega, &PairTolerances::default()).unwrap();
        let ba = compatibility_report(&omega, &theta, &PairTolerances::default()).unwrap();
        assert_eq!(ab.compatible, ba.compatible);

        let broken = theta.with_zeroed_row(3).unwrap();
        let ab = compatibility_report(&broken, &omega, &PairTolerances::default()).unwrap();
        let ba = compatibility_report(&omega, &broken, &PairTolerances::default()).unwrap();
        assert_eq!(ab.compatible, ba.compatible);
        assert!(!ab.compatible);
    }

    #[test]
    fn weighted_fourier_self_pair_condition_matches_bounds() {
        let map = builtin(8, BuiltinKind::WeightedFourier);
        let r = compatibility_report(&map, &map, &PairTolerances::default()).unwrap();
        assert!(r.compatible);
        let report = classify(&map, &ClassifyTolerances::default()).unwrap();
        let expected = report.bounds.upper / report.bounds.lower;
        assert!(
            (r.cond_mixed - expected).abs() <= 1e-8 * expected,
            "cond {} vs B/A {}",
            r.cond_mixed,
            expected
        );
    }

    #[test]
    fn square_riesz_map_has_trivial_kernel() {
        let omega = riesz_map(8);
        let r = coefficient_space_report(&omega, 1e-10).unwrap();
        assert_eq!(r.kernel_dim, 0);
        assert_eq!(r.range_dim, 8);
        assert!(r.mu_independent);
    }

    #[test]
    fn oversampled_delta_kernel_dimension() {
        let space = hermite_space(16).unwrap();
        let grid = make_grid(GridKind::GaussHermiteLebesgue, 32, 0.0, 0.0).unwrap();
        let map = builtin_map(BuiltinKind::Delta, &space, &grid).unwrap();
        let r = coefficient_space_report(&map, 1e-10).unwrap();
        assert_eq!(r.kernel_dim, 16);
        assert_eq!(r.range_dim, 16);
        assert!(!r.mu_independent);
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let space = hermite_space(4).unwrap();
        let grid = make_grid(GridKind::Trapezoid, 50, -8.0, 8.0).unwrap();
        let map = map_from_samples("zero", &space, &grid, ComplexMatrix::zeros(50, 4)).unwrap();
        let r = coefficient_space_report(&map, 1e-10).unwrap();
        assert_eq!(r.kernel_dim, 50);
        assert_eq!(r.range_dim, 0);
    }

    #[test]
    fn kernel_and_range_partition_node_count_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..10 {
            let n = rng.random_range(1..=6);
            let m = rng.random_range(2..=20);
            let space = hermite_space(n).unwrap();
            let grid = make_grid(GridKind::Trapezoid, m, -1.0, 1.0).unwrap();
            let pairing = ComplexMatrix::from_fn(m, n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let map = map_from_samples("rand", &space, &grid, pairing).unwrap();
            let r = coefficient_space_report(&map, 1e-10).unwrap();
            assert_eq!(r.kernel_dim + r.range_dim, m);
        }
    }

    #[test]
    fn pair_report_json_keys() {
        let omega = riesz_map(6);
        let theta = canonical_dual(&omega).unwrap();
        let r = compatibility_report(&theta, &omega, &PairTolerances::default()).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&r.to_json().render()).unwrap();
        for key in ["labels", "cond_mixed", "flags", "compatible", "tolerances"] {
            assert!(parsed.get(key).is_some(), "missing {key}");
        }
        assert!(parsed["labels"].get("omega").is_some());
        assert!(parsed["labels"].get("theta").is_some());
        assert_eq!(parsed["flags"].as_object().unwrap().len(), 4);
    }

    #[test]
    fn mismatched_pair_rejected() {
        let a = builtin(6, BuiltinKind::Fourier);
        let b = builtin(8, BuiltinKind::Fourier);
        assert!(matches!(
            mixed_operator(&a, &b),
            Err(PairsError::Mismatch)
        ));
    }
}
