//! Singular value decomposition by one-sided Jacobi, chosen for its high
//! relative accuracy on the small dense matrices this crate works with.

use super::{ComplexMatrix, NumericsError, SvdResult};
use num_complex::Complex64;

const MAX_SWEEPS: usize = 60;

/// `A = left * diag(singulars) * right^H` with descending singular values.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult, NumericsError> {
    a.check_finite()?;
    if a.rows() < a.cols() {
        // dualize: A^H = U S V^H  =>  A = V S U^H
        let s = svd(&a.adjoint())?;
        return Ok(SvdResult {
            left: s.right,
            singulars: s.singulars,
            right: s.left,
        });
    }
    let m = a.rows();
    let n = a.cols();
    if n == 0 {
        return Ok(SvdResult {
            left: ComplexMatrix::zeros(m, 0),
            singulars: vec![],
            right: ComplexMatrix::zeros(0, 0),
        });
    }

    let mut work = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = work.norm_max();
    if scale == 0.0 {
        return Ok(SvdResult {
            left: ComplexMatrix::zeros(m, n),
            singulars: vec![0.0; n],
            right: v,
        });
    }

    // inner products of m-term columns carry O(m * eps) relative noise;
    // demanding orthogonality below that level never terminates
    let tol = (8.0 * m as f64).max(64.0) * f64::EPSILON;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        // columns at round-off scale relative to the largest are pure noise
        // from earlier rotations; freeze them or rank-deficient inputs cycle
        let mut largest = 0.0f64;
        for j in 0..n {
            let norm_sq: f64 = (0..m).map(|k| work[(k, j)].norm_sqr()).sum();
            largest = largest.max(norm_sq.sqrt());
        }
        let floor = largest * f64::EPSILON;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut alpha = 0.0f64; // ||col_i||^2
                let mut beta = 0.0f64; // ||col_j||^2
                let mut gamma = Complex64::new(0.0, 0.0); // col_i^H col_j
                for k in 0..m {
                    let cki = work[(k, i)];
                    let ckj = work[(k, j)];
                    alpha += cki.norm_sqr();
                    beta += ckj.norm_sqr();
                    gamma += cki.conj() * ckj;
                }
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt()
                    || g == 0.0
                    || alpha.sqrt() <= floor
                    || beta.sqrt() <= floor
                {
                    continue;
                }
                rotated = true;
                // diagonalize the 2x2 column Gram [[alpha, gamma],[conj, beta]]
                let phase = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let jp_q = Complex64::new(s, 0.0);
                let jq_p = -phase.conj() * s;
                let jq_q = phase.conj() * c;
                let cpx = Complex64::new(c, 0.0);
                for k in 0..m {
                    let cki = work[(k, i)];
                    let ckj = work[(k, j)];
                    work[(k, i)] = cki * cpx + ckj * jq_p;
                    work[(k, j)] = cki * jp_q + ckj * jq_q;
                }
                for k in 0..n {
                    let vki = v[(k, i)];
                    let vkj = v[(k, j)];
                    v[(k, i)] = vki * cpx + vkj * jq_p;
                    v[(k, j)] = vki * jp_q + vkj * jq_q;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence {
            algorithm: "one-sided jacobi svd",
            iterations: MAX_SWEEPS,
        });
    }

    let mut sigmas: Vec<f64> = (0..n)
        .map(|j| {
            (0..m)
                .map(|k| work[(k, j)].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigmas[j].partial_cmp(&sigmas[i]).unwrap());

    let mut left = ComplexMatrix::zeros(m, n);
    let mut right = ComplexMatrix::zeros(n, n);
    let sorted: Vec<f64> = order.iter().map(|&j| sigmas[j]).collect();
    for (dst, &src) in order.iter().enumerate() {
        let sigma = sigmas[src];
        if sigma > 0.0 {
            for k in 0..m {
                left[(k, dst)] = work[(k, src)] / sigma;
            }
        }
        for k in 0..n {
            right[(k, dst)] = v[(k, src)];
        }
    }
    sigmas = sorted;
    Ok(SvdResult {
        left,
        singulars: sigmas,
        right,
    })
}
