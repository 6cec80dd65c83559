//! Hermitian eigensolver (cyclic complex Jacobi) and a symmetric
//! tridiagonal QL solver used for Gaussian quadrature rules.

use super::{ComplexMatrix, EigResult, NumericsError};
use num_complex::Complex64;

const MAX_JACOBI_SWEEPS: usize = 60;

/// Full spectral decomposition of a Hermitian matrix.
///
/// The input must be square and Hermitian to a relative defect of 1e-12.
/// Eigenvalues come back ascending with unit eigenvector columns.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigResult, NumericsError> {
    if !h.is_square() {
        return Err(NumericsError::NonSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    h.check_finite()?;
    let n = h.rows();
    let scale = h.norm_max();
    if scale > 0.0 {
        let defect = h.hermitian_defect() / scale;
        if defect > 1e-12 {
            return Err(NumericsError::NonHermitian { defect });
        }
    }
    if n == 0 {
        return Ok(EigResult {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }

    let mut a = h.clone();
    // enforce exact symmetry so rotations preserve it bit-for-bit
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * Complex64::new(0.5, 0.0);
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let stop = 1e-15 * scale.max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= stop * 1e-2 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // J[p][p]=c, J[p][q]=s, J[q][p]=-s*conj(phase), J[q][q]=c*conj(phase)
                let jp_q = Complex64::new(s, 0.0);
                let jq_p = -phase.conj() * s;
                let jq_q = phase.conj() * c;
                let cpx = Complex64::new(c, 0.0);

                // rows: A <- J^H A
                for j in 0..n {
                    let arp = a[(p, j)];
                    let arq = a[(q, j)];
                    a[(p, j)] = cpx * arp + jq_p.conj() * arq;
                    a[(q, j)] = jp_q.conj() * arp + jq_q.conj() * arq;
                }
                // columns: A <- A J
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * cpx + aiq * jq_p;
                    a[(i, q)] = aip * jp_q + aiq * jq_q;
                }
                // accumulate V <- V J
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cpx + viq * jq_p;
                    v[(i, q)] = vip * jp_q + viq * jq_q;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    if !converged {
        // final check: quadratic convergence usually lands long before the cap
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off > 1e-11 * scale.max(f64::MIN_POSITIVE) {
            return Err(NumericsError::NoConvergence {
                algorithm: "jacobi eigensolver",
                iterations: MAX_JACOBI_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            vectors[(i, k)] = col[i] / norm;
        }
    }
    Ok(EigResult { values, vectors })
}

/// Eigenvalues (ascending) and first eigenvector components of a real
/// symmetric tridiagonal matrix, by the implicit QL method.
///
/// `diag` has length n, `off[i]` couples i and i+1 (length n-1). The first
/// components are what Golub-Welsch quadrature weights need, so the full
/// eigenvector matrix is never formed.
pub(crate) fn symmetric_tridiag_eig(
    diag: &[f64],
    off: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
    let n = diag.len();
    assert!(off.len() + 1 == n || (n == 0 && off.is_empty()));
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0f64; n];
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(NumericsError::NoConvergence {
                    algorithm: "tridiagonal QL",
                    iterations: 50,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // first-row eigenvector update
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let firsts: Vec<f64> = order.iter().map(|&i| z[i]).collect();
    Ok((values, firsts))
}
