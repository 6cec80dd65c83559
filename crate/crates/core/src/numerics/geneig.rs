//! Eigenvalues of general complex matrices (Hessenberg reduction followed
//! by explicitly shifted QR with Wilkinson shifts) and an LU solver with
//! partial pivoting.

use super::{ComplexMatrix, NumericsError};
use num_complex::Complex64;

/// Eigenvalues of a general (possibly non-Hermitian) square matrix.
///
/// Unordered; callers sort as needed.
pub fn general_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    a.check_finite()?;
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }

    let mut h = hessenberg(a);
    let mut eigs = Vec::with_capacity(n);
    let scale = h.norm_max().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;

    let mut hi = n - 1; // rows/cols 0..=hi are still active
    let mut stagnation = 0usize;
    let mut total_iterations = 0usize;
    let max_total = 60 * n;

    loop {
        // zero negligible subdiagonals
        for i in 0..hi {
            let local = eps * (h[(i, i)].norm() + h[(i + 1, i + 1)].norm());
            let tol = if local > 0.0 { local } else { eps * scale };
            if h[(i + 1, i)].norm() <= tol {
                h[(i + 1, i)] = Complex64::new(0.0, 0.0);
            }
        }
        // peel converged eigenvalues off the bottom
        while hi > 0 && h[(hi, hi - 1)].norm() == 0.0 {
            eigs.push(h[(hi, hi)]);
            hi -= 1;
            stagnation = 0;
        }
        if hi == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }

        // trailing unreduced block lo..=hi
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        total_iterations += 1;
        stagnation += 1;
        if total_iterations > max_total {
            return Err(NumericsError::NoConvergence {
                algorithm: "shifted QR",
                iterations: max_total,
            });
        }

        let mu = if stagnation.is_multiple_of(12) {
            // exceptional shift to break stagnation
            let mag = h[(hi, hi - 1)].norm()
                + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + Complex64::new(0.75 * mag, 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };

        qr_step(&mut h, lo, hi, mu);
    }

    Ok(eigs)
}

fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let mut norm_sq = 0.0f64;
        for i in (k + 1)..n {
            norm_sq += h[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let alpha = if x0.norm() > 0.0 {
            -(x0 / x0.norm()) * norm
        } else {
            Complex64::new(-norm, 0.0)
        };
        let mut v: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
        for i in (k + 1)..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // H <- (I - 2 v v^H / v^H v) H
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in (k + 1)..n {
                dot += v[i].conj() * h[(i, j)];
            }
            let f = dot * (2.0 / vnorm_sq);
            for i in (k + 1)..n {
                let vi = v[i];
                h[(i, j)] -= vi * f;
            }
        }
        // H <- H (I - 2 v v^H / v^H v)
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in (k + 1)..n {
                dot += h[(i, j)] * v[j];
            }
            let f = dot * (2.0 / vnorm_sq);
            for j in (k + 1)..n {
                h[(i, j)] -= f * v[j].conj();
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
        h[(k + 1, k)] = alpha;
    }
    h
}

fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    // eigenvalue of the trailing 2x2 closest to the corner entry
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR iteration on the Hessenberg block lo..=hi:
/// H <- R Q + mu I where Q R = H - mu I, via Givens rotations.
///
/// Only the active block is transformed; the matrix stays block
/// triangular, so the untouched coupling blocks cannot change the
/// spectrum.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    let mut rotations: Vec<(usize, f64, Complex64)> = Vec::with_capacity(hi - lo);
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    for i in lo..hi {
        let f = h[(i, i)];
        let g = h[(i + 1, i)];
        let (c, s) = givens(f, g);
        rotations.push((i, c, s));
        for j in i..=hi {
            let a = h[(i, j)];
            let b = h[(i + 1, j)];
            h[(i, j)] = a * c + b * s;
            h[(i + 1, j)] = -(s.conj()) * a + b * c;
        }
        h[(i + 1, i)] = Complex64::new(0.0, 0.0);
    }
    for &(i, c, s) in &rotations {
        for r in lo..=(i + 1) {
            let a = h[(r, i)];
            let b = h[(r, i + 1)];
            h[(r, i)] = a * c + b * s.conj();
            h[(r, i + 1)] = -s * a + b * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Givens pair (c real, s complex) with [c, s; -conj(s), c] [f; g] = [r; 0].
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let fn_ = f.norm();
    let t = (fn_ * fn_ + gn * gn).sqrt();
    if fn_ == 0.0 {
        (0.0, g.conj() / t)
    } else {
        let c = fn_ / t;
        let s = (f / fn_) * (g.conj() / t);
        (c, s)
    }
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve_general(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != b.rows() {
        return Err(NumericsError::DimensionMismatch(format!(
            "solve_general: {}x{} against {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    a.check_finite()?;
    b.check_finite()?;
    let n = a.rows();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.norm_max().max(f64::MIN_POSITIVE);

    for k in 0..n {
        let mut pivot = k;
        for i in (k + 1)..n {
            if lu[(i, k)].norm() > lu[(pivot, k)].norm() {
                pivot = i;
            }
        }
        if lu[(pivot, k)].norm() <= 1e-14 * scale {
            return Err(NumericsError::Singular("solve_general"));
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            for j in 0..x.cols() {
                let tmp = x[(k, j)];
                x[(k, j)] = x[(pivot, j)];
                x[(pivot, j)] = tmp;
            }
        }
        let pk = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pk;
            lu[(i, k)] = factor;
            for j in (k + 1)..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
            for j in 0..x.cols() {
                let sub = factor * x[(k, j)];
                x[(i, j)] -= sub;
            }
        }
    }
    for j in 0..x.cols() {
        for i in (0..n).rev() {
            let mut acc = x[(i, j)];
            for k in (i + 1)..n {
                acc -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = acc / lu[(i, i)];
        }
    }
    Ok(x)
}

/// Inverse via `solve_general` against the identity.
pub fn invert(a: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
    solve_general(a, &ComplexMatrix::identity(a.rows()))
}
