//! Regenerates the operator CSV files bundled with the scenarios
//! directory. Deterministic (fixed seeds); run from the repository root:
//!
//!     cargo run -p distframe --example gen_operators
//!
//! The bundled files are committed; this exists so they can be rebuilt
//! byte-for-byte if the scenario set ever changes.

use distframe::distmap::matrix_to_csv;
use distframe::numerics::{hermitian_eig, svd, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

fn random_matrix(rng: &mut impl Rng, n: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(
            rng.random_range(-1.0..1.0) * scale,
            rng.random_range(-1.0..1.0) * scale,
        )
    })
}

fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, 1.0);
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * Complex64::new(0.5, 0.0);
        }
        h[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
    }
    h
}

fn write(path: &Path, name: &str, label: &str, m: &ComplexMatrix) {
    let file = path.join(name);
    std::fs::write(&file, matrix_to_csv(label, m)).unwrap();
    println!("wrote {}", file.display());
}

fn main() {
    let out = Path::new("scenarios/operators");
    std::fs::create_dir_all(out).unwrap();

    // diag(1..12): bounded with bounded inverse, far from isometric
    let diag: Vec<f64> = (1..=12).map(|k| k as f64).collect();
    write(
        out,
        "diag_1_12.csv",
        "diag_1_12",
        &ComplexMatrix::diagonal_real(&diag),
    );

    // unitary 12x12: eigenvector matrix of a seeded random Hermitian matrix
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let q = hermitian_eig(&random_hermitian(&mut rng, 12)).unwrap().vectors;
    let s = svd(&q).unwrap();
    println!(
        "unitary_12 singular values in [{:.3e}, {:.3e}]",
        s.singulars.last().unwrap(),
        s.singulars[0]
    );
    write(out, "unitary_12.csv", "unitary_12", &q);

    // rank-deficient: diag(1,...,1,0)
    let mut rankdef: Vec<f64> = vec![1.0; 12];
    rankdef[11] = 0.0;
    write(
        out,
        "rankdef_12.csv",
        "rankdef_12",
        &ComplexMatrix::diagonal_real(&rankdef),
    );

    // random invertible 16x16 with modest condition number
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    let w = ComplexMatrix::identity(16)
        .add(&random_matrix(&mut rng, 16, 0.2))
        .unwrap();
    let s = svd(&w).unwrap();
    let cond = s.singulars[0] / s.singulars.last().unwrap();
    println!("w_16 condition number {cond:.3}");
    assert!(cond <= 100.0);
    write(out, "w_16.csv", "w_16", &w);
}
