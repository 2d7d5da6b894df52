//! Test oracles: random instances and dense brute-force reference
//! computations that do not touch the Krylov code paths.
#![allow(dead_code)]

use rand::Rng as _;
use svd_update::dense::DenseMatrix;
use svd_update::kernels::{inverse, jacobi_svd, mgs_qr, FullSvd};
use svd_update::rng::{gaussian_matrix, seeded};
use svd_update::SparseMatrix;

pub fn gaussian(m: usize, n: usize, seed: u64) -> DenseMatrix {
    gaussian_matrix(&mut seeded(seed, 0x7e57), m, n)
}

/// Gaussian entries kept with probability `density`.
pub fn sparse_random(m: usize, n: usize, density: f64, seed: u64) -> SparseMatrix {
    let mut rng = seeded(seed, 0x5a5a);
    let g = gaussian(m, n, seed);
    let mut triples = Vec::new();
    for i in 0..m {
        for j in 0..n {
            if rng.random::<f64>() < density {
                triples.push((i, j, g[(i, j)]));
            }
        }
    }
    SparseMatrix::from_coo(&triples, m, n).unwrap()
}

/// Dense Gaussian `m x n` matrix as sparse storage.
pub fn dense_random(m: usize, n: usize, seed: u64) -> SparseMatrix {
    SparseMatrix::from_dense(&gaussian(m, n, seed))
}

/// Exactly rank-`k` matrix `G1 G2`.
pub fn low_rank(m: usize, n: usize, k: usize, seed: u64) -> SparseMatrix {
    let a = gaussian(m, k, seed).matmul(&gaussian(k, n, seed ^ 0xabc));
    SparseMatrix::from_dense(&a)
}

/// `Q1 diag(values) Q2^H` with random orthonormal factors.
pub fn with_spectrum(m: usize, n: usize, values: &[f64], seed: u64) -> DenseMatrix {
    let p = values.len();
    let q1 = mgs_qr(&gaussian(m, p, seed)).q;
    let q2 = mgs_qr(&gaussian(n, p, seed ^ 0x51)).q;
    let mut q1s = q1;
    q1s.scale_columns(values);
    q1s.matmul(&q2.transpose())
}

pub fn oracle(a: &DenseMatrix) -> FullSvd {
    jacobi_svd(a).unwrap()
}

/// Brute-force dense product, independent of the library's matmul.
pub fn brute_matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (m, p, n) = (a.nrows(), a.ncols(), b.ncols());
    assert_eq!(p, b.nrows());
    DenseMatrix::from_fn(m, n, |i, j| (0..p).map(|l| a[(i, l)] * b[(l, j)]).sum())
}

pub fn brute_matvec(a: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum()).collect()
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

pub fn max_rel_sigma_err(approx: &[f64], exact: &[f64]) -> f64 {
    approx.iter().zip(exact).map(|(a, e)| (a - e).abs() / e).fold(0.0, f64::max)
}

/// `B(mu) = (I - U_k U_k^H)(B B^H - mu I)^{-1}` by dense inversion.
pub fn resolvent(b: &DenseMatrix, u_k: &DenseMatrix, mu: f64) -> DenseMatrix {
    let m = b.nrows();
    let mut shifted = brute_matmul(b, &b.transpose());
    for i in 0..m {
        shifted[(i, i)] -= mu;
    }
    let p = projector(u_k);
    brute_matmul(&p, &inverse(&shifted).unwrap())
}

/// `I - U U^H`.
pub fn projector(u: &DenseMatrix) -> DenseMatrix {
    let m = u.nrows();
    DenseMatrix::from_fn(m, m, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        d - (0..u.ncols()).map(|l| u[(i, l)] * u[(j, l)]).sum::<f64>()
    })
}

/// Distance from `x` to `range(q)` for orthonormal `q`.
pub fn distance_to_range(q: &DenseMatrix, x: &[f64]) -> f64 {
    let c = q.t_matvec(x);
    let p = q.matvec(&c);
    x.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    oracle(a).s.first().copied().unwrap_or(0.0)
}

pub fn col_norm(a: &DenseMatrix, j: usize) -> f64 {
    a.col(j).iter().map(|v| v * v).sum::<f64>().sqrt()
}
