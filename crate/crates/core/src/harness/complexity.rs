use serde::Serialize;

use crate::harness::metrics::{ProblemDims, UpdateReport};
use crate::harness::protocol::Method;

/// Measured FLOPs of one phase next to the asymptotic prediction with every
/// Krylov step count replaced by `k`.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexityRow {
    pub phase: &'static str,
    pub measured: u64,
    /// `None` where the scheme has no such phase.
    pub predicted: Option<f64>,
    pub ratio: Option<f64>,
}

/// Predicted FLOPs per phase: building `Z`, building `W`, the projected
/// problem, and forming the output factors.
pub fn predicted_phases(method: Method, d: &ProblemDims) -> [Option<f64>; 4] {
    let (m, n, s, k, r) = (d.m as f64, d.n as f64, d.s as f64, d.k as f64, d.r as f64);
    let (nnz_a, nnz_e) = (d.nnz_a as f64, d.nnz_e as f64);
    match method {
        Method::ZhaSimon => [
            None,
            Some(n * s * s + n * s * k),
            Some((k + s).powi(3)),
            Some(k * k * (m + n) + n * s * k),
        ],
        Method::VecharynskiSv => [
            None,
            Some((nnz_e + n * k) * k + (n + s) * k * k),
            Some((k + s) * (k + r).powi(2) + nnz_e * k + r * s),
            Some(k * k * (m + n) + n * r * k),
        ],
        Method::RrsvdBasic => [
            Some(0.0),
            None,
            Some((nnz_e + n * k) * k + (k + s) * k * k),
            Some(k * k * m + (nnz_a + n) * k),
        ],
        Method::RrsvdEnhanced => [
            Some(nnz_a * k + m * k * k),
            None,
            Some((nnz_e + (n + r) * k) * k + (k + r + s) * k * k),
            Some(k * k * m + (nnz_a + n) * k),
        ],
    }
}

/// The unrounded Lanczos cost of the projected solve after `delta` steps:
/// `4 (n (k + r) + nnz(E)) delta + 2 (k + r + s) delta^2`.
pub fn projected_solve_detailed(d: &ProblemDims, delta: usize) -> f64 {
    let (n, s, k, r) = (d.n as f64, d.s as f64, d.k as f64, d.r as f64);
    let delta = delta as f64;
    4.0 * (n * (k + r) + d.nnz_e as f64) * delta + 2.0 * (k + r + s) * delta * delta
}

pub fn complexity_report(report: &UpdateReport) -> Vec<ComplexityRow> {
    let method: Method = match report.method.parse() {
        Ok(m) => m,
        Err(_) => return Vec::new(),
    };
    let predicted = predicted_phases(method, &report.dims);
    let f = &report.flops;
    let measured = [f.build_z, f.build_w, f.projected_solve, f.recover_v];
    let names = ["build_z", "build_w", "projected_solve", "other"];
    (0..4)
        .map(|i| ComplexityRow {
            phase: names[i],
            measured: measured[i],
            predicted: predicted[i],
            ratio: predicted[i].filter(|&p| p > 0.0).map(|p| measured[i] as f64 / p),
        })
        .collect()
}
