use crate::dense::{dot_raw, norm_raw, DenseMatrix};
use crate::error::{Error, Result};
use crate::flops;

/// Thin SVD `A = u diag(s) v^H` with `min(m, n)` triplets, `s` nonincreasing.
#[derive(Debug, Clone)]
pub struct FullSvd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

impl FullSvd {
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        us.scale_columns(&self.s);
        us.matmul(&self.v.transpose())
    }
}

const JACOBI_RTOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi SVD.
///
/// Sweeps over all column pairs until every pair is orthogonal to
/// `1e-14` relative; gives up after 60 sweeps. Columns at round-off level
/// (below `eps * ||A||_F * sqrt(m)`) count as zero: they are not rotated and
/// their left vectors are filled in by basis completion. Each singular pair is signed
/// so that the largest-magnitude entry of its left vector is positive.
pub fn jacobi_svd(a: &DenseMatrix) -> Result<FullSvd> {
    let (m, n) = a.shape();
    if m < n {
        let t = jacobi_svd(&a.transpose())?;
        let mut out = FullSvd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
        apply_sign_convention(&mut out);
        return Ok(out);
    }

    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);
    let negligible = f64::EPSILON * norm_raw(a.data()) * (m as f64).sqrt();
    let negligible_sq = negligible * negligible;
    let mut converged = n < 2;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot_raw(w.col(p), w.col(p));
                let beta = dot_raw(w.col(q), w.col(q));
                let gamma = dot_raw(w.col(p), w.col(q));
                flops::add_usize(6 * m);
                if gamma == 0.0
                    || alpha <= negligible_sq
                    || beta <= negligible_sq
                    || gamma.abs() <= JACOBI_RTOL * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
                flops::add_usize(6 * (m + n));
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "one-sided Jacobi SVD",
            iterations: MAX_SWEEPS,
        });
    }

    let mut s: Vec<f64> = (0..n).map(|j| norm_raw(w.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));

    let mut u = DenseMatrix::zeros(m, n);
    let mut vs = DenseMatrix::zeros(n, n);
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        vs.set_col(dst, v.col(src));
        if s[src] > negligible {
            let inv = 1.0 / s[src];
            let col: Vec<f64> = w.col(src).iter().map(|x| x * inv).collect();
            u.set_col(dst, &col);
        } else {
            missing.push(dst);
        }
    }
    s = order.iter().map(|&i| s[i]).collect();
    complete_columns(&mut u, &missing);

    let mut out = FullSvd { u, s, v: vs };
    apply_sign_convention(&mut out);
    Ok(out)
}

fn rotate_columns(a: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let m = a.nrows();
    for i in 0..m {
        let x = a[(i, p)];
        let y = a[(i, q)];
        a[(i, p)] = c * x - s * y;
        a[(i, q)] = s * x + c * y;
    }
}

fn apply_sign_convention(svd: &mut FullSvd) {
    let signs = svd.u.normalize_column_signs();
    svd.v.scale_columns(&signs);
}

/// Fills the listed (zero) columns of `u` with unit vectors orthogonal to
/// every other column. Each one is the canonical basis vector with the
/// largest component outside the current span; with `d` directions left in
/// `R^m` that component is at least `sqrt(d / m)`.
fn complete_columns(u: &mut DenseMatrix, missing: &[usize]) {
    let m = u.nrows();
    for &j in missing {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for candidate in 0..m {
            let mut e = vec![0.0; m];
            e[candidate] = 1.0;
            for _ in 0..2 {
                for k in 0..u.ncols() {
                    if k == j {
                        continue;
                    }
                    let c = dot_raw(u.col(k), &e);
                    crate::dense::axpy_raw(-c, u.col(k), &mut e);
                }
            }
            let ne = norm_raw(&e);
            if best.as_ref().is_none_or(|(b, _)| ne > *b) {
                best = Some((ne, e));
            }
        }
        let (ne, mut e) = best.expect("basis completion needs at least one row");
        e.iter_mut().for_each(|x| *x /= ne);
        u.set_col(j, &e);
    }
}

/// Cyclic Jacobi eigensolver for a symmetric matrix. Returns eigenvalues in
/// ascending order and the matching orthonormal eigenvectors.
///
/// Independent of every Krylov path in this crate; tests use it as the
/// eigenvalue oracle.
pub fn sym_eig_jacobi(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "sym_eig_jacobi needs a square matrix");
    let mut s = a.clone();
    let mut v = DenseMatrix::identity(n);
    let norm = s.frobenius_norm();
    let mut converged = n < 2 || norm == 0.0;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|j| (0..n).filter(move |&i| i != j).map(move |i| (i, j)))
            .map(|(i, j)| s[(i, j)] * s[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = s[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (s[(q, q)] - s[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                // S <- J^T S J with J the (p, q) rotation.
                for k in 0..n {
                    let skp = s[(k, p)];
                    let skq = s[(k, q)];
                    s[(k, p)] = c * skp - sn * skq;
                    s[(k, q)] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[(p, k)];
                    let sqk = s[(q, k)];
                    s[(p, k)] = c * spk - sn * sqk;
                    s[(q, k)] = sn * spk + c * sqk;
                }
                rotate_columns(&mut v, p, q, c, sn);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "symmetric Jacobi eigensolver",
            iterations: MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[(i, i)].partial_cmp(&s[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| s[(i, i)]).collect();
    Ok((values, v.select_columns(&order)))
}
