use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::flops;

/// All eigenpairs of the symmetric tridiagonal matrix with diagonal `alpha`
/// and off-diagonal `beta`, by implicit-shift QL.
///
/// Eigenvalues come back ascending; column `i` of the returned matrix is the
/// eigenvector for eigenvalue `i`.
pub fn tridiag_eig(alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = alpha.len();
    if n == 0 {
        return Ok((Vec::new(), DenseMatrix::zeros(0, 0)));
    }
    if beta.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            op: "tridiag_eig",
            expected: n - 1,
            got: beta.len(),
        });
    }
    let mut d = alpha.to_vec();
    let mut e = beta.to_vec();
    e.push(0.0);
    let mut z = DenseMatrix::identity(n);
    let cap = 30 * n;

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
            if iter > cap {
                return Err(Error::NoConvergence {
                    what: "tridiagonal QL",
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
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
                for k in 0..n {
                    let zk1 = z[(k, i + 1)];
                    let zk = z[(k, i)];
                    z[(k, i + 1)] = s * zk + c * zk1;
                    z[(k, i)] = c * zk - s * zk1;
                }
                flops::add_usize(6 * n + 20);
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
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let values = order.iter().map(|&i| d[i]).collect();
    Ok((values, z.select_columns(&order)))
}
