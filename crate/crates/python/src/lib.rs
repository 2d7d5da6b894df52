//! Python bindings: sparse matrices, truncated SVDs, the four updating
//! methods and the experiment protocols. Dense data crosses the boundary as
//! lists of rows; reports come back as dicts.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use svd_update::harness::{self, Method, SequenceConfig, UpdateReport};
use svd_update::{mm, DenseMatrix, Direction, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        e if e.is_numerical() => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn dense_from_rows(rows: Vec<Vec<f64>>) -> PyResult<DenseMatrix> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok(DenseMatrix::from_rows(&rows))
}

fn parse_method(name: &str) -> PyResult<Method> {
    name.parse().map_err(to_py)
}

fn parse_direction(name: &str) -> PyResult<Direction> {
    match name {
        "rows" => Ok(Direction::Rows),
        "cols" | "columns" => Ok(Direction::Columns),
        other => Err(PyValueError::new_err(format!("direction must be 'rows' or 'cols', got '{other}'"))),
    }
}

/// Sparse matrix in CSR form.
#[pyclass(name = "SparseMatrix", module = "svd_update_py", frozen)]
pub struct PySparse {
    inner: svd_update::SparseMatrix,
}

#[pymethods]
impl PySparse {
    /// Builds from COO triplets (0-based). Duplicates are summed.
    #[staticmethod]
    fn from_coo(rows: Vec<usize>, cols: Vec<usize>, values: Vec<f64>, shape: (usize, usize)) -> PyResult<Self> {
        if rows.len() != cols.len() || rows.len() != values.len() {
            return Err(PyValueError::new_err("rows, cols and values must have equal length"));
        }
        let triples: Vec<_> = rows.into_iter().zip(cols).zip(values).map(|((i, j), v)| (i, j, v)).collect();
        let inner = svd_update::SparseMatrix::from_coo(&triples, shape.0, shape.1).map_err(to_py)?;
        Ok(PySparse { inner })
    }

    #[staticmethod]
    fn from_dense(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PySparse {
            inner: svd_update::SparseMatrix::from_dense(&dense_from_rows(rows)?),
        })
    }

    #[staticmethod]
    fn read_mtx(path: &str) -> PyResult<Self> {
        Ok(PySparse {
            inner: mm::read_matrix_market(path).map_err(to_py)?,
        })
    }

    fn write_mtx(&self, path: &str) -> PyResult<()> {
        mm::write_matrix_market(path, &self.inner).map_err(to_py)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    fn to_dense(&self) -> Vec<Vec<f64>> {
        self.inner.to_dense().to_rows()
    }

    fn transpose(&self) -> Self {
        PySparse {
            inner: self.inner.transpose(),
        }
    }

    fn matvec(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.matvec(&x).map_err(to_py)
    }

    fn rmatvec(&self, y: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.rmatvec(&y).map_err(to_py)
    }

    /// `(top, bottom)` split before row `at`.
    fn split_rows(&self, at: usize) -> PyResult<(Self, Self)> {
        let (a, b) = self.inner.split_rows(at).map_err(to_py)?;
        Ok((PySparse { inner: a }, PySparse { inner: b }))
    }

    fn split_cols(&self, at: usize) -> PyResult<(Self, Self)> {
        let (a, b) = self.inner.split_cols(at).map_err(to_py)?;
        Ok((PySparse { inner: a }, PySparse { inner: b }))
    }

    fn vstack(&self, other: &PySparse) -> PyResult<Self> {
        Ok(PySparse {
            inner: self.inner.vstack(&other.inner).map_err(to_py)?,
        })
    }

    fn hstack(&self, other: &PySparse) -> PyResult<Self> {
        Ok(PySparse {
            inner: self.inner.hstack(&other.inner).map_err(to_py)?,
        })
    }

    fn __repr__(&self) -> String {
        let (m, n) = self.inner.shape();
        format!("SparseMatrix({m}x{n}, nnz={})", self.inner.nnz())
    }
}

/// Rank-k factorization `U diag(s) V^T`.
#[pyclass(name = "TruncatedSvd", module = "svd_update_py", frozen)]
pub struct PySvd {
    inner: svd_update::TruncatedSvd,
}

#[pymethods]
impl PySvd {
    #[new]
    fn new(u: Vec<Vec<f64>>, s: Vec<f64>, v: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = svd_update::TruncatedSvd::new(dense_from_rows(u)?, s, dense_from_rows(v)?).map_err(to_py)?;
        Ok(PySvd { inner })
    }

    /// Leading `k` triplets of `a`, to working accuracy.
    #[staticmethod]
    #[pyo3(signature = (a, k, seed = 0))]
    fn compute(a: &PySparse, k: usize, seed: u64) -> PyResult<Self> {
        Ok(PySvd {
            inner: svd_update::TruncatedSvd::compute(&a.inner, k, seed).map_err(to_py)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn s(&self) -> Vec<f64> {
        self.inner.s.clone()
    }

    #[getter]
    fn u(&self) -> Vec<Vec<f64>> {
        self.inner.u.to_rows()
    }

    #[getter]
    fn v(&self) -> Vec<Vec<f64>> {
        self.inner.v.to_rows()
    }

    fn reconstruct(&self) -> Vec<Vec<f64>> {
        self.inner.reconstruct().to_rows()
    }

    /// Largest deviation of `U^T U` and `V^T V` from the identity.
    fn orthonormality_error(&self) -> f64 {
        self.inner.orthonormality_error()
    }

    fn __repr__(&self) -> String {
        format!("TruncatedSvd({}x{}, k={})", self.inner.nrows(), self.inner.ncols(), self.inner.k())
    }
}

fn report_dict<'py>(py: Python<'py>, r: &UpdateReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("method", &r.method)?;
    d.set_item("sigma", &r.sigma)?;
    d.set_item("rel_err", &r.rel_err)?;
    d.set_item("residual", &r.residual)?;
    d.set_item("lanczos_steps", r.lanczos_steps)?;
    d.set_item("wall_time", r.wall_time)?;
    d.set_item("converged", r.converged)?;
    d.set_item("warnings", &r.warnings)?;
    let f = PyDict::new(py);
    f.set_item("build_z", r.flops.build_z)?;
    f.set_item("build_w", r.flops.build_w)?;
    f.set_item("projected_solve", r.flops.projected_solve)?;
    f.set_item("recover_v", r.flops.recover_v)?;
    f.set_item("total", r.flops.total)?;
    d.set_item("flops", f)?;
    let dims = PyDict::new(py);
    dims.set_item("m", r.dims.m)?;
    dims.set_item("n", r.dims.n)?;
    dims.set_item("s", r.dims.s)?;
    dims.set_item("k", r.dims.k)?;
    dims.set_item("r", r.dims.r)?;
    d.set_item("dims", dims)?;
    Ok(d)
}

#[allow(clippy::too_many_arguments)]
fn config(k: usize, method: &str, phi: usize, r: Option<usize>, lambda_factor: f64, seed: u64, direction: &str, split_at: Option<usize>) -> PyResult<SequenceConfig> {
    let mut cfg = SequenceConfig::new(k, parse_method(method)?);
    cfg.phi = phi;
    cfg.r = r;
    cfg.lambda_factor = lambda_factor;
    cfg.seed = seed;
    cfg.direction = parse_direction(direction)?;
    cfg.split_at = split_at;
    Ok(cfg)
}

/// Updates `base_svd` (of `base`) after appending `update` as rows or
/// columns. `method` is one of `rrsvd-a`, `rrsvd-b`, `zha-simon`,
/// `vecharynski`. Pass the exact leading singular values of the updated
/// matrix as `reference` to get relative errors in the report.
#[pyfunction]
#[pyo3(signature = (base, base_svd, update, method = "rrsvd-b", direction = "rows", r = None, lambda_factor = 1.01, seed = 0, reference = None))]
#[allow(clippy::too_many_arguments)]
fn update<'py>(
    py: Python<'py>,
    base: &PySparse,
    base_svd: &PySvd,
    update: &PySparse,
    method: &str,
    direction: &str,
    r: Option<usize>,
    lambda_factor: f64,
    seed: u64,
    reference: Option<Vec<f64>>,
) -> PyResult<(PySvd, Bound<'py, PyDict>)> {
    let cfg = config(base_svd.inner.k(), method, 1, r, lambda_factor, seed, direction, None)?;
    cfg.validate().map_err(to_py)?;
    let problem = svd_update::UpdateProblem::new(&base.inner, &base_svd.inner, &update.inner, cfg.direction).map_err(to_py)?;
    let assembled = problem.assembled().map_err(to_py)?;
    let out = harness::run_update(&problem, &assembled, reference.as_deref(), &cfg, seed).map_err(to_py)?;
    let report = report_dict(py, &out.report)?;
    Ok((PySvd { inner: out.svd }, report))
}

/// Splits `a` (at half, or `split_at`), factors the first part exactly and
/// adds the rest in one update, scored against the exact SVD.
#[pyfunction]
#[pyo3(signature = (a, k, method = "rrsvd-b", r = None, lambda_factor = 1.01, seed = 0, direction = "rows", split_at = None))]
#[allow(clippy::too_many_arguments)]
fn run_single_update<'py>(
    py: Python<'py>,
    a: &PySparse,
    k: usize,
    method: &str,
    r: Option<usize>,
    lambda_factor: f64,
    seed: u64,
    direction: &str,
    split_at: Option<usize>,
) -> PyResult<(PySvd, Bound<'py, PyDict>)> {
    let cfg = config(k, method, 1, r, lambda_factor, seed, direction, split_at)?;
    let out = harness::run_single_update(&a.inner, &cfg).map_err(to_py)?;
    let report = report_dict(py, &out.report)?;
    Ok((PySvd { inner: out.svd }, report))
}

/// Adds the rest of `a` in `phi` batches; one report per update.
#[pyfunction]
#[pyo3(signature = (a, k, phi, method = "rrsvd-b", r = None, lambda_factor = 1.01, seed = 0, direction = "rows", split_at = None))]
#[allow(clippy::too_many_arguments)]
fn run_sequence<'py>(
    py: Python<'py>,
    a: &PySparse,
    k: usize,
    phi: usize,
    method: &str,
    r: Option<usize>,
    lambda_factor: f64,
    seed: u64,
    direction: &str,
    split_at: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = config(k, method, phi, r, lambda_factor, seed, direction, split_at)?;
    let out = harness::run_sequence(&a.inner, &cfg).map_err(to_py)?;
    out.iter().map(|o| report_dict(py, &o.report)).collect()
}

#[pymodule]
fn svd_update_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySparse>()?;
    m.add_class::<PySvd>()?;
    m.add_function(wrap_pyfunction!(update, m)?)?;
    m.add_function(wrap_pyfunction!(run_single_update, m)?)?;
    m.add_function(wrap_pyfunction!(run_sequence, m)?)?;
    Ok(())
}
