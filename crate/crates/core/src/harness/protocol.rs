use std::str::FromStr;
use std::time::Instant;

use crate::baselines::{run_baseline, BaselineChoice};
use crate::error::{Error, Result};
use crate::flops;
use crate::harness::metrics::{evaluate, PhaseFlops, ProblemDims, UpdateReport};
use crate::krylov::{estimate_sigma1, CgSettings, LanczosSettings, XLambdaMode, XLambdaSettings};
use crate::sparse::SparseMatrix;
use crate::update::{build_z_basic, build_z_enhanced, rr_svd, Direction, TruncatedSvd, UpdateOptions, UpdateProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Rayleigh-Ritz with `Z = blockdiag(U_k, I_s)`.
    RrsvdBasic,
    /// Rayleigh-Ritz with `Z` enriched by `X_{lambda,r}`.
    RrsvdEnhanced,
    ZhaSimon,
    VecharynskiSv,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::RrsvdBasic => "rrsvd-a",
            Method::RrsvdEnhanced => "rrsvd-b",
            Method::ZhaSimon => "zha-simon",
            Method::VecharynskiSv => "vecharynski",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rrsvd-a" => Ok(Method::RrsvdBasic),
            "rrsvd-b" => Ok(Method::RrsvdEnhanced),
            "zha-simon" => Ok(Method::ZhaSimon),
            "vecharynski" => Ok(Method::VecharynskiSv),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (expected rrsvd-a, rrsvd-b, zha-simon or vecharynski)"
            ))),
        }
    }
}

/// Settings shared by the single-update and sequence protocols.
#[derive(Debug, Clone, Copy)]
pub struct SequenceConfig {
    /// Number of batches.
    pub phi: usize,
    pub k: usize,
    pub method: Method,
    /// Rank of `X_{lambda,r}` or of the SV basis; defaults to `k`.
    pub r: Option<usize>,
    /// `lambda = lambda_factor * sigma_1(A)^2`.
    pub lambda_factor: f64,
    pub seed: u64,
    /// Re-orthonormalize `V` before feeding a result into the next update.
    pub reorthogonalize_v: bool,
    pub direction: Direction,
    /// Rows (or columns) in the initial matrix; defaults to half, rounded up.
    pub split_at: Option<usize>,
    /// Sketch width for the randomized `X` builder; defaults to `2k`.
    pub sketch_cols: Option<usize>,
    pub x_mode: XLambdaMode,
    pub lanczos_tol: f64,
    pub cg: CgSettings,
    /// GKL steps behind the `sigma_1` estimate that sets `lambda`.
    pub sigma_steps: usize,
}

impl SequenceConfig {
    pub fn new(k: usize, method: Method) -> Self {
        SequenceConfig {
            phi: 1,
            k,
            method,
            r: None,
            lambda_factor: 1.01,
            seed: 0,
            reorthogonalize_v: true,
            direction: Direction::Rows,
            split_at: None,
            sketch_cols: None,
            x_mode: XLambdaMode::RandomizedSvd,
            lanczos_tol: 1e-10,
            cg: CgSettings::default(),
            sigma_steps: 12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi == 0 {
            return Err(Error::InvalidArgument("phi must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if !(self.lambda_factor > 1.0) {
            return Err(Error::InvalidArgument(format!("lambda factor must exceed 1, got {}", self.lambda_factor)));
        }
        if self.r == Some(0) {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        self.cg.validate()
    }

    pub fn rank_r(&self) -> usize {
        self.r.unwrap_or(self.k)
    }
}

/// The result of one update: the new factorization and its scores.
#[derive(Debug, Clone)]
pub struct UpdateOutcome {
    pub svd: TruncatedSvd,
    pub report: UpdateReport,
}

/// Runs `cfg.method` on one problem. `a` is the assembled updated matrix and
/// `reference` its exact leading singular values, used only for scoring.
pub fn run_update(problem: &UpdateProblem<'_>, a: &SparseMatrix, reference: Option<&[f64]>, cfg: &SequenceConfig, seed: u64) -> Result<UpdateOutcome> {
    let view = problem.row_view();
    let mut dims = ProblemDims {
        m: view.m(),
        n: view.n(),
        s: view.s(),
        k: problem.k(),
        r: 0,
        nnz_a: a.nnz(),
        nnz_e: problem.update.nnz(),
    };
    let mut warnings = Vec::new();
    let start = Instant::now();
    let options = UpdateOptions {
        k_out: None,
        lanczos: LanczosSettings {
            tol: cfg.lanczos_tol,
            max_steps: None,
            seed,
        },
        reorthogonalize_v: false,
        accept_unconverged: true,
    };

    let (svd, mut phases, steps, converged) = match cfg.method {
        Method::RrsvdBasic | Method::RrsvdEnhanced => {
            let (basis, build_z) = flops::measure(|| -> Result<_> {
                if cfg.method == Method::RrsvdBasic {
                    return build_z_basic(problem.base_svd, problem.s(), problem.direction);
                }
                let sigma1 = estimate_sigma1(&view.stacked(), cfg.sigma_steps, seed)?;
                let lambda = cfg.lambda_factor * sigma1 * sigma1;
                let r = cfg.rank_r();
                let settings = XLambdaSettings {
                    r,
                    sketch_cols: cfg.sketch_cols.unwrap_or(2 * cfg.k).max(r),
                    mode: cfg.x_mode,
                    seed,
                    cg: cfg.cg,
                };
                build_z_enhanced(problem, lambda, &settings)
            });
            let basis = basis?;
            if basis.rank_deficient() {
                warnings.push(format!(
                    "resolvent basis has rank {} < requested {}",
                    basis.r(),
                    basis.requested_r
                ));
            }
            dims.r = basis.r();
            let (svd, ritz) = rr_svd(problem, &basis, &options)?;
            if !ritz.converged {
                warnings.push(format!(
                    "Lanczos stopped at {} steps before reaching tolerance; using best Ritz pairs",
                    ritz.steps_used
                ));
            }
            if ritz.truncated {
                warnings.push(format!("only {} numerically nonzero Ritz values", ritz.theta.len()));
            }
            let phases = PhaseFlops {
                build_z,
                build_w: 0,
                projected_solve: ritz.flops_solve,
                recover_v: ritz.flops_recover,
                total: 0,
            };
            (svd, phases, ritz.steps_used, ritz.converged)
        }
        Method::ZhaSimon | Method::VecharynskiSv => {
            let choice = if cfg.method == Method::ZhaSimon {
                BaselineChoice::ZhaSimon
            } else {
                let r = cfg.rank_r().min(problem.s());
                BaselineChoice::VecharynskiSv { r }
            };
            let out = run_baseline(problem, choice, seed)?;
            dims.r = if cfg.method == Method::ZhaSimon { 0 } else { out.w_extra };
            let phases = PhaseFlops {
                build_z: 0,
                build_w: out.flops_build_w,
                projected_solve: out.flops_solve,
                recover_v: out.flops_other,
                total: 0,
            };
            (out.svd, phases, 0, true)
        }
    };
    let wall_time = start.elapsed().as_secs_f64();
    phases = phases.with_total();

    let mut report = evaluate(&svd, a, reference)?;
    report.flops = phases;
    report.lanczos_steps = steps;
    report.wall_time = wall_time;
    report.converged = converged;
    report.warnings = warnings;
    report.dims = dims;
    report.method = cfg.method.name().to_string();
    Ok(UpdateOutcome { svd, report })
}

fn extent(a: &SparseMatrix, dir: Direction) -> usize {
    match dir {
        Direction::Rows => a.nrows(),
        Direction::Columns => a.ncols(),
    }
}

/// Rows (or columns) `start..end` of `a`.
fn block(a: &SparseMatrix, dir: Direction, start: usize, end: usize) -> SparseMatrix {
    match dir {
        Direction::Rows => a.slice_rows(start, end),
        Direction::Columns => a.transpose().slice_rows(start, end).transpose(),
    }
}

fn initial_split(a: &SparseMatrix, cfg: &SequenceConfig) -> Result<usize> {
    let total = extent(a, cfg.direction);
    let h = cfg.split_at.unwrap_or(total.div_ceil(2));
    if h == 0 || h >= total {
        return Err(Error::InvalidArgument(format!("split point {h} must lie strictly inside 0..{total}")));
    }
    if cfg.k > h.min(extent(a, other(cfg.direction))) {
        return Err(Error::InvalidArgument(format!("rank {} too large for the initial {h}-slice", cfg.k)));
    }
    Ok(h)
}

fn other(dir: Direction) -> Direction {
    match dir {
        Direction::Rows => Direction::Columns,
        Direction::Columns => Direction::Rows,
    }
}

/// Batch boundaries after the initial split: `phi` batches of
/// `floor((total - h) / phi)`, the last one taking the remainder.
pub fn batch_bounds(total: usize, h: usize, phi: usize) -> Result<Vec<(usize, usize)>> {
    let rest = total.saturating_sub(h);
    if phi == 0 || phi > rest {
        return Err(Error::InvalidArgument(format!("cannot split {rest} new rows into {phi} batches")));
    }
    let t = rest / phi;
    Ok((0..phi)
        .map(|i| {
            let start = h + i * t;
            let end = if i + 1 == phi { total } else { start + t };
            (start, end)
        })
        .collect())
}

/// Splits `a` at half its rows (or `cfg.split_at`), takes the exact rank-`k`
/// SVD of the top part and updates it with the rest in one step.
pub fn run_single_update(a: &SparseMatrix, cfg: &SequenceConfig) -> Result<UpdateOutcome> {
    let single = SequenceConfig { phi: 1, ..*cfg };
    let mut out = run_sequence(a, &single)?;
    Ok(out.pop().expect("one batch yields one outcome"))
}

/// Adds the rows (or columns) after the initial split in `cfg.phi` batches,
/// feeding each result into the next update. Every update is scored against
/// the exact SVD of the matrix it produces.
pub fn run_sequence(a: &SparseMatrix, cfg: &SequenceConfig) -> Result<Vec<UpdateOutcome>> {
    cfg.validate()?;
    let dir = cfg.direction;
    let total = extent(a, dir);
    let h = initial_split(a, cfg)?;
    let bounds = batch_bounds(total, h, cfg.phi)?;

    let mut current = block(a, dir, 0, h);
    let mut base_svd = TruncatedSvd::compute(&current, cfg.k, cfg.seed)?;
    let mut outcomes = Vec::with_capacity(cfg.phi);
    for (i, &(start, end)) in bounds.iter().enumerate() {
        let seed = cfg.seed.wrapping_add(i as u64);
        let update = block(a, dir, start, end);
        let problem = UpdateProblem::new(&current, &base_svd, &update, dir)?;
        let assembled = problem.assembled()?;
        let reference = TruncatedSvd::compute(&assembled, cfg.k, cfg.seed)?;
        let outcome = run_update(&problem, &assembled, Some(&reference.s), cfg, seed)?;
        let mut next = outcome.svd.clone();
        if cfg.reorthogonalize_v {
            match dir {
                Direction::Rows => next.orthonormalize_v(),
                Direction::Columns => {
                    next = next.transpose();
                    next.orthonormalize_v();
                    next = next.transpose();
                }
            }
        }
        if next.k() < cfg.k && i + 1 < bounds.len() {
            return Err(Error::InvalidArgument(format!(
                "update {} returned only {} nonzero triplets; cannot continue at rank {}",
                i + 1,
                next.k(),
                cfg.k
            )));
        }
        outcomes.push(outcome);
        current = assembled;
        base_svd = next;
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batches_cover_the_tail() {
        assert_eq!(batch_bounds(10, 5, 2).unwrap(), vec![(5, 7), (7, 10)]);
        assert_eq!(batch_bounds(10, 5, 1).unwrap(), vec![(5, 10)]);
        assert!(batch_bounds(10, 5, 6).is_err());
    }

    #[test]
    fn method_names_roundtrip() {
        for m in [Method::RrsvdBasic, Method::RrsvdEnhanced, Method::ZhaSimon, Method::VecharynskiSv] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("svd".parse::<Method>().is_err());
    }
}
