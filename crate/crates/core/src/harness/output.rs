use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::complexity::{complexity_report, ComplexityRow};
use crate::harness::metrics::{PhaseFlops, UpdateReport};
use crate::harness::protocol::{Method, SequenceConfig};

/// Writes `i,sigma,rel_err,residual` rows (1-based `i`; empty `rel_err`
/// without a reference).
pub fn write_report_csv<W: Write>(out: W, report: &UpdateReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("CSV write failed: {e}"));
    w.write_record(["i", "sigma", "rel_err", "residual"]).map_err(io)?;
    for (i, sigma) in report.sigma.iter().enumerate() {
        let rel = report.rel_err.as_ref().map(|r| r[i].to_string()).unwrap_or_default();
        w.write_record([(i + 1).to_string(), sigma.to_string(), rel, report.residual[i].to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("CSV write failed: {e}")))?;
    Ok(())
}

pub fn write_report_csv_file(path: impl AsRef<Path>, report: &UpdateReport) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_report_csv(std::io::BufWriter::new(file), report)
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub method: String,
    pub k: usize,
    /// Effective `r` (defaulted to `k`); absent for methods without one.
    pub r: Option<usize>,
    pub phi: usize,
    pub lambda_factor: f64,
    pub seed: u64,
    pub direction: String,
    pub split_at: Option<usize>,
    pub sketch_cols: Option<usize>,
    pub reorthogonalize_v: bool,
}

impl From<&SequenceConfig> for ConfigEcho {
    fn from(c: &SequenceConfig) -> Self {
        ConfigEcho {
            method: c.method.name().to_string(),
            k: c.k,
            r: match c.method {
                Method::RrsvdEnhanced | Method::VecharynskiSv => Some(c.rank_r()),
                _ => None,
            },
            phi: c.phi,
            lambda_factor: c.lambda_factor,
            seed: c.seed,
            direction: format!("{:?}", c.direction).to_lowercase(),
            split_at: c.split_at,
            sketch_cols: c.sketch_cols,
            reorthogonalize_v: c.reorthogonalize_v,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct UpdateSummary {
    pub update: usize,
    pub max_rel_err: Option<f64>,
    pub max_residual: f64,
    pub flops: PhaseFlops,
    pub delta: usize,
    pub wall_time: f64,
    pub converged: bool,
    pub warnings: Vec<String>,
    pub complexity: Vec<ComplexityRow>,
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub config: ConfigEcho,
    pub updates: Vec<UpdateSummary>,
}

impl RunSummary {
    pub fn new(cfg: &SequenceConfig, reports: &[&UpdateReport]) -> Self {
        RunSummary {
            config: cfg.into(),
            updates: reports
                .iter()
                .enumerate()
                .map(|(i, r)| UpdateSummary {
                    update: i + 1,
                    max_rel_err: r.max_rel_err(),
                    max_residual: r.max_residual(),
                    flops: r.flops,
                    delta: r.lanczos_steps,
                    wall_time: r.wall_time,
                    converged: r.converged,
                    warnings: r.warnings.clone(),
                    complexity: complexity_report(r),
                })
                .collect(),
        }
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(format!("JSON encoding failed: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}
