//! Experiment driver: scoring, single-update and sequence protocols,
//! complexity reporting, and CSV/JSON output.

mod complexity;
mod metrics;
mod output;
mod protocol;

pub use complexity::{complexity_report, predicted_phases, projected_solve_detailed, ComplexityRow};
pub use metrics::{evaluate, max_principal_angle, principal_angles, PhaseFlops, ProblemDims, UpdateReport};
pub use output::{write_report_csv, write_report_csv_file, ConfigEcho, RunSummary, UpdateSummary};
pub use protocol::{batch_bounds, run_sequence, run_single_update, run_update, Method, SequenceConfig, UpdateOutcome};
