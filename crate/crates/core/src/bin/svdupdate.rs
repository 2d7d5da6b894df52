use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use svd_update::harness::{self, Method, RunSummary, SequenceConfig, UpdateReport};
use svd_update::krylov::XLambdaMode;
use svd_update::mm;
use svd_update::{Direction, Error, Result, SparseMatrix, TruncatedSvd};

#[derive(Parser)]
#[command(name = "svdupdate", version, about = "Update a truncated SVD after adding rows or columns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a matrix, factor the first part, add the rest in one update.
    Update {
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
        /// CSV report (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Add the rest of the matrix in `phi` batches, one update per batch.
    Sequence {
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: usize,
        /// Directory for the per-batch CSV files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Summary file (defaults to `summary.json` in the output directory).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reference leading singular values of a matrix.
    Oracle {
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert raw triplets (`i j v` or `i::j::v`, 1-based) to Matrix Market.
    Convert {
        raw: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Mtx)]
        format: Format,
        /// Output path (defaults to the input with a `.mtx` extension).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Mtx,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    RrsvdA,
    RrsvdB,
    ZhaSimon,
    Vecharynski,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Rows,
    Cols,
}

#[derive(Clone, Copy, ValueEnum)]
enum XModeArg {
    Randomized,
    Gkl,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Rank of the resolvent basis (rrsvd-b) or of the SV basis; defaults to k.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 1.01)]
    lambda_factor: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rows (or columns) in the initial matrix; defaults to half, rounded up.
    #[arg(long)]
    split_at: Option<usize>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Rows)]
    direction: DirectionArg,
    /// Sketch width for rrsvd-b; defaults to 2k.
    #[arg(long)]
    sketch_cols: Option<usize>,
    #[arg(long, value_enum, default_value_t = XModeArg::Randomized)]
    x_mode: XModeArg,
}

impl Common {
    fn config(&self, phi: usize) -> SequenceConfig {
        let method = match self.method {
            MethodArg::RrsvdA => Method::RrsvdBasic,
            MethodArg::RrsvdB => Method::RrsvdEnhanced,
            MethodArg::ZhaSimon => Method::ZhaSimon,
            MethodArg::Vecharynski => Method::VecharynskiSv,
        };
        let mut cfg = SequenceConfig::new(self.k, method);
        cfg.phi = phi;
        cfg.r = self.r;
        cfg.lambda_factor = self.lambda_factor;
        cfg.seed = self.seed;
        cfg.split_at = self.split_at;
        cfg.sketch_cols = self.sketch_cols;
        cfg.direction = match self.direction {
            DirectionArg::Rows => Direction::Rows,
            DirectionArg::Cols => Direction::Columns,
        };
        cfg.x_mode = match self.x_mode {
            XModeArg::Randomized => XLambdaMode::RandomizedSvd,
            XModeArg::Gkl => XLambdaMode::GklOnProduct,
        };
        cfg
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("svdupdate: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Update {
            matrix,
            common,
            out,
            json,
        } => {
            let a = mm::read_matrix_market(&matrix)?;
            let cfg = common.config(1);
            let outcome = harness::run_single_update(&a, &cfg)?;
            warn(&outcome.report, 1);
            match &out {
                Some(p) => harness::write_report_csv_file(p, &outcome.report)?,
                None => harness::write_report_csv(std::io::stdout().lock(), &outcome.report)?,
            }
            if let Some(p) = json {
                RunSummary::new(&cfg, &[&outcome.report]).write_json(p)?;
            }
            Ok(())
        }
        Command::Sequence {
            matrix,
            common,
            phi,
            out_dir,
            json,
        } => {
            let a = mm::read_matrix_market(&matrix)?;
            let cfg = common.config(phi);
            let outcomes = harness::run_sequence(&a, &cfg)?;
            std::fs::create_dir_all(&out_dir).map_err(|e| io_err(&out_dir, e))?;
            let width = phi.to_string().len().max(2);
            for (i, o) in outcomes.iter().enumerate() {
                warn(&o.report, i + 1);
                let path = out_dir.join(format!("batch_{:0width$}.csv", i + 1));
                harness::write_report_csv_file(&path, &o.report)?;
            }
            let reports: Vec<&UpdateReport> = outcomes.iter().map(|o| &o.report).collect();
            let summary = json.unwrap_or_else(|| out_dir.join("summary.json"));
            RunSummary::new(&cfg, &reports).write_json(summary)
        }
        Command::Oracle { matrix, k, out, seed } => {
            let a = mm::read_matrix_market(&matrix)?;
            let svd = TruncatedSvd::compute(&a, k, seed)?;
            let mut text = String::from("i,sigma\n");
            for (i, s) in svd.s.iter().enumerate() {
                text.push_str(&format!("{},{}\n", i + 1, s));
            }
            match out {
                Some(p) => std::fs::write(&p, text).map_err(|e| io_err(&p, e)),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Convert { raw, format, out } => {
            let Format::Mtx = format;
            let a: SparseMatrix = mm::read_triplets(&raw)?;
            let target = out.unwrap_or_else(|| raw.with_extension("mtx"));
            if target == raw {
                return Err(Error::InvalidArgument(format!("refusing to overwrite the input {}", raw.display())));
            }
            mm::write_matrix_market(&target, &a)?;
            eprintln!("wrote {} ({}x{}, nnz {})", target.display(), a.nrows(), a.ncols(), a.nnz());
            Ok(())
        }
    }
}

fn warn(report: &UpdateReport, update: usize) {
    for w in &report.warnings {
        eprintln!("svdupdate: update {update}: {w}");
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}
