use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qir_core::scan::{run_scan, write_output};
use qir_core::{emit, BenchmarkConvention, Error, OutputFormat, ScanConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    PerCopy,
    Total,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Sweep the SNR and tabulate first-order, refined and benchmark exponents.
#[derive(Debug, Parser)]
#[command(name = "qir-scan", version, allow_negative_numbers = true)]
struct Args {
    /// False-alarm probability.
    #[arg(long, default_value_t = 1e-3)]
    pfa: f64,
    /// Number of copies M.
    #[arg(long, default_value_t = 5000)]
    copies: u64,
    /// Mean thermal photon number of the background.
    #[arg(long, default_value_t = 600.0)]
    nb: f64,
    #[arg(long, default_value_t = -15.0)]
    snr_db_min: f64,
    #[arg(long, default_value_t = 5.0)]
    snr_db_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Probability mass the Fock-space truncation may drop.
    #[arg(long, default_value_t = 1e-10)]
    tail_tol: f64,
    /// Berry-Esseen constant C.
    #[arg(long, default_value_t = 0.4748)]
    bek_c: f64,
    #[arg(long, value_enum, default_value = "per-copy")]
    benchmark_m_convention: Convention,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Prefix the CSV with `# key=value` lines describing the run.
    #[arg(long)]
    meta: bool,
    /// Emit rows whose truncated sums failed, with those columns left empty.
    #[arg(long)]
    keep_partial: bool,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

impl Args {
    fn config(&self) -> ScanConfig {
        ScanConfig {
            p_fa: self.pfa,
            m: self.copies,
            nb: self.nb,
            snr_db_min: self.snr_db_min,
            snr_db_max: self.snr_db_max,
            points: self.points,
            tail_tol: self.tail_tol,
            c: self.bek_c,
            benchmark_m_convention: match self.benchmark_m_convention {
                Convention::PerCopy => BenchmarkConvention::PerCopy,
                Convention::Total => BenchmarkConvention::Total,
            },
            format: match self.format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            },
            output: self.output.clone(),
            meta: self.meta,
            keep_partial: self.keep_partial,
        }
    }
}

fn run(args: &Args) -> Result<(), Error> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Consistency(format!("thread pool: {e}")))?;
    }
    let config = args.config();
    config.validate()?;
    let rows = run_scan(&config)?;
    let bytes = emit(&rows, &config)?;
    write_output(&bytes, config.output.as_deref())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qir-scan: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
