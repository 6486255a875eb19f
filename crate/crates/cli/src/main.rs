use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use logbessel::{evaluate_batch, BatchMode, BatchRequest};
use logbessel_cli::bench::{BenchMode, BenchOptions};
use logbessel_cli::precision::PrecisionOptions;
use logbessel_cli::vmf_fit::FeatureFormat;
use logbessel_cli::{bench, eval, io as points_io, precision, vmf_fit, CliError, Func, Region, Result};

#[derive(Parser)]
#[command(name = "logbessel", version, about = "Log-domain modified Bessel functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BatchFunc {
    #[value(name = "logiv")]
    LogIv,
    #[value(name = "logkv")]
    LogKv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Naive,
    Sorted,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one point.
    Eval {
        #[arg(long, value_enum)]
        func: Func,
        /// Order; ignored for logi0.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        v: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Evaluate a CSV of points (header `v,x`).
    Batch {
        #[arg(long, value_enum)]
        func: BatchFunc,
        #[arg(long)]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "sorted")]
        mode: Mode,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Compare against the arbitrary-precision oracle and print a JSON report.
    Precision {
        #[arg(long, value_enum)]
        func: Func,
        #[arg(long, value_enum, default_value = "small")]
        region: Region,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 320)]
        oracle_bits: u32,
        /// Series length limit for the oracle.
        #[arg(long, default_value_t = 100_000)]
        oracle_max_terms: usize,
        /// Exit with status 3 when more oracle evaluations than this fail.
        #[arg(long, default_value_t = 0)]
        max_oracle_failures: usize,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Time batch evaluation and print a JSON report.
    Bench {
        #[arg(long, value_enum)]
        func: Func,
        #[arg(long, value_enum, default_value = "small")]
        region: Region,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, value_enum, default_value = "both")]
        mode: BenchMode,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit a von Mises-Fisher concentration to a feature file.
    VmfFit {
        input: PathBuf,
        /// Use the derivative-free optimizer instead of the gradient.
        #[arg(long)]
        no_gradient: bool,
        /// Overrides detection from the file extension.
        #[arg(long, value_enum)]
        format: Option<FeatureFormat>,
    },
    /// Print the exact u_k(t) coefficient table as JSON.
    UkTable {
        #[arg(long, default_value_t = logbessel::uk_table::MAX_K)]
        max_k: usize,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn run_batch(func: BatchFunc, input: &Path, output: Option<&Path>, mode: Mode, workers: usize) -> Result<()> {
    let points = points_io::read_points(BufReader::new(open(input)?))?;
    let req = BatchRequest {
        func: match func {
            BatchFunc::LogIv => logbessel::BesselFn::LogIv,
            BatchFunc::LogKv => logbessel::BesselFn::LogKv,
        },
        points,
        mode: match mode {
            Mode::Naive => BatchMode::Naive,
            Mode::Sorted => BatchMode::MethodSorted,
        },
    };
    let result = evaluate_batch(&req, workers).map_err(|e| match e {
        logbessel::batch::BatchError::Domain { index, source } => CliError::Row {
            row: index + 1,
            message: source.to_string(),
        },
        other => CliError::Usage(other.to_string()),
    })?;
    match output {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            points_io::write_results(BufWriter::new(file), &req.points, &result.values)?;
        }
        None => points_io::write_results(io::stdout().lock(), &req.points, &result.values)?,
    }
    let groups: Vec<String> = result.group_sizes.iter().map(|(m, n)| format!("{m}={n}")).collect();
    eprintln!(
        "points={} wall_ms={:.3} groups: {}",
        req.points.len(),
        result.wall_time.as_secs_f64() * 1e3,
        groups.join(" ")
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval { func, v, x } => eval::run(&mut io::stdout().lock(), func, v, x),
        Command::Batch {
            func,
            input,
            output,
            mode,
            workers,
        } => run_batch(func, &input, output.as_deref(), mode, workers),
        Command::Precision {
            func,
            region,
            samples,
            seed,
            oracle_bits,
            oracle_max_terms,
            max_oracle_failures,
            workers,
        } => {
            let report = precision::measure(&PrecisionOptions {
                func,
                region,
                samples,
                seed,
                oracle_bits,
                oracle_max_terms,
                workers,
            })?;
            print_json(&report)?;
            if report.oracle_failures > max_oracle_failures {
                return Err(CliError::OracleFailures {
                    failures: report.oracle_failures,
                    limit: max_oracle_failures,
                });
            }
            Ok(())
        }
        Command::Bench {
            func,
            region,
            samples,
            repeats,
            mode,
            workers,
            seed,
        } => print_json(&bench::run(&BenchOptions {
            func,
            region,
            samples,
            repeats,
            mode,
            workers,
            seed,
        })?),
        Command::VmfFit {
            input,
            no_gradient,
            format,
        } => {
            let text = std::fs::read_to_string(&input).map_err(|source| CliError::Io {
                path: input.display().to_string(),
                source,
            })?;
            let format = format.unwrap_or_else(|| FeatureFormat::from_path(&input));
            let (fit, renormalized) = vmf_fit::fit_text(&text, format, !no_gradient)?;
            if renormalized > 0 {
                eprintln!("warning: {renormalized} of {} vectors were not unit length and were renormalized", fit.n);
            }
            print_json(&fit)
        }
        Command::UkTable { max_k } => print_json(&logbessel::uk_table::dump(max_k)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
