use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scatter_core::cli::{cmd_direct, cmd_inverse, cmd_kdv, cmd_roundtrip, exit_code, write_report};
use scatter_core::io::RunConfig;
use scatter_core::report::Report;
use scatter_core::Result;

/// Direct and inverse scattering for Schrödinger operators with steplike
/// finite-gap backgrounds.
#[derive(Parser)]
#[command(name = "scatter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute scattering data and write it as JSON.
    Direct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Reconstruct the potential from a scattering-data file.
    Inverse {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Direct then inverse problem, compared against the input.
    Roundtrip {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve KdV with the configured potential as initial value.
    Kdv {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated times; defaults to `[kdv] times` of the config.
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> (Result<Report>, Option<PathBuf>) {
    match cli.command {
        Command::Direct { config, out, report } => (RunConfig::load(&config).and_then(|c| cmd_direct(&c, Some(&out))), report),
        Command::Inverse { data, config, out, report } => (RunConfig::load(&config).and_then(|c| cmd_inverse(&data, &c, Some(&out))), report),
        Command::Roundtrip { config, report, out } => (RunConfig::load(&config).and_then(|c| cmd_roundtrip(&c, out.as_deref())), report),
        Command::Kdv { config, times, out, report } => {
            let r = RunConfig::load(&config).and_then(|c| {
                let times = times.unwrap_or_else(|| c.times.clone());
                cmd_kdv(&c, &times, Some(&out))
            });
            (r, report)
        }
    }
}

fn main() -> ExitCode {
    let (result, report_path) = run(Cli::parse());
    match &result {
        Ok(report) => {
            for c in &report.checks {
                println!("{c}");
            }
            if let Some(path) = &report_path {
                if let Err(e) = write_report(path, report) {
                    eprintln!("error: {e}");
                    return ExitCode::from(3);
                }
            }
            let failed = report.failures().len();
            println!("{}: {} checks, {failed} failed", report.command, report.checks.len());
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
