//! `cavity-echo`: reproduce the kick-protocol datasets, sweep parameter
//! grids, and self-check the numerical contracts from the command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cavity_echo::config::{load_config, ExperimentConfig, OutputFormat};
use cavity_echo::dataset::Dataset;
use cavity_echo::entanglement::Convention;
use cavity_echo::runner::{self, verify};
use cavity_echo::Result;

#[derive(Parser)]
#[command(
    name = "cavity-echo",
    version,
    about = "Freeze a photon shared between two coupled cavities with periodic sigma_z kicks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// TOML experiment config; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file; overrides the config's `output.path`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format; overrides the config's `output.format`.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Concurrence normalization; overrides the config.
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Paper,
    Standard,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::Paper,
            ConventionArg::Standard => Convention::Standard,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured protocol once and emit its dataset.
    Simulate(CommonArgs),
    /// Single-kick demonstration: free decay vs a kick at gt = 0.3.
    /// Emits two files, `<out>_free.<ext>` and `<out>_kicked.<ext>`.
    Figure1(CommonArgs),
    /// Three-kick demonstration: kicks at gt = 0.1, 0.2, 0.3.
    Figure2(CommonArgs),
    /// Sweep the kick count and report worst-case concurrence deviations.
    SweepN {
        #[command(flatten)]
        common: CommonArgs,
        /// Even kick counts, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
        n: Vec<usize>,
    },
    /// Run the invariant suites and print a pass/fail table.
    Verify,
    /// Compare the ideal protocol against its finite-pulse realization.
    OracleCompare(CommonArgs),
}

fn effective_config(common: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default().normalized()?,
    };
    if let Some(convention) = common.convention {
        cfg.convention = convention.into();
    }
    if let Some(format) = common.format {
        cfg.output.format = format.into();
    }
    if let Some(out) = &common.out {
        cfg.output.path = out.clone();
    }
    Ok(cfg)
}

fn emit(dataset: &Dataset, cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    dataset.write(cfg.output.format, path)?;
    eprintln!("wrote {} ({} rows)", path.display(), dataset.rows.len());
    Ok(())
}

/// `fig.csv` -> `fig_free.csv` / `fig_kicked.csv`.
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let mut name = format!("{stem}{suffix}");
    if let Some(ext) = path.extension() {
        name.push('.');
        name.push_str(&ext.to_string_lossy());
    }
    path.with_file_name(name)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate(common) => {
            let cfg = effective_config(&common)?;
            let dataset = runner::run_simulate(&cfg)?;
            emit(&dataset, &cfg, &cfg.output.path.clone())?;
            Ok(true)
        }
        Command::Figure1(common) => {
            let cfg = effective_config(&common)?;
            let (free, kicked) = runner::run_figure1(&cfg)?;
            emit(&free, &cfg, &with_suffix(&cfg.output.path, "_free"))?;
            emit(&kicked, &cfg, &with_suffix(&cfg.output.path, "_kicked"))?;
            Ok(true)
        }
        Command::Figure2(common) => {
            let cfg = effective_config(&common)?;
            let dataset = runner::run_figure2(&cfg)?;
            emit(&dataset, &cfg, &cfg.output.path.clone())?;
            Ok(true)
        }
        Command::SweepN { common, n } => {
            let cfg = effective_config(&common)?;
            let dataset = runner::sweep_n(&cfg, &n)?;
            emit(&dataset, &cfg, &cfg.output.path.clone())?;
            Ok(true)
        }
        Command::Verify => {
            let checks = verify::run_all()?;
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            let mut all_passed = true;
            for check in &checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!("[{status}] {:width$}  {}", check.name, check.detail);
                all_passed &= check.passed;
            }
            println!(
                "{}/{} checks passed",
                checks.iter().filter(|c| c.passed).count(),
                checks.len()
            );
            Ok(all_passed)
        }
        Command::OracleCompare(common) => {
            let mut cfg = effective_config(&common)?;
            // a kick-free window compares nothing; default to the three-kick
            // demonstration when the config leaves the protocol empty
            if common.config.is_none() {
                cfg.protocol.gt_total = Some(runner::FIG2_KICK_GTS[2]);
                cfg.protocol.total_time = None;
                cfg.protocol.n_kicks = None;
                cfg.protocol.kick_gts = Some(runner::FIG2_KICK_GTS.to_vec());
                cfg = cfg.normalized()?;
            }
            let (dataset, summary) = runner::oracle_compare(&cfg)?;
            emit(&dataset, &cfg, &cfg.output.path.clone())?;
            println!(
                "final trace distance to ideal : {:.6e}",
                summary.final_trace_distance
            );
            println!(
                "max trace distance to ideal   : {:.6e}",
                summary.max_trace_distance
            );
            println!(
                "final concurrence (ideal)     : {:.9}",
                summary.final_concurrence_ideal
            );
            println!(
                "final concurrence (pulsed)    : {:.9}",
                summary.final_concurrence_pulsed
            );
            println!("final vacuum population p00   : {:.6e}", summary.final_p00);
            if summary.keep_probability < 1.0 {
                println!(
                    "post-selection keep prob      : {:.6}",
                    summary.keep_probability
                );
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            ExitCode::FAILURE
        }
    }
}
