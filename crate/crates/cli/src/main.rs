use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use sslud::montecarlo::{parse_seed, DEFAULT_SEED};
use sslud::Sample;
use sslud_cli::commands::{self, CiArgs, CiStudyArgs, Method, Outcome, PowerTableArgs, TestArgs};
use sslud_cli::format::Precision;
use sslud_cli::report::write_file;
use sslud_cli::{dataset, CliError, CliResult};

/// Inference for the skew-symmetric-Laplace-uniform distribution SSLUD(mu).
#[derive(Parser)]
#[command(name = "sslud", version, allow_negative_numbers = true)]
struct Cli {
    /// Worker threads for Monte Carlo replications [default: available cores]
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also write the JSON run report to this file
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Data {
    /// Observations, one per line (an optional header line is skipped)
    #[arg(value_name = "FILE", required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,

    /// Use a bundled dataset instead of a file (nifty50)
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
}

impl Data {
    fn load(&self) -> CliResult<(Sample, String)> {
        match (&self.builtin, &self.file) {
            (Some(name), _) => Ok((dataset::builtin(name)?, format!("builtin:{name}"))),
            (None, Some(path)) => Ok((dataset::read(path)?, path.display().to_string())),
            (None, None) => Err(CliError::Usage("give a data file or --builtin".into())),
        }
    }
}

#[derive(Args)]
struct Sim {
    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Simulation size
    #[arg(long = "N", default_value_t = 1000)]
    replications: usize,

    /// Master seed, decimal or 0x-prefixed hex
    #[arg(long, value_parser = seed_arg, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Maximum-likelihood estimate of mu
    #[command(allow_negative_numbers = true)]
    Fit {
        #[command(flatten)]
        data: Data,
        /// Write the JSON run report here
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Most-powerful test of symmetry (1/mu = 0) against mu = mu1
    #[command(allow_negative_numbers = true)]
    Test {
        #[command(flatten)]
        data: Data,
        /// Alternative mu1 (nonzero)
        #[arg(long)]
        mu1: f64,
        #[command(flatten)]
        sim: Sim,
        /// Write the JSON run report here
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Bootstrap confidence interval for mu
    #[command(allow_negative_numbers = true)]
    Ci {
        #[command(flatten)]
        data: Data,
        #[arg(long, value_enum, default_value_t = Method::Normal)]
        method: Method,
        /// Drop IQR outliers among the bootstrap estimates first
        #[arg(long)]
        modified: bool,
        #[command(flatten)]
        sim: Sim,
        /// Write the JSON run report here
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Simulated cutoffs and power over a grid of (mu1, n)
    #[command(allow_negative_numbers = true)]
    PowerTable {
        /// Alternatives [default: the published 16-value grid]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu1_list: Vec<f64>,
        /// Sample sizes [default: 50,100,150,200,250]
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
        #[command(flatten)]
        sim: Sim,
        #[arg(long, value_enum, default_value_t = Precision::Short)]
        precision: Precision,
        /// Write the CSV table here
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Average length and coverage of an interval method over a grid of (mu, n)
    #[command(allow_negative_numbers = true)]
    CiStudy {
        /// True mu values [default: the published 18-value grid]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu_list: Vec<f64>,
        /// Sample sizes [default: 50,100,150,250]
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Method::Normal)]
        method: Method,
        /// Drop IQR outliers among the bootstrap estimates first
        #[arg(long)]
        modified: bool,
        #[command(flatten)]
        sim: Sim,
        /// Bootstrap size inside each interval [default: --N]
        #[arg(long = "inner-N")]
        inner_replications: Option<usize>,
        /// Bootstrap V_hat afresh in every replication instead of once
        #[arg(long)]
        per_replication_variance: bool,
        #[arg(long, value_enum, default_value_t = Precision::Short)]
        precision: Precision,
        /// Write the CSV table here
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Largest n for which the beyond-ramp branch of the test is randomized
    #[command(allow_negative_numbers = true)]
    MaxNTable {
        /// Query one cell instead of the published grid (needs --mu1)
        #[arg(long, requires = "mu1")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        mu1: Option<f64>,
        /// Write the JSON run report here
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

enum Output {
    Json(Option<PathBuf>),
    Csv(Option<PathBuf>),
}

fn run(cli: Cli, argv: Vec<String>) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let start = Instant::now();
    let (outcome, output): (Outcome, Output) = match cli.command {
        Command::Fit { data, out } => {
            let (sample, source) = data.load()?;
            (commands::fit(&sample, &source)?, Output::Json(out))
        }
        Command::Test { data, mu1, sim, out } => {
            let (sample, source) = data.load()?;
            let args = TestArgs {
                mu1,
                alpha: sim.alpha,
                replications: sim.replications,
                seed: sim.seed,
            };
            (commands::test(&sample, &source, &args)?, Output::Json(out))
        }
        Command::Ci {
            data,
            method,
            modified,
            sim,
            out,
        } => {
            let (sample, source) = data.load()?;
            let args = CiArgs {
                method,
                modified,
                alpha: sim.alpha,
                replications: sim.replications,
                seed: sim.seed,
            };
            (commands::ci(&sample, &source, &args)?, Output::Json(out))
        }
        Command::PowerTable {
            mut mu1_list,
            mut n_list,
            sim,
            precision,
            out,
        } => {
            let (mus, ns) = PowerTableArgs::published_grid();
            if mu1_list.is_empty() {
                mu1_list = mus;
            }
            if n_list.is_empty() {
                n_list = ns;
            }
            let args = PowerTableArgs {
                mu1_list,
                n_list,
                alpha: sim.alpha,
                replications: sim.replications,
                seed: sim.seed,
                precision,
            };
            (commands::power_table(&args)?, Output::Csv(out))
        }
        Command::CiStudy {
            mut mu_list,
            mut n_list,
            method,
            modified,
            sim,
            inner_replications,
            per_replication_variance,
            precision,
            out,
        } => {
            let (mus, ns) = CiStudyArgs::published_grid();
            if mu_list.is_empty() {
                mu_list = mus;
            }
            if n_list.is_empty() {
                n_list = ns;
            }
            let args = CiStudyArgs {
                mu_list,
                n_list,
                method,
                modified,
                alpha: sim.alpha,
                replications: sim.replications,
                inner_replications,
                per_replication_variance,
                seed: sim.seed,
                precision,
            };
            (commands::ci_study(&args)?, Output::Csv(out))
        }
        Command::MaxNTable { alpha, mu1, out } => {
            let single = alpha.zip(mu1);
            (commands::max_n_table(single)?, Output::Json(out))
        }
    };
    let report = outcome.report.with_run_info(argv, start.elapsed());
    print!("{}", outcome.summary);
    match output {
        Output::Json(Some(path)) => report.write(&path)?,
        Output::Csv(Some(path)) => write_file(&path, outcome.csv.as_deref().unwrap_or_default())?,
        Output::Json(None) => {}
        Output::Csv(None) => print!("\n{}", outcome.csv.unwrap_or_default()),
    }
    if let Some(path) = cli.report {
        report.write(&path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
