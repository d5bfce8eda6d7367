mod commands;
mod error;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::{CliError, CliResult};
use output::{Format, Header};

#[derive(Debug, Parser)]
#[command(name = "freeconv", version, about = "Free convolutions, transforms and freeness diagnostics")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel kernels.
    #[arg(long, global = true, env = "FREECONV_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CumulantKind {
    Boolean,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoxtimesMethod {
    Taylor,
    Subordination,
    Oracle,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    MeanVariance,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments m_1..m_D of a measure.
    Moments {
        measure: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Boolean or free cumulants of a measure.
    Cumulants {
        measure: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, value_enum, default_value_t = CumulantKind::Boolean)]
        kind: CumulantKind,
    },
    /// Moments of the additive free convolution.
    Boxplus {
        mu1: PathBuf,
        mu2: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Moments of the multiplicative free convolution.
    Boxtimes {
        mu1: PathBuf,
        mu2: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, value_enum, default_value_t = BoxtimesMethod::Taylor)]
        method: BoxtimesMethod,
        /// Negative-axis window `(0, x]` for the subordination fit.
        #[arg(long, default_value_t = 0.05)]
        fit_window: f64,
    },
    /// Solves the multiplicative subordination system at given points.
    Subordinate {
        mu1: PathBuf,
        mu2: PathBuf,
        /// Evaluation point `re` or `re,im`; repeatable.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        points: Vec<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = freeconv::convolution::DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Fractional-moment sandwich for a measure; with a second measure and `--beta`, also the
    /// finiteness probe for the product.
    Diagnose {
        measure: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, requires = "beta")]
        with: Option<PathBuf>,
        #[arg(long, requires = "with")]
        beta: Option<f64>,
    },
    /// Freeness test of a linear and a quadratic form in i.i.d. variables.
    Characterize {
        /// Marginal distribution of the i.i.d. variables.
        marginal: PathBuf,
        /// Quadratic form spec file with keys `n`, `A`, `b`.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, requires = "n")]
        preset: Option<Preset>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = freeconv::characterize::DEFAULT_MAX_WORD_LENGTH)]
        max_len: usize,
    },
    /// Monte Carlo normalized traces of words in random matrices against their exact values.
    Matrixlab {
        /// Word such as `"T1 T2 T1 T2"`; repeatable.
        #[arg(long = "word", required = true)]
        words: Vec<String>,
        #[arg(long = "N", alias = "dimension", default_value_t = 256)]
        dimension: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated kind per variable: `goe`, `wishart`, `bernoulli`, or an atomic
        /// measure file for a rotated diagonal matrix. Defaults to `bernoulli` for every variable.
        #[arg(long)]
        ensemble: Option<String>,
    },
}

impl Command {
    fn seed(&self) -> Option<u64> {
        match self {
            Command::Matrixlab { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(CliError::parse("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::domain(format!("thread pool: {e}")))?;
    }
    let header = Header::from_env(cli.command.seed());
    let report = commands::execute(&cli.command)?;
    match &cli.global.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(&header, cli.global.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.write(&header, cli.global.format, &mut w)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
