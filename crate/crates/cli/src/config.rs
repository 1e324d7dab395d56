use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsdensity::sampler::{DensityMethod, SPECTRUM_MAX_DIM};
use hsdensity::stats::suite::{Block, DEFAULT_SEED};
use hsdensity::stats::{DEFAULT_ALPHA, DEFAULT_Z_THRESHOLD};

#[derive(Debug, Parser)]
#[command(name = "hsdensity", version, about = "Sample and verify uniformly random density matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write sampled matrices as NDJSON or CSV.
    Sample(SampleArgs),
    /// Monte Carlo moments against their closed forms, as a JSON report.
    Moments(MomentsArgs),
    /// CSV histogram of the largest eigenvalue.
    Eigdist(EigdistArgs),
    /// Run the verification suite and print a table.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Hs,
    Purified,
    Spectral,
    Bloch,
    Gue,
    Ginibre,
}

impl Method {
    /// The density-matrix construction, if this method produces states.
    pub fn density(self) -> Option<DensityMethod> {
        match self {
            Method::Hs => Some(DensityMethod::Hs),
            Method::Purified => Some(DensityMethod::Purified),
            Method::Spectral => Some(DensityMethod::Spectral),
            Method::Bloch => Some(DensityMethod::Bloch),
            Method::Gue | Method::Ginibre => None,
        }
    }

    pub fn id(self) -> u32 {
        self as u32 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Hs => "hs",
            Method::Purified => "purified",
            Method::Spectral => "spectral",
            Method::Bloch => "bloch",
            Method::Gue => "gue",
            Method::Ginibre => "ginibre",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by the sampling subcommands.
#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Hilbert-space dimension.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = Method::Hs)]
    pub method: Method,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; output does not depend on this.
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 200_000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_Z_THRESHOLD)]
    pub z_threshold: f64,
}

#[derive(Debug, Args)]
pub struct EigdistArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Dimensions: a single value, a comma list, or an inclusive range `a-b`.
    #[arg(long, default_value = "2,3")]
    pub dim: DimList,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_Z_THRESHOLD)]
    pub z_threshold: f64,
    /// Comma-separated blocks to run (mean, covariance, overlap, purity,
    /// eigdist, equivalence, invariance, normalization, gue, rejection,
    /// entanglement).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<Block>,
    /// Table destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replace the primary sampler by a basis-biased one (failure-path check).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimList(pub Vec<usize>);

impl FromStr for DimList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid dimension `{t}`"));
        let mut dims = Vec::new();
        for part in s.split(',') {
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (parse(a)?, parse(b)?);
                    if a > b {
                        return Err(format!("empty dimension range `{part}`"));
                    }
                    dims.extend(a..=b);
                }
                None => dims.push(parse(part)?),
            }
        }
        Ok(Self(dims))
    }
}

impl fmt::Display for DimList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Validated run parameters for the sampling subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub dim: usize,
    pub n: usize,
    pub method: Method,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(common: &Common, n: usize) -> Result<Self, CliError> {
        let cfg = Self {
            dim: common.dim,
            n,
            method: common.method,
            seed: common.seed,
            workers: common.workers,
            out: common.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let min_dim = match self.method {
            Method::Gue | Method::Ginibre => 1,
            _ => 2,
        };
        if self.dim < min_dim {
            return Err(CliError::usage(format!("--dim must be at least {min_dim} for method {}", self.method.name())));
        }
        if self.method == Method::Bloch && self.dim != 2 {
            return Err(CliError::usage("method bloch requires --dim 2"));
        }
        if self.method == Method::Spectral && self.dim > SPECTRUM_MAX_DIM {
            return Err(CliError::usage(format!("method spectral requires --dim <= {SPECTRUM_MAX_DIM}")));
        }
        if self.n < 1 {
            return Err(CliError::usage("--n must be at least 1"));
        }
        if self.workers < 1 {
            return Err(CliError::usage("--workers must be at least 1"));
        }
        Ok(())
    }

    /// The density construction, or a usage error naming the subcommand.
    pub fn require_density(&self, allowed: &[Method], cmd: &str) -> Result<DensityMethod, CliError> {
        match self.method.density() {
            Some(m) if allowed.contains(&self.method) => Ok(m),
            _ => {
                let names: Vec<&str> = allowed.iter().map(|m| m.name()).collect();
                Err(CliError::usage(format!("{cmd} requires --method in {{{}}}", names.join(", "))))
            }
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration (exit 2).
    Usage(String),
    /// Reading or writing failed (exit 3).
    Io(std::io::Error),
    /// Computation failed (exit 1).
    Compute(hsdensity::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "I/O failure: {e}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Io(std::io::Error::other(format!("{other:?}"))),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<hsdensity::Error> for CliError {
    fn from(e: hsdensity::Error) -> Self {
        CliError::Compute(e)
    }
}
