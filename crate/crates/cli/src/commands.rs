use std::io::Write;
use std::process::ExitCode;

use hsdensity::linalg::lambda_max;
use hsdensity::measure::lambda_max_pdf_d2;
use hsdensity::sampler::{draw_parallel, sample_ginibre, sample_gue, DensityMethod};
use hsdensity::stats::suite::{run_suite, SuiteConfig};
use hsdensity::stats::{mc_covariance_check, mean_reports, purity_report, Criterion, MonteCarloReport};
use hsdensity::ComplexMatrix;
use serde::Serialize;

use crate::config::{
    Cli, CliError, Command, EigdistArgs, Format, Method, MomentsArgs, RunConfig, SampleArgs, VerifyArgs,
};
use crate::output;

/// Below this many draws z-scores lean on a shaky normal approximation.
pub const LOW_N_WARNING: usize = 1000;
/// The covariance estimators need at least this many draws.
const COVARIANCE_MIN_N: usize = 100;

const SAMPLE_COMMAND: u32 = 1;
const MOMENTS_COMMAND: u32 = 2;
const EIGDIST_COMMAND: u32 = 3;

/// Substream domain of a subcommand's draws; disjoint from the suite's.
fn cli_domain(command: u32, cfg: &RunConfig) -> u32 {
    (command << 24) | ((cfg.dim as u32 & 0xFFFF) << 8) | cfg.method.id()
}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Sample(a) => cmd_sample(&a),
        Command::Moments(a) => cmd_moments(&a),
        Command::Eigdist(a) => cmd_eigdist(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn draw_density(cfg: &RunConfig, m: DensityMethod, command: u32) -> Result<Vec<hsdensity::DensityMatrix>, CliError> {
    let d = cfg.dim;
    Ok(draw_parallel(cfg.n, cfg.seed, cli_domain(command, cfg), cfg.workers, |rng| m.sample::<f64>(d, rng))?)
}

fn cmd_sample(args: &SampleArgs) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::new(&args.common, args.n)?;
    let d = cfg.dim;
    let domain = cli_domain(SAMPLE_COMMAND, &cfg);
    let matrices: Vec<ComplexMatrix> = match cfg.method {
        Method::Ginibre => draw_parallel(cfg.n, cfg.seed, domain, cfg.workers, |rng| sample_ginibre::<f64>(d, rng))?,
        Method::Gue => draw_parallel(cfg.n, cfg.seed, domain, cfg.workers, |rng| {
            sample_gue::<f64>(d, rng).map(|h| h.into_matrix())
        })?,
        m => {
            let method = m.density().expect("density method");
            draw_density(&cfg, method, SAMPLE_COMMAND)?.into_iter().map(|r| r.into_hermitian().into_matrix()).collect()
        }
    };
    let mut w = output::open(cfg.out.as_deref())?;
    match args.format {
        Format::Json => output::write_ndjson(&mut *w, &matrices)?,
        Format::Csv => output::write_csv(&mut *w, &matrices)?,
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct ReportRecord {
    name: String,
    n: usize,
    estimate: f64,
    standard_error: f64,
    target: f64,
    /// Null when infinite (zero standard error with a nonzero gap).
    z_score: Option<f64>,
    criterion: &'static str,
    threshold: f64,
    pass: bool,
}

impl From<&MonteCarloReport> for ReportRecord {
    fn from(r: &MonteCarloReport) -> Self {
        let (criterion, threshold) = match r.criterion {
            Criterion::Within(t) => ("within", t),
            Criterion::Exceeds(t) => ("exceeds", t),
        };
        Self {
            name: r.name.clone(),
            n: r.n,
            estimate: r.estimate,
            standard_error: r.standard_error,
            target: r.target,
            z_score: r.z_score.is_finite().then_some(r.z_score),
            criterion,
            threshold,
            pass: r.pass,
        }
    }
}

#[derive(Debug, Serialize)]
struct MomentsReport {
    d: usize,
    n: usize,
    method: &'static str,
    seed: u64,
    z_threshold: f64,
    warning: Option<String>,
    reports: Vec<ReportRecord>,
    pass: bool,
}

fn cmd_moments(args: &MomentsArgs) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::new(&args.common, args.n)?;
    let method = cfg.require_density(&[Method::Hs, Method::Purified, Method::Spectral], "moments")?;
    if args.z_threshold.is_nan() || args.z_threshold <= 0.0 {
        return Err(CliError::usage("--z-threshold must be positive"));
    }
    let z = args.z_threshold;
    let states = draw_density(&cfg, method, MOMENTS_COMMAND)?;

    let mut reports = Vec::new();
    if cfg.n >= 2 {
        reports.extend(mean_reports(&states, z)?);
    }
    if cfg.n >= COVARIANCE_MIN_N {
        reports.extend(mc_covariance_check(&states, cfg.dim, z)?);
    }
    if cfg.n >= 2 {
        reports.push(purity_report(&states, cfg.dim, z)?);
    }
    let warning = (cfg.n < LOW_N_WARNING).then(|| {
        let mut w = format!("n = {} is below {LOW_N_WARNING}; z-scores are unreliable", cfg.n);
        if cfg.n < COVARIANCE_MIN_N {
            w.push_str(&format!("; second-moment reports need n >= {COVARIANCE_MIN_N} and were skipped"));
        }
        w
    });
    let pass = !reports.is_empty() && reports.iter().all(|r| r.pass);
    let report = MomentsReport {
        d: cfg.dim,
        n: cfg.n,
        method: cfg.method.name(),
        seed: cfg.seed,
        z_threshold: z,
        warning,
        reports: reports.iter().map(ReportRecord::from).collect(),
        pass,
    };
    let mut w = output::open(cfg.out.as_deref())?;
    serde_json::to_writer_pretty(&mut *w, &report)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Edges `1/d = e_0 < ... < e_bins = 1`; adjacent bins share their edge.
pub fn histogram_edges(d: usize, bins: usize) -> Vec<f64> {
    let lo = 1.0 / d as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|k| lo + (1.0 - lo) * k as f64 / bins as f64).collect();
    edges[0] = lo;
    edges[bins] = 1.0;
    edges
}

/// Counts per bin; values beyond either end (rounding) land in the end bins.
pub fn histogram_counts(edges: &[f64], values: &[f64]) -> Vec<u64> {
    let bins = edges.len() - 1;
    let mut counts = vec![0u64; bins];
    for &x in values {
        let k = edges.partition_point(|&e| e <= x).saturating_sub(1).min(bins - 1);
        counts[k] += 1;
    }
    counts
}

fn cmd_eigdist(args: &EigdistArgs) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::new(&args.common, args.n)?;
    let method = cfg.require_density(&[Method::Hs, Method::Purified, Method::Spectral, Method::Bloch], "eigdist")?;
    if args.bins < 2 {
        return Err(CliError::usage("--bins must be at least 2"));
    }
    let d = cfg.dim;
    let values = draw_parallel(cfg.n, cfg.seed, cli_domain(EIGDIST_COMMAND, &cfg), cfg.workers, |rng| {
        lambda_max(&method.sample::<f64>(d, rng)?)
    })?;
    let edges = histogram_edges(d, args.bins);
    let counts = histogram_counts(&edges, &values);

    let mut w = output::open(cfg.out.as_deref())?;
    {
        let mut out = csv::Writer::from_writer(&mut *w);
        let mut header = vec!["bin_left", "bin_right", "count", "density"];
        if d == 2 {
            header.push("analytic");
        }
        out.write_record(&header)?;
        for (k, &count) in counts.iter().enumerate() {
            let (left, right) = (edges[k], edges[k + 1]);
            let density = count as f64 / (cfg.n as f64 * (right - left));
            let mut row = vec![left.to_string(), right.to_string(), count.to_string(), density.to_string()];
            if d == 2 {
                row.push(lambda_max_pdf_d2(0.5 * (left + right))?.to_string());
            }
            out.write_record(&row)?;
        }
        out.flush()?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let cfg = SuiteConfig {
        dims: args.dim.0.clone(),
        n: args.n,
        seed: args.seed,
        workers: args.workers,
        alpha: args.alpha,
        z_threshold: args.z_threshold,
        only: args.only.clone(),
        primary: if args.inject_fault { DensityMethod::FixedBasis } else { DensityMethod::Hs },
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let rows = run_suite(&cfg)?;

    let mut w = output::open(args.out.as_deref())?;
    writeln!(
        w,
        "{:<13} {:>2}  {:<40} {:<22} {:<26} {:<14} result",
        "block", "d", "statistic", "target", "estimate", "z or p"
    )?;
    for row in &rows {
        writeln!(w, "{row}")?;
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    writeln!(w, "{passed}/{} checks passed (seed {}, n {})", rows.len(), cfg.seed, cfg.n)?;
    w.flush()?;
    Ok(if passed == rows.len() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_partition_the_lambda_max_range() {
        for (d, bins) in [(2, 50), (3, 7), (4, 2)] {
            let e = histogram_edges(d, bins);
            assert_eq!(e.len(), bins + 1);
            assert_eq!(e[0], 1.0 / d as f64);
            assert_eq!(e[bins], 1.0);
            assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn counts_cover_every_value() {
        let e = histogram_edges(2, 4);
        let values = [0.5 - 1e-17, 0.5, 0.62, 0.625, 0.999, 1.0, 1.0 + 1e-15];
        let c = histogram_counts(&e, &values);
        assert_eq!(c.iter().sum::<u64>(), values.len() as u64);
        assert_eq!(c, vec![3, 1, 0, 3]);
    }
}
