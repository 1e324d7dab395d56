//! The full verification battery behind `verify`.
//!
//! Every block draws from its own substream domain, so selecting a subset of
//! blocks with `only` does not change the numbers reported by the rest.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_complex::Complex;

use super::{
    entangled_fraction, ks_one_sample, ks_two_sample, mc_covariance_check, mean_reports, purity_report,
    trace_square_values, unitary_invariance_test, Criterion, KsReport, MonteCarloReport, DEFAULT_ALPHA,
    DEFAULT_Z_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, purity, ComplexMatrix, DensityMatrix};
use crate::measure::{hs_normalization, lambda_max_cdf_d2, normalization_quadrature};
use crate::sampler::{draw_parallel, sample_gue, sample_spectrum_rejection_counted, DensityMethod, SPECTRUM_MAX_DIM};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_611;
/// Negative controls must reach p below this.
pub const CONTROL_P_MAX: f64 = 1e-6;
/// Relative tolerance of the normalization quadrature.
pub const QUADRATURE_RTOL: f64 = 1e-3;
pub const QUADRATURE_STEPS: usize = 400;
pub const GUE_DIMS: [usize; 3] = [2, 4, 8];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Mean,
    Covariance,
    Overlap,
    Purity,
    Eigdist,
    Equivalence,
    Invariance,
    Normalization,
    Gue,
    Rejection,
    Entanglement,
}

impl Block {
    pub const ALL: [Block; 11] = [
        Block::Mean,
        Block::Covariance,
        Block::Overlap,
        Block::Purity,
        Block::Eigdist,
        Block::Equivalence,
        Block::Invariance,
        Block::Normalization,
        Block::Gue,
        Block::Rejection,
        Block::Entanglement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Block::Mean => "mean",
            Block::Covariance => "covariance",
            Block::Overlap => "overlap",
            Block::Purity => "purity",
            Block::Eigdist => "eigdist",
            Block::Equivalence => "equivalence",
            Block::Invariance => "invariance",
            Block::Normalization => "normalization",
            Block::Gue => "gue",
            Block::Rejection => "rejection",
            Block::Entanglement => "entanglement",
        }
    }

    fn id(self) -> u32 {
        self as u32 + 1
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Block::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown verification block `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub n: usize,
    pub seed: u64,
    pub workers: usize,
    pub alpha: f64,
    pub z_threshold: f64,
    /// Empty means every block.
    pub only: Vec<Block>,
    /// Construction standing in for the Ginibre sampler; swapped only to
    /// exercise failure paths.
    pub primary: DensityMethod,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3],
            n: 100_000,
            seed: DEFAULT_SEED,
            workers: 1,
            alpha: DEFAULT_ALPHA,
            z_threshold: DEFAULT_Z_THRESHOLD,
            only: Vec::new(),
            primary: DensityMethod::Hs,
        }
    }
}

impl SuiteConfig {
    fn enabled(&self, b: Block) -> bool {
        self.only.is_empty() || self.only.contains(&b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::Domain("at least one dimension is required".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| !(2..=SPECTRUM_MAX_DIM).contains(&d)) {
            return Err(Error::UnsupportedDimension { d, reason: "verify supports 2 <= d <= 6" });
        }
        if self.n < super::INVARIANCE_MIN_SAMPLES {
            return Err(Error::TooFewSamples { needed: super::INVARIANCE_MIN_SAMPLES, got: self.n });
        }
        if self.workers == 0 {
            return Err(Error::Domain("workers must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) || self.z_threshold.is_nan() || self.z_threshold <= 0.0 {
            return Err(Error::Domain("alpha must be in (0, 1) and z-threshold positive".into()));
        }
        Ok(())
    }
}

/// Strength of the evidence behind a verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evidence {
    Z(f64),
    P(f64),
    /// Deterministic comparison (exact arithmetic or quadrature).
    Exact,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Z(z) => write!(f, "z={z:+.3}"),
            Evidence::P(p) => write!(f, "p={p:.3e}"),
            Evidence::Exact => f.write_str("exact"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub block: Block,
    pub d: Option<usize>,
    pub name: String,
    pub target: String,
    pub estimate: String,
    pub evidence: Evidence,
    pub pass: bool,
}

impl CheckOutcome {
    fn from_mc(block: Block, d: Option<usize>, r: &MonteCarloReport) -> Self {
        let target = match r.criterion {
            Criterion::Within(_) => format!("{:.6}", r.target),
            Criterion::Exceeds(_) => format!("> {:.6}", r.target),
        };
        Self {
            block,
            d,
            name: r.name.clone(),
            target,
            estimate: format!("{:.6} ± {:.2e}", r.estimate, r.standard_error),
            evidence: Evidence::Z(r.z_score),
            pass: r.pass,
        }
    }

    fn from_ks(block: Block, d: Option<usize>, name: String, target: &str, r: &KsReport, alpha: f64) -> Self {
        Self {
            block,
            d,
            name,
            target: target.to_string(),
            estimate: format!("D={:.5}", r.statistic),
            evidence: Evidence::P(r.p_value),
            pass: r.p_value > alpha,
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d.map_or_else(|| "-".to_string(), |d| d.to_string());
        write!(
            f,
            "{:<13} {:>2}  {:<40} {:<22} {:<26} {:<14} {}",
            self.block.name(),
            d,
            self.name,
            self.target,
            self.estimate,
            self.evidence.to_string(),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Samples from one construction with the statistics most tests need.
pub struct SampleSet {
    pub states: Vec<DensityMatrix<f64>>,
    pub lambda_max: Vec<f64>,
    pub purity: Vec<f64>,
}

/// Draws `n` states with their largest eigenvalue and purity.
pub fn draw_states(
    method: DensityMethod,
    d: usize,
    n: usize,
    seed: u64,
    domain: u32,
    workers: usize,
) -> Result<SampleSet> {
    let rows = draw_parallel(n, seed, domain, workers, |rng| {
        let rho = method.sample::<f64>(d, rng)?;
        let lmax = hermitian_eigen(rho.as_hermitian())?.max_eigenvalue();
        let p = purity(&rho);
        Ok((rho, lmax, p))
    })?;
    let mut set =
        SampleSet { states: Vec::with_capacity(n), lambda_max: Vec::with_capacity(n), purity: Vec::with_capacity(n) };
    for (rho, l, p) in rows {
        set.states.push(rho);
        set.lambda_max.push(l);
        set.purity.push(p);
    }
    Ok(set)
}

/// Substream domain for `(block, d, salt)`.
pub fn domain(block: Block, d: usize, salt: u32) -> u32 {
    (block.id() << 16) | ((d as u32 & 0xFF) << 8) | (salt & 0xFF)
}

fn method_salt(m: DensityMethod) -> u32 {
    match m {
        DensityMethod::Hs => 1,
        DensityMethod::Purified => 2,
        DensityMethod::Spectral => 3,
        DensityMethod::Bloch => 4,
        DensityMethod::FixedBasis => 5,
    }
}

/// Hadamard for `d = 2`, discrete Fourier transform otherwise.
pub fn reference_unitary(d: usize) -> ComplexMatrix<f64> {
    let s = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, |j, k| {
        if d == 2 {
            Complex::new(if j == 1 && k == 1 { -s } else { s }, 0.0)
        } else {
            Complex::from_polar(s, 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64)
        }
    })
}

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    cache: HashMap<(DensityMethod, usize), SampleSet>,
    out: Vec<CheckOutcome>,
}

impl<'a> Runner<'a> {
    /// Shared sample sets live in the equivalence block's domain so the
    /// moment and eigenvalue blocks see the same draws.
    fn samples(&mut self, method: DensityMethod, d: usize) -> Result<&SampleSet> {
        let cfg = self.cfg;
        if let std::collections::hash_map::Entry::Vacant(e) = self.cache.entry((method, d)) {
            // The stand-in construction reuses the primary's domain.
            let salt = if method == cfg.primary { 1 } else { method_salt(method) };
            let set = draw_states(method, d, cfg.n, cfg.seed, domain(Block::Equivalence, d, salt), cfg.workers)?;
            e.insert(set);
        }
        Ok(&self.cache[&(method, d)])
    }

    fn moments(&mut self, d: usize) -> Result<()> {
        let cfg = self.cfg;
        let z = cfg.z_threshold;
        let wanted = [Block::Mean, Block::Covariance, Block::Overlap, Block::Purity];
        if !wanted.iter().any(|&b| cfg.enabled(b)) {
            return Ok(());
        }
        let set = self.samples(cfg.primary, d)?;
        let mut rows = Vec::new();
        if cfg.enabled(Block::Mean) {
            for r in mean_reports(&set.states, z)? {
                rows.push(CheckOutcome::from_mc(Block::Mean, Some(d), &r));
            }
        }
        if cfg.enabled(Block::Covariance) || cfg.enabled(Block::Overlap) {
            let reports = mc_covariance_check(&set.states, d, z)?;
            if cfg.enabled(Block::Covariance) {
                rows.push(CheckOutcome::from_mc(Block::Covariance, Some(d), &reports[0]));
                rows.push(CheckOutcome::from_mc(Block::Covariance, Some(d), &reports[1]));
            }
            if cfg.enabled(Block::Overlap) {
                rows.push(CheckOutcome::from_mc(Block::Overlap, Some(d), &reports[2]));
            }
        }
        if cfg.enabled(Block::Purity) {
            rows.push(CheckOutcome::from_mc(Block::Purity, Some(d), &purity_report(&set.states, d, z)?));
        }
        self.out.extend(rows);
        Ok(())
    }

    fn eigdist(&mut self) -> Result<()> {
        let cfg = self.cfg;
        if !cfg.enabled(Block::Eigdist) || !cfg.dims.contains(&2) {
            return Ok(());
        }
        for method in [cfg.primary, DensityMethod::Spectral, DensityMethod::Bloch] {
            let alpha = cfg.alpha;
            let set = self.samples(method, 2)?;
            let r = ks_one_sample(&set.lambda_max, lambda_max_cdf_d2)?;
            let row = CheckOutcome::from_ks(
                Block::Eigdist,
                Some(2),
                format!("lambda_max[{method}] vs 8(x-1/2)^3"),
                &format!("p > {alpha}"),
                &r,
                alpha,
            );
            self.out.push(row);
        }
        Ok(())
    }

    fn equivalence(&mut self, d: usize) -> Result<()> {
        let cfg = self.cfg;
        if !cfg.enabled(Block::Equivalence) {
            return Ok(());
        }
        let mut methods = vec![cfg.primary, DensityMethod::Purified, DensityMethod::Spectral];
        if d == 2 {
            methods.push(DensityMethod::Bloch);
        }
        for m in &methods {
            self.samples(*m, d)?;
        }
        let alpha = cfg.alpha;
        for (i, a) in methods.iter().enumerate() {
            for b in &methods[i + 1..] {
                let (sa, sb) = (&self.cache[&(*a, d)], &self.cache[&(*b, d)]);
                for (stat, xa, xb) in
                    [("lambda_max", &sa.lambda_max, &sb.lambda_max), ("purity", &sa.purity, &sb.purity)]
                {
                    let r = ks_two_sample(xa, xb)?;
                    let row = CheckOutcome::from_ks(
                        Block::Equivalence,
                        Some(d),
                        format!("{stat}: {a} vs {b}"),
                        &format!("p > {alpha}"),
                        &r,
                        alpha,
                    );
                    self.out.push(row);
                }
            }
        }
        Ok(())
    }

    fn invariance(&mut self, d: usize) -> Result<()> {
        let cfg = self.cfg;
        if !cfg.enabled(Block::Invariance) {
            return Ok(());
        }
        let u0 = reference_unitary(d);
        let label = if d == 2 { "Hadamard" } else { "DFT" };
        let r = unitary_invariance_test(
            &(cfg.primary, d),
            &u0,
            cfg.n,
            cfg.seed,
            domain(Block::Invariance, d, 0),
            cfg.workers,
        )?;
        self.out.push(CheckOutcome::from_ks(
            Block::Invariance,
            Some(d),
            format!("<e1|rho|e1> vs {label}-conjugated"),
            &format!("p > {}", cfg.alpha),
            &r,
            cfg.alpha,
        ));
        let control = unitary_invariance_test(
            &(DensityMethod::FixedBasis, d),
            &u0,
            cfg.n,
            cfg.seed,
            domain(Block::Invariance, d, 2),
            cfg.workers,
        )?;
        self.out.push(CheckOutcome {
            block: Block::Invariance,
            d: Some(d),
            name: "negative control: fixed-basis sampler".into(),
            target: format!("p < {CONTROL_P_MAX:e}"),
            estimate: format!("D={:.5}", control.statistic),
            evidence: Evidence::P(control.p_value),
            pass: control.p_value < CONTROL_P_MAX,
        });
        Ok(())
    }

    fn normalization(&mut self) -> Result<()> {
        if !self.cfg.enabled(Block::Normalization) {
            return Ok(());
        }
        for (d, expected) in [(2usize, 3u64), (3, 1680), (4, 378_378_000)] {
            let v = hs_normalization(d)?;
            self.out.push(CheckOutcome {
                block: Block::Normalization,
                d: Some(d),
                name: "N(d) exact".into(),
                target: expected.to_string(),
                estimate: v.to_string(),
                evidence: Evidence::Exact,
                pass: v == BigUint::from(expected),
            });
        }
        for d in [2, 3] {
            let q = normalization_quadrature(d, QUADRATURE_STEPS)?;
            self.out.push(CheckOutcome {
                block: Block::Normalization,
                d: Some(d),
                name: format!("simplex integral of density (step 1/{QUADRATURE_STEPS})"),
                target: format!("1 ± {QUADRATURE_RTOL}"),
                estimate: format!("{q:.8}"),
                evidence: Evidence::Exact,
                pass: (q - 1.0).abs() <= QUADRATURE_RTOL,
            });
        }
        Ok(())
    }

    fn gue(&mut self) -> Result<()> {
        let cfg = self.cfg;
        if !cfg.enabled(Block::Gue) {
            return Ok(());
        }
        for d in GUE_DIMS {
            let xs =
                draw_parallel(cfg.n, cfg.seed, domain(Block::Gue, d, 0), cfg.workers, |rng| sample_gue::<f64>(d, rng))?;
            let r = MonteCarloReport::from_mean("E tr(X^2)", &trace_square_values(&xs), d as f64, cfg.z_threshold)?;
            self.out.push(CheckOutcome::from_mc(Block::Gue, Some(d), &r));
        }
        Ok(())
    }

    fn rejection(&mut self) -> Result<()> {
        let cfg = self.cfg;
        if !cfg.enabled(Block::Rejection) {
            return Ok(());
        }
        let r = acceptance_rate_report(cfg.n, cfg.seed, domain(Block::Rejection, 2, 0), cfg.workers, cfg.z_threshold)?;
        self.out.push(CheckOutcome::from_mc(Block::Rejection, Some(2), &r));
        Ok(())
    }

    fn entanglement(&mut self) -> Result<()> {
        let cfg = self.cfg;
        if !cfg.enabled(Block::Entanglement) {
            return Ok(());
        }
        let r =
            entangled_fraction(2, 2, cfg.n, cfg.seed, domain(Block::Entanglement, 4, 0), cfg.workers, cfg.z_threshold)?;
        self.out.push(CheckOutcome::from_mc(Block::Entanglement, Some(4), &r));
        Ok(())
    }
}

/// Acceptance rate of the `d = 2` spectrum sampler against 1/3.
///
/// Each proposal is an independent Bernoulli trial, so the rate over all
/// proposals has the binomial standard error.
pub fn acceptance_rate_report(
    n: usize,
    seed: u64,
    domain: u32,
    workers: usize,
    z_threshold: f64,
) -> Result<MonteCarloReport> {
    let attempts = draw_parallel(n, seed, domain, workers, |rng| {
        sample_spectrum_rejection_counted::<f64>(2, rng).map(|r| r.attempts)
    })?;
    let total: u64 = attempts.iter().sum();
    let p = n as f64 / total as f64;
    let se = (p * (1.0 - p) / total as f64).sqrt();
    Ok(MonteCarloReport::new("acceptance rate (d=2)", n, p, se, 1.0 / 3.0, Criterion::Within(z_threshold)))
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    cfg.validate()?;
    let mut runner = Runner { cfg, cache: HashMap::new(), out: Vec::new() };
    let mut dims = cfg.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    for &d in &dims {
        runner.moments(d)?;
    }
    runner.eigdist()?;
    for &d in &dims {
        runner.equivalence(d)?;
        // Sets for d are no longer needed.
        runner.cache.retain(|&(_, dd), _| dd != d);
    }
    for &d in &dims {
        runner.invariance(d)?;
    }
    runner.normalization()?;
    runner.gue()?;
    runner.rejection()?;
    runner.entanglement()?;
    Ok(runner.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_names_round_trip() {
        for b in Block::ALL {
            assert_eq!(b.name().parse::<Block>().unwrap(), b);
        }
        assert!("nope".parse::<Block>().is_err());
    }

    #[test]
    fn reference_unitaries_are_unitary() {
        for d in 2..=6 {
            assert!(reference_unitary(d).unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn invalid_configs() {
        let cfg = SuiteConfig { dims: vec![7], ..Default::default() };
        assert!(run_suite(&cfg).is_err());
        let cfg = SuiteConfig { n: 10, ..Default::default() };
        assert!(run_suite(&cfg).is_err());
        let cfg = SuiteConfig { dims: vec![], ..Default::default() };
        assert!(run_suite(&cfg).is_err());
    }

    #[test]
    fn only_filter_restricts_blocks() {
        let cfg = SuiteConfig { dims: vec![2], n: 2000, only: vec![Block::Eigdist], ..Default::default() };
        let out = run_suite(&cfg).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|o| o.block == Block::Eigdist));
    }

    #[test]
    fn injected_fault_is_detected() {
        let cfg = SuiteConfig {
            dims: vec![2],
            n: 5000,
            only: vec![Block::Mean, Block::Invariance],
            primary: DensityMethod::FixedBasis,
            ..Default::default()
        };
        let out = run_suite(&cfg).unwrap();
        assert!(out.iter().any(|o| !o.pass));
    }
}
