//! Monte Carlo estimators with standard errors and z-score verdicts.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{purity, ComplexMatrix, DensityMatrix, HermitianMatrix};
use crate::measure::EnsembleMoments;
use crate::scalar::Real;

pub const DEFAULT_Z_THRESHOLD: f64 = 5.0;

/// How a z-score is turned into a verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Criterion {
    /// `|z| <= threshold`: estimate consistent with target.
    Within(f64),
    /// `z >= threshold`: estimate exceeds target significantly.
    Exceeds(f64),
}

impl Criterion {
    pub fn threshold(self) -> f64 {
        match self {
            Self::Within(t) | Self::Exceeds(t) => t,
        }
    }

    fn accepts(self, z: f64) -> bool {
        match self {
            Self::Within(t) => z.abs() <= t,
            Self::Exceeds(t) => z >= t,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub name: String,
    pub n: usize,
    pub estimate: f64,
    pub standard_error: f64,
    pub target: f64,
    /// `(estimate - target) / standard_error`. With zero standard error this
    /// is 0 on exact agreement and signed infinity otherwise.
    pub z_score: f64,
    pub criterion: Criterion,
    pub pass: bool,
}

impl MonteCarloReport {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        estimate: f64,
        standard_error: f64,
        target: f64,
        criterion: Criterion,
    ) -> Self {
        let z_score = z_score(estimate, standard_error, target);
        Self {
            name: name.into(),
            n,
            estimate,
            standard_error,
            target,
            z_score,
            criterion,
            pass: criterion.accepts(z_score),
        }
    }

    /// Sample mean of `values` tested against `target`.
    pub fn from_mean(name: impl Into<String>, values: &[f64], target: f64, threshold: f64) -> Result<Self> {
        let acc = MeanAccumulator::from_slice(values);
        if acc.n < 2 {
            return Err(Error::TooFewSamples { needed: 2, got: acc.n });
        }
        Ok(Self::new(name, acc.n, acc.mean(), acc.standard_error(), target, Criterion::Within(threshold)))
    }
}

pub fn z_score(estimate: f64, se: f64, target: f64) -> f64 {
    let diff = estimate - target;
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Streaming mean and variance (Welford updates, Chan merges). Merging
/// partial accumulators reproduces the single-pass result up to rounding.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MeanAccumulator {
    pub n: usize,
    mean: f64,
    m2: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let (na, nb, nt) = (self.n as f64, other.n as f64, n as f64);
        let delta = other.mean - self.mean;
        Self { n, mean: self.mean + delta * nb / nt, m2: self.m2 + other.m2 + delta * delta * na * nb / nt }
    }

    pub fn from_slice(values: &[f64]) -> Self {
        let mut acc = Self::default();
        for &v in values {
            acc.push(v);
        }
        acc
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.mean
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        (self.m2 / (self.n as f64 - 1.0)).max(0.0)
    }

    pub fn standard_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Entrywise standard errors of a sample-mean matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryErrors {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// Entrywise sample mean of density matrices with standard errors for real
/// and imaginary parts.
pub fn mc_mean_matrix<T: Real>(samples: &[DensityMatrix<T>]) -> Result<(HermitianMatrix<T>, EntryErrors)> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let d = samples[0].dim();
    if let Some(bad) = samples.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: bad.dim() });
    }
    let mut re = vec![MeanAccumulator::default(); d * d];
    let mut im = vec![MeanAccumulator::default(); d * d];
    for s in samples {
        for (k, z) in s.as_matrix().as_slice().iter().enumerate() {
            re[k].push(z.re.to_f64_lossy());
            im[k].push(z.im.to_f64_lossy());
        }
    }
    let mean = ComplexMatrix::from_fn(d, |i, j| {
        let k = i * d + j;
        Complex::new(T::lit(re[k].mean()), T::lit(im[k].mean()))
    });
    let grid = |acc: &[MeanAccumulator]| -> Vec<Vec<f64>> {
        acc.chunks(d).map(|row| row.iter().map(MeanAccumulator::standard_error).collect()).collect()
    };
    Ok((HermitianMatrix::symmetrized(&mean), EntryErrors { re: grid(&re), im: grid(&im) }))
}

/// One report per independent real coordinate of the mean: every diagonal
/// entry plus real and imaginary parts above the diagonal.
pub fn mean_reports<T: Real>(samples: &[DensityMatrix<T>], threshold: f64) -> Result<Vec<MonteCarloReport>> {
    let (mean, se) = mc_mean_matrix(samples)?;
    let d = mean.dim();
    let target = 1.0 / d as f64;
    let n = samples.len();
    let mut out = Vec::new();
    for i in 0..d {
        for j in i..d {
            let t = if i == j { target } else { 0.0 };
            let z = mean[(i, j)];
            out.push(MonteCarloReport::new(
                format!("mean re[{}][{}]", i + 1, j + 1),
                n,
                z.re.to_f64_lossy(),
                se.re[i][j],
                t,
                Criterion::Within(threshold),
            ));
            if i != j {
                out.push(MonteCarloReport::new(
                    format!("mean im[{}][{}]", i + 1, j + 1),
                    n,
                    z.im.to_f64_lossy(),
                    se.im[i][j],
                    0.0,
                    Criterion::Within(threshold),
                ));
            }
        }
    }
    Ok(out)
}

/// Second-moment checks of the covariance operator:
/// `Var(ρ_11)`, `E|ρ_12|^2` and `E ρ_11^2`.
pub fn mc_covariance_check<T: Real>(
    samples: &[DensityMatrix<T>],
    d: usize,
    threshold: f64,
) -> Result<Vec<MonteCarloReport>> {
    const MIN: usize = 100;
    let n = samples.len();
    if n < MIN {
        return Err(Error::TooFewSamples { needed: MIN, got: n });
    }
    if let Some(bad) = samples.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: bad.dim() });
    }
    let moments = EnsembleMoments::<f64>::for_dim(d)?;

    let diag: Vec<f64> = samples.iter().map(|s| s[(0, 0)].re.to_f64_lossy()).collect();
    let acc = MeanAccumulator::from_slice(&diag);
    let mean = acc.mean();
    let var = acc.variance();
    // SE of the sample variance from the fourth central moment.
    let m4 = diag.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
    let var_se = ((m4 - var * var) / n as f64).max(0.0).sqrt();
    let var_report =
        MonteCarloReport::new("Var(rho_11)", n, var, var_se, moments.diagonal_variance(), Criterion::Within(threshold));

    let off: Vec<f64> = samples.iter().map(|s| s[(0, 1)].norm_sqr().to_f64_lossy()).collect();
    let off_report = MonteCarloReport::from_mean("E|rho_12|^2", &off, moments.off_diagonal_second_moment(), threshold)?;

    let sq: Vec<f64> = diag.iter().map(|x| x * x).collect();
    let overlap_report = MonteCarloReport::from_mean("E<e1|rho|e1>^2", &sq, moments.overlap_sq, threshold)?;

    Ok(vec![var_report, off_report, overlap_report])
}

pub fn purity_report<T: Real>(samples: &[DensityMatrix<T>], d: usize, threshold: f64) -> Result<MonteCarloReport> {
    let values: Vec<f64> = samples.iter().map(|s| purity(s).to_f64_lossy()).collect();
    let target = crate::measure::expected_purity::<f64>(d)?;
    MonteCarloReport::from_mean("E tr(rho^2)", &values, target, threshold)
}

/// Mean of `tr X^2` over a batch of matrices.
pub fn trace_square_values<T: Real>(samples: &[HermitianMatrix<T>]) -> Vec<f64> {
    samples
        .iter()
        .map(|x| x.as_matrix().as_slice().iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).to_f64_lossy())
        .collect()
}

/// Fraction of `true` flags with a binomial standard error.
pub fn fraction_report(
    name: impl Into<String>,
    flags: &[bool],
    target: f64,
    criterion: Criterion,
) -> Result<MonteCarloReport> {
    let n = flags.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let hits = flags.iter().filter(|&&b| b).count();
    let p = hits as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    Ok(MonteCarloReport::new(name, n, p, se, target, criterion))
}
