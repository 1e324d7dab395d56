//! Estimators and hypothesis tests confronting the samplers with closed forms.

mod ks;
mod montecarlo;
mod ppt;
pub mod suite;

pub use ks::{kolmogorov_sf, ks_one_sample, ks_two_sample, KsReport, DEFAULT_ALPHA, KS_MIN_SAMPLES};
pub use montecarlo::{
    fraction_report, mc_covariance_check, mc_mean_matrix, mean_reports, purity_report, trace_square_values, z_score,
    Criterion, EntryErrors, MeanAccumulator, MonteCarloReport, DEFAULT_Z_THRESHOLD,
};
pub use ppt::{entangled_fraction, partial_transpose_min_eigenvalue, ppt_is_entangled, PPT_TOL};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::sampler::{draw_parallel, DensitySampler};
use crate::scalar::Real;

pub const INVARIANCE_MIN_SAMPLES: usize = 1000;

/// `<e_1| rho |e_1>`.
pub fn first_diagonal<T: Real>(rho: &DensityMatrix<T>) -> f64 {
    rho[(0, 0)].re.to_f64_lossy()
}

/// Two-sample KS between `<e1|rho|e1>` and `<e1|U0 rho U0^H|e1>` over
/// independent draws from `sampler`. Draws come from substream domains
/// `domain` and `domain + 1`.
pub fn unitary_invariance_test<T: Real, S: DensitySampler<T>>(
    sampler: &S,
    u0: &ComplexMatrix<T>,
    n: usize,
    seed: u64,
    domain: u32,
    workers: usize,
) -> Result<KsReport> {
    if u0.dim() != sampler.dim() {
        return Err(Error::DimensionMismatch { expected: sampler.dim(), actual: u0.dim() });
    }
    if !u0.is_unitary() {
        return Err(Error::NotUnitary { deviation: u0.unitarity_defect().to_f64_lossy() });
    }
    if n < INVARIANCE_MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: INVARIANCE_MIN_SAMPLES, got: n });
    }
    let plain = draw_parallel(n, seed, domain, workers, |rng| sampler.draw(rng).map(|r| first_diagonal(&r)))?;
    let rotated = draw_parallel(n, seed, domain + 1, workers, |rng| {
        let rho = sampler.draw(rng)?;
        Ok(first_diagonal(&rho.conjugate_by(u0)?))
    })?;
    ks_two_sample(&plain, &rotated)
}
