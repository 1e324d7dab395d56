//! Partial-transpose entanglement test on bipartite states.

use super::montecarlo::{fraction_report, Criterion, MonteCarloReport};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, partial_transpose_right, DensityMatrix};
use crate::sampler::{draw_parallel, DensityMethod};
use crate::scalar::Real;

/// Partial-transpose eigenvalues in `[-PPT_TOL, 0)` count as zero.
pub const PPT_TOL: f64 = 1e-8;

/// Minimum eigenvalue of the partial transpose over the right factor.
pub fn partial_transpose_min_eigenvalue<T: Real>(rho: &DensityMatrix<T>, dim_a: usize, dim_b: usize) -> Result<T> {
    let pt = partial_transpose_right(rho.as_hermitian(), dim_a, dim_b)?;
    Ok(hermitian_eigen(&pt)?.min_eigenvalue())
}

/// `true` when the partial transpose has an eigenvalue below `-PPT_TOL`.
///
/// Decisive for `2 x 2` and `2 x 3`; for larger systems a `false` verdict
/// does not certify separability.
pub fn ppt_is_entangled<T: Real>(rho: &DensityMatrix<T>, dim_a: usize, dim_b: usize) -> Result<bool> {
    if dim_a * dim_b != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), actual: dim_a * dim_b });
    }
    Ok(partial_transpose_min_eigenvalue(rho, dim_a, dim_b)?.to_f64_lossy() < -PPT_TOL)
}

/// Fraction of uniformly random two-qubit states flagged entangled, tested
/// one-sided against 1/2.
pub fn entangled_fraction(
    dim_a: usize,
    dim_b: usize,
    n: usize,
    seed: u64,
    domain: u32,
    workers: usize,
    z_threshold: f64,
) -> Result<MonteCarloReport> {
    if (dim_a, dim_b) != (2, 2) {
        return Err(Error::UnsupportedDimension {
            d: dim_a * dim_b,
            reason: "entangled fraction computed for 2 x 2 only",
        });
    }
    if n < 1000 {
        return Err(Error::TooFewSamples { needed: 1000, got: n });
    }
    let flags = draw_parallel(n, seed, domain, workers, |rng| {
        let rho = DensityMethod::Hs.sample::<f64>(4, rng)?;
        ppt_is_entangled(&rho, 2, 2)
    })?;
    fraction_report("entangled fraction (2x2)", &flags, 0.5, Criterion::Exceeds(z_threshold))
}
