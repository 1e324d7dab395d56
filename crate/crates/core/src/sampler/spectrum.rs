//! Rejection sampling of the eigenvalue vector of a uniformly random density matrix.
//!
//! Proposals are flat on the probability simplex. A proposal `x` is accepted
//! with probability `V(x) / V_max(d)` where `V` is the squared Vandermonde
//! product and `V_max(d)` its maximum over the simplex.

use crate::error::{Error, Result};
use crate::measure::vandermonde_sq;
use crate::scalar::Real;

use super::RngStream;

pub const SPECTRUM_MIN_DIM: usize = 2;
pub const SPECTRUM_MAX_DIM: usize = 6;
pub const MAX_ATTEMPTS: u64 = 10_000_000;

/// Maximum of `prod_{i<j} (x_i - x_j)^2` over the probability simplex, `d = 2..=6`.
///
/// The maximizer has one coordinate at zero and the rest at the zeros of the
/// generalized Laguerre polynomial `L_{d-1}^{(1)}`, rescaled to unit sum.
/// Values carry a relative margin of `1e-12` over the 40-digit reference.
const VANDERMONDE_MAX: [f64; 5] = [
    1.0,
    0.009259259259259259 * (1.0 + 1e-12),
    3.348979766803841e-7 * (1.0 + 1e-12),
    2.278125e-14 * (1.0 + 1e-12),
    1.691_598_711_497_161e-24 * (1.0 + 1e-12),
];

pub fn vandermonde_envelope(d: usize) -> Result<f64> {
    if !(SPECTRUM_MIN_DIM..=SPECTRUM_MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension { d, reason: "spectrum sampler supports 2 <= d <= 6" });
    }
    Ok(VANDERMONDE_MAX[d - 2])
}

/// Point of the ordered probability simplex: nonnegative, unit sum, nonincreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumVector<T> {
    values: Vec<T>,
}

impl<T: Real> SpectrumVector<T> {
    /// Sorts `values` into nonincreasing order and validates the simplex constraints.
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < T::zero() || *v > T::one()) {
            return Err(Error::InvalidSpectrum("entries must lie in [0, 1]".into()));
        }
        let sum: T = values.iter().copied().sum();
        if (sum - T::one()).abs() > T::lit(T::TRACE_TOL) {
            return Err(Error::InvalidSpectrum(format!("entries sum to {sum}, not 1")));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

/// Outcome of one rejection run, with the number of proposals it took.
#[derive(Clone, Debug)]
pub struct RejectionDraw<T> {
    pub spectrum: SpectrumVector<T>,
    pub attempts: u64,
}

/// Flat draw on the simplex from normalized unit exponentials (unsorted).
pub fn sample_simplex_uniform(d: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut x: Vec<f64> = (0..d).map(|_| rng.exponential()).collect();
    let s: f64 = x.iter().sum();
    for v in x.iter_mut() {
        *v /= s;
    }
    x
}

pub fn sample_spectrum_rejection_counted<T: Real>(d: usize, rng: &mut RngStream) -> Result<RejectionDraw<T>> {
    let envelope = vandermonde_envelope(d)?;
    for attempt in 1..=MAX_ATTEMPTS {
        let x = sample_simplex_uniform(d, rng);
        let u = rng.uniform();
        if u * envelope < vandermonde_sq(&x) {
            let mut values: Vec<T> = x.into_iter().map(T::lit).collect();
            // Unit sum survives the cast only up to rounding; fold the residue into the largest entry.
            values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            let residue = T::one() - values.iter().copied().sum::<T>();
            values[0] += residue;
            return Ok(RejectionDraw { spectrum: SpectrumVector::new(values)?, attempts: attempt });
        }
    }
    Err(Error::AttemptsExceeded { attempts: MAX_ATTEMPTS })
}

/// Eigenvalues of a uniformly random density matrix, sorted nonincreasing.
pub fn sample_spectrum_rejection<T: Real>(d: usize, rng: &mut RngStream) -> Result<SpectrumVector<T>> {
    sample_spectrum_rejection_counted(d, rng).map(|r| r.spectrum)
}
