//! Seedable random streams and every sampler built on them.

mod density;
mod ensembles;
mod rng;
mod spectrum;

pub use density::{
    sample_bloch_oracle, sample_density_fixed_basis, sample_density_hs, sample_density_purified,
    sample_density_spectral,
};
pub use ensembles::{sample_ginibre, sample_gue, sample_haar_unitary, sample_pure_uniform};
pub use rng::RngStream;
pub use spectrum::{
    sample_simplex_uniform, sample_spectrum_rejection, sample_spectrum_rejection_counted, vandermonde_envelope,
    RejectionDraw, SpectrumVector, MAX_ATTEMPTS, SPECTRUM_MAX_DIM, SPECTRUM_MIN_DIM,
};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::scalar::Real;

/// Unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Divides by the Euclidean norm; fails on a zero or non-finite vector.
    pub fn normalized(mut v: Vec<Complex<T>>) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero() && norm.is_finite()) {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        for z in v.iter_mut() {
            *z /= norm;
        }
        Ok(Self { amplitudes: v })
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// Density-matrix constructions selectable at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DensityMethod {
    /// Normalized Ginibre Gram matrix.
    Hs,
    /// Partial trace of a uniform pure state on the doubled space.
    Purified,
    /// Rejection-sampled spectrum in a Haar eigenbasis.
    Spectral,
    /// Uniform Bloch ball, `d = 2` only.
    Bloch,
    /// Non-invariant control: HS spectrum on the standard-basis diagonal.
    FixedBasis,
}

impl DensityMethod {
    pub fn sample<T: Real>(self, d: usize, rng: &mut RngStream) -> Result<DensityMatrix<T>> {
        match self {
            Self::Hs => sample_density_hs(d, rng),
            Self::Purified => sample_density_purified(d, rng),
            Self::Spectral => sample_density_spectral(d, rng),
            Self::Bloch => {
                if d != 2 {
                    return Err(Error::UnsupportedDimension { d, reason: "Bloch oracle requires d = 2" });
                }
                Ok(sample_bloch_oracle(rng))
            }
            Self::FixedBasis => sample_density_fixed_basis(d, rng),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Hs => "hs",
            Self::Purified => "purified",
            Self::Spectral => "spectral",
            Self::Bloch => "bloch",
            Self::FixedBasis => "fixed-basis",
        }
    }
}

impl fmt::Display for DensityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DensityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hs" => Ok(Self::Hs),
            "purified" => Ok(Self::Purified),
            "spectral" => Ok(Self::Spectral),
            "bloch" => Ok(Self::Bloch),
            "fixed-basis" => Ok(Self::FixedBasis),
            other => Err(Error::Domain(format!("unknown density method `{other}`"))),
        }
    }
}

/// A source of density matrices, for tests that take the sampler as a parameter.
pub trait DensitySampler<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn draw(&self, rng: &mut RngStream) -> Result<DensityMatrix<T>>;
}

impl<T: Real> DensitySampler<T> for (DensityMethod, usize) {
    fn dim(&self) -> usize {
        self.1
    }

    fn draw(&self, rng: &mut RngStream) -> Result<DensityMatrix<T>> {
        self.0.sample(self.1, rng)
    }
}

/// Samples per substream. Fixed so that outputs never depend on thread count.
pub const CHUNK_SIZE: usize = 1024;

/// Stream index of chunk `chunk` within an independent `domain`.
#[inline]
pub fn stream_index(domain: u32, chunk: u64) -> u64 {
    (u64::from(domain) << 32) | (chunk & 0xFFFF_FFFF)
}

/// Runs `f` for `n` samples over substreams `(seed, stream_index(domain, c))`.
///
/// Sample `i` always comes from chunk `i / CHUNK_SIZE`, and results are
/// returned in sample order, so `workers` changes timing only.
pub fn draw_parallel<R, F>(n: usize, seed: u64, domain: u32, workers: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut RngStream) -> Result<R> + Sync,
{
    let chunks = n.div_ceil(CHUNK_SIZE);
    let run_chunk = |c: usize| -> Result<Vec<R>> {
        let mut rng = RngStream::new(seed, stream_index(domain, c as u64));
        let len = CHUNK_SIZE.min(n - c * CHUNK_SIZE);
        (0..len).map(|_| f(&mut rng)).collect()
    };
    let per_chunk: Vec<Result<Vec<R>>> = if workers <= 1 {
        (0..chunks).map(run_chunk).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool construction");
        pool.install(|| (0..chunks).into_par_iter().map(run_chunk).collect())
    };
    let mut out = Vec::with_capacity(n);
    for chunk in per_chunk {
        out.extend(chunk?);
    }
    Ok(out)
}
