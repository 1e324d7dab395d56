//! Uniformly random density matrices.
//!
//! The uniform measure on density matrices of a `d`-dimensional Hilbert space
//! is normalized flat volume on the set of unit-trace positive matrices. This
//! crate samples it three independent ways (normalized Ginibre Gram matrices,
//! partial traces of random pure states, and a rejection-sampled spectrum in a
//! Haar eigenbasis), plus a direct Bloch-ball oracle for `d = 2`, and checks
//! every sampler against the measure's closed-form moments and eigenvalue
//! law.
//!
//! Numeric code is generic over [`Real`]; `f64` aliases are exported at the
//! crate root.

pub mod error;
pub mod linalg;
pub mod measure;
pub mod sampler;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type HermitianMatrix = linalg::HermitianMatrix<f64>;
pub type DensityMatrix = linalg::DensityMatrix<f64>;
pub type EigenDecomposition = linalg::EigenDecomposition<f64>;
pub type SpectrumVector = sampler::SpectrumVector<f64>;
pub type PureState = sampler::PureState<f64>;

pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
pub type HermitianMatrix32 = linalg::HermitianMatrix<f32>;
pub type DensityMatrix32 = linalg::DensityMatrix<f32>;

pub use sampler::RngStream;
