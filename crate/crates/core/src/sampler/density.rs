//! Constructions of uniformly (Hilbert-Schmidt) distributed density matrices.

use num_complex::Complex;

use super::ensembles::{sample_ginibre, sample_haar_unitary, sample_pure_uniform};
use super::spectrum::{sample_spectrum_rejection, SPECTRUM_MAX_DIM, SPECTRUM_MIN_DIM};
use super::RngStream;
use crate::error::{Error, Result};
use crate::linalg::{compose_from_spectrum, partial_trace_right, ComplexMatrix, DensityMatrix, HermitianMatrix};
use crate::scalar::Real;

fn one_by_one<T: Real>() -> DensityMatrix<T> {
    DensityMatrix::maximally_mixed(1)
}

/// `A A^H / tr(A A^H)` for a Ginibre matrix `A`.
pub fn sample_density_hs<T: Real>(d: usize, rng: &mut RngStream) -> Result<DensityMatrix<T>> {
    if d == 0 {
        return Err(Error::UnsupportedDimension { d, reason: "dimension must be at least 1" });
    }
    if d == 1 {
        return Ok(one_by_one());
    }
    let a = sample_ginibre::<T>(d, rng)?;
    let gram = &a * &a.adjoint();
    let tr = gram.trace().re;
    if tr.is_nan() || tr <= T::zero() {
        return Err(Error::SingularDraw("Ginibre Gram matrix"));
    }
    let mut rho = HermitianMatrix::symmetrized(&gram.scale(T::one() / tr)).into_matrix();
    renormalize_trace(&mut rho);
    Ok(DensityMatrix::from_hermitian_unchecked(HermitianMatrix::symmetrized(&rho)))
}

/// Reduced state of a uniformly random pure state on `C^d ⊗ C^d`.
pub fn sample_density_purified<T: Real>(d: usize, rng: &mut RngStream) -> Result<DensityMatrix<T>> {
    if d == 0 {
        return Err(Error::UnsupportedDimension { d, reason: "dimension must be at least 1" });
    }
    if d == 1 {
        return Ok(one_by_one());
    }
    let psi = sample_pure_uniform::<T>(d * d, rng)?;
    let joint = DensityMatrix::pure(psi.amplitudes())?;
    partial_trace_right(&joint, d, d)
}

/// Rejection-sampled spectrum in a Haar-random eigenbasis.
pub fn sample_density_spectral<T: Real>(d: usize, rng: &mut RngStream) -> Result<DensityMatrix<T>> {
    if d == 1 {
        return Ok(one_by_one());
    }
    if !(SPECTRUM_MIN_DIM..=SPECTRUM_MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension { d, reason: "spectral sampler supports 2 <= d <= 6" });
    }
    let lambda = sample_spectrum_rejection::<T>(d, rng)?;
    let u = sample_haar_unitary::<T>(d, rng)?;
    let h = compose_from_spectrum(lambda.values(), &u)?;
    let mut m = h.into_matrix();
    renormalize_trace(&mut m);
    Ok(DensityMatrix::from_hermitian_unchecked(HermitianMatrix::symmetrized(&m)))
}

/// Uniform point of the radius-1/2 Bloch ball mapped to `I/2 + a . sigma`.
///
/// For `d = 2` the density matrices are exactly this ball under an affine
/// isometry (up to scale) of the trace-one plane, so flat volume on the ball
/// is the uniform measure itself.
pub fn sample_bloch_oracle<T: Real>(rng: &mut RngStream) -> DensityMatrix<T> {
    let a = loop {
        let p = [rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5];
        if p.iter().map(|x| x * x).sum::<f64>() <= 0.25 {
            break p;
        }
    };
    DensityMatrix::from_hermitian_unchecked(bloch_matrix(a))
}

pub(crate) fn bloch_matrix<T: Real>(a: [f64; 3]) -> HermitianMatrix<T> {
    let half = T::lit(0.5);
    let m = ComplexMatrix::new(
        2,
        vec![
            Complex::new(half + T::lit(a[2]), T::zero()),
            Complex::new(T::lit(a[0]), -T::lit(a[1])),
            Complex::new(T::lit(a[0]), T::lit(a[1])),
            Complex::new(half - T::lit(a[2]), T::zero()),
        ],
    )
    .expect("finite 2x2");
    HermitianMatrix::symmetrized(&m)
}

/// HS-distributed spectrum placed on the diagonal of the standard basis.
///
/// Not unitarily invariant; used as a negative control for invariance tests.
pub fn sample_density_fixed_basis<T: Real>(d: usize, rng: &mut RngStream) -> Result<DensityMatrix<T>> {
    let rho = sample_density_hs::<T>(d, rng)?;
    let eig = crate::linalg::hermitian_eigen(rho.as_hermitian())?;
    let mut values = eig.values().to_vec();
    let residue = T::one() - values.iter().copied().sum::<T>();
    values[0] += residue;
    for v in values.iter_mut() {
        *v = v.max(T::zero());
    }
    Ok(DensityMatrix::from_hermitian_unchecked(HermitianMatrix::diagonal(&values)))
}

/// Moves the rounding residue of the trace onto the diagonal, spread evenly.
fn renormalize_trace<T: Real>(m: &mut ComplexMatrix<T>) {
    let d = m.dim();
    let residue = (T::one() - m.trace().re) / T::from_usize_lossy(d);
    for i in 0..d {
        m[(i, i)].re += residue;
    }
}
