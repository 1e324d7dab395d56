//! Dense complex linear algebra on small Hermitian matrices.

mod eigen;
mod matrix;
mod qr;

pub use eigen::{hermitian_eigen, EigenDecomposition, MAX_SWEEPS};
pub use matrix::{ComplexMatrix, DensityMatrix, HermitianMatrix};
pub use qr::qr_positive;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hilbert-Schmidt inner product `tr(AB)`.
pub fn hs_inner<T: Real>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), actual: b.dim() });
    }
    let d = a.dim();
    let mut acc = T::zero();
    for i in 0..d {
        for j in 0..d {
            // tr(AB) = sum_ij A_ij B_ji, and B_ji = conj(B_ij)
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    Ok(acc)
}

/// `sum_i lambda_i |u_i><u_i|` where `u_i` is column `i` of `u`.
pub fn compose_from_spectrum<T: Real>(lambda: &[T], u: &ComplexMatrix<T>) -> Result<HermitianMatrix<T>> {
    if lambda.len() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), actual: lambda.len() });
    }
    if !u.is_unitary() {
        return Err(Error::NotUnitary { deviation: u.unitarity_defect().to_f64_lossy() });
    }
    Ok(compose_unchecked(lambda, u))
}

pub(crate) fn compose_unchecked<T: Real>(lambda: &[T], u: &ComplexMatrix<T>) -> HermitianMatrix<T> {
    let d = u.dim();
    let m = ComplexMatrix::from_fn(d, |i, j| {
        (0..d).fold(Complex::zero(), |acc, k| acc + u[(i, k)] * u[(j, k)].conj() * lambda[k])
    });
    HermitianMatrix::symmetrized(&m)
}

fn check_factor(d: usize, left: usize, right: usize) -> Result<()> {
    if left == 0 || right == 0 || left * right != d {
        return Err(Error::BadFactorization { d, left, right });
    }
    Ok(())
}

/// Traces out the right tensor factor: `out[i][j] = sum_k rho[(i,k),(j,k)]`
/// with composite index `(i,k) = i * dim_b + k`.
pub fn partial_trace_right<T: Real>(rho: &DensityMatrix<T>, dim_a: usize, dim_b: usize) -> Result<DensityMatrix<T>> {
    check_factor(rho.dim(), dim_a, dim_b)?;
    let m = ComplexMatrix::from_fn(dim_a, |i, j| {
        (0..dim_b).fold(Complex::zero(), |acc, k| acc + rho[(i * dim_b + k, j * dim_b + k)])
    });
    // Partial traces of PSD unit-trace operators are PSD with unit trace.
    Ok(DensityMatrix::from_hermitian_unchecked(HermitianMatrix::symmetrized(&m)))
}

/// Transposes the right tensor factor: `out[(i,k),(j,l)] = h[(i,l),(j,k)]`.
pub fn partial_transpose_right<T: Real>(
    h: &HermitianMatrix<T>,
    dim_a: usize,
    dim_b: usize,
) -> Result<HermitianMatrix<T>> {
    check_factor(h.dim(), dim_a, dim_b)?;
    let m = ComplexMatrix::from_fn(h.dim(), |r, c| {
        let (i, k) = (r / dim_b, r % dim_b);
        let (j, l) = (c / dim_b, c % dim_b);
        h[(i * dim_b + l, j * dim_b + k)]
    });
    Ok(HermitianMatrix::symmetrized(&m))
}

/// Orthogonal projection onto traceless matrices: `A - (tr A / d) I`.
pub fn project_t0<T: Real>(a: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    let d = a.dim();
    let shift = a.trace() / T::from_usize_lossy(d);
    let mut m = a.as_matrix().clone();
    for i in 0..d {
        m[(i, i)].re -= shift;
    }
    HermitianMatrix::symmetrized(&m)
}

/// `tr(rho^2)`, computed as the squared Frobenius norm.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.as_matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Largest eigenvalue of a density matrix.
pub fn lambda_max<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(hermitian_eigen(rho.as_hermitian())?.max_eigenvalue())
}
