//! Gaussian matrix ensembles and Haar-distributed objects.

use num_complex::Complex;

use super::{PureState, RngStream};
use crate::error::{Error, Result};
use crate::linalg::{qr_positive, ComplexMatrix, HermitianMatrix};
use crate::scalar::Real;

fn require_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::UnsupportedDimension { d, reason: "dimension must be at least 1" });
    }
    Ok(())
}

/// `d x d` matrix of i.i.d. complex Gaussians with `E|a_ij|^2 = 1`.
pub fn sample_ginibre<T: Real>(d: usize, rng: &mut RngStream) -> Result<ComplexMatrix<T>> {
    require_dim(d)?;
    Ok(ComplexMatrix::from_fn(d, |_, _| rng.complex_normal()))
}

/// GUE sample with density proportional to `exp(-d tr(X^2) / 2)`.
///
/// Off-diagonal real and imaginary parts have variance `1/(2d)`, diagonal
/// entries variance `1/d`. The upper triangle is drawn row by row and
/// mirrored, so the output is Hermitian exactly.
pub fn sample_gue<T: Real>(d: usize, rng: &mut RngStream) -> Result<HermitianMatrix<T>> {
    require_dim(d)?;
    let df = d as f64;
    let sd_diag = (1.0 / df).sqrt();
    let sd_off = (1.0 / (2.0 * df)).sqrt();
    let mut m = ComplexMatrix::<T>::zeros(d);
    for i in 0..d {
        m[(i, i)] = Complex::new(T::lit(rng.standard_normal() * sd_diag), T::zero());
        for j in i + 1..d {
            let re = T::lit(rng.standard_normal() * sd_off);
            let im = T::lit(rng.standard_normal() * sd_off);
            m[(i, j)] = Complex::new(re, im);
            m[(j, i)] = Complex::new(re, -im);
        }
    }
    HermitianMatrix::new(m)
}

/// Haar-random unitary from the phase-corrected QR factor of a Ginibre draw.
pub fn sample_haar_unitary<T: Real>(d: usize, rng: &mut RngStream) -> Result<ComplexMatrix<T>> {
    require_dim(d)?;
    let mut last = Error::SingularDraw("Haar unitary");
    for _ in 0..2 {
        let g = sample_ginibre::<T>(d, rng)?;
        match qr_positive(&g) {
            Ok((q, _)) => return Ok(q),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Uniformly random unit vector in `C^d`.
pub fn sample_pure_uniform<T: Real>(d: usize, rng: &mut RngStream) -> Result<PureState<T>> {
    require_dim(d)?;
    loop {
        let v: Vec<Complex<T>> = (0..d).map(|_| rng.complex_normal()).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return Ok(psi);
        }
    }
}
