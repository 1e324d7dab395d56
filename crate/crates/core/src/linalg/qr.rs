use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Householder QR with the phase convention `R[j][j] > 0`.
///
/// Returns `(Q, R)` with `Q` unitary and `R` upper triangular. Fails when a
/// diagonal entry of `R` is negligible relative to `||A||_F`.
pub fn qr_positive<T: Real>(a: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let d = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::<T>::identity(d);
    let scale = a.frobenius_norm();
    let floor = scale * T::epsilon() * T::lit(16.0);

    for k in 0..d {
        let norm_x = (k..d).map(|i| r[(i, k)].norm_sqr()).sum::<T>().sqrt();
        if norm_x <= floor {
            return Err(Error::SingularDraw("QR factorization"));
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > T::zero() { x0 / x0.norm() } else { Complex::one() };
        let alpha = -phase * norm_x;

        let mut v: Vec<Complex<T>> = (k..d).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vnorm.is_zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // R <- (I - 2 v v^H) R on rows k..d
        for j in k..d {
            let dot = v.iter().enumerate().fold(Complex::<T>::zero(), |acc, (t, vt)| acc + vt.conj() * r[(k + t, j)]);
            let two_dot = dot + dot;
            for (t, vt) in v.iter().enumerate() {
                r[(k + t, j)] -= *vt * two_dot;
            }
        }
        // Q <- Q (I - 2 v v^H) on columns k..d
        for i in 0..d {
            let dot = v.iter().enumerate().fold(Complex::<T>::zero(), |acc, (t, vt)| acc + q[(i, k + t)] * *vt);
            let two_dot = dot + dot;
            for (t, vt) in v.iter().enumerate() {
                q[(i, k + t)] -= two_dot * vt.conj();
            }
        }
        for i in k + 1..d {
            r[(i, k)] = Complex::zero();
        }
    }

    for j in 0..d {
        let rjj = r[(j, j)];
        let mag = rjj.norm();
        if mag <= floor {
            return Err(Error::SingularDraw("QR factorization"));
        }
        let phase = rjj / mag;
        for i in 0..d {
            q[(i, j)] *= phase;
        }
        let conj = phase.conj();
        for c in j..d {
            r[(j, c)] = conj * r[(j, c)];
        }
        r[(j, j)] = Complex::new(mag, T::zero());
    }
    Ok((q, r))
}
