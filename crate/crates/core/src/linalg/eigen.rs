//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation to the
//! resulting real symmetric 2x2 block. Sweeps run over all `p < q` pairs
//! until the off-diagonal Frobenius mass drops below `d * eps * ||A||_F`.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in nonincreasing order with the matching orthonormal
/// eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition<T> {
    values: Vec<T>,
    vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn vectors(&self) -> &ComplexMatrix<T> {
        &self.vectors
    }

    pub fn max_eigenvalue(&self) -> T {
        self.values[0]
    }

    pub fn min_eigenvalue(&self) -> T {
        *self.values.last().expect("nonempty spectrum")
    }

    /// `U diag(values) U^H`.
    pub fn reconstruct(&self) -> HermitianMatrix<T> {
        super::compose_unchecked(&self.values, &self.vectors)
    }

    pub fn into_parts(self) -> (Vec<T>, ComplexMatrix<T>) {
        (self.values, self.vectors)
    }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let d = a.dim();
    let mut s = T::zero();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn hermitian_eigen<T: Real>(h: &HermitianMatrix<T>) -> Result<EigenDecomposition<T>> {
    let d = h.dim();
    let mut a = h.as_matrix().clone();
    let mut v = ComplexMatrix::<T>::identity(d);
    let scale = a.frobenius_norm();
    let eps = T::epsilon();

    if scale > T::zero() && d > 1 {
        let target = eps * scale * T::from_usize_lossy(d);
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..d - 1 {
                for q in p + 1..d {
                    rotate(&mut a, &mut v, p, q, eps * scale);
                }
            }
        }
        if !converged {
            let residual = off_diagonal_norm(&a);
            if residual > target {
                return Err(Error::NoConvergence { sweeps: MAX_SWEEPS, residual: residual.to_f64_lossy() });
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<T> = (0..d).map(|i| a[(i, i)].re).collect();
    // Stable sort keeps solver order among exact ties.
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(d, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Annihilates `a[p][q]` by `A <- J^H A J`, accumulating `V <- V J`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize, floor: T) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g <= floor * T::lit(1e-3) || g.is_zero() {
        return;
    }
    let d = a.dim();
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (g + g);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
    let j_pp = Complex::new(c, T::zero());
    let j_pq = Complex::new(s, T::zero());
    let j_qp = phase.conj() * (-s);
    let j_qq = phase.conj() * c;

    // A <- A J (columns p, q)
    for k in 0..d {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A <- J^H A (rows p, q)
    for k in 0..d {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(app - t * g, T::zero());
    a[(q, q)] = Complex::new(aqq + t * g, T::zero());

    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}
