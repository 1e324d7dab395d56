use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    d: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a `d x d` matrix from row-major entries, rejecting non-finite values.
    pub fn new(d: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if d == 0 || data.len() != d * d {
            return Err(Error::NotSquare { d, entries: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / d, col: k % d });
        }
        Ok(Self { d, data })
    }

    pub fn zeros(d: usize) -> Self {
        Self { d, data: vec![Complex::zero(); d * d] }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                data.push(f(i, j));
            }
        }
        Self { d, data }
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[T]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { Complex::new(values[i], T::zero()) } else { Complex::zero() })
    }

    /// Builds a matrix from separate real and imaginary row lists.
    pub fn from_parts(re: &[Vec<T>], im: &[Vec<T>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d || re.iter().chain(im.iter()).any(|row| row.len() != d) {
            return Err(Error::NotSquare { d, entries: re.iter().chain(im.iter()).map(Vec::len).sum::<usize>() / 2 });
        }
        let data = re.iter().zip(im).flat_map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| Complex::new(a, b))).collect();
        Self::new(d, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn real_parts(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.d).map(|row| row.iter().map(|z| z.re).collect()).collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.d).map(|row| row.iter().map(|z| z.im).collect()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.d).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.d, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.d).map(|i| self[(i, i)]).fold(Complex::zero(), |acc, z| acc + z)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self { d: self.d, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Kronecker product `self ⊗ other`; the left factor is the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        let db = other.d;
        Self::from_fn(self.d * db, |r, c| self[(r / db, c / db)] * other[(r % db, c % db)])
    }

    /// `||U^H U - I||_F`.
    pub fn unitarity_defect(&self) -> T {
        let gram = &self.adjoint() * self;
        (&gram - &Self::identity(self.d)).frobenius_norm()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= T::lit(T::RECON_TOL) * T::from_usize_lossy(self.d).sqrt().max(T::one())
    }

    /// Largest `|a_ij - conj(a_ji)|` and where it occurs.
    pub(crate) fn hermitian_defect(&self) -> (T, usize, usize) {
        let mut worst = (T::zero(), 0, 0);
        for i in 0..self.d {
            for j in i..self.d {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                if dev > worst.0 {
                    worst = (dev, i, j);
                }
            }
        }
        worst
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.d + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.d + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.d, rhs.d, "matrix product dimension mismatch");
        let d = self.d;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.d, rhs.d, "matrix sum dimension mismatch");
        ComplexMatrix { d: self.d, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.d, rhs.d, "matrix difference dimension mismatch");
        ComplexMatrix { d: self.d, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.d, self.d)?;
        for row in self.data.chunks(self.d) {
            let cells: Vec<String> = row.iter().map(|z| format!("({:?}, {:?})", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Self-adjoint matrix. Entries satisfy `a[i][j] == conj(a[j][i])` within
/// [`Real::HERMITIAN_TOL`].
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianMatrix<T>(ComplexMatrix<T>);

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let (dev, row, col) = m.hermitian_defect();
        if dev > T::lit(T::HERMITIAN_TOL) {
            return Err(Error::NotHermitian { row, col, deviation: dev.to_f64_lossy() });
        }
        Ok(Self(m))
    }

    /// Replaces `m` by `(m + m^H) / 2`, which is Hermitian exactly.
    pub fn symmetrized(m: &ComplexMatrix<T>) -> Self {
        let half = T::lit(0.5);
        let d = m.dim();
        Self(ComplexMatrix::from_fn(d, |i, j| {
            if i == j {
                Complex::new(m[(i, i)].re, T::zero())
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * half
            }
        }))
    }

    pub fn identity(d: usize) -> Self {
        Self(ComplexMatrix::identity(d))
    }

    pub fn zeros(d: usize) -> Self {
        Self(ComplexMatrix::zeros(d))
    }

    pub fn diagonal(values: &[T]) -> Self {
        Self(ComplexMatrix::diagonal(values))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    /// Real trace.
    pub fn trace(&self) -> T {
        self.0.trace().re
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale(s))
    }

    /// `U H U^H`, re-symmetrized to absorb rounding.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Self {
        let m = &(u * &self.0) * &u.adjoint();
        Self::symmetrized(&m)
    }
}

impl<T> Index<(usize, usize)> for HermitianMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.0[idx]
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct DensityMatrix<T>(HermitianMatrix<T>);

impl<T: Real> DensityMatrix<T> {
    /// Validates trace and positivity; positivity costs one eigendecomposition.
    pub fn new(h: HermitianMatrix<T>) -> Result<Self> {
        let tr = h.trace();
        if (tr - T::one()).abs() > T::lit(T::TRACE_TOL) {
            return Err(Error::TraceNotOne { trace: tr.to_f64_lossy() });
        }
        let eig = super::hermitian_eigen(&h)?;
        let min = eig.min_eigenvalue();
        if min < -T::lit(T::PSD_TOL) {
            return Err(Error::NotPositive { min_eigenvalue: min.to_f64_lossy() });
        }
        Ok(Self(h))
    }

    /// Caller guarantees the invariants by construction.
    pub(crate) fn from_hermitian_unchecked(h: HermitianMatrix<T>) -> Self {
        Self(h)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(HermitianMatrix::identity(d).scale(T::one() / T::from_usize_lossy(d)))
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm_sq: T = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq.is_nan() || norm_sq <= T::zero() || psi.is_empty() {
            return Err(Error::Domain("pure state vector must be nonzero".into()));
        }
        let m = ComplexMatrix::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj() / norm_sq);
        Ok(Self(HermitianMatrix::symmetrized(&m)))
    }

    /// Tensor product of two states, left factor slow.
    pub fn kron(&self, other: &Self) -> Self {
        Self(HermitianMatrix::symmetrized(&self.as_matrix().kron(other.as_matrix())))
    }

    /// `U rho U^H` for unitary `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: u.dim() });
        }
        if !u.is_unitary() {
            return Err(Error::NotUnitary { deviation: u.unitarity_defect().to_f64_lossy() });
        }
        Ok(Self(self.0.conjugate_by(u)))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn as_hermitian(&self) -> &HermitianMatrix<T> {
        &self.0
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        self.0.as_matrix()
    }

    pub fn into_hermitian(self) -> HermitianMatrix<T> {
        self.0
    }
}

impl<T> Index<(usize, usize)> for DensityMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.0[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn rejects_ragged_and_nonfinite_input() {
        assert!(matches!(ComplexMatrix::<f64>::new(2, vec![c(1.0, 0.0); 3]), Err(Error::NotSquare { .. })));
        assert!(matches!(ComplexMatrix::<f64>::new(0, vec![]), Err(Error::NotSquare { .. })));
        let mut data = vec![c(0.0, 0.0); 4];
        data[3] = c(f64::NAN, 0.0);
        assert_eq!(ComplexMatrix::new(2, data), Err(Error::NonFinite { row: 1, col: 1 }));
    }

    #[test]
    fn hermitian_check_uses_absolute_entry_tolerance() {
        let ok = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0 + 5e-13), c(2.0, 0.0)]).unwrap();
        assert!(HermitianMatrix::new(ok).is_ok());
        let bad = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        assert!(matches!(HermitianMatrix::new(bad), Err(Error::NotHermitian { row: 0, col: 1, .. })));
    }

    #[test]
    fn density_validation() {
        let h = HermitianMatrix::<f64>::diagonal(&[0.7, 0.4]);
        assert!(matches!(DensityMatrix::new(h), Err(Error::TraceNotOne { .. })));
        let h = HermitianMatrix::<f64>::diagonal(&[1.2, -0.2]);
        assert!(matches!(DensityMatrix::new(h), Err(Error::NotPositive { .. })));
        assert!(DensityMatrix::new(HermitianMatrix::<f64>::diagonal(&[0.25; 4])).is_ok());
    }

    #[test]
    fn kron_uses_left_slow_index() {
        let a = ComplexMatrix::<f64>::diagonal(&[1.0, 2.0]);
        let b = ComplexMatrix::<f64>::from_fn(2, |i, j| c((i * 2 + j) as f64, 0.0));
        let k = a.kron(&b);
        assert_eq!(k[(0, 1)], c(1.0, 0.0));
        assert_eq!(k[(3, 2)], c(4.0, 0.0));
        assert_eq!(k[(1, 2)], c(0.0, 0.0));
    }

    #[test]
    fn adjoint_and_unitarity() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::new(2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap();
        assert!(h.is_unitary());
        let not = ComplexMatrix::<f64>::diagonal(&[1.0, 2.0]);
        assert!(!not.is_unitary());
        let m = ComplexMatrix::new(2, vec![c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0)]).unwrap();
        assert_eq!(m.adjoint()[(0, 1)], c(5.0, -6.0));
        assert_eq!(m.trace(), c(8.0, 10.0));
    }
}
