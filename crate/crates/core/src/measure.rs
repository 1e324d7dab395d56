//! Closed forms for the uniform measure on density matrices: eigenvalue
//! density and its normalization, mean, covariance constant, and the moment
//! identities tying them together.
//!
//! Eigenvalue densities are with respect to Lebesgue measure
//! `dλ_1 … dλ_{d-1}` on the simplex, for the *unordered* eigenvalue vector.
//! Under this convention the normalization constant is
//! `(d^2 - 1)! / prod_{k=1}^{d} k! (k-1)!`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::scalar::Real;

/// Largest dimension for which [`hs_normalization`] is offered.
pub const NORMALIZATION_MAX_DIM: usize = 8;

fn require_at_least_two(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { d, reason: "formula requires d >= 2" });
    }
    Ok(())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn rational(num: usize, den: usize) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn to_real<T: Real>(q: &BigRational) -> T {
    T::lit(q.to_f64().expect("finite rational"))
}

/// `prod_{i<j} (λ_i - λ_j)^2`.
pub fn vandermonde_sq<T: Real>(lambda: &[T]) -> T {
    let mut acc = T::one();
    for (i, &a) in lambda.iter().enumerate() {
        for &b in &lambda[i + 1..] {
            let g = a - b;
            acc *= g * g;
        }
    }
    acc
}

/// Exact normalization constant of the eigenvalue density.
pub fn hs_normalization(d: usize) -> Result<BigUint> {
    if !(2..=NORMALIZATION_MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension { d, reason: "normalization offered for 2 <= d <= 8" });
    }
    let denom = (1..=d).fold(BigUint::one(), |acc, k| acc * factorial(k) * factorial(k - 1));
    let num = factorial(d * d - 1);
    debug_assert!((&num % &denom).is_zero());
    Ok(num / denom)
}

/// Joint density of the unordered eigenvalues at `lambda`.
pub fn eig_density<T: Real>(lambda: &[T]) -> Result<T> {
    let d = lambda.len();
    let norm = hs_normalization(d)?;
    let tol = T::lit(T::TRACE_TOL);
    if lambda.iter().any(|&x| !x.is_finite() || x < -tol || x > T::one() + tol) {
        return Err(Error::Domain("eigenvalues must lie in [0, 1]".into()));
    }
    let sum: T = lambda.iter().copied().sum();
    if (sum - T::one()).abs() > tol {
        return Err(Error::Domain(format!("eigenvalues sum to {sum}, not 1")));
    }
    Ok(T::lit(norm.to_f64().expect("finite")) * vandermonde_sq(lambda))
}

/// Expected density matrix, `I / d`.
pub fn mean_density<T: Real>(d: usize) -> HermitianMatrix<T> {
    HermitianMatrix::identity(d).scale(T::one() / T::from_usize_lossy(d))
}

pub fn covariance_c_exact(d: usize) -> Result<BigRational> {
    require_at_least_two(d)?;
    Ok(rational(1, d * (d * d + 1)))
}

/// Covariance constant `c(d) = 1 / (d (d^2 + 1))`; the covariance operator is `c(d) P_{T0}`.
pub fn covariance_c<T: Real>(d: usize) -> Result<T> {
    covariance_c_exact(d).map(|q| to_real(&q))
}

pub fn overlap_sq_moment_exact(d: usize) -> Result<BigRational> {
    require_at_least_two(d)?;
    Ok(rational(d + 1, d * (d * d + 1)))
}

/// `E <ψ|ρ|ψ>^2 = (d + 1) / (d (d^2 + 1))` for any fixed unit vector ψ.
pub fn overlap_sq_moment<T: Real>(d: usize) -> Result<T> {
    overlap_sq_moment_exact(d).map(|q| to_real(&q))
}

pub fn c_from_overlap_exact(d: usize, m: &BigRational) -> Result<BigRational> {
    require_at_least_two(d)?;
    Ok(rational(d, d - 1) * m - rational(1, d * (d - 1)))
}

/// `c = d/(d-1) m - 1/(d(d-1))`, the covariance constant implied by an overlap moment `m`.
pub fn c_from_overlap<T: Real>(d: usize, m: T) -> Result<T> {
    require_at_least_two(d)?;
    let df = T::from_usize_lossy(d);
    Ok(df / (df - T::one()) * m - T::one() / (df * (df - T::one())))
}

pub fn expected_purity_exact(d: usize) -> Result<BigRational> {
    require_at_least_two(d)?;
    Ok(rational(2 * d, d * d + 1))
}

/// `E tr ρ^2 = 2d / (d^2 + 1)`.
pub fn expected_purity<T: Real>(d: usize) -> Result<T> {
    expected_purity_exact(d).map(|q| to_real(&q))
}

/// `prod_k exp(-d μ_k^2 / 2) prod_{i<j} |μ_i - μ_j|^2`.
pub fn gue_joint_density_unnormalized<T: Real>(mu: &[T]) -> Result<T> {
    let d = mu.len();
    require_at_least_two(d)?;
    let half_d = T::from_usize_lossy(d) * T::lit(0.5);
    let quad: T = mu.iter().map(|&m| m * m).sum();
    Ok((-half_d * quad).exp() * vandermonde_sq(mu))
}

fn check_lambda_max_domain(x: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&x) {
        return Err(Error::Domain(format!("largest eigenvalue {x} outside [1/2, 1] for d = 2")));
    }
    Ok(())
}

/// Density of the largest eigenvalue at `d = 2`: `24 (x - 1/2)^2` on `[1/2, 1]`.
pub fn lambda_max_pdf_d2(x: f64) -> Result<f64> {
    check_lambda_max_domain(x)?;
    Ok(24.0 * (x - 0.5).powi(2))
}

/// CDF of the largest eigenvalue at `d = 2`: `8 (x - 1/2)^3`, clamped outside the support.
pub fn lambda_max_cdf_d2(x: f64) -> f64 {
    if x <= 0.5 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        8.0 * (x - 0.5).powi(3)
    }
}

/// Midpoint-rule integral of [`eig_density`] over the simplex, `d` in `{2, 3}`.
///
/// `d = 2` uses `steps` intervals on `[0, 1]`. `d = 3` splits the triangle
/// `{x, y >= 0, x + y <= 1}` into `steps^2` congruent right triangles and
/// evaluates at each centroid.
pub fn normalization_quadrature(d: usize, steps: usize) -> Result<f64> {
    let norm = hs_normalization(d)?.to_f64().expect("finite");
    let h = 1.0 / steps as f64;
    match d {
        2 => Ok((0..steps)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                norm * vandermonde_sq(&[x, 1.0 - x]) * h
            })
            .sum()),
        3 => {
            let area = 0.5 * h * h;
            let f = |x: f64, y: f64| norm * vandermonde_sq(&[x, y, 1.0 - x - y]);
            let mut total = 0.0;
            for i in 0..steps {
                for j in 0..steps - i {
                    let (x0, y0) = (i as f64 * h, j as f64 * h);
                    total += f(x0 + h / 3.0, y0 + h / 3.0) * area;
                    if i + j + 1 < steps {
                        total += f(x0 + 2.0 * h / 3.0, y0 + 2.0 * h / 3.0) * area;
                    }
                }
            }
            Ok(total)
        }
        _ => Err(Error::UnsupportedDimension { d, reason: "quadrature implemented for d in {2, 3}" }),
    }
}

/// Every moment of the uniform measure that has a closed form here.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleMoments<T> {
    pub d: usize,
    pub mean_operator: HermitianMatrix<T>,
    pub c: T,
    pub overlap_sq: T,
    pub expected_purity: T,
}

impl<T: Real> EnsembleMoments<T> {
    pub fn for_dim(d: usize) -> Result<Self> {
        Ok(Self {
            d,
            mean_operator: mean_density(d),
            c: covariance_c(d)?,
            overlap_sq: overlap_sq_moment(d)?,
            expected_purity: expected_purity(d)?,
        })
    }

    /// `Var(ρ_11) = c (1 - 1/d)`.
    pub fn diagonal_variance(&self) -> T {
        self.c * (T::one() - T::one() / T::from_usize_lossy(self.d))
    }

    /// `E|ρ_12|^2 = c`.
    pub fn off_diagonal_second_moment(&self) -> T {
        self.c
    }
}
