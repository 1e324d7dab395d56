//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type used for matrix entries and statistics.
///
/// Tolerances live on the trait because the natural slack differs by
/// several orders of magnitude between single and double precision.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute per-entry slack for `a[i][j] == conj(a[j][i])`.
    const HERMITIAN_TOL: f64;
    /// Allowed deviation of a density matrix trace from one.
    const TRACE_TOL: f64;
    /// Most negative eigenvalue still accepted as positive semidefinite.
    const PSD_TOL: f64;
    /// Relative Frobenius slack for reconstructions and unitarity.
    const RECON_TOL: f64;

    /// Converts an `f64` literal; every value used in this crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-12;
    const TRACE_TOL: f64 = 1e-12;
    const PSD_TOL: f64 = 1e-10;
    const RECON_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-5;
    const TRACE_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-4;
    const RECON_TOL: f64 = 1e-4;
}
