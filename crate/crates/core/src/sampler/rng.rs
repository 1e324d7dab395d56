use num_complex::Complex;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::scalar::Real;

/// Deterministic random stream addressed by `(seed, stream_index)`.
///
/// Backed by ChaCha20, whose 64-bit stream id selects an independent
/// keystream for the same key. The output sequence depends only on the pair,
/// so Monte Carlo work can be partitioned across any number of threads.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    inner: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream_index);
        Self { seed, stream_index, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Number of 32-bit words consumed so far.
    pub fn word_position(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Unit-rate exponential.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        self.inner.sample(Exp1)
    }

    /// Complex Gaussian with `E|z|^2 = 1`: real and imaginary parts each have variance 1/2.
    pub fn complex_normal<T: Real>(&mut self) -> Complex<T> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let re = self.standard_normal() * s;
        let im = self.standard_normal() * s;
        Complex::new(T::lit(re), T::lit(im))
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_address_same_sequence() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_streams_differ() {
        let mut a = RngStream::new(7, 0);
        let mut b = RngStream::new(7, 1);
        let mut c = RngStream::new(8, 0);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_ne!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn streams_are_uncorrelated() {
        let n = 50_000;
        let mut a = RngStream::new(11, 0);
        let mut b = RngStream::new(11, 1);
        let corr: f64 = (0..n).map(|_| a.standard_normal() * b.standard_normal()).sum::<f64>() / n as f64;
        // SE of the product mean is 1/sqrt(n)
        assert!(corr.abs() < 5.0 / (n as f64).sqrt(), "corr = {corr}");
    }

    #[test]
    fn pinned_first_output() {
        // Freezes the generator choice: a silent swap would break reproducibility of recorded seeds.
        let mut a = RngStream::new(0, 0);
        assert_eq!(a.next_u64(), 449_479_075_714_955_186);
        assert_eq!(RngStream::new(20_240_611, 3).next_u64(), 9_562_046_703_070_309_436);
        let mut b = ChaCha20Rng::seed_from_u64(0);
        assert_eq!(RngStream::new(0, 0).next_u64(), b.next_u64());
    }
}
