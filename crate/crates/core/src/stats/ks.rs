//! Kolmogorov-Smirnov tests with asymptotic p-values.

use crate::error::{Error, Result};

pub const KS_MIN_SAMPLES: usize = 8;
pub const DEFAULT_ALPHA: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct KsReport {
    pub n: usize,
    /// Second sample size for two-sample tests.
    pub m: Option<usize>,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub pass: bool,
}

impl KsReport {
    fn new(n: usize, m: Option<usize>, statistic: f64, p_value: f64) -> Self {
        Self { n, m, statistic, p_value, alpha: DEFAULT_ALPHA, pass: p_value > DEFAULT_ALPHA }
    }

    /// Re-evaluates `pass` at significance level `alpha`.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.pass = self.p_value > alpha;
        self
    }

    pub fn effective_n(&self) -> f64 {
        match self.m {
            None => self.n as f64,
            Some(m) => (self.n as f64 * m as f64) / (self.n + m) as f64,
        }
    }
}

/// Survival function of the Kolmogorov distribution, `P(K > x)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // Jacobi-theta form converges fast for small x.
        let pi2 = std::f64::consts::PI.powi(2);
        let mut cdf = 0.0;
        for k in 1..=40 {
            let odd = (2 * k - 1) as f64;
            let term = (-(odd * odd) * pi2 / (8.0 * x * x)).exp();
            cdf += term;
            if term < 1e-300 {
                break;
            }
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / x;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut sf = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * x * x).exp();
            sf += if k % 2 == 1 { term } else { -term };
            if term < 1e-300 {
                break;
            }
        }
        (2.0 * sf).clamp(0.0, 1.0)
    }
}

fn sorted_finite(values: &[f64]) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("KS input contains non-finite values".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(v)
}

/// One-sample test of `values` against the continuous CDF `cdf`.
pub fn ks_one_sample(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsReport> {
    let n = values.len();
    if n < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: KS_MIN_SAMPLES, got: n });
    }
    let xs = sorted_finite(values)?;
    let nf = n as f64;
    let mut d = 0.0f64;
    let mut prev = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::BadCdf(format!("cdf({x}) = {f} outside [0, 1]")));
        }
        if f < prev {
            return Err(Error::BadCdf(format!("cdf decreases at {x}")));
        }
        prev = f;
        let lo = i as f64 / nf;
        let hi = (i + 1) as f64 / nf;
        d = d.max(hi - f).max(f - lo);
    }
    let d = d.clamp(0.0, 1.0);
    Ok(KsReport::new(n, None, d, kolmogorov_sf(nf.sqrt() * d)))
}

/// Two-sample test; ties across samples are stepped over together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsReport> {
    let (n, m) = (a.len(), b.len());
    if n.min(m) < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: KS_MIN_SAMPLES, got: n.min(m) });
    }
    let xa = sorted_finite(a)?;
    let xb = sorted_finite(b)?;
    let (nf, mf) = (n as f64, m as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n && j < m {
        let x = xa[i].min(xb[j]);
        while i < n && xa[i] <= x {
            i += 1;
        }
        while j < m && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / nf - j as f64 / mf).abs());
    }
    // Once one sample is exhausted the gap only shrinks toward 0.
    let d = d.clamp(0.0, 1.0);
    let eff = nf * mf / (nf + mf);
    Ok(KsReport::new(n, Some(m), d, kolmogorov_sf(eff.sqrt() * d)))
}
