//! Sampler laws checked against closed forms derived independently of the
//! implementation.

use hsdensity::linalg::{hermitian_eigen, lambda_max, DensityMatrix};
use hsdensity::measure::lambda_max_cdf_d2;
use hsdensity::sampler::{
    draw_parallel, sample_ginibre, sample_gue, sample_haar_unitary, sample_pure_uniform,
    sample_spectrum_rejection_counted, DensityMethod, CHUNK_SIZE,
};
use hsdensity::stats::{ks_one_sample, MeanAccumulator, MonteCarloReport};
use hsdensity::{Real, RngStream};

const ALPHA: f64 = 1e-3;
const Z: f64 = 5.0;

fn mean_report(name: &str, values: &[f64], target: f64) -> MonteCarloReport {
    let r = MonteCarloReport::from_mean(name, values, target, Z).unwrap();
    assert!(r.pass, "{r:?}");
    r
}

/// CDF of `|<e_1|v>|^2` for a uniform unit vector in C^d: Beta(1, d-1).
fn first_component_cdf(d: usize) -> impl Fn(f64) -> f64 {
    move |x: f64| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(d as i32 - 1)
}

#[test]
fn ginibre_entries_are_standard_complex_normal() {
    let d = 3;
    let ms = draw_parallel(30_000, 11, 1, 2, |rng| sample_ginibre::<f64>(d, rng)).unwrap();
    let entries: Vec<_> = ms.iter().flat_map(|m| m.as_slice().iter().copied()).collect();
    mean_report("re", &entries.iter().map(|z| z.re).collect::<Vec<_>>(), 0.0);
    mean_report("im", &entries.iter().map(|z| z.im).collect::<Vec<_>>(), 0.0);
    mean_report("|z|^2", &entries.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>(), 1.0);
    // Re and Im each carry half the variance.
    mean_report("re^2", &entries.iter().map(|z| z.re * z.re).collect::<Vec<_>>(), 0.5);
}

#[test]
fn gue_entry_variances() {
    for d in [2, 5] {
        let xs = draw_parallel(50_000, 12, d as u32, 2, |rng| sample_gue::<f64>(d, rng)).unwrap();
        let diag: Vec<f64> = xs.iter().map(|x| x[(0, 0)].re.powi(2)).collect();
        mean_report("X11^2", &diag, 1.0 / d as f64);
        let off_re: Vec<f64> = xs.iter().map(|x| x[(0, 1)].re.powi(2)).collect();
        mean_report("Re(X12)^2", &off_re, 1.0 / (2.0 * d as f64));
        let off_im: Vec<f64> = xs.iter().map(|x| x[(0, 1)].im.powi(2)).collect();
        mean_report("Im(X12)^2", &off_im, 1.0 / (2.0 * d as f64));
        let tr2: Vec<f64> = xs.iter().map(|x| x.as_matrix().frobenius_norm().powi(2)).collect();
        mean_report("tr X^2", &tr2, d as f64);
    }
}

#[test]
fn haar_columns_are_uniform_unit_vectors() {
    for d in [2, 3, 4] {
        let us = draw_parallel(20_000, 13, d as u32, 2, |rng| sample_haar_unitary::<f64>(d, rng)).unwrap();
        assert!(us.iter().all(|u| u.unitarity_defect() < 1e-12));
        let u11: Vec<f64> = us.iter().map(|u| u[(0, 0)].norm_sqr()).collect();
        mean_report("|U11|^2", &u11, 1.0 / d as f64);
        let r = ks_one_sample(&u11, first_component_cdf(d)).unwrap();
        assert!(r.p_value > ALPHA, "d={d} {r:?}");
        // Phase of U11 is uniform, so its real part averages to 0.
        mean_report("Re U11", &us.iter().map(|u| u[(0, 0)].re).collect::<Vec<_>>(), 0.0);
    }
}

#[test]
fn pure_state_components_follow_beta_law() {
    for d in [2, 4] {
        let xs = draw_parallel(20_000, 14, d as u32, 2, |rng| {
            sample_pure_uniform::<f64>(d, rng).map(|p| p.amplitudes()[0].norm_sqr())
        })
        .unwrap();
        let r = ks_one_sample(&xs, first_component_cdf(d)).unwrap();
        assert!(r.p_value > ALPHA, "d={d} {r:?}");
    }
}

fn check_state<T: Real>(rho: &DensityMatrix<T>) {
    let d = rho.dim();
    assert!((rho.as_hermitian().trace() - T::one()).abs() <= T::lit(T::TRACE_TOL));
    for i in 0..d {
        assert_eq!(rho[(i, i)].im, T::zero());
        for j in 0..d {
            assert!((rho[(i, j)] - rho[(j, i)].conj()).norm() <= T::lit(T::HERMITIAN_TOL));
        }
    }
    let min = hermitian_eigen(rho.as_hermitian()).unwrap().min_eigenvalue();
    assert!(min >= -T::lit(T::PSD_TOL), "min eigenvalue {min}");
}

#[test]
fn every_sampler_yields_valid_states() {
    for method in [DensityMethod::Hs, DensityMethod::Purified, DensityMethod::Spectral] {
        for d in 2..=6 {
            let n = if d <= 3 { 10_000 } else { 1_000 };
            let states = draw_parallel(n, 15, d as u32, 4, |rng| method.sample::<f64>(d, rng)).unwrap();
            states.iter().for_each(check_state);
        }
    }
    let bloch = draw_parallel(10_000, 15, 99, 4, |rng| DensityMethod::Bloch.sample::<f64>(2, rng)).unwrap();
    bloch.iter().for_each(check_state);
    let single = draw_parallel(2_000, 15, 100, 4, |rng| DensityMethod::Hs.sample::<f32>(3, rng)).unwrap();
    single.iter().for_each(check_state);
}

#[test]
fn lambda_max_law_at_d2_for_each_sampler() {
    // λ_max = 1/2 + r with r the Bloch radius; uniform in the ball gives
    // P(r <= s) = 8 s^3 on [0, 1/2].
    for (k, method) in [DensityMethod::Hs, DensityMethod::Purified, DensityMethod::Spectral, DensityMethod::Bloch]
        .into_iter()
        .enumerate()
    {
        let l = draw_parallel(10_000, 16, k as u32, 2, |rng| lambda_max(&method.sample::<f64>(2, rng)?)).unwrap();
        assert!(l.iter().all(|&x| (0.5 - 1e-12..=1.0 + 1e-12).contains(&x)));
        let r = ks_one_sample(&l, lambda_max_cdf_d2).unwrap();
        assert!(r.p_value > ALPHA, "{method}: {r:?}");
    }
}

#[test]
fn fixed_basis_control_is_diagonal_with_the_right_spectrum() {
    let l = draw_parallel(10_000, 17, 0, 2, |rng| {
        let rho = DensityMethod::FixedBasis.sample::<f64>(2, rng)?;
        assert_eq!(rho[(0, 1)].norm(), 0.0);
        Ok(rho[(0, 0)].re.max(rho[(1, 1)].re))
    })
    .unwrap();
    let r = ks_one_sample(&l, lambda_max_cdf_d2).unwrap();
    assert!(r.p_value > ALPHA, "{r:?}");
}

#[test]
fn purification_and_ginibre_give_the_moment_targets() {
    // Second moments from the covariance constant 1/(d(d²+1)):
    // E rho_11² = 1/d² + c(1 - 1/d) and E|rho_12|² = c.
    for method in [DensityMethod::Hs, DensityMethod::Purified] {
        let d = 3;
        let c = 1.0 / 30.0;
        let states = draw_parallel(100_000, 18, method as u32, 4, |rng| method.sample::<f64>(d, rng)).unwrap();
        let r11: Vec<f64> = states.iter().map(|s| s[(0, 0)].re.powi(2)).collect();
        mean_report("E rho11^2", &r11, 1.0 / 9.0 + c * (2.0 / 3.0));
        let r12: Vec<f64> = states.iter().map(|s| s[(0, 1)].norm_sqr()).collect();
        mean_report("E|rho12|^2", &r12, c);
    }
}

#[test]
fn rejection_acceptance_matches_envelope_ratio() {
    // Proposals are Dirichlet(1,..,1) with density (d-1)! on the simplex and
    // the target is N(d) V(λ), so a proposal is accepted with probability
    // (d-1)! / (N(d) V_max): 1/3 at d=2 and 2·108/1680 = 9/70 at d=3.
    for (d, expected) in [(2usize, 1.0 / 3.0), (3, 9.0 / 70.0)] {
        let attempts = draw_parallel(20_000, 19, d as u32, 4, |rng| {
            sample_spectrum_rejection_counted::<f64>(d, rng).map(|r| r.attempts)
        })
        .unwrap();
        let total: u64 = attempts.iter().sum();
        let p = attempts.len() as f64 / total as f64;
        let se = (p * (1.0 - p) / total as f64).sqrt();
        assert!(((p - expected) / se).abs() <= Z, "d={d} rate {p} vs {expected}");
    }
}

#[test]
fn draws_are_independent_of_worker_count() {
    for n in [1, CHUNK_SIZE - 1, CHUNK_SIZE, 3 * CHUNK_SIZE + 17] {
        let reference =
            draw_parallel(n, 20, 5, 1, |rng| DensityMethod::Hs.sample::<f64>(3, rng).map(|r| r.into_hermitian()))
                .unwrap();
        for workers in [2, 3, 8] {
            let other = draw_parallel(n, 20, 5, workers, |rng| {
                DensityMethod::Hs.sample::<f64>(3, rng).map(|r| r.into_hermitian())
            })
            .unwrap();
            assert_eq!(reference, other, "n={n} workers={workers}");
        }
    }
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let a: Vec<f64> = {
        let mut r = RngStream::new(42, 7);
        (0..8).map(|_| r.uniform()).collect()
    };
    let b: Vec<f64> = {
        let mut r = RngStream::new(42, 7);
        (0..8).map(|_| r.uniform()).collect()
    };
    let c: Vec<f64> = {
        let mut r = RngStream::new(42, 8);
        (0..8).map(|_| r.uniform()).collect()
    };
    assert_eq!(a, b);
    assert_ne!(a, c);
    let acc = MeanAccumulator::from_slice(&a);
    assert!(acc.mean() > 0.0 && acc.mean() < 1.0);
}
