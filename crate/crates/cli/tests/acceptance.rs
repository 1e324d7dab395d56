//! Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Desk scale: N = 2·10⁵ draws, d ∈ {2, 3, 4}, pinned seed.

use std::process::{Command, ExitCode};

use hsdensity::linalg::ComplexMatrix;
use hsdensity::measure::{
    covariance_c, expected_purity, hs_normalization, lambda_max_cdf_d2, normalization_quadrature, overlap_sq_moment,
};
use hsdensity::sampler::{draw_parallel, sample_gue, DensityMethod};
use hsdensity::stats::suite::{
    acceptance_rate_report, domain, draw_states, Block, SampleSet, CONTROL_P_MAX, DEFAULT_SEED, QUADRATURE_RTOL,
    QUADRATURE_STEPS,
};
use hsdensity::stats::{
    entangled_fraction, ks_one_sample, ks_two_sample, mc_covariance_check, mean_reports, purity_report,
    trace_square_values, unitary_invariance_test, MonteCarloReport, DEFAULT_ALPHA, DEFAULT_Z_THRESHOLD,
};

const N: usize = 200_000;
const DIMS: [usize; 3] = [2, 3, 4];
const SEED: u64 = DEFAULT_SEED;
const Z: f64 = DEFAULT_Z_THRESHOLD;
const ALPHA: f64 = DEFAULT_ALPHA;

type Outcome = Result<(bool, String), String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn z_line(r: &MonteCarloReport) -> String {
    format!("{}={:.6} (target {:.6}, z={:+.2})", r.name, r.estimate, r.target, r.z_score)
}

struct Battery {
    hs: Vec<SampleSet>,
}

impl Battery {
    fn new() -> Result<Self, String> {
        let hs = DIMS
            .iter()
            .map(|&d| draw_states(DensityMethod::Hs, d, N, SEED, domain(Block::Mean, d, 1), workers()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        Ok(Self { hs })
    }

    fn mean(&self) -> Outcome {
        let mut ok = true;
        let mut worst = 0.0f64;
        for set in &self.hs {
            for r in mean_reports(&set.states, Z).map_err(|e| e.to_string())? {
                ok &= r.pass;
                worst = worst.max(r.z_score.abs());
            }
        }
        Ok((ok, format!("all entries of the sample mean within 5 SE of I/d, d=2,3,4; max |z|={worst:.2}")))
    }

    fn covariance(&self) -> Outcome {
        let mut ok = true;
        let mut parts = Vec::new();
        for (set, d) in self.hs.iter().zip(DIMS) {
            let r = mc_covariance_check(&set.states, d, Z).map_err(|e| e.to_string())?;
            let c: f64 = covariance_c(d).map_err(|e| e.to_string())?;
            ok &= (r[0].target - c * (1.0 - 1.0 / d as f64)).abs() < 1e-15 && (r[1].target - c).abs() < 1e-15;
            ok &= r[0].pass && r[1].pass;
            parts.push(format!("d={d}: {}; {}", z_line(&r[0]), z_line(&r[1])));
        }
        ok &= (self.target_var(2) - 0.05).abs() < 1e-15 && (self.target_var(3) - 1.0 / 45.0).abs() < 1e-15;
        Ok((ok, parts.join(" | ")))
    }

    fn target_var(&self, d: usize) -> f64 {
        covariance_c::<f64>(d).unwrap() * (1.0 - 1.0 / d as f64)
    }

    fn overlap(&self) -> Outcome {
        let mut ok = (overlap_sq_moment::<f64>(2).unwrap() - 0.3).abs() < 1e-15
            && (overlap_sq_moment::<f64>(3).unwrap() - 2.0 / 15.0).abs() < 1e-15;
        let mut parts = Vec::new();
        for (set, d) in self.hs.iter().zip(DIMS) {
            let r = &mc_covariance_check(&set.states, d, Z).map_err(|e| e.to_string())?[2];
            ok &= r.pass;
            parts.push(format!("d={d}: {}", z_line(r)));
        }
        Ok((ok, parts.join(" | ")))
    }

    fn purity(&self) -> Outcome {
        // Independent recomputation: E tr ρ² = Σ_i E ρ_ii² + Σ_{i≠j} E|ρ_ij|²
        // = d(1/d² + c(1 - 1/d)) + d(d-1)c = 1/d + (d² - 1)c.
        let mut ok = true;
        let mut parts = Vec::new();
        for (set, d) in self.hs.iter().zip(DIMS) {
            let c = 1.0 / (d * (d * d + 1)) as f64;
            let recomputed = 1.0 / d as f64 + (d * d - 1) as f64 * c;
            ok &= (recomputed - expected_purity::<f64>(d).unwrap()).abs() < 1e-15;
            let r = purity_report(&set.states, d, Z).map_err(|e| e.to_string())?;
            ok &= r.pass;
            parts.push(format!("d={d}: {}", z_line(&r)));
        }
        ok &= (expected_purity::<f64>(2).unwrap() - 0.8).abs() < 1e-15;
        ok &= (expected_purity::<f64>(3).unwrap() - 0.6).abs() < 1e-15;
        Ok((ok, parts.join(" | ")))
    }
}

fn eigenvalue_law() -> Outcome {
    let set = draw_states(DensityMethod::Hs, 2, 10_000, SEED, domain(Block::Eigdist, 2, 1), workers())
        .map_err(|e| e.to_string())?;
    let r = ks_one_sample(&set.lambda_max, lambda_max_cdf_d2).map_err(|e| e.to_string())?;
    Ok((r.p_value > ALPHA, format!("d=2 n=10^4 lambda_max vs 8(x-1/2)^3: D={:.5}, p={:.4}", r.statistic, r.p_value)))
}

fn equivalence() -> Outcome {
    let mut ok = true;
    let mut min_p = 1.0f64;
    let mut count = 0;
    for d in [2usize, 3] {
        let mut methods = vec![DensityMethod::Hs, DensityMethod::Purified, DensityMethod::Spectral];
        if d == 2 {
            methods.push(DensityMethod::Bloch);
        }
        let sets: Vec<SampleSet> = methods
            .iter()
            .enumerate()
            .map(|(k, &m)| draw_states(m, d, 100_000, SEED, domain(Block::Equivalence, d, k as u32 + 1), workers()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                for (a, b) in [(&sets[i].lambda_max, &sets[j].lambda_max), (&sets[i].purity, &sets[j].purity)] {
                    let r = ks_two_sample(a, b).map_err(|e| e.to_string())?;
                    ok &= r.p_value > ALPHA;
                    min_p = min_p.min(r.p_value);
                    count += 1;
                }
            }
        }
    }
    Ok((ok, format!("{count} pairwise KS tests (lambda_max, purity; hs/purified/spectral, +bloch at d=2), n=10^5 per side; min p={min_p:.4}")))
}

fn invariance() -> Outcome {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = ComplexMatrix::from_parts(&[vec![s, s], vec![s, -s]], &[vec![0.0, 0.0], vec![0.0, 0.0]])
        .map_err(|e| e.to_string())?;
    let pos = unitary_invariance_test(&(DensityMethod::Hs, 2), &h, N, SEED, domain(Block::Invariance, 2, 0), workers())
        .map_err(|e| e.to_string())?;
    let neg = unitary_invariance_test(
        &(DensityMethod::FixedBasis, 2),
        &h,
        N,
        SEED,
        domain(Block::Invariance, 2, 2),
        workers(),
    )
    .map_err(|e| e.to_string())?;
    Ok((
        pos.p_value > ALPHA && neg.p_value < CONTROL_P_MAX,
        format!("Hadamard d=2: p={:.4}; fixed-basis control: p={:.3e}", pos.p_value, neg.p_value),
    ))
}

fn normalization() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, expected) in [(2usize, 3u64), (3, 1680), (4, 378_378_000)] {
        let v = hs_normalization(d).map_err(|e| e.to_string())?;
        ok &= v.to_string() == expected.to_string();
        parts.push(format!("N({d})={v}"));
    }
    for d in [2, 3] {
        let q = normalization_quadrature(d, QUADRATURE_STEPS).map_err(|e| e.to_string())?;
        ok &= (q - 1.0).abs() <= QUADRATURE_RTOL;
        parts.push(format!("integral(d={d})={q:.6}"));
    }
    Ok((ok, parts.join(", ")))
}

fn gue() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [2usize, 4, 8] {
        let xs = draw_parallel(N, SEED, domain(Block::Gue, d, 0), workers(), |rng| sample_gue::<f64>(d, rng))
            .map_err(|e| e.to_string())?;
        let r = MonteCarloReport::from_mean("E tr X^2", &trace_square_values(&xs), d as f64, Z)
            .map_err(|e| e.to_string())?;
        ok &= r.pass;
        parts.push(format!("d={d}: {}", z_line(&r)));
    }
    Ok((ok, parts.join(" | ")))
}

fn rejection() -> Outcome {
    let r = acceptance_rate_report(N, SEED, domain(Block::Rejection, 2, 0), workers(), Z).map_err(|e| e.to_string())?;
    Ok((r.pass, z_line(&r)))
}

fn entanglement() -> Outcome {
    let r = entangled_fraction(2, 2, 10_000, SEED, domain(Block::Entanglement, 4, 0), workers(), Z)
        .map_err(|e| e.to_string())?;
    Ok((r.pass && r.z_score >= 5.0, format!("n=10^4: {}", z_line(&r))))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_hsdensity");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut checked = 0;
    for (method, dim, n) in [("hs", "3", "5000"), ("spectral", "4", "2500"), ("gue", "2", "3000")] {
        for format in ["json", "csv"] {
            let mut outputs = Vec::new();
            for (run, workers) in ["1", "1", "2", "4", "7"].iter().enumerate() {
                let path = dir.path().join(format!("{method}-{format}-{run}"));
                let status = Command::new(bin)
                    .args(["sample", "--dim", dim, "--n", n, "--method", method, "--seed", "7"])
                    .args(["--format", format, "--workers", workers, "--out"])
                    .arg(&path)
                    .status()
                    .map_err(|e| e.to_string())?;
                ok &= status.success();
                outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
            }
            ok &= outputs.windows(2).all(|w| w[0] == w[1]) && !outputs[0].is_empty();
            checked += outputs.len();
        }
    }
    Ok((ok, format!("{checked} `sample` runs across --workers 1,1,2,4,7 byte-identical per configuration")))
}

fn main() -> ExitCode {
    let battery = Battery::new();
    let with_battery = |f: fn(&Battery) -> Outcome| -> Outcome {
        match &battery {
            Ok(b) => f(b),
            Err(e) => Err(e.clone()),
        }
    };
    let criteria: Vec<(&str, Check)> = vec![
        ("mean", Box::new(move || with_battery(Battery::mean))),
        ("covariance constant", Box::new(move || with_battery(Battery::covariance))),
        ("overlap moment", Box::new(move || with_battery(Battery::overlap))),
        ("purity", Box::new(move || with_battery(Battery::purity))),
        ("eigenvalue law", Box::new(eigenvalue_law)),
        ("sampler equivalence", Box::new(equivalence)),
        ("unitary invariance", Box::new(invariance)),
        ("normalization constant", Box::new(normalization)),
        ("GUE construction", Box::new(gue)),
        ("rejection calibration", Box::new(rejection)),
        ("entanglement typicality", Box::new(entanglement)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("criterion {:>2} {:<24} {}  {detail}", k + 1, name, if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {}/{} criteria passed (seed {SEED}, N {N})", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
