//! Random-polynomial statistics harness: samples truncation classes of
//! bounded height and degree (optionally with pinned coefficients), runs the
//! pipeline under a per-sample timeout, and aggregates success ratios and
//! runtimes. Per-sample RNG streams are derived from the master seed by
//! counter, so parallel and serial runs agree.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use exlat::error::Error;
use exlat::fastbasis::{fast_basis_with, FastBasisConfig};
use exlat::IntPoly;

/// Sampling class description: coefficients `c_0..c_n` i.i.d. uniform on
/// `[-H, H]`, coordinates in `fixed` pinned, optionally conditioned on
/// `c_n != 0`. The zero polynomial and constants are excluded (resampled).
#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub degree: usize,
    pub height: i64,
    pub fixed: Vec<(usize, i64)>,
    pub exact_degree: bool,
    pub count: usize,
    pub seed: u64,
    pub timeout: Duration,
}

impl SampleSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.degree < 1 {
            return Err("degree bound must be >= 1".into());
        }
        if self.height < 1 {
            return Err("height bound must be >= 1".into());
        }
        if self.count < 1 {
            return Err("sample count must be >= 1".into());
        }
        if self.fixed.len() > self.degree.saturating_sub(1) {
            return Err(format!(
                "at most {} coefficients may be pinned at degree {}",
                self.degree - 1,
                self.degree
            ));
        }
        for &(i, v) in &self.fixed {
            if i > self.degree {
                return Err(format!("pinned index {} exceeds degree {}", i, self.degree));
            }
            if v.abs() > self.height {
                return Err(format!("pinned value {} outside [-{}, {}]", v, self.height, self.height));
            }
        }
        let mut seen: Vec<usize> = self.fixed.iter().map(|&(i, _)| i).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.fixed.len() {
            return Err("duplicate pinned index".into());
        }
        Ok(())
    }

    /// The sample polynomial for stream `index`, identical across serial and
    /// parallel execution.
    pub fn sample(&self, index: u64) -> IntPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index.wrapping_add(1));
        loop {
            let mut coeffs: Vec<i64> = (0..=self.degree)
                .map(|_| rng.random_range(-self.height..=self.height))
                .collect();
            for &(i, v) in &self.fixed {
                coeffs[i] = v;
            }
            if self.exact_degree && coeffs[self.degree] == 0 {
                let fixed_lead = self.fixed.iter().any(|&(i, _)| i == self.degree);
                if fixed_lead {
                    // A pinned zero leading coefficient contradicts the flag.
                    continue;
                }
                while coeffs[self.degree] == 0 {
                    coeffs[self.degree] = rng.random_range(-self.height..=self.height);
                }
            }
            let f = IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect());
            if !f.is_zero() && f.deg() >= 1 {
                return f;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleOutcome {
    Success,
    NotInClass,
    Timeout,
}

/// Aggregated counts; `success + not_in_class + timeout = count`.
#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub count: usize,
    pub success: usize,
    pub not_in_class: usize,
    pub timeout: usize,
    pub success_ratio: f64,
    pub mean_runtime_s: f64,
    pub median_runtime_s: f64,
}

pub fn run_stats(spec: &SampleSpec, config: &FastBasisConfig) -> Result<StatsReport, Error> {
    spec.validate().map_err(Error::InvalidInput)?;
    let results: Result<Vec<(SampleOutcome, Duration)>, Error> = (0..spec.count as u64)
        .into_par_iter()
        .map(|i| run_one(spec, config, i))
        .collect();
    let results = results?;
    let success = results.iter().filter(|r| r.0 == SampleOutcome::Success).count();
    let not_in_class = results.iter().filter(|r| r.0 == SampleOutcome::NotInClass).count();
    let timeout = results.iter().filter(|r| r.0 == SampleOutcome::Timeout).count();
    let mut success_times: Vec<f64> = results
        .iter()
        .filter(|r| r.0 == SampleOutcome::Success)
        .map(|r| r.1.as_secs_f64())
        .collect();
    success_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = if success_times.is_empty() {
        0.0
    } else {
        success_times.iter().sum::<f64>() / success_times.len() as f64
    };
    let median = if success_times.is_empty() {
        0.0
    } else {
        success_times[success_times.len() / 2]
    };
    Ok(StatsReport {
        count: spec.count,
        success,
        not_in_class,
        timeout,
        success_ratio: success as f64 / spec.count as f64,
        mean_runtime_s: mean,
        median_runtime_s: median,
    })
}

fn run_one(
    spec: &SampleSpec,
    config: &FastBasisConfig,
    index: u64,
) -> Result<(SampleOutcome, Duration), Error> {
    let f = spec.sample(index);
    let started = Instant::now();
    let cfg = FastBasisConfig {
        deadline: Some(started + spec.timeout),
        ..config.clone()
    };
    match fast_basis_with(&f, &cfg) {
        Ok(r) => {
            let elapsed = started.elapsed();
            if r.is_basis() {
                Ok((SampleOutcome::Success, elapsed))
            } else {
                Ok((SampleOutcome::NotInClass, elapsed))
            }
        }
        Err(Error::Timeout) => Ok((SampleOutcome::Timeout, started.elapsed())),
        Err(e) => Err(e),
    }
}
