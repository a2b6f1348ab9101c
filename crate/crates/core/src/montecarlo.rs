//! Seeded Monte Carlo estimates of escape-length means and medians.
//!
//! Samples are generated in fixed-size chunks; chunk `c` draws from a
//! ChaCha8 stream keyed by `(seed, c)`, so results are bit-identical for a
//! given `(n, seed)` regardless of how many worker threads run.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::case::CaseLabel;
use crate::disk::{chord, disk_classify, disk_path_length, DiskState};
use crate::error::{EscapeError, Result};
use crate::oracle::{realize, EscapeRealization, PathStrategy, Region};
use crate::strip::{classify_strip2, classify_strip3, normalize_state, strip2_path_length, strip3_path_length, StripState};

const CHUNK: usize = 1 << 16;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.575_829_303_548_900_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    Strip,
    Disk,
}

impl Scenario {
    pub fn region(self) -> Region {
        match self {
            Scenario::Strip => Region::Strip,
            Scenario::Disk => Region::Disk,
        }
    }
}

/// How the radial start coordinate is drawn in the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DiskSampling {
    /// Uniform over the disk's area: `x = sqrt(U)`.
    AreaUniform,
    /// `x ~ U[0, 1]`; over-weights starts near the centre.
    UniformRadius,
    /// Every start at the same radius.
    FixedRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum State {
    Strip(StripState),
    Disk(DiskState),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n: usize,
    pub seed: u64,
    pub disk_sampling: DiskSampling,
}

impl McConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            disk_sampling: DiskSampling::AreaUniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub point: f64,
    /// Standard error for means; 99% interval half-width for medians.
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
    /// The top 0.1% of samples carry more than 10% of the total.
    pub heavy_tail: bool,
    /// Samples whose path length could not be evaluated (singular set).
    pub failures: usize,
}

pub fn sample_state<R: Rng + ?Sized>(scenario: Scenario, sampling: DiskSampling, rng: &mut R) -> State {
    match scenario {
        Scenario::Strip => {
            let x: f64 = rng.random();
            let theta = rng.random_range(-PI..=PI);
            State::Strip(normalize_state(x, theta).expect("sampled within range"))
        }
        Scenario::Disk => {
            let u: f64 = rng.random();
            let x = match sampling {
                DiskSampling::AreaUniform => u.sqrt(),
                DiskSampling::UniformRadius => u,
                DiskSampling::FixedRadius(x) => x,
            };
            let theta = rng.random_range(-PI..=PI);
            State::Disk(DiskState { x, theta })
        }
    }
}

/// Analytic path length of `strat` from `state`.
pub fn path_length(state: State, strat: &PathStrategy) -> Result<f64> {
    match (state, strat) {
        (State::Strip(s), PathStrategy::Strip2(p)) => strip2_path_length(s, *p),
        (State::Strip(s), PathStrategy::Strip3(p)) => strip3_path_length(s, *p),
        (State::Strip(s), PathStrategy::Straight) => {
            let c = s.theta.cos();
            let d = if s.theta < std::f64::consts::FRAC_PI_2 { 1.0 - s.x } else { -s.x };
            if c == 0.0 {
                Err(EscapeError::Singular { angle: s.theta, cosine: c })
            } else {
                Ok(d / c)
            }
        }
        (State::Disk(s), PathStrategy::Disk2(p)) => disk_path_length(s, *p),
        (State::Disk(s), PathStrategy::Straight) => Ok(chord(s.x, s.theta)),
        (state, strat) => Err(EscapeError::Domain(format!("{strat:?} does not apply to {state:?}"))),
    }
}

pub fn case_label(state: State, strat: &PathStrategy) -> Option<CaseLabel> {
    match (state, strat) {
        (State::Strip(s), PathStrategy::Strip2(p)) => Some(classify_strip2(s, *p)),
        (State::Strip(s), PathStrategy::Strip3(p)) => Some(classify_strip3(s, *p)),
        (State::Disk(s), PathStrategy::Disk2(p)) => Some(disk_classify(s, *p)),
        _ => None,
    }
}

/// Draw `n` values of `sample` over deterministic per-chunk streams.
/// Returns the successful draws in chunk order and the failure count.
pub(crate) fn sample_chunks<F>(n: usize, seed: u64, sample: F) -> (Vec<f64>, usize)
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(Vec<f64>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            let mut out = Vec::with_capacity(len);
            let mut failed = 0;
            for _ in 0..len {
                match sample(&mut rng) {
                    Ok(v) => out.push(v),
                    Err(_) => failed += 1,
                }
            }
            (out, failed)
        })
        .collect();
    let failures = parts.iter().map(|p| p.1).sum();
    let values = parts.into_iter().flat_map(|p| p.0).collect();
    (values, failures)
}

/// All path lengths for `cfg.n` sampled states, plus the failure count.
pub fn sample_lengths(scenario: Scenario, strat: &PathStrategy, cfg: &McConfig) -> (Vec<f64>, usize) {
    sample_chunks(cfg.n, cfg.seed, |rng| {
        path_length(sample_state(scenario, cfg.disk_sampling, rng), strat)
    })
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Mean and standard error of a sample, with the heavy-tail flag.
pub fn summarize_mean(mut values: Vec<f64>, seed: u64, failures: usize) -> Result<McEstimate> {
    let n = values.len();
    if n < 2 {
        return Err(EscapeError::Domain("need at least two successful samples".into()));
    }
    let total = neumaier_sum(values.iter().copied());
    let mean = total / n as f64;
    let ss = neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    let std_error = (ss / (n - 1) as f64 / n as f64).sqrt();
    let top = n.div_ceil(1000);
    let (_, _, upper) = values.select_nth_unstable_by(n - top - 1, |a, b| a.total_cmp(b));
    let tail = neumaier_sum(upper.iter().copied());
    Ok(McEstimate {
        point: mean,
        std_error,
        n,
        seed,
        heavy_tail: tail > 0.1 * total,
        failures,
    })
}

/// Sample mean of the escape length. A `heavy_tail` result means the
/// estimate is dominated by rare long paths and the true mean may be infinite
/// (the straight strip strategy is the standard example).
pub fn estimate_mean_with(scenario: Scenario, strat: &PathStrategy, cfg: &McConfig) -> Result<McEstimate> {
    if cfg.n < 1000 {
        return Err(EscapeError::Domain(format!("n = {} is below 1000", cfg.n)));
    }
    let (values, failures) = sample_lengths(scenario, strat, cfg);
    summarize_mean(values, cfg.seed, failures)
}

pub fn estimate_mean(scenario: Scenario, strat: &PathStrategy, n: usize, seed: u64) -> Result<McEstimate> {
    estimate_mean_with(scenario, strat, &McConfig::new(n, seed))
}

/// Sample median with a 99% order-statistic interval.
pub fn summarize_median(mut values: Vec<f64>, seed: u64, failures: usize) -> Result<McEstimate> {
    let n = values.len();
    if n == 0 {
        return Err(EscapeError::Domain("no successful samples".into()));
    }
    values.par_sort_unstable_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    };
    let half = Z99 * (n as f64).sqrt() / 2.0;
    let lo = ((n as f64 / 2.0 - half).floor().max(0.0) as usize).min(n - 1);
    let hi = ((n as f64 / 2.0 + half).ceil() as usize).min(n - 1);
    Ok(McEstimate {
        point: median,
        std_error: (median - values[lo]).max(values[hi] - median),
        n,
        seed,
        heavy_tail: false,
        failures,
    })
}

pub fn estimate_median_with(scenario: Scenario, strat: &PathStrategy, cfg: &McConfig) -> Result<McEstimate> {
    if cfg.n < 1000 {
        return Err(EscapeError::Domain(format!("n = {} is below 1000", cfg.n)));
    }
    let (values, failures) = sample_lengths(scenario, strat, cfg);
    summarize_median(values, cfg.seed, failures)
}

pub fn estimate_median(scenario: Scenario, strat: &PathStrategy, n: usize, seed: u64) -> Result<McEstimate> {
    estimate_median_with(scenario, strat, &McConfig::new(n, seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianRow {
    pub strategy: PathStrategy,
    pub median: McEstimate,
}

/// Median escape length for each strategy, all with the same seed.
pub fn sweep_median(scenario: Scenario, grid: &[PathStrategy], cfg: &McConfig) -> Result<Vec<MedianRow>> {
    grid.iter()
        .map(|strat| {
            Ok(MedianRow {
                strategy: *strat,
                median: estimate_median_with(scenario, strat, cfg)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledRealization {
    pub state: State,
    pub case: Option<CaseLabel>,
    pub realization: EscapeRealization,
}

/// `k` sampled states with their oracle realizations, for plotting.
pub fn sample_realizations(scenario: Scenario, strat: &PathStrategy, k: usize, cfg: &McConfig) -> Result<Vec<SampledRealization>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..k)
        .map(|_| {
            let state = sample_state(scenario, cfg.disk_sampling, &mut rng);
            realization_for(state, strat)
        })
        .collect()
}

pub fn realization_for(state: State, strat: &PathStrategy) -> Result<SampledRealization> {
    let (region, start, theta) = match state {
        State::Strip(s) => (Region::Strip, s.start(), s.theta),
        State::Disk(s) => (Region::Disk, s.start(), s.theta),
    };
    Ok(SampledRealization {
        state,
        case: case_label(state, strat),
        realization: realize(region, start, theta, strat)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::DiskStrategy;

    #[test]
    fn reproducible_for_fixed_seed() {
        let strat = PathStrategy::Disk2(DiskStrategy { r: 0.5, alpha: 1.0 });
        let cfg = McConfig::new(200_000, 11);
        let a = estimate_mean_with(Scenario::Disk, &strat, &cfg).unwrap();
        let b = estimate_mean_with(Scenario::Disk, &strat, &cfg).unwrap();
        assert_eq!(a, b);
        let c = estimate_mean_with(Scenario::Disk, &strat, &McConfig::new(200_000, 12)).unwrap();
        assert_ne!(a.point, c.point);
    }

    #[test]
    fn strip_headings_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            match sample_state(Scenario::Strip, DiskSampling::AreaUniform, &mut rng) {
                State::Strip(s) => assert!((0.0..=PI).contains(&s.theta) && (0.0..=1.0).contains(&s.x)),
                State::Disk(_) => unreachable!(),
            }
        }
    }

    #[test]
    fn centre_start_is_degenerate() {
        let cfg = McConfig {
            disk_sampling: DiskSampling::FixedRadius(0.0),
            ..McConfig::new(5_000, 1)
        };
        let strat = PathStrategy::Disk2(DiskStrategy { r: 1.2, alpha: 0.3 });
        let m = estimate_mean_with(Scenario::Disk, &strat, &cfg).unwrap();
        assert_eq!(m.point, 1.0);
        assert_eq!(m.std_error, 0.0);
        let med = estimate_median_with(Scenario::Disk, &strat, &cfg).unwrap();
        assert_eq!(med.point, 1.0);
        assert_eq!(med.std_error, 0.0);
    }

    #[test]
    fn small_n_rejected() {
        assert!(estimate_mean(Scenario::Disk, &PathStrategy::Straight, 999, 0).is_err());
    }

    #[test]
    fn mismatched_strategy_is_a_failure() {
        let (v, failed) = sample_lengths(Scenario::Disk, &PathStrategy::Strip2(crate::strip::Strategy2 { r: 1.1, alpha: 1.3 }), &McConfig::new(100, 0));
        assert!(v.is_empty());
        assert_eq!(failed, 100);
    }
}
