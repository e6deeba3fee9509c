//! Brute-force oracle: sample the cluster process directly and estimate the
//! same statistics the closed forms predict.
//!
//! Trials are grouped into fixed batches of [`BATCH_TRIALS`]. Each batch
//! accumulates its own [`Moments`]; the batch accumulators are merged in batch
//! order after all batches finish, so the result is bit-identical for a given
//! `(seed, trials)` whatever the worker count.

mod moments;
mod poisson;
mod sampler;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use moments::Moments;
pub use sampler::{
    sample_cap_distance, sample_main_lobe, sample_main_lobe_collapsed, sample_side_lobe,
    trial_rng, LobeSampler,
};

use crate::error::{Error, Result};
use crate::geometry::GeometrySummary;
use crate::scenario::{Lobe, Scenario};

pub const BATCH_TRIALS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            trials: 100_000,
            seed: 42,
            workers: default_workers(),
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Sample statistics of one lobe at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub lobe: Lobe,
    pub path_loss_exponent: f64,
    pub bs_intensity: f64,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub std: f64,
    /// From the k-statistics `k_3 / k_2^(3/2)`.
    pub skewness: f64,
    /// From the k-statistics `k_4 / k_2^2`.
    pub excess_kurtosis: f64,
    /// `sqrt(k_2 / n)`.
    pub se_mean: f64,
    /// `sqrt(k_4 / n + 2 k_2^2 / (n - 1))`, the large-sample standard error
    /// of the unbiased variance.
    pub se_variance: f64,
    /// Set when some statistics could not be formed (too few trials).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

impl McEstimate {
    fn from_moments(lobe: Lobe, alpha: f64, s: &Scenario, cfg: &McConfig, m: &Moments) -> Self {
        let n = m.count() as f64;
        let nan = f64::NAN;
        let variance = m.k2().unwrap_or(nan);
        let k3 = m.k3().unwrap_or(nan);
        let k4 = m.k4().unwrap_or(nan);
        let (skewness, excess_kurtosis) = if variance > 0.0 {
            (k3 / variance.powf(1.5), k4 / (variance * variance))
        } else {
            (nan, nan)
        };
        let se_variance = if n >= 4.0 {
            (k4 / n + 2.0 * variance * variance / (n - 1.0)).max(0.0).sqrt()
        } else {
            nan
        };
        McEstimate {
            lobe,
            path_loss_exponent: alpha,
            bs_intensity: s.bs_intensity,
            trials: m.count(),
            seed: cfg.seed,
            mean: m.mean(),
            variance,
            std: variance.sqrt(),
            skewness,
            excess_kurtosis,
            se_mean: (variance / n).sqrt(),
            se_variance,
            flag: (m.count() < 2).then(|| "insufficient_trials_for_variance".to_string()),
        }
    }

    /// `|mean - expected|` in units of the standard error.
    pub fn mean_z(&self, expected: f64) -> f64 {
        (self.mean - expected).abs() / self.se_mean
    }

    pub fn variance_z(&self, expected: f64) -> f64 {
        (self.variance - expected).abs() / self.se_variance
    }
}

fn check_config(cfg: &McConfig) -> Result<()> {
    if cfg.trials == 0 {
        return Err(Error::NonPositive {
            field: "trials".into(),
            value: 0.0,
        });
    }
    if cfg.workers == 0 {
        return Err(Error::NonPositive {
            field: "workers".into(),
            value: 0.0,
        });
    }
    Ok(())
}

/// Estimates a lobe's statistics at the scenario's own path-loss exponent.
pub fn estimate(s: &Scenario, geo: &GeometrySummary, lobe: Lobe, cfg: &McConfig) -> Result<McEstimate> {
    let mut all = estimate_alpha_sweep(s, geo, lobe, &[s.path_loss_exponent], cfg)?;
    Ok(all.remove(0))
}

/// Estimates a lobe's statistics for every exponent in `alphas` from one set
/// of trials (common random numbers across exponents).
///
/// Element `i` is bit-identical to [`estimate`] run with the exponent set to
/// `alphas[i]`.
pub fn estimate_alpha_sweep(
    s: &Scenario,
    geo: &GeometrySummary,
    lobe: Lobe,
    alphas: &[f64],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    check_config(cfg)?;
    let sampler = LobeSampler::new(s, geo, lobe, alphas)?;
    let batches = cfg.trials.div_ceil(BATCH_TRIALS);

    let run_batch = |batch: u64| -> Vec<Moments> {
        let mut acc = vec![Moments::new(); alphas.len()];
        let mut out = vec![0.0; alphas.len()];
        let first = batch * BATCH_TRIALS;
        let last = (first + BATCH_TRIALS).min(cfg.trials);
        for trial in first..last {
            let mut rng = trial_rng(cfg.seed, trial);
            sampler.sample_into(&mut rng, &mut out);
            for (m, &x) in acc.iter_mut().zip(&out) {
                m.push(x);
            }
        }
        acc
    };

    let partials: Vec<Vec<Moments>> = if cfg.workers == 1 {
        (0..batches).map(run_batch).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidField {
                field: "workers".into(),
                reason: e.to_string(),
            })?;
        pool.install(|| (0..batches).into_par_iter().map(run_batch).collect())
    };

    let mut totals = vec![Moments::new(); alphas.len()];
    for batch in &partials {
        for (total, m) in totals.iter_mut().zip(batch) {
            total.merge(m);
        }
    }
    Ok(alphas
        .iter()
        .zip(&totals)
        .map(|(&alpha, m)| McEstimate::from_moments(lobe, alpha, s, cfg, m))
        .collect())
}
