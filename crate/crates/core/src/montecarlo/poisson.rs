//! Table-driven Poisson sampler for the per-cluster station counts, which are
//! drawn hundreds of millions of times with one fixed mean.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

/// Means above this use `rand_distr::Poisson` instead of a table.
const MAX_TABLE_MEAN: f64 = 10_000.0;
const GUIDE_CELLS_PER_ENTRY: usize = 2;

/// Poisson draws by inversion of a tabulated CDF with a guide table.
///
/// One uniform per draw. The table extends until the pmf drops below
/// `1e-3 * f64::EPSILON`; the last CDF entry is set to 1, so the truncated
/// upper tail (mass below `1e-15`) is folded into the last count.
#[derive(Debug, Clone)]
pub(crate) enum PoissonSampler {
    Zero,
    Table {
        cdf: Vec<f64>,
        guide: Vec<u32>,
    },
    Large(Poisson<f64>),
}

impl PoissonSampler {
    pub(crate) fn new(mean: f64) -> Result<Self> {
        if !(mean.is_finite() && mean >= 0.0) {
            return Err(Error::InvalidField {
                field: "poisson mean".into(),
                reason: format!("{mean} is not a finite non-negative number"),
            });
        }
        if mean == 0.0 {
            return Ok(PoissonSampler::Zero);
        }
        if mean > MAX_TABLE_MEAN {
            let d = Poisson::new(mean).map_err(|e| Error::InvalidField {
                field: "poisson mean".into(),
                reason: format!("{mean}: {e}"),
            })?;
            return Ok(PoissonSampler::Large(d));
        }
        let pmf = pmf_table(mean);
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for p in pmf {
            acc += p;
            cdf.push(acc);
        }
        *cdf.last_mut().expect("pmf table is never empty") = 1.0;
        let cells = cdf.len() * GUIDE_CELLS_PER_ENTRY;
        let mut guide = Vec::with_capacity(cells);
        let mut k = 0usize;
        for cell in 0..cells {
            let lo = cell as f64 / cells as f64;
            while k + 1 < cdf.len() && cdf[k] <= lo {
                k += 1;
            }
            guide.push(k as u32);
        }
        Ok(PoissonSampler::Table { cdf, guide })
    }

    #[inline]
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            PoissonSampler::Zero => 0,
            PoissonSampler::Large(d) => d.sample(rng) as u64,
            PoissonSampler::Table { cdf, guide } => {
                let u: f64 = rng.random();
                let cell = ((u * guide.len() as f64) as usize).min(guide.len() - 1);
                let mut k = guide[cell] as usize;
                // u < 1 = cdf[last], so this stops inside the table
                while cdf[k] <= u {
                    k += 1;
                }
                k as u64
            }
        }
    }
}

/// `P(N = k)` for `k = 0..` until the upper tail is below double resolution,
/// normalized to unit sum.
fn pmf_table(mean: f64) -> Vec<f64> {
    let mode = mean.floor() as usize;
    let ln_fact: f64 = (1..=mode).map(|i| (i as f64).ln()).sum();
    let p_mode = (mode as f64 * mean.ln() - mean - ln_fact).exp();

    let mut pmf = vec![0.0; mode + 1];
    pmf[mode] = p_mode;
    for k in (0..mode).rev() {
        pmf[k] = pmf[k + 1] * (k + 1) as f64 / mean;
    }
    let mut p = p_mode;
    let mut k = mode;
    loop {
        k += 1;
        p *= mean / k as f64;
        if p < f64::EPSILON * 1e-3 {
            break;
        }
        pmf.push(p);
    }
    // the mode term carries the rounding of ln(mode!); the dropped tail is
    // far smaller, so normalizing removes the larger error
    let total: f64 = pmf.iter().sum();
    pmf.iter_mut().for_each(|p| *p /= total);
    pmf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{trial_rng, Moments};

    #[test]
    fn table_sums_to_one() {
        for mean in [0.16, 1.0, 50.0, 100.0, 200.0, 2475.9] {
            let s: f64 = pmf_table(mean).iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "mean {mean}: {s}");
        }
    }

    #[test]
    fn sample_moments_match_poisson() {
        for mean in [0.16, 3.5, 100.0, 2475.9] {
            let d = PoissonSampler::new(mean).unwrap();
            let mut rng = trial_rng(9, 0);
            let n = 200_000;
            let m: Moments = (0..n).map(|_| d.sample(&mut rng) as f64).collect();
            let se = (mean / n as f64).sqrt();
            assert!((m.mean() - mean).abs() < 4.0 * se, "mean {mean}: {}", m.mean());
            let var_se = (mean / n as f64 + 2.0 * mean * mean / n as f64).sqrt();
            assert!((m.k2().unwrap() - mean).abs() < 4.0 * var_se);
            assert!((m.k3().unwrap() - mean).abs() < 0.1 * mean.max(1.0) + 5.0 * mean.powf(1.5) / (n as f64).sqrt());
        }
    }

    #[test]
    fn cdf_is_running_sum_of_pmf() {
        let mean = 7.0;
        let pmf = pmf_table(mean);
        let d = PoissonSampler::new(mean).unwrap();
        let PoissonSampler::Table { cdf, .. } = &d else {
            panic!("expected table");
        };
        let mut acc = 0.0;
        for (k, p) in pmf.iter().enumerate().take(pmf.len() - 1) {
            acc += p;
            assert_eq!(acc, cdf[k]);
        }
        assert_eq!(cdf[cdf.len() - 1], 1.0);
        assert!(cdf.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_bad_means() {
        assert!(PoissonSampler::new(-1.0).is_err());
        assert!(PoissonSampler::new(f64::NAN).is_err());
        assert!(matches!(PoissonSampler::new(0.0).unwrap(), PoissonSampler::Zero));
        assert!(matches!(PoissonSampler::new(1e6).unwrap(), PoissonSampler::Large(_)));
    }
}
