use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::unit_temperature;
use crate::error::{Error, Result};
use crate::geometry::{distance_from_cos_theta, GeometrySummary};
use crate::scenario::{Lobe, Scenario};

use super::poisson::PoissonSampler;

/// Random stream for one trial: ChaCha8 keyed by the master seed (expanded
/// with `seed_from_u64`), with the trial index selecting the 64-bit stream.
///
/// A trial's draws depend only on `(seed, trial)`, never on which worker runs
/// it or in what order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn poisson(mean: f64) -> Result<PoissonSampler> {
    PoissonSampler::new(mean)
}

#[inline]
fn draw<R: Rng + ?Sized>(dist: &PoissonSampler, rng: &mut R) -> u64 {
    dist.sample(rng)
}

/// Draws one realization of a lobe's RFI temperature for several path-loss
/// exponents at once.
///
/// The random draws (cluster count, positions, station counts) do not depend
/// on the exponent, so every exponent sees the same point pattern; each output
/// on its own is an exact sample of that exponent's distribution.
#[derive(Debug, Clone)]
pub struct LobeSampler {
    lobe: Lobe,
    clusters: PoissonSampler,
    stations: PoissonSampler,
    /// Per-station temperature at the footprint, per exponent (main lobe).
    footprint_unit: Vec<f64>,
    /// `g eta omega^alpha` per exponent (side lobe).
    side_coefficient: Vec<f64>,
    half_alphas: Vec<f64>,
    d_min_sq: f64,
    /// `d_max^2 - d_min^2`.
    span_sq: f64,
}

impl LobeSampler {
    pub fn new(s: &Scenario, geo: &GeometrySummary, lobe: Lobe, alphas: &[f64]) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::EmptyGrid("path-loss exponent list"));
        }
        let mut footprint_unit = Vec::with_capacity(alphas.len());
        let mut side_coefficient = Vec::with_capacity(alphas.len());
        for &alpha in alphas {
            let sa = s.with_path_loss_exponent(alpha);
            sa.validate()?;
            footprint_unit.push(unit_temperature(&sa, sa.gain.main_lobe_gain, geo.d_ml));
            side_coefficient.push(sa.gain.side_lobe_gain * sa.eta() * sa.omega().powf(alpha));
        }
        let cluster_mean = match lobe {
            Lobe::Main => geo.lambda_ml,
            Lobe::Side => geo.lambda_cap,
        };
        Ok(LobeSampler {
            lobe,
            clusters: poisson(cluster_mean)?,
            stations: poisson(s.bs_intensity)?,
            footprint_unit,
            side_coefficient,
            half_alphas: alphas.iter().map(|a| 0.5 * a).collect(),
            d_min_sq: geo.d_min * geo.d_min,
            span_sq: geo.d_max * geo.d_max - geo.d_min * geo.d_min,
        })
    }

    pub fn lobe(&self) -> Lobe {
        self.lobe
    }

    pub fn len(&self) -> usize {
        self.half_alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_alphas.is_empty()
    }

    /// Overwrites `out[i]` with the temperature under the `i`-th exponent.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        out.fill(0.0);
        match self.lobe {
            Lobe::Main => {
                // every footprint cluster sits at the same distance, so only
                // the station total matters
                let clusters = draw(&self.clusters, rng);
                let stations: u64 = (0..clusters).map(|_| draw(&self.stations, rng)).sum();
                for (o, u) in out.iter_mut().zip(&self.footprint_unit) {
                    *o = u * stations as f64;
                }
            }
            Lobe::Side => {
                let clusters = draw(&self.clusters, rng);
                for _ in 0..clusters {
                    let x2 = self.cap_distance_squared(rng);
                    let n = draw(&self.stations, rng);
                    if n == 0 {
                        continue;
                    }
                    let ln_x2 = x2.ln();
                    let n = n as f64;
                    for ((o, c), half) in out
                        .iter_mut()
                        .zip(&self.side_coefficient)
                        .zip(&self.half_alphas)
                    {
                        *o += c * n * (-half * ln_x2).exp();
                    }
                }
            }
        }
    }

    /// Squared distance to a cluster center placed uniformly (by area) on the
    /// visible cap. `cos(theta)` is uniform on `[r_e/h, 1]` and `x^2` is affine
    /// in `cos(theta)`, so `x^2` is uniform on `[d_min^2, d_max^2]`.
    #[inline]
    fn cap_distance_squared<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.d_min_sq + u * self.span_sq
    }
}

/// Distance to an area-uniform point of the visible cap.
pub fn sample_cap_distance<R: Rng + ?Sized>(s: &Scenario, geo: &GeometrySummary, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let cos_theta = 1.0 - u * (1.0 - geo.cos_theta_max);
    distance_from_cos_theta(s.earth_radius, s.sat_center_distance, cos_theta)
}

/// One main-lobe realization: `M ~ Poisson(lambda_ml)` clusters, each with
/// `N_i ~ Poisson(lambda_bs)` stations at the footprint distance.
pub fn sample_main_lobe<R: Rng + ?Sized>(s: &Scenario, geo: &GeometrySummary, rng: &mut R) -> Result<f64> {
    let sampler = LobeSampler::new(s, geo, Lobe::Main, &[s.path_loss_exponent])?;
    let mut out = [0.0];
    sampler.sample_into(rng, &mut out);
    Ok(out[0])
}

/// Main-lobe realization from a single `Poisson(lambda_ml * lambda_bs)`
/// station count.
///
/// Only the mean agrees with [`sample_main_lobe`]: the two-stage total is
/// compound Poisson with variance `lambda_ml (lambda_bs + lambda_bs^2) u^2`,
/// while this draw has variance `lambda_ml lambda_bs u^2`. Estimation always
/// uses the two-stage sampler.
pub fn sample_main_lobe_collapsed<R: Rng + ?Sized>(
    s: &Scenario,
    geo: &GeometrySummary,
    rng: &mut R,
) -> Result<f64> {
    let total = poisson(geo.lambda_ml * s.bs_intensity)?;
    let u = unit_temperature(s, s.gain.main_lobe_gain, geo.d_ml);
    Ok(u * draw(&total, rng) as f64)
}

/// One side-lobe realization: `M ~ Poisson(lambda_cap)` clusters placed
/// uniformly on the whole visible cap.
pub fn sample_side_lobe<R: Rng + ?Sized>(s: &Scenario, geo: &GeometrySummary, rng: &mut R) -> Result<f64> {
    let sampler = LobeSampler::new(s, geo, Lobe::Side, &[s.path_loss_exponent])?;
    let mut out = [0.0];
    sampler.sample_into(rng, &mut out);
    Ok(out[0])
}
