use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mgf::unit_temperature;
use crate::combinatorics::{self, MAX_ORDER};
use crate::error::{Error, Result};
use crate::geometry::GeometrySummary;
use crate::scenario::{Lobe, Scenario};

/// Lowest cumulant order that still yields every reported statistic.
pub const MIN_REPORTED_ORDER: usize = 4;

/// Cumulants of one lobe's RFI temperature and the statistics derived from
/// the first four.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantSet {
    pub lobe: Lobe,
    /// `k_1, k_2, ...` in kelvin^n; index 0 holds `k_1`.
    pub cumulants: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub std: f64,
    /// `k_3 / k_2^(3/2)`; NaN (null in JSON) when the variance vanishes.
    pub skewness: f64,
    /// `k_4 / k_2^2`; NaN (null in JSON) when the variance vanishes.
    pub excess_kurtosis: f64,
    /// Fourth central moment `k_4 + 3 k_2^2`.
    pub mu4: f64,
}

impl CumulantSet {
    pub fn from_cumulants(lobe: Lobe, cumulants: Vec<f64>) -> Result<Self> {
        if cumulants.len() < MIN_REPORTED_ORDER {
            return Err(Error::OutOfRange {
                what: "cumulant order",
                value: cumulants.len() as f64,
                min: MIN_REPORTED_ORDER as f64,
                max: MAX_ORDER as f64,
            });
        }
        let (k1, k2, k3, k4) = (cumulants[0], cumulants[1], cumulants[2], cumulants[3]);
        let (skewness, excess_kurtosis) = if k2 > 0.0 {
            (k3 / k2.powf(1.5), k4 / (k2 * k2))
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(CumulantSet {
            lobe,
            mean: k1,
            variance: k2,
            std: k2.sqrt(),
            skewness,
            excess_kurtosis,
            mu4: k4 + 3.0 * k2 * k2,
            cumulants,
        })
    }

    /// The `n`-th cumulant, 1-based.
    pub fn k(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.cumulants.get(i).copied())
    }

    pub fn max_order(&self) -> usize {
        self.cumulants.len()
    }
}

/// Mean RFI temperature compared against the acceptance threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdVerdict {
    pub lobe: Lobe,
    pub mean: f64,
    pub std: f64,
    pub threshold: f64,
    /// Strictly `mean > threshold`; a mean equal to the threshold passes.
    pub mean_exceeds: bool,
}

pub fn threshold_verdict(cs: &CumulantSet, tau: f64) -> ThresholdVerdict {
    ThresholdVerdict {
        lobe: cs.lobe,
        mean: cs.mean,
        std: cs.std,
        threshold: tau,
        mean_exceeds: cs.mean > tau,
    }
}

fn check_order(max_order: usize) -> Result<()> {
    if !(MIN_REPORTED_ORDER..=MAX_ORDER).contains(&max_order) {
        return Err(Error::OrderOutOfRange {
            order: max_order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

fn check_alpha(s: &Scenario) -> Result<()> {
    if !(s.path_loss_exponent > 2.0) {
        return Err(Error::AlphaOutOfRange {
            alpha: s.path_loss_exponent,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    Ok(())
}

/// `k_n = lambda_ml p_n(lambda_bs) u_ml^n`, where `u_ml` is the per-station
/// temperature at the footprint distance.
pub fn cumulants_main_lobe(
    s: &Scenario,
    geo: &GeometrySummary,
    max_order: usize,
) -> Result<CumulantSet> {
    check_order(max_order)?;
    check_alpha(s)?;
    let u = unit_temperature(s, s.gain.main_lobe_gain, geo.d_ml);
    let ks = (1..=max_order)
        .map(|n| {
            let pn = combinatorics::poisson_raw_moment(n, s.bs_intensity)?;
            Ok(geo.lambda_ml * pn * u.powi(n as i32))
        })
        .collect::<Result<Vec<_>>>()?;
    CumulantSet::from_cumulants(Lobe::Main, ks)
}

/// Side-lobe cumulants from integrating `x^(1 - n alpha)` against the radial
/// cluster density over `[d_min, d_max]`:
///
/// `k_n = 2 pi (r_e/h) lambda_c p_n(lambda_bs) (g eta omega^alpha)^n
///        (d_max^(2 - n alpha) - d_min^(2 - n alpha)) / (2 - n alpha)`.
///
/// With `b = n alpha - 2` and `L = ln(d_max / d_min)` the difference quotient
/// is rewritten as `d_min^(-b) (1 - e^(-b L)) / b`, which is free of
/// cancellation as `b -> 0`; its limit there is `L`, the logarithmic form of
/// the first cumulant at `alpha = 2`.
pub fn cumulants_side_lobe(
    s: &Scenario,
    geo: &GeometrySummary,
    max_order: usize,
) -> Result<CumulantSet> {
    check_order(max_order)?;
    check_alpha(s)?;
    let alpha = s.path_loss_exponent;
    let g_eta = s.gain.side_lobe_gain * s.eta();
    let scale = s.omega() / geo.d_min;
    let log_ratio = (geo.d_max / geo.d_min).ln();
    let prefactor = 2.0 * PI * geo.cos_theta_max * s.cluster_intensity * geo.d_min * geo.d_min;
    let ks = (1..=max_order)
        .map(|n| {
            let nf = n as f64;
            let b = nf * alpha - 2.0;
            let quotient = -(-b * log_ratio).exp_m1() / b;
            let pn = combinatorics::poisson_raw_moment(n, s.bs_intensity)?;
            Ok(prefactor * pn * g_eta.powi(n as i32) * scale.powf(nf * alpha) * quotient)
        })
        .collect::<Result<Vec<_>>>()?;
    CumulantSet::from_cumulants(Lobe::Side, ks)
}

pub fn cumulants(
    s: &Scenario,
    geo: &GeometrySummary,
    lobe: Lobe,
    max_order: usize,
) -> Result<CumulantSet> {
    match lobe {
        Lobe::Main => cumulants_main_lobe(s, geo, max_order),
        Lobe::Side => cumulants_side_lobe(s, geo, max_order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::derive_geometry;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn reference(alpha: f64, lambda_bs: f64) -> (Scenario, GeometrySummary) {
        let s = Scenario::reference()
            .with_path_loss_exponent(alpha)
            .with_bs_intensity(lambda_bs);
        let geo = derive_geometry(&s).unwrap();
        (s, geo)
    }

    /// Direct transcription of the side-lobe closed form, kept in the
    /// original difference-of-powers shape.
    fn side_lobe_naive(s: &Scenario, geo: &GeometrySummary, n: i32) -> f64 {
        let a = s.path_loss_exponent;
        let e = 2.0 - n as f64 * a;
        let pn = combinatorics::poisson_raw_moment(n as usize, s.bs_intensity).unwrap();
        2.0 * PI / e
            * (s.earth_radius / s.sat_center_distance)
            * (s.gain.side_lobe_gain * s.eta() * s.omega().powf(a)).powi(n)
            * s.cluster_intensity
            * pn
            * (geo.d_max.powf(e) - geo.d_min.powf(e))
    }

    #[test]
    fn main_lobe_near_alpha_two() {
        let (s, geo) = reference(2.0001, 100.0);
        let cs = cumulants_main_lobe(&s, &geo, 4).unwrap();
        // 0.16 * 100 * eta (omega/d_ml)^2 ~ 55.6 K
        assert!(cs.mean > 55.0 && cs.mean < 56.5, "{}", cs.mean);
        assert!(rel(cs.std, 139.9) < 0.02, "{}", cs.std);
    }

    #[test]
    fn side_lobe_near_alpha_two() {
        // alpha -> 2 limit: 2 pi (r_e/h) g eta omega^2 lambda_c lambda_bs ln(d_max/d_min)
        let limit = |lambda: f64| {
            let s = Scenario::reference();
            let geo = derive_geometry(&s).unwrap();
            2.0 * PI
                * geo.cos_theta_max
                * s.gain.side_lobe_gain
                * s.eta()
                * s.omega().powi(2)
                * s.cluster_intensity
                * lambda
                * (geo.d_max / geo.d_min).ln()
        };
        for &(lambda, approx) in &[(50.0, 0.40), (100.0, 0.80), (200.0, 1.61)] {
            let (s, geo) = reference(2.0001, lambda);
            let cs = cumulants_side_lobe(&s, &geo, 4).unwrap();
            assert!(rel(cs.mean, approx) < 0.02, "lambda={lambda}: {}", cs.mean);
            assert!(rel(cs.mean, limit(lambda)) < 2e-3);
        }
        let (s, geo) = reference(2.0001, 100.0);
        let cs = cumulants_side_lobe(&s, &geo, 4).unwrap();
        assert!(rel(cs.std, 0.023) < 0.05, "{}", cs.std);
    }

    #[test]
    fn side_lobe_stable_form_matches_naive() {
        for &alpha in &[2.01, 2.05, 2.1, 2.2] {
            let (s, geo) = reference(alpha, 100.0);
            let cs = cumulants_side_lobe(&s, &geo, 6).unwrap();
            for n in 1..=6 {
                let naive = side_lobe_naive(&s, &geo, n);
                assert!(rel(cs.k(n as usize).unwrap(), naive) < 1e-9, "alpha={alpha} n={n}");
            }
        }
    }

    #[test]
    fn empty_clusters_have_zero_cumulants() {
        let (s, geo) = reference(2.1, 0.0);
        for cs in [
            cumulants_main_lobe(&s, &geo, 4).unwrap(),
            cumulants_side_lobe(&s, &geo, 4).unwrap(),
        ] {
            assert!(cs.cumulants.iter().all(|&k| k == 0.0));
            assert!(cs.skewness.is_nan());
        }
    }

    #[test]
    fn derived_statistics() {
        let (s, geo) = reference(2.1, 50.0);
        let cs = cumulants_main_lobe(&s, &geo, 5).unwrap();
        assert_eq!(cs.max_order(), 5);
        assert_eq!(cs.mean, cs.k(1).unwrap());
        assert_eq!(cs.variance, cs.k(2).unwrap());
        assert!(rel(cs.skewness, cs.k(3).unwrap() / cs.k(2).unwrap().powf(1.5)) < 1e-15);
        assert!(rel(cs.mu4, cs.k(4).unwrap() + 3.0 * cs.variance.powi(2)) < 1e-15);
        assert!(cs.skewness > 0.0 && cs.excess_kurtosis > 0.0);
        assert_eq!(cs.k(0), None);
    }

    #[test]
    fn order_and_alpha_guards() {
        let (s, geo) = reference(2.1, 50.0);
        assert!(cumulants_main_lobe(&s, &geo, 3).is_err());
        assert!(cumulants_side_lobe(&s, &geo, 21).is_err());
        let bad = s.with_path_loss_exponent(2.0);
        assert_eq!(
            cumulants_side_lobe(&bad, &geo, 4).unwrap_err().code(),
            "alpha_out_of_range"
        );
    }

    #[test]
    fn verdicts() {
        for &(lambda, exceeds) in &[(50.0, false), (100.0, false), (200.0, true)] {
            let (s, geo) = reference(2.0001, lambda);
            let cs = cumulants_side_lobe(&s, &geo, 4).unwrap();
            let v = threshold_verdict(&cs, s.rfi_threshold);
            assert_eq!(v.mean_exceeds, exceeds);
            assert_eq!(v.threshold, 1.3);
        }
        let mut cs = CumulantSet::from_cumulants(Lobe::Side, vec![1.3, 0.1, 0.0, 0.0]).unwrap();
        assert!(!threshold_verdict(&cs, 1.3).mean_exceeds);
        cs.mean = 1.3 + 1e-12;
        assert!(threshold_verdict(&cs, 1.3).mean_exceeds);
    }
}
