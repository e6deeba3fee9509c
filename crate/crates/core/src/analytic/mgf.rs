use std::f64::consts::PI;

use super::quadrature;
use crate::combinatorics;
use crate::error::{Error, Result};
use crate::geometry::GeometrySummary;
use crate::scenario::{Lobe, Scenario};

/// Largest exponent (natural-log units) allowed before an MGF is declared
/// outside the usable domain.
pub const DEFAULT_OVERFLOW_CAP: f64 = 700.0;

/// Default relative tolerance of the side-lobe distance integral.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Worst-case temperature from one base station at distance `x` seen with
/// linear gain `gain`: `g eta (omega / x)^alpha`.
#[inline]
pub fn unit_temperature(s: &Scenario, gain: f64, x: f64) -> f64 {
    gain * s.eta() * (s.omega() / x).powf(s.path_loss_exponent)
}

/// Per-base-station temperature at distance `x` through the given lobe.
/// A cluster of `N` equidistant stations contributes `N` times this.
pub fn t_cluster_unit(s: &Scenario, lobe: Lobe, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::OutOfRange {
            what: "satellite distance",
            value: x,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok(unit_temperature(s, s.gain.lobe_gain(lobe), x))
}

/// `log M_cluster(t) = lambda_bs (exp(u t) - 1)` with `u` the unit temperature.
pub fn cluster_cgf(s: &Scenario, x: f64, gain: f64, t: f64, cap: f64) -> Result<f64> {
    let inner = unit_temperature(s, gain, x) * t;
    if inner > cap {
        return Err(Error::MgfOverflow {
            t,
            exponent: inner,
            cap,
        });
    }
    let outer = s.bs_intensity * inner.exp_m1();
    if outer > cap {
        return Err(Error::MgfOverflow {
            t,
            exponent: outer,
            cap,
        });
    }
    Ok(outer)
}

/// MGF of the temperature of one cluster at distance `x`.
pub fn mgf_cluster(s: &Scenario, x: f64, gain: f64, t: f64) -> Result<f64> {
    mgf_cluster_capped(s, x, gain, t, DEFAULT_OVERFLOW_CAP)
}

pub fn mgf_cluster_capped(s: &Scenario, x: f64, gain: f64, t: f64, cap: f64) -> Result<f64> {
    Ok(cluster_cgf(s, x, gain, t, cap)?.exp())
}

/// Power series of [`mgf_cluster`] truncated after `order`:
/// `sum_n p_n(lambda_bs) u^n t^n / n!`.
pub fn mgf_cluster_series(s: &Scenario, x: f64, gain: f64, t: f64, order: usize) -> Result<f64> {
    let ut = unit_temperature(s, gain, x) * t;
    let table = combinatorics::shared_table();
    let mut term = 1.0; // (u t)^n / n!
    let mut sum = 0.0;
    for n in 0..=order {
        if n > 0 {
            term *= ut / n as f64;
        }
        sum += table.touchard(n, s.bs_intensity)? * term;
    }
    Ok(sum)
}

fn check_cap(t: f64, exponent: f64) -> Result<f64> {
    if exponent > DEFAULT_OVERFLOW_CAP {
        Err(Error::MgfOverflow {
            t,
            exponent,
            cap: DEFAULT_OVERFLOW_CAP,
        })
    } else {
        Ok(exponent)
    }
}

/// Log-MGF of the main-lobe total: a Poisson(`lambda_ml`) number of clusters,
/// all at the footprint distance.
pub fn cgf_main_lobe(s: &Scenario, geo: &GeometrySummary, t: f64) -> Result<f64> {
    let cluster = cluster_cgf(s, geo.d_ml, s.gain.main_lobe_gain, t, DEFAULT_OVERFLOW_CAP)?;
    check_cap(t, geo.lambda_ml * cluster.exp_m1())
}

pub fn mgf_main_lobe(s: &Scenario, geo: &GeometrySummary, t: f64) -> Result<f64> {
    Ok(cgf_main_lobe(s, geo, t)?.exp())
}

/// Log-MGF of the side-lobe total, from the probability generating functional
/// of the cluster process over the whole visible cap:
/// `2 pi (r_e/h) lambda_c * integral_{d_min}^{d_max} (M_cluster(t; x) - 1) x dx`.
pub fn cgf_side_lobe(s: &Scenario, geo: &GeometrySummary, t: f64, rel_tol: f64) -> Result<f64> {
    if !(rel_tol > 0.0 && rel_tol <= 1e-4) {
        return Err(Error::OutOfRange {
            what: "quadrature rel_tol",
            value: rel_tol,
            min: 0.0,
            max: 1e-4,
        });
    }
    if s.cluster_intensity == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let gain = s.gain.side_lobe_gain;
    let integrand = |x: f64| -> Result<f64> {
        Ok(cluster_cgf(s, x, gain, t, DEFAULT_OVERFLOW_CAP)?.exp_m1() * x)
    };
    let integral = quadrature::integrate(
        integrand,
        geo.d_min,
        geo.d_max,
        rel_tol,
        quadrature::DEFAULT_MAX_SUBDIVISIONS,
    )?;
    check_cap(t, 2.0 * PI * geo.cos_theta_max * s.cluster_intensity * integral.value)
}

pub fn mgf_side_lobe(s: &Scenario, geo: &GeometrySummary, t: f64, rel_tol: f64) -> Result<f64> {
    Ok(cgf_side_lobe(s, geo, t, rel_tol)?.exp())
}

pub fn cgf(s: &Scenario, geo: &GeometrySummary, lobe: Lobe, t: f64) -> Result<f64> {
    match lobe {
        Lobe::Main => cgf_main_lobe(s, geo, t),
        Lobe::Side => cgf_side_lobe(s, geo, t, DEFAULT_REL_TOL),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::derive_geometry;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn reference_at(alpha: f64) -> (Scenario, GeometrySummary) {
        let s = Scenario::reference().with_path_loss_exponent(alpha);
        let geo = derive_geometry(&s).unwrap();
        (s, geo)
    }

    #[test]
    fn unit_temperature_values() {
        let (s, geo) = reference_at(2.0001);
        let mut two = s.clone();
        two.path_loss_exponent = 2.0; // bypasses validation on purpose
        // eta (omega / d_ml)^2, hand-evaluated from the reference constants
        let main = unit_temperature(&two, 1.0, geo.d_ml);
        let eta = 3.5 / (1.380649e-23 * 24e6);
        let omega = 3e8 / (4.0 * PI * 1.413e9);
        assert!(rel(main, eta * (omega / 930_972.703_889_297).powi(2)) < 1e-12);
        assert!(rel(main, 3.479) < 1e-3);

        let side = t_cluster_unit(&two, Lobe::Side, geo.d_ml).unwrap();
        assert!(rel(side, main * 10f64.powf(-5.5)) < 1e-12);
        assert!(rel(unit_temperature(&two, 1.0, 2.0 * geo.d_ml), main / 4.0) < 1e-12);
        assert!(t_cluster_unit(&s, Lobe::Main, 0.0).is_err());
    }

    #[test]
    fn cluster_mgf_normalization() {
        let (s, geo) = reference_at(2.05);
        assert_eq!(mgf_cluster(&s, geo.d_ml, 1.0, 0.0).unwrap(), 1.0);
        let empty = s.with_bs_intensity(0.0);
        assert_eq!(mgf_cluster(&empty, geo.d_ml, 1.0, 0.37).unwrap(), 1.0);
    }

    #[test]
    fn cluster_mgf_slope_is_mean() {
        let (s, geo) = reference_at(2.05);
        let u = unit_temperature(&s, 1.0, geo.d_ml);
        let h = 1e-6 / u;
        let slope = (mgf_cluster(&s, geo.d_ml, 1.0, h).unwrap()
            - mgf_cluster(&s, geo.d_ml, 1.0, -h).unwrap())
            / (2.0 * h);
        assert!(rel(slope, s.bs_intensity * u) < 1e-6);
    }

    #[test]
    fn cluster_mgf_overflow() {
        let (s, geo) = reference_at(2.05);
        let err = mgf_cluster(&s, geo.d_ml, 1.0, 1e3).unwrap_err();
        assert_eq!(err.code(), "mgf_overflow");
        // a tighter cap trips earlier
        let u = unit_temperature(&s, 1.0, geo.d_ml);
        assert!(mgf_cluster(&s, geo.d_ml, 1.0, 0.01 / u).is_ok());
        assert!(mgf_cluster_capped(&s, geo.d_ml, 1.0, 0.01 / u, 0.5).is_err());
    }

    #[test]
    fn series_matches_closed_form() {
        let (s, geo) = reference_at(2.05);
        let u = unit_temperature(&s, 1.0, geo.d_ml);
        assert_eq!(mgf_cluster_series(&s, geo.d_ml, 1.0, 0.3, 0).unwrap(), 1.0);
        // the order-12 remainder is ~ (lambda u t)^13 / 13!, so the 1e-9 band
        // needs lambda |u t| <= 1 as well as |u t| <= 0.01
        for &lambda in &[1.0, 50.0, 100.0, 200.0] {
            let sc = s.with_bs_intensity(lambda);
            let limit = (1.0 / lambda).min(0.01);
            for &frac in &[-1.0, -0.4, 0.1, 1.0] {
                let ut = frac * limit;
                let t = ut / u;
                let series = mgf_cluster_series(&sc, geo.d_ml, 1.0, t, 12).unwrap();
                let closed = mgf_cluster(&sc, geo.d_ml, 1.0, t).unwrap();
                assert!(rel(series, closed) < 1e-9, "lambda={lambda} ut={ut}");
            }
        }
    }

    #[test]
    fn series_second_coefficient() {
        let (s, geo) = reference_at(2.1);
        let u = unit_temperature(&s, 1.0, geo.d_ml);
        let t = 1e-3 / u;
        let second = mgf_cluster_series(&s, geo.d_ml, 1.0, t, 2).unwrap()
            - mgf_cluster_series(&s, geo.d_ml, 1.0, t, 1).unwrap();
        let p2 = s.bs_intensity + s.bs_intensity.powi(2);
        assert!(rel(second, p2 * (u * t).powi(2) / 2.0) < 1e-12);
    }

    #[test]
    fn main_lobe_is_compound_poisson() {
        let (s, geo) = reference_at(2.05);
        assert_eq!(mgf_main_lobe(&s, &geo, 0.0).unwrap(), 1.0);
        let u = unit_temperature(&s, 1.0, geo.d_ml);
        for &ut in &[-0.002, 0.0005, 0.003] {
            let t = ut / u;
            let lhs = mgf_main_lobe(&s, &geo, t).unwrap().ln();
            let rhs = geo.lambda_ml * (mgf_cluster(&s, geo.d_ml, 1.0, t).unwrap() - 1.0);
            assert!(rel(lhs, rhs) < 1e-9);
        }
        let mut none = s.clone();
        none.cluster_intensity = 0.0;
        let geo0 = derive_geometry(&none).unwrap();
        assert_eq!(mgf_main_lobe(&none, &geo0, 0.01).unwrap(), 1.0);
    }

    #[test]
    fn side_lobe_limits() {
        let (s, geo) = reference_at(2.05);
        assert_eq!(mgf_side_lobe(&s, &geo, 0.0, DEFAULT_REL_TOL).unwrap(), 1.0);
        assert!(mgf_side_lobe(&s, &geo, 0.5, DEFAULT_REL_TOL).unwrap() >= 1.0);
        assert!(mgf_side_lobe(&s, &geo, -0.5, DEFAULT_REL_TOL).unwrap() <= 1.0);

        let mut deaf = s.clone();
        deaf.gain.side_lobe_gain = 1e-30;
        let m = mgf_side_lobe(&deaf, &geo, 1.0, DEFAULT_REL_TOL).unwrap();
        assert!((m - 1.0).abs() < 1e-15);

        assert!(mgf_side_lobe(&s, &geo, 0.5, 1e-3).is_err());
        assert!(mgf_side_lobe(&s, &geo, 0.5, 0.0).is_err());
    }
}
