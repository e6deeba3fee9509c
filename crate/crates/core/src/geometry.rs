//! Geometry of the Earth cap visible from the satellite.
//!
//! Positions on the cap are parameterized by the polar angle `theta` measured
//! at the Earth's center from the sub-satellite point. Only distances to the
//! satellite matter to the interference model, so the cap is handled through
//! the change of variables `theta -> x` with `x dx = h r_e sin(theta) dtheta`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Relative slack allowed when checking that a value sits inside a closed
/// range whose endpoints are themselves computed.
const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    /// Nearest point of the cap (the sub-satellite point), meters.
    pub d_min: f64,
    /// Distance to the horizon, meters.
    pub d_max: f64,
    /// Slant distance to the main-lobe footprint, meters.
    pub d_ml: f64,
    /// Area of the visible cap, square meters.
    pub cap_area: f64,
    pub footprint_area: f64,
    /// Expected number of clusters inside the footprint.
    pub lambda_ml: f64,
    /// Expected number of clusters on the whole cap.
    pub lambda_cap: f64,
    pub cos_theta_max: f64,
}

impl GeometrySummary {
    pub fn derive(s: &Scenario) -> Result<Self> {
        let re = s.earth_radius;
        let h = s.sat_center_distance;
        let d_ml = main_lobe_distance(s)?;
        let cos_theta_max = re / h;
        let cap_area = 2.0 * PI * re * re * (1.0 - cos_theta_max);
        Ok(GeometrySummary {
            d_min: h - re,
            d_max: (h * h - re * re).sqrt(),
            d_ml,
            cap_area,
            footprint_area: s.footprint_area,
            lambda_ml: s.cluster_intensity * s.footprint_area,
            lambda_cap: s.cluster_intensity * cap_area,
            cos_theta_max,
        })
    }

    /// Polar angle of the horizon, `arccos(r_e / h)`.
    pub fn theta_max(&self) -> f64 {
        self.cos_theta_max.acos()
    }
}

/// Shorthand for [`GeometrySummary::derive`].
pub fn derive_geometry(s: &Scenario) -> Result<GeometrySummary> {
    GeometrySummary::derive(s)
}

/// Slant range along a boresight tilted `incidence_angle` away from nadir.
pub fn main_lobe_distance(s: &Scenario) -> Result<f64> {
    let (re, h, i) = (s.earth_radius, s.sat_center_distance, s.incidence_angle);
    let off_axis = h * i.sin();
    if off_axis >= re {
        return Err(Error::NoGroundIntersection {
            incidence_deg: i.to_degrees(),
        });
    }
    Ok(h * i.cos() - (re * re - off_axis * off_axis).sqrt())
}

/// Polar angle of the point where the boresight meets the ground.
///
/// The Earth-center/satellite/footprint triangle has its obtuse angle at the
/// footprint, so the central angle is `asin(h sin(i) / r_e) - i`.
pub fn footprint_polar_angle(s: &Scenario) -> Result<f64> {
    let (re, h, i) = (s.earth_radius, s.sat_center_distance, s.incidence_angle);
    let ratio = h * i.sin() / re;
    if ratio >= 1.0 {
        return Err(Error::NoGroundIntersection {
            incidence_deg: i.to_degrees(),
        });
    }
    Ok(ratio.asin() - i)
}

/// Law-of-cosines distance from the satellite to the cap point at `theta`.
pub fn distance_from_polar_angle(s: &Scenario, theta: f64) -> Result<f64> {
    let (re, h) = (s.earth_radius, s.sat_center_distance);
    let theta_max = (re / h).acos();
    if !(theta >= 0.0 && theta <= theta_max * (1.0 + RANGE_SLACK)) {
        return Err(Error::OutOfRange {
            what: "polar angle",
            value: theta,
            min: 0.0,
            max: theta_max,
        });
    }
    Ok(distance_from_cos_theta(re, h, theta.cos()))
}

#[inline]
pub(crate) fn distance_from_cos_theta(re: f64, h: f64, cos_theta: f64) -> f64 {
    (re * re + h * h - 2.0 * h * re * cos_theta).max(0.0).sqrt()
}

/// Cluster intensity per unit satellite distance, `2 pi (r_e/h) lambda_c x`.
///
/// Integrating over `[d_min, d_max]` gives the expected cluster count on the cap.
pub fn radial_intensity_weight(s: &Scenario, geo: &GeometrySummary, x: f64) -> Result<f64> {
    let lo = geo.d_min * (1.0 - RANGE_SLACK);
    let hi = geo.d_max * (1.0 + RANGE_SLACK);
    if !(x >= lo && x <= hi) {
        return Err(Error::OutOfRange {
            what: "satellite distance",
            value: x,
            min: geo.d_min,
            max: geo.d_max,
        });
    }
    Ok(2.0 * PI * geo.cos_theta_max * s.cluster_intensity * x)
}

/// Closed-form integral of [`radial_intensity_weight`] over the whole cap.
pub fn radial_weight_integral(s: &Scenario, geo: &GeometrySummary) -> f64 {
    PI * geo.cos_theta_max
        * s.cluster_intensity
        * (geo.d_max * geo.d_max - geo.d_min * geo.d_min)
}
