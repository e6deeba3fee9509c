//! Cumulants by finite differences of a log-MGF at the origin.

use crate::error::{Error, Result};

pub const MAX_NUMERIC_ORDER: usize = 4;

/// Step used for derivatives up to `order`: `eps^(1/(order+2)) / scale`.
pub fn step_size(order: usize, scale: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) / scale
}

/// Central-difference estimates of `k_1..k_order` for a distribution given
/// by its MGF. `scale` is the expected magnitude of `k_1` and sets the step.
pub fn cgf_numeric_cumulants<F>(mgf: F, order: usize, scale: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    numeric_cumulants_from_cgf(|t| Ok(mgf(t)?.ln()), order, scale)
}

/// Same as [`cgf_numeric_cumulants`] for a function that already returns the
/// log-MGF, which avoids the rounding of `ln(1 + small)`.
pub fn numeric_cumulants_from_cgf<F>(cgf: F, order: usize, scale: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    if order == 0 || order > MAX_NUMERIC_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_NUMERIC_ORDER,
        });
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::NonPositive {
            field: "scale".into(),
            value: scale,
        });
    }
    let h = step_size(order, scale);
    // stencil points -2h..2h
    let mut k = [0.0; 5];
    for (slot, j) in k.iter_mut().zip(-2i32..=2) {
        if order < 3 && j.abs() == 2 {
            continue;
        }
        *slot = cgf(j as f64 * h)?;
    }
    let [km2, km1, k0, kp1, kp2] = k;
    let mut out = Vec::with_capacity(order);
    out.push((kp1 - km1) / (2.0 * h));
    if order >= 2 {
        out.push((kp1 - 2.0 * k0 + km1) / (h * h));
    }
    if order >= 3 {
        out.push((kp2 - 2.0 * kp1 + 2.0 * km1 - km2) / (2.0 * h.powi(3)));
    }
    if order >= 4 {
        out.push((kp2 - 4.0 * kp1 + 6.0 * k0 - 4.0 * km1 + km2) / h.powi(4));
    }
    Ok(out)
}
