//! Visible-cap geometry and the slant distance as a function of polar angle.

use rfi_coexist::geometry::{derive_geometry, distance_from_polar_angle, radial_weight_integral};
use rfi_coexist::Scenario;

fn main() -> rfi_coexist::Result<()> {
    let s = Scenario::reference();
    let geo = derive_geometry(&s)?;
    println!("d_min      {:>14.1} m", geo.d_min);
    println!("d_ml       {:>14.1} m", geo.d_ml);
    println!("d_max      {:>14.1} m", geo.d_max);
    println!("cap area   {:>14.6e} m^2", geo.cap_area);
    println!("lambda_ml  {:>14.4}", geo.lambda_ml);
    println!("lambda_cap {:>14.4}", geo.lambda_cap);
    println!("closed-form radial weight integral {:.4}", radial_weight_integral(&s, &geo));

    let theta_max = geo.theta_max();
    for k in 0..=8 {
        let theta = theta_max * k as f64 / 8.0;
        println!("theta {:>7.4} rad  x = {:>12.1} m", theta, distance_from_polar_angle(&s, theta)?);
    }
    Ok(())
}
