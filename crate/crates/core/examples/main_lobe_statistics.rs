//! Closed-form main-lobe cumulants across station intensities.

use rfi_coexist::analytic::cumulants;
use rfi_coexist::geometry::derive_geometry;
use rfi_coexist::{Lobe, Scenario};

fn main() -> rfi_coexist::Result<()> {
    let base = Scenario::reference();
    let geo = derive_geometry(&base)?;
    println!("{:>8} {:>12} {:>12} {:>10} {:>12}", "lambda", "mean K", "std K", "skew", "ex. kurt");
    for lambda in [50.0, 100.0, 200.0] {
        let s = base.with_bs_intensity(lambda);
        let cs = cumulants(&s, &geo, Lobe::Main, 6)?;
        println!(
            "{:>8} {:>12.4} {:>12.4} {:>10.4} {:>12.4}",
            lambda, cs.mean, cs.std, cs.skewness, cs.excess_kurtosis
        );
    }
    Ok(())
}
