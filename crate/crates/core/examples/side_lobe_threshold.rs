//! Side-lobe mean against the acceptance threshold as the path-loss exponent grows.

use rfi_coexist::analytic::{cumulants, threshold_verdict, MIN_REPORTED_ORDER};
use rfi_coexist::geometry::derive_geometry;
use rfi_coexist::{Lobe, Scenario};

fn main() -> rfi_coexist::Result<()> {
    let base = Scenario::reference();
    let geo = derive_geometry(&base)?;
    for alpha in [2.0001, 2.05, 2.1, 2.2] {
        for lambda in [50.0, 100.0, 200.0] {
            let s = base.with_path_loss_exponent(alpha).with_bs_intensity(lambda);
            let cs = cumulants(&s, &geo, Lobe::Side, MIN_REPORTED_ORDER)?;
            let v = threshold_verdict(&cs, s.rfi_threshold);
            println!(
                "alpha {alpha:<7} lambda {lambda:>5}: mean {:>10.5} K  std {:>9.5} K  exceeds {} K: {}",
                v.mean, v.std, v.threshold, v.mean_exceeds
            );
        }
    }
    Ok(())
}
