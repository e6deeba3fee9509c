//! Monte Carlo estimates next to the closed forms, with z-scores.
//!
//!     cargo run --release --example monte_carlo_oracle -- 20000 7

use rfi_coexist::analytic::cumulants;
use rfi_coexist::geometry::derive_geometry;
use rfi_coexist::montecarlo::{default_workers, estimate, McConfig};
use rfi_coexist::{Lobe, Scenario};

fn main() -> rfi_coexist::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(5_000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(42);
    let cfg = McConfig {
        trials,
        seed,
        workers: default_workers(),
    };
    let s = Scenario::reference().with_path_loss_exponent(2.1);
    let geo = derive_geometry(&s)?;
    for lobe in Lobe::ALL {
        let cs = cumulants(&s, &geo, lobe, 4)?;
        let est = estimate(&s, &geo, lobe, &cfg)?;
        println!(
            "{lobe:<5} mean {:.5e} vs {:.5e} (z {:+.2})  variance {:.5e} vs {:.5e} (z {:+.2})",
            est.mean,
            cs.mean,
            est.mean_z(cs.mean),
            est.variance,
            cs.variance,
            est.variance_z(cs.variance)
        );
    }
    Ok(())
}
