//! Differentiates each lobe's log-MGF numerically and compares with the
//! closed-form cumulants.

use rfi_coexist::analytic::{cgf, cumulants, numeric_cumulants_from_cgf};
use rfi_coexist::geometry::derive_geometry;
use rfi_coexist::{Lobe, Scenario};

fn main() -> rfi_coexist::Result<()> {
    let s = Scenario::reference().with_path_loss_exponent(2.05);
    let geo = derive_geometry(&s)?;
    for lobe in Lobe::ALL {
        let cs = cumulants(&s, &geo, lobe, 4)?;
        let numeric = numeric_cumulants_from_cgf(|t| cgf(&s, &geo, lobe, t), 2, cs.mean)?;
        for (i, k) in numeric.iter().enumerate() {
            let exact = cs.cumulants[i];
            println!(
                "{lobe:<5} k{}: closed {:>14.8e}  numeric {:>14.8e}  rel err {:.2e}",
                i + 1,
                exact,
                k,
                ((k - exact) / exact).abs()
            );
        }
    }
    Ok(())
}
