//! Analytic sweep over the default exponent grid, written as CSV to stdout
//! with a per-curve summary on stderr.

use rfi_coexist::geometry::derive_geometry;
use rfi_coexist::sweep::{run_sweep, summarize, to_csv, SweepSpec};
use rfi_coexist::Scenario;

fn main() -> rfi_coexist::Result<()> {
    let s = Scenario::reference();
    let geo = derive_geometry(&s)?;
    let spec = SweepSpec::default();
    let rows = run_sweep(&s, &geo, &spec)?;
    print!("{}", to_csv(&rows));
    for c in summarize(&s, &spec, &rows).curves {
        eprintln!(
            "{} lambda {}: mean {:.4} K at alpha {} down to {:.4} K at alpha {}, decreasing {}",
            c.lobe, c.lambda_bs, c.max_mean_k, c.alpha_at_max_mean, c.min_mean_k, c.alpha_at_min_mean, c.mean_decreasing
        );
    }
    Ok(())
}
