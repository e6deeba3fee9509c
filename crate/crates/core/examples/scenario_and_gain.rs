//! Loads a scenario (the bundled TOML if given, else the built-in reference)
//! and prints the derived constants and the sectorized gain pattern.
//!
//!     cargo run --example scenario_and_gain -- scenarios/reference.toml

use rfi_coexist::{Lobe, Scenario};

fn main() -> rfi_coexist::Result<()> {
    let s = match std::env::args().nth(1) {
        Some(path) => Scenario::from_path(path)?,
        None => Scenario::reference(),
    };
    s.validate()?;
    println!("alpha            {}", s.path_loss_exponent);
    println!("lambda_bs        {}", s.bs_intensity);
    println!("eta              {:.6e} K", s.eta());
    println!("omega            {:.6e} m", s.omega());
    println!("threshold        {} K", s.rfi_threshold);
    for lobe in Lobe::ALL {
        println!("{lobe:<5} gain       {:.3e}", s.gain.lobe_gain(lobe));
    }
    let hb = s.gain.half_beamwidth;
    for dev in [0.0, 0.5 * hb, hb, 1.01 * hb, 0.5] {
        println!("gain at {:>8.5} rad = {:.3e}", dev, s.antenna_gain(dev));
    }
    Ok(())
}
