//! Stirling numbers of the second kind and Poisson raw moments.

use rfi_coexist::combinatorics::{bell_polynomial, poisson_raw_moment, shared_table};

fn main() -> rfi_coexist::Result<()> {
    let table = shared_table();
    for n in 0..=6 {
        println!("S({n}, .) = {:?}", table.row(n)?);
    }
    for n in 1..=6 {
        println!("Bell({n}) = {}", bell_polynomial(n, 1.0)?);
    }
    for lambda in [50.0, 100.0, 200.0] {
        let p: Vec<String> = (1..=4)
            .map(|n| poisson_raw_moment(n, lambda).map(|v| format!("{v:.6e}")))
            .collect::<Result<_, _>>()?;
        println!("lambda {lambda:>5}: p1..p4 = {}", p.join(", "));
    }
    Ok(())
}
