//! Stirling numbers of the second kind and the polynomials built from them.
//!
//! `p_n(v) = sum_i S(n, i) v^i` is simultaneously the Touchard (Bell)
//! polynomial and the `n`-th raw moment of a Poisson(v) variable, which is
//! what makes it appear in every cumulant of a compound-Poisson total.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest order whose Stirling numbers are kept exactly (S(20, i) < 2^63).
pub const MAX_ORDER: usize = 20;

/// Triangular table of `S(n, i)` for `0 <= i <= n <= max_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    max_order: usize,
    rows: Vec<Vec<u64>>,
}

impl StirlingTable {
    /// Builds the table with `S(n, i) = i S(n-1, i) + S(n-1, i-1)`.
    pub fn new(max_order: usize) -> Result<Self> {
        if max_order > MAX_ORDER {
            return Err(Error::OrderOutOfRange {
                order: max_order,
                max: MAX_ORDER,
            });
        }
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max_order + 1);
        rows.push(vec![1]);
        for n in 1..=max_order {
            let prev = &rows[n - 1];
            let mut row = vec![0u64; n + 1];
            for i in 1..=n {
                let carry = if i < n { i as u64 * prev[i] } else { 0 };
                row[i] = carry + prev[i - 1];
            }
            rows.push(row);
        }
        Ok(StirlingTable { max_order, rows })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `S(n, i)`; zero when `i > n`.
    pub fn get(&self, n: usize, i: usize) -> Result<u64> {
        let row = self.row(n)?;
        Ok(row.get(i).copied().unwrap_or(0))
    }

    pub fn row(&self, n: usize) -> Result<&[u64]> {
        self.rows
            .get(n)
            .map(Vec::as_slice)
            .ok_or(Error::OrderOutOfRange {
                order: n,
                max: self.max_order,
            })
    }

    /// `sum_i S(n, i) v^i`, evaluated with Horner's rule.
    pub fn touchard(&self, n: usize, v: f64) -> Result<f64> {
        let row = self.row(n)?;
        Ok(row.iter().rev().fold(0.0, |acc, &s| acc * v + s as f64))
    }
}

/// Stirling table up to [`MAX_ORDER`], built once per process.
pub fn shared_table() -> &'static StirlingTable {
    static TABLE: OnceLock<StirlingTable> = OnceLock::new();
    TABLE.get_or_init(|| StirlingTable::new(MAX_ORDER).expect("MAX_ORDER is in range"))
}

pub fn stirling_table(max_order: usize) -> Result<StirlingTable> {
    StirlingTable::new(max_order)
}

/// `p_n(lambda)`: the `n`-th raw moment `E[N^n]` of `N ~ Poisson(lambda)`.
pub fn poisson_raw_moment(n: usize, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::OutOfRange {
            what: "Poisson mean",
            value: lambda,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    shared_table().touchard(n, lambda)
}

/// Bell (Touchard) polynomial `B_n(v)`. `B_n(1)` is the `n`-th Bell number.
pub fn bell_polynomial(n: usize, v: f64) -> Result<f64> {
    shared_table().touchard(n, v)
}
