//! Mergeable running central moments and the k-statistics built from them.

/// Count, mean and central sums `M_p = sum (x - mean)^p` for `p = 2, 3, 4`.
///
/// `push` and `merge` use the one-pass update and pairwise combination
/// formulas of Terriberry and Pébay, so partial accumulators from separate
/// batches combine into the same statistics as a single pass.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let na = self.n as f64;
        let nb = other.n as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let delta2 = delta * delta;

        let m2 = self.m2 + other.m2 + delta2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + delta2 * delta * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + delta2 * delta2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * delta2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;

        self.n += other.n;
        self.mean += delta * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased variance `k_2`; `None` below two samples.
    pub fn k2(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.m2 / (self.n as f64 - 1.0))
    }

    /// Unbiased third cumulant `k_3 = n M_3 / ((n-1)(n-2))`.
    pub fn k3(&self) -> Option<f64> {
        let n = self.n as f64;
        (self.n >= 3).then(|| n * self.m3 / ((n - 1.0) * (n - 2.0)))
    }

    /// Unbiased fourth cumulant
    /// `k_4 = n ((n+1) M_4 - 3 (n-1) M_2^2 / n) / ((n-1)(n-2)(n-3))`.
    pub fn k4(&self) -> Option<f64> {
        let n = self.n as f64;
        (self.n >= 4).then(|| {
            n * ((n + 1.0) * self.m4 - 3.0 * (n - 1.0) * self.m2 * self.m2 / n)
                / ((n - 1.0) * (n - 2.0) * (n - 3.0))
        })
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}
