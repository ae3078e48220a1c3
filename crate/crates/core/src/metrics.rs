//! Spike-train distances.
//!
//! * Victor-Purpura: minimum cost to edit one train into the other with unit
//!   insert/delete cost and shift cost `q |dt|`.
//! * van Rossum: L2 distance after filtering with a causal exponential kernel,
//!   `D^2 = (1/tau) * integral (f - g)^2`, so one spike against an empty train
//!   is `sqrt(1/2)`.
//!
//! The slice-level functions accept any non-decreasing time sequence,
//! including merged population trains with repeated times.

use crate::error::{Error, Result};
use crate::par;
use crate::spike_train::SpikeTrain;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VpCost {
    /// Shift cost per ms.
    pub q: f64,
}

impl Default for VpCost {
    fn default() -> Self {
        VpCost { q: 1.0 }
    }
}

impl VpCost {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_nan() || q < 0.0 {
            return Err(Error::InvalidParams(format!("VP cost q must be >= 0, got {q}")));
        }
        Ok(VpCost { q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VrKernel {
    /// Kernel time constant (ms).
    pub tau: f64,
}

impl Default for VrKernel {
    fn default() -> Self {
        VrKernel { tau: 10.0 }
    }
}

impl VrKernel {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParams(format!("VR tau must be > 0, got {tau}")));
        }
        Ok(VrKernel { tau })
    }
}

pub fn victor_purpura(a: &SpikeTrain, b: &SpikeTrain, cost: VpCost) -> f64 {
    victor_purpura_times(a.times(), b.times(), cost.q)
}

/// Edit-distance dynamic program with a single rolling row.
///
/// `G[i][j] = min(G[i-1][j] + 1, G[i][j-1] + 1, G[i-1][j-1] + q |a_i - b_j|)`.
/// Ties prefer the shift move; the value does not depend on it.
pub fn victor_purpura_times(a: &[f64], b: &[f64], q: f64) -> f64 {
    if a.is_empty() || b.is_empty() {
        return (a.len() + b.len()) as f64;
    }
    if q == 0.0 {
        return a.len().abs_diff(b.len()) as f64;
    }
    // Keep the row along the shorter train.
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut row: Vec<f64> = (0..=b.len()).map(|j| j as f64).collect();
    for (i, &ai) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = (i + 1) as f64;
        for (j, &bj) in b.iter().enumerate() {
            let shift = diag + q * (ai - bj).abs();
            let edit = (row[j] + 1.0).min(row[j + 1] + 1.0);
            diag = row[j + 1];
            row[j + 1] = if shift <= edit { shift } else { edit };
        }
    }
    row[b.len()]
}

pub fn van_rossum(a: &SpikeTrain, b: &SpikeTrain, kernel: VrKernel) -> f64 {
    van_rossum_times(a.times(), b.times(), kernel.tau)
}

pub fn van_rossum_times(a: &[f64], b: &[f64], tau: f64) -> f64 {
    let d2 = 0.5 * (kernel_sum(a, a, tau) + kernel_sum(b, b, tau) - 2.0 * kernel_sum(a, b, tau));
    d2.max(0.0).sqrt()
}

/// `sum_{i,j} exp(-|x_i - y_j| / tau)` for sorted inputs in `O(|x| + |y|)`.
///
/// Forward pass accumulates the `y_j <= x_i` terms, backward pass the
/// `y_j > x_i` terms, each as a decaying running sum.
pub fn kernel_sum(x: &[f64], y: &[f64], tau: f64) -> f64 {
    if x.is_empty() || y.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;

    let mut acc = 0.0;
    let mut cur = y[0];
    let mut j = 0;
    for &xi in x {
        while j < y.len() && y[j] <= xi {
            acc = acc * (-(y[j] - cur) / tau).exp() + 1.0;
            cur = y[j];
            j += 1;
        }
        if j > 0 {
            total += acc * (-(xi - cur) / tau).exp();
        }
    }

    let mut acc = 0.0;
    let mut cur = y[y.len() - 1];
    let mut j = y.len();
    for &xi in x.iter().rev() {
        while j > 0 && y[j - 1] > xi {
            acc = acc * (-(cur - y[j - 1]) / tau).exp() + 1.0;
            cur = y[j - 1];
            j -= 1;
        }
        if j < y.len() {
            total += acc * (-(cur - xi) / tau).exp();
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    VictorPurpura(VpCost),
    VanRossum(VrKernel),
}

impl Metric {
    pub fn eval(&self, a: &SpikeTrain, b: &SpikeTrain) -> f64 {
        match *self {
            Metric::VictorPurpura(c) => victor_purpura(a, b, c),
            Metric::VanRossum(k) => van_rossum(a, b, k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub n: usize,
    /// Row-major `n x n` values.
    pub values: Vec<f64>,
    /// Set when the trains were observed over different windows.
    pub mixed_windows: bool,
}

impl DistanceMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// Pairwise distances. Only the upper triangle is evaluated.
pub fn distance_matrix(trains: &[SpikeTrain], metric: Metric) -> Result<DistanceMatrix> {
    let n = trains.len();
    if n == 0 {
        return Err(Error::InvalidParams("distance matrix needs at least one train".into()));
    }
    let first = (trains[0].t_start(), trains[0].t_stop());
    let mixed_windows = trains.iter().any(|t| (t.t_start(), t.t_stop()) != first);
    if mixed_windows {
        log::warn!("distance matrix over trains with differing observation windows");
    }
    let rows: Vec<usize> = (0..n).collect();
    let upper: Vec<Vec<f64>> = par::map(&rows, |&i| {
        (i + 1..n).map(|j| metric.eval(&trains[i], &trains[j])).collect()
    });
    let mut values = vec![0.0; n * n];
    for (i, row) in upper.into_iter().enumerate() {
        for (k, d) in row.into_iter().enumerate() {
            let j = i + 1 + k;
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix {
        n,
        values,
        mixed_windows,
    })
}
