//! Thin wrappers around rustfft shared by the spectral-derivative,
//! split-step, and kernel-transform code paths.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward and (normalized) inverse transforms of one fixed length.
pub(crate) struct FftPair {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn forward(&self, values: &mut [Complex64]) {
        debug_assert_eq!(values.len(), self.n);
        self.fwd.process(values);
    }

    /// Inverse transform including the 1/N normalization.
    pub fn inverse(&self, values: &mut [Complex64]) {
        debug_assert_eq!(values.len(), self.n);
        self.inv.process(values);
        let scale = 1.0 / self.n as f64;
        for v in values.iter_mut() {
            *v *= scale;
        }
    }
}

/// Angular wavenumbers in transform order: `k_j = 2 pi j / (N dx)` for
/// `j < N/2`, then the negative frequencies. Momentum is `p = hbar k`.
pub(crate) fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    (0..n)
        .map(|j| {
            let js = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
            js as f64 * dk
        })
        .collect()
}
