//! Seeded Monte Carlo estimate of the expected code length.
//!
//! Trial `k` samples its trajectory from its own stream seeded with
//! `mix64(master_seed, k)`, so trials are independent of scheduling and can
//! run in parallel. Lengths are integers and are summed exactly, which keeps
//! the report bit-identical for a given seed.

use rayon::prelude::*;
use serde::Serialize;

use crate::code::{expected_length, SymbolCode};
use crate::error::{invalid, Result};
use crate::source::MooreMarkovSource;

/// SplitMix64 finalizer applied to `master + (index + 1) * golden_gamma`.
pub fn mix64(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationReport {
    pub empirical_mean: f64,
    /// Standard error of the mean; `None` for a single trial.
    pub std_error: Option<f64>,
    pub exact: f64,
}

impl SimulationReport {
    /// Whether the exact value lies within `k` standard errors of the mean.
    /// A rounding slack of `1e-9` relative keeps zero-variance cases honest.
    pub fn within(&self, k: f64) -> bool {
        match self.std_error {
            Some(se) => {
                (self.empirical_mean - self.exact).abs()
                    <= k * se + 1e-9 * self.exact.abs().max(1.0)
            }
            None => false,
        }
    }
}

pub fn simulate_code_lengths<C: SymbolCode + Sync + ?Sized>(
    source: &MooreMarkovSource,
    code: &C,
    n: usize,
    trials: u64,
    master_seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let exact = expected_length(code, source, n)?;
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|k| {
            let seq = source.sample(n, mix64(master_seed, k));
            code.encoded_len(&seq).map(|l| (l as u128, (l * l) as u128))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let t = trials as f64;
    let mean = sum as f64 / t;
    let std_error = (trials > 1).then(|| {
        let centred = (sum_sq as f64 - (sum as f64) * mean).max(0.0);
        (centred / (t - 1.0) / t).sqrt()
    });
    Ok(SimulationReport {
        empirical_mean: mean,
        std_error,
        exact,
    })
}
