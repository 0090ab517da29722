//! Independent 1-D search oracle for the noisy-network-coding sum rate.
//!
//! Deliberately avoids the closed-form case analysis: a dense logarithmic
//! grid over `sigma2 in [1e-4, 1e4]` (widened to cover the intersection
//! thresholds) localizes the best point and golden-section search refines
//! the bracket. Used to validate [`super::optimal_sigma_nnc`].

use crate::numerics::golden_max;
use crate::region::log_grid_with_thresholds;
use crate::Result;

use super::{sum_rate_at, thresholds, GaussianTwrcChannel};

/// Maximum of the clamped sum rate over `sigma2 > 0`, to roughly `tol` bits.
pub fn nnc_sumrate_search(ch: &GaussianTwrcChannel, tol: f64) -> Result<f64> {
    constrained_sumrate_search(ch, 1e-4, tol)
}

/// Maximum of the clamped sum rate over `sigma2 >= lower`.
pub fn constrained_sumrate_search(
    ch: &GaussianTwrcChannel,
    lower: f64,
    tol: f64,
) -> Result<f64> {
    let t = thresholds(ch)?;
    let hi = 1e4f64.max(10.0 * t.e1.max(t.e2)).max(10.0 * lower);
    let grid = log_grid_with_thresholds(lower.max(1e-6), hi, 2000, &[t.c1, t.c2, t.e1, t.e2]);
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for (i, s) in grid.iter().enumerate() {
        let v = sum_rate_at(ch, *s)?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let f = |s: f64| sum_rate_at(ch, s).unwrap_or(f64::NEG_INFINITY);
    let (_, refined) = golden_max(f, lo, hi, tol * 1e-3);
    Ok(best.max(refined))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_reproduces_hand_computed_maximum() {
        // all-ones channel at P = 1: e1 = e2 = 3, sum rate maximized there.
        let ch = GaussianTwrcChannel::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let want = sum_rate_at(&ch, 3.0).unwrap();
        let got = nnc_sumrate_search(&ch, 1e-8).unwrap();
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
}
