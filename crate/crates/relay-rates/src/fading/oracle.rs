//! Independent evaluation paths for the fading ergodic rates: adaptive
//! quadrature of the defining integrals, seeded Monte Carlo over the fading
//! coefficients, and a 1-D search oracle for the ergodic sum rate.
//!
//! None of these touch the exponential-integral closed forms they are used
//! to validate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::{adaptive_simpson, golden_max};
use crate::region::log_grid_with_thresholds;
use crate::{Error, Result};

use super::{fading_sum_rate_at, FadingTwrcChannel};

fn check(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "quadrature needs a finite positive rate, got {lambda}"
        )));
    }
    Ok(lambda)
}

/// `E[log2(1+g)]`, `g ~ Exp(lambda)`, by adaptive Simpson on `[0, 60/lambda]`.
pub fn ergodic_log_single_quad(lambda: f64) -> Result<f64> {
    let lambda = check(lambda)?;
    let hi = 60.0 / lambda;
    let f = |g: f64| (1.0 + g).log2() * lambda * (-lambda * g).exp();
    Ok(adaptive_simpson(&f, 0.0, hi, 1e-12))
}

/// `E[log2(1+U+V)]` by adaptive Simpson on the density of `U + V`.
///
/// Uses the two-exponential mixture density for distinct rates and the
/// Erlang-2 density when the rates agree to within 1e-9 relative.
pub fn ergodic_log_sum_quad(lambda_u: f64, lambda_v: f64) -> Result<f64> {
    let lu = check(lambda_u)?;
    let lv = check(lambda_v)?;
    if (lu - lv).abs() <= 1e-9 * lu.max(lv) {
        let lam = 0.5 * (lu + lv);
        let hi = 80.0 / lam;
        let f = |g: f64| (1.0 + g).log2() * lam * lam * g * (-lam * g).exp();
        return Ok(adaptive_simpson(&f, 0.0, hi, 1e-12));
    }
    let hi = 70.0 / lu.min(lv);
    let scale = lu * lv / (lv - lu);
    let f = |g: f64| (1.0 + g).log2() * scale * ((-lu * g).exp() - (-lv * g).exp());
    Ok(adaptive_simpson(&f, 0.0, hi, 1e-12))
}

/// Mean and standard error of one Monte Carlo estimate.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl McEstimate {
    /// |mean - reference| in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference).abs() / self.std_error.max(1e-300)
    }
}

/// Monte Carlo estimates of the six ergodic expectations at one sigma2:
/// the two relayed-sum rates, the two direct-sum expectations (the
/// expectation parts of `rbar12`/`rbar22`), and the two ratio-form
/// compression exponents sampled directly in ratio form.
#[derive(Debug, Clone, Copy)]
pub struct FadingMcExpectations {
    pub r11_exp: McEstimate,
    pub r21_exp: McEstimate,
    pub d1: McEstimate,
    pub d2: McEstimate,
    pub f1: McEstimate,
    pub f2: McEstimate,
}

const CHUNK: u64 = 1 << 15;

/// Seeded Monte Carlo over the fading coefficients (`|h|^2` exponential
/// with the channel's second moments). Deterministic for a given seed and
/// sample count: work is split into fixed chunks, each driven by its own
/// counter-derived stream, so the result does not depend on thread count.
pub fn fading_expectations_mc(
    ch: &FadingTwrcChannel,
    sigma2: f64,
    samples: u64,
    seed: u64,
) -> Result<FadingMcExpectations> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Domain(format!("sigma2 must be positive, got {sigma2}")));
    }
    ch.validate()?;
    let l = ch.lambdas(sigma2);
    // means of the six exponential SNR terms (0 when the rate is infinite)
    let mu = [
        1.0 / l.u1,
        1.0 / l.u2,
        1.0 / l.v1,
        1.0 / l.v2,
        1.0 / l.v3,
        1.0 / l.v4,
    ];
    let n_chunks = samples.div_ceil(CHUNK);
    let chunk_ids: Vec<u64> = (0..n_chunks).collect();
    let partials = crate::exec::map_items(&chunk_ids, |&chunk| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk + 1);
        let count = CHUNK.min(samples - chunk * CHUNK);
        let mut sums = [0.0f64; 6];
        let mut sq = [0.0f64; 6];
        for _ in 0..count {
            let draw = |rng: &mut ChaCha8Rng, mean: f64| -> f64 {
                if mean == 0.0 {
                    0.0
                } else {
                    -mean * (1.0 - rng.gen::<f64>()).ln()
                }
            };
            let u1 = draw(&mut rng, mu[0]);
            let u2 = draw(&mut rng, mu[1]);
            let v1 = draw(&mut rng, mu[2]);
            let v2 = draw(&mut rng, mu[3]);
            let v3 = draw(&mut rng, mu[4]);
            let v4 = draw(&mut rng, mu[5]);
            let vals = [
                (1.0 + u1 + v1).log2(),
                (1.0 + u2 + v2).log2(),
                (1.0 + u1 + v3).log2(),
                (1.0 + u2 + v4).log2(),
                (1.0 + v3 / (1.0 + u1)).log2(),
                (1.0 + v4 / (1.0 + u2)).log2(),
            ];
            for i in 0..6 {
                sums[i] += vals[i];
                sq[i] += vals[i] * vals[i];
            }
        }
        (sums, sq)
    });
    let mut sums = [0.0f64; 6];
    let mut sq = [0.0f64; 6];
    for (s, q) in partials {
        for i in 0..6 {
            sums[i] += s[i];
            sq[i] += q[i];
        }
    }
    let n = samples as f64;
    let est = |i: usize| {
        let mean = sums[i] / n;
        let var = (sq[i] / n - mean * mean).max(0.0);
        McEstimate {
            mean,
            std_error: (var / n).sqrt(),
        }
    };
    Ok(FadingMcExpectations {
        r11_exp: est(0),
        r21_exp: est(1),
        d1: est(2),
        d2: est(3),
        f1: est(4),
        f2: est(5),
    })
}

/// Ergodic NNC sum rate by dense log-grid scan plus golden-section
/// refinement, independent of the threshold case analysis.
pub fn nnc_sumrate_search(ch: &FadingTwrcChannel, tol: f64) -> Result<f64> {
    constrained_sumrate_search(ch, 1e-5, tol)
}

/// As [`nnc_sumrate_search`] restricted to `sigma2 >= lower`.
pub fn constrained_sumrate_search(ch: &FadingTwrcChannel, lower: f64, tol: f64) -> Result<f64> {
    let grid = log_grid_with_thresholds(lower.max(1e-6), 1e7, 3000, &[]);
    let mut best = f64::NEG_INFINITY;
    let mut best_i = 0usize;
    let vals = crate::exec::map_items(&grid, |s| fading_sum_rate_at(ch, *s).unwrap_or(0.0));
    for (i, v) in vals.iter().enumerate() {
        if *v > best {
            best = *v;
            best_i = i;
        }
    }
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let f = |s: f64| fading_sum_rate_at(ch, s).unwrap_or(f64::NEG_INFINITY);
    let (_, refined) = golden_max(f, lo, hi, tol * 1e-3);
    Ok(best.max(refined))
}
