//! The Gaussian two-way relay channel: closed-form rate tuples, threshold
//! variances, swept region boundaries, equality-condition checkers and the
//! closed-form sum-rate optimizer with its independent 1-D search oracle.
//!
//! All rates are in bits per channel use with `C(x) = 0.5 log2(1 + x)`
//! (real-signal convention, unit noise variance). The single sweep
//! parameter everywhere is the compression-noise variance `sigma2`.

use serde::{Deserialize, Serialize};

use crate::numerics::golden_max;
use crate::region::{log_grid_with_thresholds, FrontierPoint, RegionBoundary, Scheme};
use crate::{Error, Result};

pub mod oracle;

/// Six real channel gains plus the common transmit power (linear SNR units).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaussianTwrcChannel {
    pub g12: f64,
    pub g1r: f64,
    pub g21: f64,
    pub g2r: f64,
    pub gr1: f64,
    pub gr2: f64,
    #[serde(rename = "P")]
    pub power: f64,
}

impl GaussianTwrcChannel {
    pub fn new(g12: f64, g1r: f64, g21: f64, g2r: f64, gr1: f64, gr2: f64, power: f64) -> Result<Self> {
        let ch = GaussianTwrcChannel {
            g12,
            g1r,
            g21,
            g2r,
            gr1,
            gr2,
            power,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if self.power.is_nan() || self.power <= 0.0 || !self.power.is_finite() {
            return Err(Error::Domain(format!("power must be positive, got {}", self.power)));
        }
        for (name, g) in [
            ("g12", self.g12),
            ("g1r", self.g1r),
            ("g21", self.g21),
            ("g2r", self.g2r),
            ("gr1", self.gr1),
            ("gr2", self.gr2),
        ] {
            if !g.is_finite() {
                return Err(Error::Domain(format!("gain {name} is not finite")));
            }
        }
        Ok(())
    }

    /// Relabels the users (1 <-> 2). Swaps `g12 <-> g21`, `g1r <-> g2r`,
    /// `gr1 <-> gr2`; the sum rate is invariant under this map.
    pub fn swapped_users(&self) -> Self {
        GaussianTwrcChannel {
            g12: self.g21,
            g1r: self.g2r,
            g21: self.g12,
            g2r: self.g1r,
            gr1: self.gr2,
            gr2: self.gr1,
            power: self.power,
        }
    }

    fn check_relay_gains(&self) -> Result<()> {
        if self.g1r == 0.0 || self.g2r == 0.0 {
            return Err(Error::DegenerateChannel(
                "relay-to-user gains g1r, g2r must be nonzero for threshold formulas".into(),
            ));
        }
        Ok(())
    }
}

/// `C(x) = 0.5 log2(1 + x)` for `x >= 0`.
pub fn capacity(snr: f64) -> Result<f64> {
    if snr < 0.0 || snr.is_nan() {
        return Err(Error::Domain(format!("negative snr {snr}")));
    }
    Ok(0.5 * (1.0 + snr).log2())
}

fn cap(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

/// The four sigma2-parameterized rates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateTuple {
    pub r11: f64,
    pub r12: f64,
    pub r21: f64,
    pub r22: f64,
}

/// Evaluates the four rate expressions at a given compression variance.
///
/// `r11`/`r21` are non-increasing in `sigma2`, `r12`/`r22` non-decreasing
/// (and may be negative before clamping).
pub fn rate_tuple(ch: &GaussianTwrcChannel, sigma2: f64) -> Result<RateTuple> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Domain(format!("sigma2 must be positive, got {sigma2}")));
    }
    let p = ch.power;
    Ok(RateTuple {
        r11: cap(ch.g21 * ch.g21 * p + ch.gr1 * ch.gr1 * p / (1.0 + sigma2)),
        r12: cap(ch.g21 * ch.g21 * p + ch.g2r * ch.g2r * p) - cap(1.0 / sigma2),
        r21: cap(ch.g12 * ch.g12 * p + ch.gr2 * ch.gr2 * p / (1.0 + sigma2)),
        r22: cap(ch.g12 * ch.g12 * p + ch.g1r * ch.g1r * p) - cap(1.0 / sigma2),
    })
}

/// Compression-feasibility, intersection and original-CF thresholds, all in
/// sigma2 units.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SigmaThresholds {
    pub c1: f64,
    pub c2: f64,
    pub e1: f64,
    pub e2: f64,
    pub r: f64,
}

/// Closed-form thresholds; `c1 <= e1` and `c2 <= e2` hold by construction.
pub fn thresholds(ch: &GaussianTwrcChannel) -> Result<SigmaThresholds> {
    ch.check_relay_gains()?;
    let p = ch.power;
    let c1 = (1.0 + ch.g21 * ch.g21 * p) / (ch.g2r * ch.g2r * p);
    let c2 = (1.0 + ch.g12 * ch.g12 * p) / (ch.g1r * ch.g1r * p);
    let e1 = (1.0 + ch.g21 * ch.g21 * p + ch.gr1 * ch.gr1 * p) / (ch.g2r * ch.g2r * p);
    let e2 = (1.0 + ch.g12 * ch.g12 * p + ch.gr2 * ch.gr2 * p) / (ch.g1r * ch.g1r * p);
    let num1 = 1.0 + ch.g21 * ch.g21 * p + ch.gr1 * ch.gr1 * p;
    let num2 = 1.0 + ch.g12 * ch.g12 * p + ch.gr2 * ch.gr2 * p;
    let min_gain = (ch.g2r * ch.g2r).min(ch.g1r * ch.g1r);
    let r = num1.max(num2) / (min_gain * p);
    debug_assert!(c1 <= e1 && c2 <= e2);
    Ok(SigmaThresholds { c1, c2, e1, e2, r })
}

/// Scheme-dependent admissible lower bound on sigma2.
pub fn sigma2_lower_bound(ch: &GaussianTwrcChannel, scheme: Scheme) -> Result<f64> {
    let t = thresholds(ch)?;
    Ok(match scheme {
        Scheme::CfOriginal => t.r,
        Scheme::CfNobinning => t.c1.max(t.c2),
        Scheme::Nnc => 0.0,
    })
}

/// Sweep specification for region boundaries.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SweepGrid {
    /// Number of log-spaced points (thresholds are injected on top).
    pub points: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid { points: 2000 }
    }
}

/// Clamped rate pair achieved at one sigma2.
fn frontier_point(ch: &GaussianTwrcChannel, sigma2: f64) -> Result<FrontierPoint> {
    let rt = rate_tuple(ch, sigma2)?;
    Ok(FrontierPoint {
        sigma2,
        r1: rt.r11.min(rt.r12).max(0.0),
        r2: rt.r21.min(rt.r22).max(0.0),
    })
}

/// Pareto frontier of one scheme over its admissible sigma2 range.
///
/// All schemes share one base grid per channel (thresholds injected) and
/// differ only in the admissibility filter, so frontiers of nested schemes
/// are directly comparable point by point.
pub fn region(ch: &GaussianTwrcChannel, scheme: Scheme, grid: &SweepGrid) -> Result<RegionBoundary> {
    let t = thresholds(ch)?;
    let lower = sigma2_lower_bound(ch, scheme)?;
    let (sigma_n, _) = optimal_sigma_nnc(ch)?;
    let p = ch.power;
    let sigma_g = sigma_g_sq(ch);
    let sigma_z1 = 1.0 / (ch.g21 * ch.g21 * p + ch.g2r * ch.g2r * p);
    let hi = 10.0 * t.e1.max(t.e2).max(t.r).max(1e-4);
    let sweep: Vec<f64> = log_grid_with_thresholds(
        0.0,
        hi,
        grid.points,
        &[t.c1, t.c2, t.e1, t.e2, t.r, sigma_g, sigma_z1, sigma_n],
    )
    .into_iter()
    .filter(|s| *s >= lower)
    .collect();
    if sweep.is_empty() {
        return Err(Error::EmptyRegion(format!(
            "no admissible sigma2 for {}",
            scheme.label()
        )));
    }
    let pts = crate::exec::map_items(&sweep, |s| frontier_point(ch, *s));
    let mut raw = Vec::with_capacity(pts.len());
    for p in pts {
        raw.push(p?);
    }
    Ok(RegionBoundary::from_sweep(scheme, raw, sweep))
}

/// Exact condition for the original CF scheme to achieve the full
/// no-binning region: `g1r = g2r` and `g21^2 + gr1^2 = g12^2 + gr2^2`
/// (1e-12 relative tolerance on both equalities).
pub fn check_same_region_original(ch: &GaussianTwrcChannel) -> Result<bool> {
    ch.validate()?;
    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    Ok(rel(ch.g1r, ch.g2r)
        && rel(
            ch.g21 * ch.g21 + ch.gr1 * ch.gr1,
            ch.g12 * ch.g12 + ch.gr2 * ch.gr2,
        ))
}

/// Condition for CF without binning to achieve the full noisy-network-
/// coding region: `c1 <= e2` and `c2 <= e1`.
pub fn check_same_region_nnc(ch: &GaussianTwrcChannel) -> Result<bool> {
    let t = thresholds(ch)?;
    let tol = 1e-12;
    Ok(t.c1 <= t.e2 * (1.0 + tol) && t.c2 <= t.e1 * (1.0 + tol))
}

/// Interior critical point of `R12 + R21`; +inf encodes "none" (the sum is
/// increasing everywhere), negative values are returned as computed.
fn sigma_g_sq(ch: &GaussianTwrcChannel) -> f64 {
    let p = ch.power;
    let num = ch.gr2 * ch.gr2 * p + ch.g12 * ch.g12 * p + 1.0;
    let den = ch.gr2 * ch.gr2 * p - ch.g12 * ch.g12 * p - 1.0;
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Clamped sum rate `s(sigma2)` maximized by noisy network coding.
pub fn sum_rate_at(ch: &GaussianTwrcChannel, sigma2: f64) -> Result<f64> {
    let rt = rate_tuple(ch, sigma2)?;
    Ok(rt.r11.min(rt.r12).max(0.0) + rt.r21.min(rt.r22).max(0.0))
}

/// Closed-form optimal compression variance and sum rate for noisy network
/// coding (KKT case analysis, users relabeled so that `e1 >= e2`).
pub fn optimal_sigma_nnc(ch: &GaussianTwrcChannel) -> Result<(f64, f64)> {
    let t0 = thresholds(ch)?;
    let work = if t0.e1 >= t0.e2 {
        *ch
    } else {
        ch.swapped_users()
    };
    let t = thresholds(&work)?;
    let p = work.power;
    let sigma_z1 = 1.0 / (work.g21 * work.g21 * p + work.g2r * work.g2r * p);
    let sigma_g = sigma_g_sq(&work);

    // optimum of R12 + R21 clipped to [lo, e1]
    let clip = |lo: f64| -> f64 {
        if sigma_g >= lo && sigma_g <= t.e1 {
            sigma_g
        } else if sigma_g > t.e1 || sigma_g <= 0.0 {
            t.e1
        } else {
            lo
        }
    };
    let sigma_n = if sigma_z1 <= t.e2 {
        clip(t.e2)
    } else {
        let n2 = clip(sigma_z1);
        let rt_e2 = rate_tuple(&work, t.e2)?;
        let rt_n2 = rate_tuple(&work, n2)?;
        if rt_e2.r21 <= rt_n2.r12 + rt_n2.r21 {
            n2
        } else {
            t.e2
        }
    };
    let sum = sum_rate_at(&work, sigma_n)?;
    Ok((sigma_n, sum))
}

/// Condition for CF without binning to achieve the NNC sum rate: the
/// relabeled `c1` does not exceed the optimal `sigma_N`.
pub fn check_same_sumrate(ch: &GaussianTwrcChannel) -> Result<bool> {
    let t0 = thresholds(ch)?;
    let work = if t0.e1 >= t0.e2 {
        *ch
    } else {
        ch.swapped_users()
    };
    let t = thresholds(&work)?;
    let (sigma_n, _) = optimal_sigma_nnc(&work)?;
    Ok(t.c1 <= sigma_n + 1e-9)
}

/// Maximum sum rate of CF without binning: the NNC objective constrained to
/// `sigma2 >= max(c1, c2)`, maximized by golden-section search within each
/// smooth monotone segment plus endpoint checks.
pub fn sumrate_cf_nobinning(ch: &GaussianTwrcChannel) -> Result<f64> {
    let t = thresholds(ch)?;
    let lower = t.c1.max(t.c2);
    let p = ch.power;
    let sigma_z1 = 1.0 / (ch.g21 * ch.g21 * p + ch.g2r * ch.g2r * p);
    let sigma_z2 = 1.0 / (ch.g12 * ch.g12 * p + ch.g1r * ch.g1r * p);
    let upper = t.e1.max(t.e2).max(lower) * 1.0001 + 1.0;
    let mut cuts = vec![lower, upper];
    for s in [sigma_z1, sigma_z2, t.e1, t.e2, sigma_g_sq(ch)] {
        if s.is_finite() && s > lower && s < upper {
            cuts.push(s);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let f = |s: f64| sum_rate_at(ch, s).unwrap_or(0.0);
    let mut best = f64::NEG_INFINITY;
    for w in cuts.windows(2) {
        let (_, v) = golden_max(f, w[0], w[1], 1e-12);
        best = best.max(v);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn fig3() -> GaussianTwrcChannel {
        GaussianTwrcChannel::new(0.1, 2.0, 0.1, 0.5, 2.0, 0.5, 20.0).unwrap()
    }

    pub(crate) fn fig4() -> GaussianTwrcChannel {
        GaussianTwrcChannel::new(0.1, 2.0, 0.1, 0.5, 0.5, 2.0, 20.0).unwrap()
    }

    fn all_ones(p: f64) -> GaussianTwrcChannel {
        GaussianTwrcChannel::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, p).unwrap()
    }

    pub(crate) fn random_channel(rng: &mut ChaCha8Rng) -> GaussianTwrcChannel {
        let p = *[1.0, 10.0, 20.0, 100.0]
            .get(rng.gen_range(0..4))
            .unwrap();
        let g = |rng: &mut ChaCha8Rng| {
            let lo = 0.1f64.ln();
            let hi = 4.0f64.ln();
            rng.gen_range(lo..hi).exp()
        };
        GaussianTwrcChannel::new(g(rng), g(rng), g(rng), g(rng), g(rng), g(rng), p).unwrap()
    }

    #[test]
    fn capacity_basic_values() {
        assert_eq!(capacity(0.0).unwrap(), 0.0);
        assert!((capacity(3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((capacity(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(capacity(-0.5).is_err());
    }

    #[test]
    fn rate_tuple_unit_channel() {
        let rt = rate_tuple(&all_ones(1.0), 1.0).unwrap();
        assert!((rt.r11 - 0.5 * 2.5f64.log2()).abs() < 1e-12);
        assert!((rt.r11 - 0.66096).abs() < 5e-6);
        assert!((rt.r12 - (0.5 * 3.0f64.log2() - 0.5)).abs() < 1e-12);
        assert!((rt.r12 - 0.29248).abs() < 5e-6);
        assert!(rate_tuple(&all_ones(1.0), 0.0).is_err());
        assert!(rate_tuple(&all_ones(1.0), -1.0).is_err());
    }

    #[test]
    fn rate_tuple_limits_and_intersections() {
        let ch = fig3();
        // sigma2 -> inf: r11 -> C(g21^2 P)
        let rt = rate_tuple(&ch, 1e12).unwrap();
        assert!((rt.r11 - cap(ch.g21 * ch.g21 * ch.power)).abs() < 1e-9);
        // at e1 the two R1 expressions intersect
        let t = thresholds(&ch).unwrap();
        let rt = rate_tuple(&ch, t.e1).unwrap();
        assert!((rt.r11 - rt.r12).abs() < 1e-12);
        let rt = rate_tuple(&ch, t.e2).unwrap();
        assert!((rt.r21 - rt.r22).abs() < 1e-12);
    }

    #[test]
    fn thresholds_unit_and_symmetric_channels() {
        let t = thresholds(&all_ones(1.0)).unwrap();
        assert!((t.c1 - 2.0).abs() < 1e-15);
        assert!((t.e1 - 3.0).abs() < 1e-15);
        assert!((t.r - 3.0).abs() < 1e-15);
        assert!((t.c1 - t.c2).abs() < 1e-15 && (t.e1 - t.e2).abs() < 1e-15);
    }

    #[test]
    fn thresholds_fig3_by_substitution() {
        let t = thresholds(&fig3()).unwrap();
        assert!((t.c1 - 0.24).abs() < 1e-12);
        assert!((t.e1 - 16.24).abs() < 1e-12);
        assert!((t.c2 - 0.015).abs() < 1e-12);
        assert!((t.e2 - 0.0775).abs() < 1e-12);
        assert!((t.r - 16.24).abs() < 1e-12);
    }

    #[test]
    fn degenerate_relay_gain_is_reported() {
        let ch = GaussianTwrcChannel::new(0.1, 0.0, 0.1, 0.5, 1.0, 1.0, 10.0).unwrap();
        assert!(matches!(
            thresholds(&ch),
            Err(Error::DegenerateChannel(_))
        ));
    }

    #[test]
    fn monotonicity_of_rate_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let ch = random_channel(&mut rng);
            let a = rng.gen_range(-4.0f64..4.0).exp();
            let b = a * rng.gen_range(1.0f64..20.0);
            let ra = rate_tuple(&ch, a).unwrap();
            let rb = rate_tuple(&ch, b).unwrap();
            assert!(ra.r11 >= rb.r11 - 1e-12);
            assert!(ra.r21 >= rb.r21 - 1e-12);
            assert!(ra.r12 <= rb.r12 + 1e-12);
            assert!(ra.r22 <= rb.r22 + 1e-12);
        }
    }

    #[test]
    fn original_equality_predicate() {
        assert!(check_same_region_original(&all_ones(7.0)).unwrap());
        // g1r != g2r on both figure channels
        assert!(!check_same_region_original(&fig3()).unwrap());
        assert!(!check_same_region_original(&fig4()).unwrap());
    }

    #[test]
    fn nnc_equality_predicate_on_figure_channels() {
        assert!(check_same_region_nnc(&all_ones(5.0)).unwrap());
        assert!(!check_same_region_nnc(&fig3()).unwrap());
        assert!(check_same_region_nnc(&fig4()).unwrap());
    }

    #[test]
    fn region_nesting_on_figure_and_random_channels() {
        let grid = SweepGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut channels = vec![fig3(), fig4(), all_ones(10.0)];
        for _ in 0..100 {
            channels.push(random_channel(&mut rng));
        }
        for ch in channels {
            let ori = region(&ch, Scheme::CfOriginal, &grid).unwrap();
            let nb = region(&ch, Scheme::CfNobinning, &grid).unwrap();
            let nnc = region(&ch, Scheme::Nnc, &grid).unwrap();
            assert!(nb.contains(&ori, 1e-9), "cf_original escapes cf_nobinning");
            assert!(nnc.contains(&nb, 1e-9), "cf_nobinning escapes nnc");
            // frontier well-formedness
            for b in [&ori, &nb, &nnc] {
                for w in b.points.windows(2) {
                    assert!(w[0].r1 < w[1].r1 && w[0].r2 > w[1].r2);
                }
            }
        }
    }

    #[test]
    fn original_equality_channels_have_coinciding_frontiers() {
        let grid = SweepGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            // construct a channel meeting the equality condition:
            // g1r = g2r, g21^2 + gr1^2 = g12^2 + gr2^2
            let g1r: f64 = rng.gen_range(0.3..2.0);
            let g21: f64 = rng.gen_range(0.1..1.5);
            let gr1: f64 = rng.gen_range(0.1..1.5);
            let g12: f64 = rng.gen_range(0.05..(g21 * g21 + gr1 * gr1).sqrt() - 0.01);
            let gr2 = (g21 * g21 + gr1 * gr1 - g12 * g12).sqrt();
            let ch =
                GaussianTwrcChannel::new(g12, g1r, g21, g1r, gr1, gr2, 10.0).unwrap();
            assert!(check_same_region_original(&ch).unwrap());
            assert!(
                check_same_region_nnc(&ch).unwrap(),
                "original-scheme equality implies NNC equality"
            );
            let ori = region(&ch, Scheme::CfOriginal, &grid).unwrap();
            let nb = region(&ch, Scheme::CfNobinning, &grid).unwrap();
            let nnc = region(&ch, Scheme::Nnc, &grid).unwrap();
            assert!(ori.max_deviation(&nb) <= 1e-6);
            assert!(nb.max_deviation(&nnc) <= 1e-6);
        }
    }

    #[test]
    fn kkt_branches_cover_sigma_g_cases() {
        // denominator <= 0 routes to the e1 branch
        let ch = GaussianTwrcChannel::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.1, 1.0).unwrap();
        let t = thresholds(&ch).unwrap();
        let (sn, _) = optimal_sigma_nnc(&ch).unwrap();
        let work_e1 = t.e1.max(t.e2);
        assert!(
            (sn - work_e1).abs() < 1e-12,
            "sigma_g <= 0 must map to the e1 intersection"
        );
    }

    #[test]
    fn closed_form_matches_oracle_on_random_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..300 {
            let ch = random_channel(&mut rng);
            let (_, closed) = optimal_sigma_nnc(&ch).unwrap();
            let grid_best = oracle::nnc_sumrate_search(&ch, 1e-6).unwrap();
            assert!(
                (closed - grid_best).abs() <= 1e-6,
                "closed form {closed} vs oracle {grid_best}"
            );
        }
    }

    #[test]
    fn equal_pathloss_ties_always_give_same_sumrate() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let a: f64 = rng.gen_range(0.1f64.ln()..4.0f64.ln()).exp();
            let b: f64 = rng.gen_range(0.1f64.ln()..4.0f64.ln()).exp();
            let c: f64 = rng.gen_range(0.1f64.ln()..4.0f64.ln()).exp();
            let p = *[1.0, 10.0, 100.0].get(rng.gen_range(0..3)).unwrap();
            // equal-pathloss ties: gr1 = g1r = a, gr2 = g2r = b, g12 = g21 = c
            let ch = GaussianTwrcChannel::new(c, a, c, b, a, b, p).unwrap();
            assert!(check_same_sumrate(&ch).unwrap());
            let (_, nnc) = optimal_sigma_nnc(&ch).unwrap();
            let cfnb = sumrate_cf_nobinning(&ch).unwrap();
            assert!((nnc - cfnb).abs() <= 1e-9);
        }
    }

    #[test]
    fn adversarial_channel_fails_sumrate_equality() {
        // strong user-2 uplink and user-1 downlink, weak relay broadcast to
        // user 2: sigma_c1 = 5 ends up above sigma_N = sigma_g ~ 1.004.
        let ch = GaussianTwrcChannel::new(
            0.1f64.sqrt(),   // g12^2 P = 1
            100.0f64.sqrt(), // g1r^2 P = 1000
            0.9f64.sqrt(),   // g21^2 P = 9
            0.2f64.sqrt(),   // g2r^2 P = 2
            1.0,             // gr1^2 P = 10
            100.0f64.sqrt(), // gr2^2 P = 1000
            10.0,
        )
        .unwrap();
        let t = thresholds(&ch).unwrap();
        assert!(t.e1 >= t.e2, "constructed without relabeling");
        let (sn, nnc_sum) = optimal_sigma_nnc(&ch).unwrap();
        if t.c1 > sn + 1e-9 {
            assert!(!check_same_sumrate(&ch).unwrap());
            let cfnb = sumrate_cf_nobinning(&ch).unwrap();
            assert!(nnc_sum > cfnb + 1e-9, "constrained optimum must be strictly smaller");
        } else {
            // fall back to a random search; such channels exist in the family
            let mut rng = ChaCha8Rng::seed_from_u64(777);
            let mut found = false;
            for _ in 0..4000 {
                let ch = random_channel(&mut rng);
                let t = thresholds(&ch).unwrap();
                let work = if t.e1 >= t.e2 { ch } else { ch.swapped_users() };
                let tw = thresholds(&work).unwrap();
                let (sn, nnc_sum) = optimal_sigma_nnc(&work).unwrap();
                if tw.c1 > sn + 1e-6 {
                    assert!(!check_same_sumrate(&ch).unwrap());
                    let cfnb = sumrate_cf_nobinning(&ch).unwrap();
                    assert!(nnc_sum > cfnb + 1e-9);
                    found = true;
                    break;
                }
            }
            assert!(found, "no adversarial channel found");
        }
    }

    #[test]
    fn cf_nobinning_sumrate_never_exceeds_nnc() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let ch = random_channel(&mut rng);
            let (_, nnc) = optimal_sigma_nnc(&ch).unwrap();
            let cfnb = sumrate_cf_nobinning(&ch).unwrap();
            assert!(cfnb <= nnc + 1e-9);
        }
    }

    #[test]
    fn fig3_sumrate_equals_nnc() {
        let ch = fig3();
        assert!(check_same_sumrate(&ch).unwrap());
        let (_, nnc) = optimal_sigma_nnc(&ch).unwrap();
        let cfnb = sumrate_cf_nobinning(&ch).unwrap();
        assert!((nnc - cfnb).abs() <= 1e-9);
    }
}
