//! The Rayleigh-fading two-way relay channel: ergodic rates in
//! exponential-integral closed form, fading thresholds by bracketed root
//! finding, region sweeps, and the sum-rate case analysis carried over from
//! the Gaussian channel.
//!
//! Conventions: `h ~ CN(0, E|h|^2)` so each `|h|^2` is exponential; rates
//! use the complex-signal convention `C(x) = log2(1 + x)` (no 1/2 factor).
//! Pathloss enters as `|g|^2 = |h|^2 / d^alpha`. An absent direct link
//! (zero second moment) is handled as the degenerate exponential with
//! infinite rate parameter.

use serde::{Deserialize, Serialize};

use crate::numerics::{bracketed_root, exp_e1, LN2};
use crate::region::{log_grid_with_thresholds, FrontierPoint, RegionBoundary, Scheme};
use crate::{Error, Result};

pub mod oracle;

/// Second moments E|h_ij|^2 of the six fading coefficients.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct FadingMoments {
    pub h12: f64,
    pub h21: f64,
    pub h1r: f64,
    pub h2r: f64,
    pub hr1: f64,
    pub hr2: f64,
}

impl Default for FadingMoments {
    fn default() -> Self {
        FadingMoments {
            h12: 1.0,
            h21: 1.0,
            h1r: 1.0,
            h2r: 1.0,
            hr1: 1.0,
            hr2: 1.0,
        }
    }
}

/// Distances, pathloss exponent, power and fading second moments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FadingTwrcChannel {
    pub d12: f64,
    pub d1r: f64,
    pub d2r: f64,
    pub alpha: f64,
    #[serde(rename = "P")]
    pub power: f64,
    #[serde(default)]
    pub moments: FadingMoments,
}

impl FadingTwrcChannel {
    pub fn new(d12: f64, d1r: f64, d2r: f64, alpha: f64, power: f64) -> Result<Self> {
        let ch = FadingTwrcChannel {
            d12,
            d1r,
            d2r,
            alpha,
            power,
            moments: FadingMoments::default(),
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, d) in [("d12", self.d12), ("d1r", self.d1r), ("d2r", self.d2r)] {
            if d.is_nan() || d <= 0.0 || !d.is_finite() {
                return Err(Error::Geometry(format!("distance {name} must be positive, got {d}")));
            }
        }
        if self.alpha.is_nan() || self.alpha < 0.0 {
            return Err(Error::Domain(format!("alpha must be nonnegative, got {}", self.alpha)));
        }
        if self.power.is_nan() || self.power <= 0.0 {
            return Err(Error::Domain(format!("power must be positive, got {}", self.power)));
        }
        let m = &self.moments;
        for (name, v) in [("h12", m.h12), ("h21", m.h21)] {
            if v.is_nan() || v < 0.0 || !v.is_finite() {
                return Err(Error::Domain(format!("moment {name} must be nonnegative, got {v}")));
            }
        }
        for (name, v) in [
            ("h1r", m.h1r),
            ("h2r", m.h2r),
            ("hr1", m.hr1),
            ("hr2", m.hr2),
        ] {
            if v.is_nan() || v <= 0.0 || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "relay-link moment {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Relabels the users (1 <-> 2): swaps the relay distances and the
    /// paired second moments. The sum rate is invariant under this map.
    pub fn swapped_users(&self) -> Self {
        FadingTwrcChannel {
            d12: self.d12,
            d1r: self.d2r,
            d2r: self.d1r,
            alpha: self.alpha,
            power: self.power,
            moments: FadingMoments {
                h12: self.moments.h21,
                h21: self.moments.h12,
                h1r: self.moments.h2r,
                h2r: self.moments.h1r,
                hr1: self.moments.hr2,
                hr2: self.moments.hr1,
            },
        }
    }

    /// Exponential rate parameters of the six SNR terms; `sigma2` scales the
    /// relayed components.
    pub(crate) fn lambdas(&self, sigma2: f64) -> Lambdas {
        let p = self.power;
        let d12a = self.d12.powf(self.alpha);
        let d1ra = self.d1r.powf(self.alpha);
        let d2ra = self.d2r.powf(self.alpha);
        Lambdas {
            u1: d12a / (self.moments.h21 * p),
            u2: d12a / (self.moments.h12 * p),
            v1: d1ra * (1.0 + sigma2) / (self.moments.hr1 * p),
            v2: d2ra * (1.0 + sigma2) / (self.moments.hr2 * p),
            v3: d2ra / (self.moments.h2r * p),
            v4: d1ra / (self.moments.h1r * p),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Lambdas {
    pub u1: f64,
    pub u2: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
}

/// Exponential rate pair for a sum of two independent SNR terms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExpRatePair {
    pub lambda_u: f64,
    pub lambda_v: f64,
}

fn check_rate(lambda: f64) -> Result<()> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Domain(format!(
            "exponential rate must be positive, got {lambda}"
        )));
    }
    Ok(())
}

/// `E[log2(1 + g)]` for `g` exponential with rate `lambda`:
/// `exp(lambda) E1(lambda) / ln 2`. An infinite rate gives 0.
pub fn ergodic_log_single(lambda: f64) -> Result<f64> {
    check_rate(lambda)?;
    if lambda.is_infinite() {
        return Ok(0.0);
    }
    Ok(exp_e1(lambda)? / LN2)
}

/// Distinct-rate branch of [`ergodic_log_sum`]; numerically degrades as the
/// rates approach each other (exposed for the continuity cross-check).
pub fn ergodic_log_sum_distinct(lambda_u: f64, lambda_v: f64) -> Result<f64> {
    check_rate(lambda_u)?;
    check_rate(lambda_v)?;
    let g = |l: f64| -> Result<f64> { Ok(exp_e1(l)? / l) };
    Ok(lambda_u * lambda_v / (lambda_v - lambda_u) * (g(lambda_u)? - g(lambda_v)?) / LN2)
}

/// Equal-rate branch of [`ergodic_log_sum`]: the sum is Erlang-2, giving
/// `E[log2(1+g)] = (1 + (1 - lambda) exp(lambda) E1(lambda)) / ln 2`.
pub fn ergodic_log_sum_equal(lambda: f64) -> Result<f64> {
    check_rate(lambda)?;
    if lambda.is_infinite() {
        return Ok(0.0);
    }
    Ok((1.0 + (1.0 - lambda) * exp_e1(lambda)?) / LN2)
}

/// `E[log2(1 + U + V)]` for independent exponentials with rates
/// `p.lambda_u`, `p.lambda_v`.
///
/// An infinite rate degenerates that term to zero; nearly-equal rates
/// (relative separation below 1e-7) are routed to the Erlang branch at the
/// mean rate, where the distinct-branch cancellation would dominate.
pub fn ergodic_log_sum(p: ExpRatePair) -> Result<f64> {
    let (lu, lv) = (p.lambda_u, p.lambda_v);
    check_rate(lu)?;
    check_rate(lv)?;
    match (lu.is_infinite(), lv.is_infinite()) {
        (true, true) => Ok(0.0),
        (true, false) => ergodic_log_single(lv),
        (false, true) => ergodic_log_single(lu),
        (false, false) => {
            if (lu - lv).abs() <= 1e-7 * lu.max(lv) {
                ergodic_log_sum_equal(0.5 * (lu + lv))
            } else {
                ergodic_log_sum_distinct(lu, lv)
            }
        }
    }
}

fn sum_pair(lu: f64, lv: f64) -> Result<f64> {
    ergodic_log_sum(ExpRatePair {
        lambda_u: lu,
        lambda_v: lv,
    })
}

/// Ergodic rate components at one compression variance, all in bits.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FadingRateTuple {
    pub rbar11: f64,
    pub rbar12: f64,
    pub rbar21: f64,
    pub rbar22: f64,
    /// Compression-feasibility exponents of users 2 and 1 respectively.
    pub f1: f64,
    pub f2: f64,
    /// Expectation part of `rbar12` (zero-crossing defines `z1bar`).
    pub d1: f64,
}

/// Evaluates the six ergodic expectations at `sigma2`.
///
/// The ratio-form expectations `f1`, `f2` use the exact decomposition
/// `E[log2(1 + X/(1+Y))] = E[log2(1+X+Y)] - E[log2(1+Y)]` for independent
/// exponentials, avoiding any 2-D integration.
pub fn fading_rate_tuple(ch: &FadingTwrcChannel, sigma2: f64) -> Result<FadingRateTuple> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Domain(format!("sigma2 must be positive, got {sigma2}")));
    }
    ch.validate()?;
    let l = ch.lambdas(sigma2);
    let c_comp = (1.0 + 1.0 / sigma2).log2();
    let d1 = sum_pair(l.u1, l.v3)?;
    let d2 = sum_pair(l.u2, l.v4)?;
    let single = |lambda: f64| -> Result<f64> {
        if lambda.is_infinite() {
            Ok(0.0)
        } else {
            ergodic_log_single(lambda)
        }
    };
    Ok(FadingRateTuple {
        rbar11: sum_pair(l.u1, l.v1)?,
        rbar12: d1 - c_comp,
        rbar21: sum_pair(l.u2, l.v2)?,
        rbar22: d2 - c_comp,
        f1: d1 - single(l.u1)?,
        f2: d2 - single(l.u2)?,
        d1,
    })
}

/// Fading thresholds in sigma2 units. `gbar` is +inf when the pair sum
/// `rbar12 + rbar21` has no interior critical point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FadingThresholds {
    pub c1bar: f64,
    pub c2bar: f64,
    pub z1bar: f64,
    pub e1bar: f64,
    pub e2bar: f64,
    pub gbar: f64,
    pub nbar: f64,
}

const ROOT_LO: f64 = 1e-6;
const ROOT_HI0: f64 = 1e4;
const ROOT_HI_MAX: f64 = 1e8;
const ROOT_TOL: f64 = 1e-12;

fn invert_rate(bits: f64) -> f64 {
    if bits <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / (2.0f64.powf(bits) - 1.0)
    }
}

/// Intersection of `rbar11` and `rbar12` (and the user-2 pair), found by
/// bracketed root finding on the monotone difference.
fn intersection_root(
    ch: &FadingTwrcChannel,
    pick: impl Fn(&FadingRateTuple) -> f64,
    context: &str,
) -> Result<f64> {
    let f = |s: f64| {
        let rt = fading_rate_tuple(ch, s).expect("sigma2 > 0 inside bracket");
        pick(&rt)
    };
    match bracketed_root(f, ROOT_LO, ROOT_HI0, ROOT_HI_MAX, ROOT_TOL)? {
        Some(root) => Ok(root),
        None => Err(Error::Convergence {
            context: context.to_string(),
            detail: format!("no sign change in [{ROOT_LO}, {ROOT_HI_MAX}]"),
        }),
    }
}

/// Central-difference derivative of `rbar12 + rbar21` in `sigma2`.
fn pair_sum_derivative(ch: &FadingTwrcChannel, s: f64) -> f64 {
    let h = (1e-6f64).max(1e-6 * s).min(0.5 * s);
    let q = |x: f64| {
        let rt = fading_rate_tuple(ch, x).expect("sigma2 > 0 inside bracket");
        rt.rbar12 + rt.rbar21
    };
    (q(s + h) - q(s - h)) / (2.0 * h)
}

fn gbar_root(ch: &FadingTwrcChannel) -> Result<f64> {
    Ok(bracketed_root(
        |s| pair_sum_derivative(ch, s),
        ROOT_LO,
        ROOT_HI0,
        ROOT_HI_MAX,
        ROOT_TOL,
    )?
    .unwrap_or(f64::INFINITY))
}

/// All fading thresholds. `e1bar`, `e2bar` come from root finding on the
/// rate intersections, `gbar` from the central-difference derivative of the
/// closed-form pair sum, `nbar` from the sum-rate case analysis.
pub fn fading_thresholds(ch: &FadingTwrcChannel) -> Result<FadingThresholds> {
    ch.validate()?;
    let rt = fading_rate_tuple(ch, 1.0)?;
    let c1bar = invert_rate(rt.f1);
    let c2bar = invert_rate(rt.f2);
    let z1bar = invert_rate(rt.d1);
    let e1bar = intersection_root(ch, |rt| rt.rbar11 - rt.rbar12, "e1bar intersection")?;
    let e2bar = intersection_root(ch, |rt| rt.rbar21 - rt.rbar22, "e2bar intersection")?;
    let gbar = gbar_root(ch)?;
    let (nbar, _) = optimal_from(ch, e1bar, e2bar, Some(gbar))?;
    Ok(FadingThresholds {
        c1bar,
        c2bar,
        z1bar,
        e1bar,
        e2bar,
        gbar,
        nbar,
    })
}

/// Clamped ergodic sum rate at one compression variance.
pub fn fading_sum_rate_at(ch: &FadingTwrcChannel, sigma2: f64) -> Result<f64> {
    let rt = fading_rate_tuple(ch, sigma2)?;
    Ok(rt.rbar11.min(rt.rbar12).max(0.0) + rt.rbar21.min(rt.rbar22).max(0.0))
}

/// Optimal compression variance and ergodic sum rate for noisy network
/// coding: the Gaussian case analysis executed on the fading thresholds
/// (`z1bar`, `e1bar`, `e2bar`, `gbar`), after relabeling so `e1bar >= e2bar`.
pub fn fading_optimal_sigma_nnc(ch: &FadingTwrcChannel) -> Result<(f64, f64)> {
    ch.validate()?;
    let e1 = intersection_root(ch, |rt| rt.rbar11 - rt.rbar12, "e1bar intersection")?;
    let e2 = intersection_root(ch, |rt| rt.rbar21 - rt.rbar22, "e2bar intersection")?;
    optimal_from(ch, e1, e2, None)
}

/// Case analysis given precomputed intersections. `gbar_unswapped` skips the
/// derivative root-find when the labeling already satisfies `e1 >= e2`.
fn optimal_from(
    ch: &FadingTwrcChannel,
    e1: f64,
    e2: f64,
    gbar_unswapped: Option<f64>,
) -> Result<(f64, f64)> {
    let swapped = e1 < e2;
    let work = if swapped { ch.swapped_users() } else { *ch };
    let (e1, e2) = if swapped { (e2, e1) } else { (e1, e2) };
    let z1 = invert_rate(fading_rate_tuple(&work, 1.0)?.d1);
    let gbar = match (swapped, gbar_unswapped) {
        (false, Some(g)) => g,
        _ => gbar_root(&work)?,
    };
    let clip = |lo: f64| -> f64 {
        if gbar >= lo && gbar <= e1 {
            gbar
        } else if gbar > e1 {
            e1
        } else {
            lo
        }
    };
    let nbar = if z1 <= e2 {
        clip(e2)
    } else {
        let n2 = clip(z1);
        let rt_e2 = fading_rate_tuple(&work, e2)?;
        let rt_n2 = fading_rate_tuple(&work, n2)?;
        if rt_e2.rbar21 <= rt_n2.rbar12 + rt_n2.rbar21 {
            n2
        } else {
            e2
        }
    };
    let sum = fading_sum_rate_at(&work, nbar)?;
    Ok((nbar, sum))
}

/// Ergodic-region equality with noisy network coding:
/// `max(c1bar, c2bar) <= min(e1bar, e2bar)`.
pub fn fading_check_same_region(ch: &FadingTwrcChannel) -> Result<bool> {
    let t = fading_thresholds(ch)?;
    Ok(t.c1bar.max(t.c2bar) <= t.e1bar.min(t.e2bar) + 1e-9)
}

/// Ergodic sum-rate equality with noisy network coding:
/// `nbar >= max(c1bar, c2bar)` (within 1e-9; the strict-inequality reading
/// of the boundary case is not distinguished numerically).
pub fn fading_check_same_sumrate(ch: &FadingTwrcChannel) -> Result<bool> {
    ch.validate()?;
    let rt = fading_rate_tuple(ch, 1.0)?;
    let (nbar, _) = fading_optimal_sigma_nnc(ch)?;
    Ok(nbar >= invert_rate(rt.f1).max(invert_rate(rt.f2)) - 1e-9)
}

/// Scheme-dependent admissible lower bound on sigma2 (no-binning needs
/// `sigma2 >= max(c1bar, c2bar)`; NNC sweeps all positive values).
pub fn fading_sigma2_lower_bound(ch: &FadingTwrcChannel, scheme: Scheme) -> Result<f64> {
    let rt = fading_rate_tuple(ch, 1.0)?;
    match scheme {
        Scheme::CfNobinning => Ok(invert_rate(rt.f1).max(invert_rate(rt.f2))),
        Scheme::Nnc => Ok(0.0),
        Scheme::CfOriginal => Err(Error::Domain(
            "no ergodic closed form for the original CF scheme".into(),
        )),
    }
}

/// Pareto frontier of the ergodic region for one scheme.
pub fn fading_region(
    ch: &FadingTwrcChannel,
    scheme: Scheme,
    grid: &crate::gaussian::SweepGrid,
) -> Result<RegionBoundary> {
    let lower = fading_sigma2_lower_bound(ch, scheme)?;
    if !lower.is_finite() {
        return Err(Error::EmptyRegion(
            "compression thresholds are infinite".into(),
        ));
    }
    let t = fading_thresholds(ch)?;
    let hi = 10.0 * t.e1bar.max(t.e2bar).max(lower).max(1e-4);
    let sweep: Vec<f64> = log_grid_with_thresholds(
        0.0,
        hi,
        grid.points,
        &[t.c1bar, t.c2bar, t.e1bar, t.e2bar, t.z1bar, t.gbar, t.nbar],
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
    let pts = crate::exec::map_items(&sweep, |s| -> Result<FrontierPoint> {
        let rt = fading_rate_tuple(ch, *s)?;
        Ok(FrontierPoint {
            sigma2: *s,
            r1: rt.rbar11.min(rt.rbar12).max(0.0),
            r2: rt.rbar21.min(rt.rbar22).max(0.0),
        })
    });
    let mut raw = Vec::with_capacity(pts.len());
    for p in pts {
        raw.push(p?);
    }
    Ok(RegionBoundary::from_sweep(scheme, raw, sweep))
}
