//! Swept rate-region boundaries: Pareto filtering, staircase comparison and
//! CSV export shared by the Gaussian and fading channel families.

use serde::{Deserialize, Serialize};

/// One retained frontier point: the compression-noise variance it came from
/// and the clamped rate pair it achieves.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub sigma2: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Scheme label attached to a swept boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    CfOriginal,
    CfNobinning,
    Nnc,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::CfOriginal => "cf_original",
            Scheme::CfNobinning => "cf_nobinning",
            Scheme::Nnc => "nnc",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cf_original" => Ok(Scheme::CfOriginal),
            "cf_nobinning" => Ok(Scheme::CfNobinning),
            "nnc" => Ok(Scheme::Nnc),
            other => Err(format!("unknown scheme `{other}`")),
        }
    }
}

/// Pareto frontier of (R1, R2) pairs swept over the compression-noise
/// variance. Points are sorted by R1 ascending with R2 strictly decreasing;
/// dominated points are dropped.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub scheme: Scheme,
    pub points: Vec<FrontierPoint>,
    /// The sigma^2 grid that was swept (after admissibility filtering).
    pub sweep: Vec<f64>,
}

impl RegionBoundary {
    /// Builds the frontier from raw swept points.
    pub fn from_sweep(scheme: Scheme, mut raw: Vec<FrontierPoint>, sweep: Vec<f64>) -> Self {
        // sort by R1 ascending, R2 descending for ties, keep one per R1
        raw.sort_by(|a, b| {
            a.r1.partial_cmp(&b.r1)
                .unwrap()
                .then(b.r2.partial_cmp(&a.r2).unwrap())
        });
        raw.dedup_by(|next, kept| next.r1 == kept.r1);
        // walk from the right keeping strictly increasing R2
        let mut kept: Vec<FrontierPoint> = Vec::new();
        let mut best_r2 = f64::NEG_INFINITY;
        for p in raw.into_iter().rev() {
            if p.r2 > best_r2 {
                kept.push(p);
                best_r2 = p.r2;
            }
        }
        kept.reverse();
        RegionBoundary {
            scheme,
            points: kept,
            sweep,
        }
    }

    /// Largest R2 achievable at horizontal coordinate `r1` under this
    /// frontier's staircase (0 if `r1` exceeds every point).
    pub fn r2_at(&self, r1: f64) -> f64 {
        // points sorted by r1 ascending, r2 descending: first point with
        // point.r1 >= r1 carries the largest admissible r2
        match self
            .points
            .iter()
            .find(|p| p.r1 >= r1 - 1e-15)
        {
            Some(p) => p.r2,
            None => 0.0,
        }
    }

    /// True when every point of `inner` is weakly dominated by `self`'s
    /// staircase within `tol` bits.
    pub fn contains(&self, inner: &RegionBoundary, tol: f64) -> bool {
        inner
            .points
            .iter()
            .all(|p| self.r2_at(p.r1) >= p.r2 - tol)
    }

    /// Largest amount by which a point of `self` exceeds `other`'s staircase,
    /// in bits. Positive values witness strict containment of `other`.
    pub fn excess_over(&self, other: &RegionBoundary) -> f64 {
        self.points
            .iter()
            .map(|p| p.r2 - other.r2_at(p.r1))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Symmetric pointwise deviation between two frontiers.
    pub fn max_deviation(&self, other: &RegionBoundary) -> f64 {
        let a = self
            .points
            .iter()
            .map(|p| (p.r2 - other.r2_at(p.r1)).abs())
            .fold(0.0f64, f64::max);
        let b = other
            .points
            .iter()
            .map(|p| (p.r2 - self.r2_at(p.r1)).abs())
            .fold(0.0f64, f64::max);
        a.max(b)
    }

    pub fn max_r1(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.r1)
    }

    pub fn max_r2(&self) -> f64 {
        self.points.first().map_or(0.0, |p| p.r2)
    }

    /// CSV with header `sigma2,R1,R2,scheme`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sigma2,R1,R2,scheme\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.11e},{:.11e},{:.11e},{}\n",
                p.sigma2,
                p.r1,
                p.r2,
                self.scheme.label()
            ));
        }
        out
    }
}

/// Logarithmic sweep grid with injected exact threshold points.
///
/// Spans `[max(lower, 1e-4) * 0.5, hi]` with `n` log-spaced points, keeps
/// only admissible points (`>= lower`), and injects `lower` itself plus any
/// positive finite thresholds that are admissible.
pub fn log_grid_with_thresholds(lower: f64, hi: f64, n: usize, thresholds: &[f64]) -> Vec<f64> {
    let lo = (lower.max(1e-4)) * 0.5;
    let hi = hi.max(lo * 2.0);
    let ratio = (hi / lo).ln() / (n.max(2) - 1) as f64;
    let mut grid: Vec<f64> = (0..n.max(2))
        .map(|i| lo * (ratio * i as f64).exp())
        .filter(|s| *s >= lower)
        .collect();
    if lower > 0.0 {
        grid.push(lower);
    }
    for &t in thresholds {
        if t.is_finite() && t >= lower && t > 0.0 {
            grid.push(t);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}
