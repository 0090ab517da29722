//! Rate-region computation for compress-forward relaying strategies on
//! one-way and two-way relay channels.
//!
//! The crate evaluates the achievable-rate constraints of the original
//! compress-forward scheme (Wyner-Ziv binning plus successive decoding),
//! compress-forward without binning (joint decoding), relaxed-decoding
//! variants with message repetition, and noisy network coding, over three
//! channel families:
//!
//! * [`dmc`] — discrete memoryless channels described by an explicit joint
//!   pmf, with exact mutual-information evaluation from [`info`];
//! * [`gaussian`] — the Gaussian two-way relay channel with closed-form
//!   rates, threshold variances and a closed-form sum-rate optimizer;
//! * [`fading`] — the Rayleigh-fading two-way relay channel with ergodic
//!   rates in exponential-integral closed form, plus quadrature and
//!   Monte Carlo cross-checks.
//!
//! [`geometry`] maps node layouts (or pathloss-gain pairs) to channels and
//! classifies grids by which region/sum-rate equality conditions hold.
//! Region boundaries are swept Pareto frontiers over the compression-noise
//! variance `sigma2`; see [`region`].
//!
//! Batch evaluations (grid sweeps, random-channel suites, Monte Carlo) run
//! data-parallel under the default `parallel` feature and fall back to
//! sequential iteration when it is disabled.

pub mod dmc;
pub mod fading;
pub mod gaussian;
pub mod geometry;
pub mod info;
pub mod numerics;
pub mod region;

pub(crate) mod exec;

use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A variable name was not found among a pmf's axes.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    /// Variable sets passed to an information measure overlap.
    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),
    /// Probabilities do not form a normalized distribution.
    #[error("normalization failure: {0}")]
    Normalization(String),
    /// Joint alphabet too large for dense storage.
    #[error("joint alphabet size {0} exceeds the dense-storage limit {1}")]
    Size(usize, usize),
    /// A distribution does not have the factorization a scheme requires.
    #[error("factorization violated: {0}")]
    Factorization(String),
    /// Argument outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Channel gain pattern makes a threshold formula undefined.
    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),
    /// A region sweep had no admissible compression-noise variance.
    #[error("empty admissible region: {0}")]
    EmptyRegion(String),
    /// Root bracketing or iteration failed to converge.
    #[error("convergence failure in {context}: {detail}")]
    Convergence { context: String, detail: String },
    /// Invalid node geometry (coincident nodes, non-positive distance).
    #[error("geometry error: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Caps the data-parallel thread count. With `n = None` the cap is read
/// from the `RELAY_RATES_THREADS` environment variable; unset or invalid
/// values leave the default. A no-op without the `parallel` feature.
pub fn configure_threads(n: Option<usize>) {
    #[cfg(feature = "parallel")]
    {
        let n = n.or_else(|| {
            std::env::var("RELAY_RATES_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        });
        if let Some(n) = n.filter(|n| *n > 0) {
            // building the global pool can only happen once; later calls
            // (or a pool already in use) are ignored
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}
