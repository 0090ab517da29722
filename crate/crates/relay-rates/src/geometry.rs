//! Node layouts to channel gains, and classification maps of where CF
//! without binning matches noisy network coding.
//!
//! A cell is either a relay position (pathloss gains from distances, the
//! equal-pathloss case) or a direct-gain pair `(g12^2, g21^2)` with the
//! relay-side pathloss gains fixed by the symmetry mode. Each cell gets
//! four flags: same-rate-region and same-sum-rate for the Gaussian channel
//! and for the Rayleigh-fading channel. Cells where a root-find fails or
//! nodes coincide are marked `undetermined`, never dropped.

use serde::{Deserialize, Serialize};

use crate::fading::{FadingMoments, FadingTwrcChannel};
use crate::gaussian::GaussianTwrcChannel;
use crate::{Error, Result};

/// Two users and a relay in the plane, with pathloss exponent and power.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NodeLayout {
    pub user1: [f64; 2],
    pub user2: [f64; 2],
    pub relay: [f64; 2],
    pub alpha: f64,
    #[serde(rename = "P")]
    pub power: f64,
}

/// Gain-tying symmetry mode of the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryMode {
    /// All gains from node distances (positions are the cell input).
    EqualPathloss,
    /// `gr1 = g1r`, `gr2 = g2r` fixed; direct gains are the cell input.
    Reciprocity,
    /// `gr1 = gr2`, `g1r = g2r` fixed; direct gains are the cell input.
    UplinkDownlink,
}

/// Fixed relay-side pathloss gains for the gain-pair modes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GainOverrides {
    pub gr1: f64,
    pub g1r: f64,
    pub gr2: f64,
    pub g2r: f64,
}

impl SymmetryMode {
    /// The fixed relay-side gains of the committed gain-pair map recipes.
    pub fn default_overrides(&self) -> GainOverrides {
        match self {
            // reciprocity: both user-1 links at 1, both user-2 links at 2
            SymmetryMode::Reciprocity => GainOverrides {
                gr1: 1.0,
                g1r: 1.0,
                gr2: 2.0,
                g2r: 2.0,
            },
            // uplink-downlink: uplinks at 1, downlinks at 2
            SymmetryMode::UplinkDownlink => GainOverrides {
                gr1: 1.0,
                g1r: 2.0,
                gr2: 1.0,
                g2r: 2.0,
            },
            SymmetryMode::EqualPathloss => GainOverrides {
                gr1: 1.0,
                g1r: 1.0,
                gr2: 1.0,
                g2r: 1.0,
            },
        }
    }
}

/// One classified cell: its input coordinates and the four equality flags.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClassificationCell {
    /// Cell coordinates: relay (x, y) in position mode, `(g12^2, g21^2)`
    /// in gain-pair mode.
    pub x: f64,
    pub y: f64,
    pub same_region_gaussian: bool,
    pub same_sumrate_gaussian: bool,
    pub same_region_fading: bool,
    pub same_sumrate_fading: bool,
    pub undetermined: bool,
}

/// Map configuration: symmetry mode, user positions (position mode), fixed
/// gains (gain-pair modes), pathloss exponent and power.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub mode: SymmetryMode,
    pub alpha: f64,
    #[serde(rename = "P")]
    pub power: f64,
    pub user1: [f64; 2],
    pub user2: [f64; 2],
    pub overrides: Option<GainOverrides>,
}

impl GeometryConfig {
    /// Default relay-placement setup: users at (+-0.5, 0), alpha = 2,
    /// P = 10, equal pathloss.
    pub fn relay_placement_default() -> Self {
        GeometryConfig {
            mode: SymmetryMode::EqualPathloss,
            alpha: 2.0,
            power: 10.0,
            user1: [-0.5, 0.0],
            user2: [0.5, 0.0],
            overrides: None,
        }
    }

    /// Gain-pair setup at P = 10 with the mode's fixed relay gains.
    pub fn gain_pair_default(mode: SymmetryMode) -> Self {
        GeometryConfig {
            mode,
            alpha: 2.0,
            power: 10.0,
            user1: [-0.5, 0.0],
            user2: [0.5, 0.0],
            overrides: Some(mode.default_overrides()),
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

const COINCIDENT: f64 = 1e-9;

/// Distance-derived channels for a node layout: Gaussian gains
/// `d^(-alpha/2)` and the matching fading channel with unit moments.
pub fn layout_to_gains(layout: &NodeLayout) -> Result<(GaussianTwrcChannel, FadingTwrcChannel)> {
    let d12 = dist(layout.user1, layout.user2);
    let d1r = dist(layout.user1, layout.relay);
    let d2r = dist(layout.user2, layout.relay);
    for (name, d) in [("d12", d12), ("d1r", d1r), ("d2r", d2r)] {
        if d < COINCIDENT {
            return Err(Error::Geometry(format!("coincident nodes: {name} = {d}")));
        }
    }
    let g = |d: f64| d.powf(-layout.alpha / 2.0);
    let gaussian = GaussianTwrcChannel::new(
        g(d12),
        g(d1r),
        g(d12),
        g(d2r),
        g(d1r),
        g(d2r),
        layout.power,
    )?;
    let fading = FadingTwrcChannel {
        d12,
        d1r,
        d2r,
        alpha: layout.alpha,
        power: layout.power,
        moments: FadingMoments::default(),
    };
    fading.validate()?;
    Ok((gaussian, fading))
}

/// Channels for a direct-gain pair with the mode's fixed relay gains. The
/// fading channel carries the squared pathloss gains as second moments over
/// unit distances, which gives the same SNR statistics.
pub fn gains_from_pair(
    cfg: &GeometryConfig,
    g12sq: f64,
    g21sq: f64,
) -> Result<(GaussianTwrcChannel, FadingTwrcChannel)> {
    if g12sq < 0.0 || g21sq < 0.0 {
        return Err(Error::Domain("squared gains must be nonnegative".into()));
    }
    let fixed = cfg
        .overrides
        .unwrap_or_else(|| cfg.mode.default_overrides());
    let gaussian = GaussianTwrcChannel::new(
        g12sq.sqrt(),
        fixed.g1r,
        g21sq.sqrt(),
        fixed.g2r,
        fixed.gr1,
        fixed.gr2,
        cfg.power,
    )?;
    let fading = FadingTwrcChannel {
        d12: 1.0,
        d1r: 1.0,
        d2r: 1.0,
        alpha: cfg.alpha,
        power: cfg.power,
        moments: FadingMoments {
            h12: g12sq,
            h21: g21sq,
            h1r: fixed.g1r * fixed.g1r,
            h2r: fixed.g2r * fixed.g2r,
            hr1: fixed.gr1 * fixed.gr1,
            hr2: fixed.gr2 * fixed.gr2,
        },
    };
    fading.validate()?;
    Ok((gaussian, fading))
}

fn channels_for_cell(
    cfg: &GeometryConfig,
    x: f64,
    y: f64,
) -> Result<(GaussianTwrcChannel, FadingTwrcChannel)> {
    match cfg.mode {
        SymmetryMode::EqualPathloss if cfg.overrides.is_none() => layout_to_gains(&NodeLayout {
            user1: cfg.user1,
            user2: cfg.user2,
            relay: [x, y],
            alpha: cfg.alpha,
            power: cfg.power,
        }),
        _ => gains_from_pair(cfg, x, y),
    }
}

/// Classifies one cell. Errors from gain derivation or root finding mark
/// the cell undetermined with all flags false.
pub fn classify(cfg: &GeometryConfig, x: f64, y: f64) -> ClassificationCell {
    let undetermined = ClassificationCell {
        x,
        y,
        same_region_gaussian: false,
        same_sumrate_gaussian: false,
        same_region_fading: false,
        same_sumrate_fading: false,
        undetermined: true,
    };
    let (gauss, fade) = match channels_for_cell(cfg, x, y) {
        Ok(chs) => chs,
        Err(_) => return undetermined,
    };
    let flags = (|| -> Result<(bool, bool, bool, bool)> {
        let srg = crate::gaussian::check_same_region_nnc(&gauss)?;
        let ssg = crate::gaussian::check_same_sumrate(&gauss)?;
        let ft = crate::fading::fading_thresholds(&fade)?;
        let srf = ft.c1bar.max(ft.c2bar) <= ft.e1bar.min(ft.e2bar) + 1e-9;
        let ssf = ft.nbar >= ft.c1bar.max(ft.c2bar) - 1e-9;
        Ok((srg, ssg, srf, ssf))
    })();
    match flags {
        Ok((srg, ssg, srf, ssf)) => ClassificationCell {
            x,
            y,
            same_region_gaussian: srg,
            same_sumrate_gaussian: ssg,
            same_region_fading: srf,
            same_sumrate_fading: ssf,
            undetermined: false,
        },
        Err(_) => undetermined,
    }
}

/// Rectangular cell grid, coordinates `min + i * step` for `i = 0..=n`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub step: f64,
}

impl GridSpec {
    /// Square grid over `[lo, hi]^2`.
    pub fn square(lo: f64, hi: f64, step: f64) -> Self {
        GridSpec {
            xmin: lo,
            xmax: hi,
            ymin: lo,
            ymax: hi,
            step,
        }
    }

    fn axis(min: f64, max: f64, step: f64) -> Vec<f64> {
        let n = ((max - min) / step).round() as usize;
        (0..=n).map(|i| min + i as f64 * step).collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        Self::axis(self.xmin, self.xmax, self.step)
    }

    pub fn ys(&self) -> Vec<f64> {
        Self::axis(self.ymin, self.ymax, self.step)
    }
}

/// Classifies every cell of the grid, row-major over y then x, evaluating
/// cells in parallel with deterministic output ordering.
pub fn sweep(grid: &GridSpec, cfg: &GeometryConfig) -> Vec<ClassificationCell> {
    let mut cells = Vec::new();
    for y in grid.ys() {
        for x in grid.xs() {
            cells.push((x, y));
        }
    }
    crate::exec::map_items(&cells, |&(x, y)| classify(cfg, x, y))
}

/// Map CSV: coordinate pair, the four flags as 0/1, and the undetermined
/// marker. Gain-pair maps label the coordinates `g12sq,g21sq`.
pub fn map_to_csv(cells: &[ClassificationCell], gain_pair: bool) -> String {
    let mut out = String::from(if gain_pair {
        "g12sq,g21sq,same_region_g,same_sumrate_g,same_region_f,same_sumrate_f,undetermined\n"
    } else {
        "x,y,same_region_g,same_sumrate_g,same_region_f,same_sumrate_f,undetermined\n"
    });
    for c in cells {
        out.push_str(&format!(
            "{:.6},{:.6},{},{},{},{},{}\n",
            c.x,
            c.y,
            u8::from(c.same_region_gaussian),
            u8::from(c.same_sumrate_gaussian),
            u8::from(c.same_region_fading),
            u8::from(c.same_sumrate_fading),
            u8::from(c.undetermined),
        ));
    }
    out
}
