//! Scenario files: JSON descriptions of one computation, validated before
//! anything runs. Defaults are filled in at load time and the resolved
//! scenario is echoed into the output manifest for provenance.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use std::path::Path;

use relay_rates::fading::FadingTwrcChannel;
use relay_rates::gaussian::{GaussianTwrcChannel, SweepGrid};
use relay_rates::geometry::{GainOverrides, GridSpec, SymmetryMode};
use relay_rates::info::JointPmf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json")]
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: String,
    pub format: OutputFormat,
}

/// A validated scenario: model tag, model-specific parameters, optional
/// output destination and a seed echoed for provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub model: String,
    pub parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct GaussianParams {
    pub channel: GaussianTwrcChannel,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<String>,
    #[serde(default)]
    pub grid: GridPoints,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct FadingParams {
    pub channel: FadingTwrcChannel,
    #[serde(default = "default_fading_schemes")]
    pub schemes: Vec<String>,
    #[serde(default)]
    pub grid: GridPoints,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
pub struct GridPoints {
    pub points: usize,
}

impl Default for GridPoints {
    fn default() -> Self {
        GridPoints { points: 2000 }
    }
}

impl From<GridPoints> for SweepGrid {
    fn from(g: GridPoints) -> SweepGrid {
        SweepGrid { points: g.points }
    }
}

fn default_schemes() -> Vec<String> {
    vec![
        "cf_original".to_string(),
        "cf_nobinning".to_string(),
        "nnc".to_string(),
    ]
}

fn default_fading_schemes() -> Vec<String> {
    vec!["cf_nobinning".to_string(), "nnc".to_string()]
}

/// Joint pmf plus the channel-model tag it describes.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct DmcParams {
    pub pmf: TaggedPmf,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct TaggedPmf {
    pub model: String,
    pub axes: Vec<(String, usize)>,
    pub probs: Vec<f64>,
}

impl TaggedPmf {
    pub fn to_pmf(&self) -> anyhow::Result<JointPmf> {
        JointPmf::new(self.axes.clone(), self.probs.clone())
            .map_err(|e| anyhow::anyhow!("invalid pmf: {e}"))
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct GeometryParams {
    pub mode: SymmetryMode,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(rename = "P", default = "default_power")]
    pub power: f64,
    #[serde(default = "default_user1")]
    pub user1: [f64; 2],
    #[serde(default = "default_user2")]
    pub user2: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overrides: Option<GainOverrides>,
    pub grid: GridSpec,
}

fn default_alpha() -> f64 {
    2.0
}
fn default_power() -> f64 {
    10.0
}
fn default_user1() -> [f64; 2] {
    [-0.5, 0.0]
}
fn default_user2() -> [f64; 2] {
    [0.5, 0.0]
}

impl Scenario {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read scenario {}", path.display()))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let sc: Scenario = serde_json::from_str(text).context("scenario is not valid JSON")?;
        sc.validate()?;
        Ok(sc)
    }

    /// Schema validation for the declared model; no computation.
    pub fn validate(&self) -> anyhow::Result<()> {
        match self.model.as_str() {
            "gaussian" => {
                let p = self.gaussian()?;
                p.channel
                    .validate()
                    .map_err(|e| anyhow::anyhow!("invalid channel: {e}"))?;
                for s in &p.schemes {
                    s.parse::<relay_rates::region::Scheme>()
                        .map_err(|e| anyhow::anyhow!(e))?;
                }
                if p.grid.points < 2 {
                    bail!("grid.points must be at least 2");
                }
            }
            "fading" => {
                let p = self.fading()?;
                p.channel
                    .validate()
                    .map_err(|e| anyhow::anyhow!("invalid channel: {e}"))?;
                for s in &p.schemes {
                    let scheme = s
                        .parse::<relay_rates::region::Scheme>()
                        .map_err(|e| anyhow::anyhow!(e))?;
                    if scheme == relay_rates::region::Scheme::CfOriginal {
                        bail!("the fading model supports cf_nobinning and nnc only");
                    }
                }
            }
            "oneway-dmc" | "twrc-dmc" => {
                let p = self.dmc()?;
                if p.pmf.model != self.model {
                    bail!(
                        "pmf model tag `{}` does not match scenario model `{}`",
                        p.pmf.model,
                        self.model
                    );
                }
                let pmf = p.pmf.to_pmf()?;
                if self.model == "oneway-dmc" {
                    relay_rates::dmc::OneWayDistribution::from_joint(pmf)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                } else {
                    relay_rates::dmc::TwoWayDistribution::from_joint(pmf)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                }
            }
            "geometry" => {
                let p = self.geometry()?;
                if p.grid.step.is_nan() || p.grid.step <= 0.0 {
                    bail!("grid.step must be positive");
                }
                if p.grid.xmax < p.grid.xmin || p.grid.ymax < p.grid.ymin {
                    bail!("grid extents are inverted");
                }
            }
            other => bail!("unknown model `{other}`"),
        }
        Ok(())
    }

    fn params<T: for<'de> Deserialize<'de>>(&self, what: &str) -> anyhow::Result<T> {
        serde_json::from_value(self.parameters.clone())
            .with_context(|| format!("invalid {what} parameters"))
    }

    pub fn gaussian(&self) -> anyhow::Result<GaussianParams> {
        self.params("gaussian")
    }

    pub fn fading(&self) -> anyhow::Result<FadingParams> {
        self.params("fading")
    }

    pub fn dmc(&self) -> anyhow::Result<DmcParams> {
        self.params("dmc")
    }

    pub fn geometry(&self) -> anyhow::Result<GeometryParams> {
        self.params("geometry")
    }
}
