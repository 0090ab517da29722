//! Command-line front end: scheme evaluation on joint pmfs, Gaussian and
//! fading region sweeps, sum rates with an optional search-oracle
//! cross-check, classification maps, and the committed figure recipes.
//!
//! Exit codes: 0 success, 2 validation error (machine-readable JSON on
//! stderr), 3 numerical convergence failure.

mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use relay_rates::dmc;
use relay_rates::fading;
use relay_rates::gaussian;
use relay_rates::geometry;
use relay_rates::region::{RegionBoundary, Scheme};

use scenario::{OutputFormat, Scenario};

#[derive(Parser)]
#[command(name = "relay-rates", version, about = "Compress-forward relay rate regions")]
struct Cli {
    /// Check the scenario schema and exit without computing.
    #[arg(long, global = true)]
    validate_only: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discrete-memoryless channel schemes on an explicit joint pmf.
    Dmc {
        #[command(subcommand)]
        cmd: DmcCmd,
    },
    /// Gaussian two-way relay channel.
    Gaussian {
        #[command(subcommand)]
        cmd: GaussianCmd,
    },
    /// Rayleigh-fading two-way relay channel.
    Fading {
        #[command(subcommand)]
        cmd: FadingCmd,
    },
    /// Relay-placement and gain-pair classification maps.
    Geometry {
        #[command(subcommand)]
        cmd: GeometryCmd,
    },
    /// Emit a committed figure dataset.
    Reproduce {
        target: ReproduceTarget,
        /// Directory the dataset (and its manifest) is written into.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum DmcCmd {
    /// Evaluate every scheme of the tagged model on the scenario's pmf.
    Eval {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Subcommand)]
enum GaussianCmd {
    /// Sweep the requested schemes' Pareto frontiers.
    Region {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Closed-form optimal sigma^2 and sum rates.
    Sumrate {
        #[arg(long)]
        scenario: PathBuf,
        /// Also run the independent grid/golden-section oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Region and sum-rate equality conditions.
    Check {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Subcommand)]
enum FadingCmd {
    Region {
        #[arg(long)]
        scenario: PathBuf,
    },
    Sumrate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    Check {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Subcommand)]
enum GeometryCmd {
    /// Classify a grid of relay positions or gain pairs.
    Map {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReproduceTarget {
    Fig3,
    Fig4,
    Sumrate,
    Fig5,
    Fig6,
    Fig7,
}

enum AppError {
    Validation(String),
    Convergence(String),
    Other(String),
}

impl AppError {
    fn kind(&self) -> &'static str {
        match self {
            AppError::Validation(_) => "validation",
            AppError::Convergence(_) => "convergence",
            AppError::Other(_) => "error",
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Validation(m) | AppError::Convergence(m) | AppError::Other(m) => m,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            AppError::Validation(_) => 2,
            AppError::Convergence(_) => 3,
            AppError::Other(_) => 1,
        }
    }
}

impl From<anyhow::Error> for AppError {
    fn from(e: anyhow::Error) -> Self {
        AppError::Validation(format!("{e:#}"))
    }
}

impl From<relay_rates::Error> for AppError {
    fn from(e: relay_rates::Error) -> Self {
        match e {
            relay_rates::Error::Convergence { .. } => AppError::Convergence(e.to_string()),
            _ => AppError::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    relay_rates::configure_threads(None);
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.message()}));
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    match &cli.cmd {
        Command::Dmc {
            cmd: DmcCmd::Eval { scenario },
        } => {
            let sc = Scenario::load(scenario)?;
            sc.validate()?;
            if !matches!(sc.model.as_str(), "oneway-dmc" | "twrc-dmc") {
                return Err(AppError::Validation(format!(
                    "dmc eval needs an oneway-dmc or twrc-dmc scenario, got `{}`",
                    sc.model
                )));
            }
            if cli.validate_only {
                return Ok(());
            }
            let result = dmc_eval(&sc)?;
            emit_json(&sc, "dmc eval", &result)
        }
        Command::Gaussian { cmd } => match cmd {
            GaussianCmd::Region { scenario } => {
                let sc = load_model(scenario, "gaussian")?;
                if cli.validate_only {
                    return Ok(());
                }
                let p = sc.gaussian()?;
                let boundaries = sweep_boundaries(&p.schemes, |scheme| {
                    gaussian::region(&p.channel, scheme, &p.grid.into())
                })?;
                emit_boundaries(&sc, "gaussian region", &boundaries)
            }
            GaussianCmd::Sumrate { scenario, oracle } => {
                let sc = load_model(scenario, "gaussian")?;
                if cli.validate_only {
                    return Ok(());
                }
                let p = sc.gaussian()?;
                let (sigma_n, nnc) = gaussian::optimal_sigma_nnc(&p.channel)?;
                let cfnb = gaussian::sumrate_cf_nobinning(&p.channel)?;
                let mut out = json!({
                    "sigma_n": sigma_n,
                    "sum_rate_nnc": nnc,
                    "sum_rate_cf_nobinning": cfnb,
                });
                if *oracle {
                    let reference = gaussian::oracle::nnc_sumrate_search(&p.channel, 1e-7)?;
                    out["oracle_nnc"] = json!(reference);
                    out["oracle_abs_diff"] = json!((reference - nnc).abs());
                }
                emit_json(&sc, "gaussian sumrate", &out)
            }
            GaussianCmd::Check { scenario } => {
                let sc = load_model(scenario, "gaussian")?;
                if cli.validate_only {
                    return Ok(());
                }
                let p = sc.gaussian()?;
                let out = json!({
                    "thm8": gaussian::check_same_region_original(&p.channel)?,
                    "thm9": gaussian::check_same_region_nnc(&p.channel)?,
                    "thm10": gaussian::check_same_sumrate(&p.channel)?,
                });
                emit_json(&sc, "gaussian check", &out)
            }
        },
        Command::Fading { cmd } => match cmd {
            FadingCmd::Region { scenario } => {
                let sc = load_model(scenario, "fading")?;
                if cli.validate_only {
                    return Ok(());
                }
                let p = sc.fading()?;
                let boundaries = sweep_boundaries(&p.schemes, |scheme| {
                    fading::fading_region(&p.channel, scheme, &p.grid.into())
                })?;
                emit_boundaries(&sc, "fading region", &boundaries)
            }
            FadingCmd::Sumrate { scenario, oracle } => {
                let sc = load_model(scenario, "fading")?;
                if cli.validate_only {
                    return Ok(());
                }
                let p = sc.fading()?;
                let (sigma_n, nnc) = fading::fading_optimal_sigma_nnc(&p.channel)?;
                let lower = fading::fading_sigma2_lower_bound(&p.channel, Scheme::CfNobinning)?;
                let cfnb = fading::oracle::constrained_sumrate_search(&p.channel, lower, 1e-7)?;
                let mut out = json!({
                    "sigma_n": sigma_n,
                    "sum_rate_nnc": nnc,
                    "sum_rate_cf_nobinning": cfnb,
                });
                if *oracle {
                    let reference = fading::oracle::nnc_sumrate_search(&p.channel, 1e-7)?;
                    out["oracle_nnc"] = json!(reference);
                    out["oracle_abs_diff"] = json!((reference - nnc).abs());
                }
                emit_json(&sc, "fading sumrate", &out)
            }
            FadingCmd::Check { scenario } => {
                let sc = load_model(scenario, "fading")?;
                if cli.validate_only {
                    return Ok(());
                }
                let p = sc.fading()?;
                let out = json!({
                    "cor8": fading::fading_check_same_region(&p.channel)?,
                    "thm12": fading::fading_check_same_sumrate(&p.channel)?,
                });
                emit_json(&sc, "fading check", &out)
            }
        },
        Command::Geometry {
            cmd: GeometryCmd::Map { scenario },
        } => {
            let sc = load_model(scenario, "geometry")?;
            if cli.validate_only {
                return Ok(());
            }
            geometry_map(&sc)
        }
        Command::Reproduce { target, out_dir } => {
            if cli.validate_only {
                let _ = embedded_scenario(*target)?;
                return Ok(());
            }
            reproduce(*target, out_dir)
        }
    }
}

fn load_model(path: &Path, model: &str) -> Result<Scenario, AppError> {
    let sc = Scenario::load(path)?;
    if sc.model != model {
        return Err(AppError::Validation(format!(
            "scenario model `{}` does not match subcommand `{model}`",
            sc.model
        )));
    }
    Ok(sc)
}

fn sweep_boundaries(
    schemes: &[String],
    mut f: impl FnMut(Scheme) -> relay_rates::Result<RegionBoundary>,
) -> Result<Vec<RegionBoundary>, AppError> {
    let mut boundaries = Vec::new();
    for name in schemes {
        let scheme: Scheme = name.parse().map_err(AppError::Validation)?;
        boundaries.push(f(scheme)?);
    }
    Ok(boundaries)
}

fn dmc_eval(sc: &Scenario) -> Result<serde_json::Value, AppError> {
    let p = sc.dmc()?;
    let pmf = p.pmf.to_pmf()?;
    match sc.model.as_str() {
        "oneway-dmc" => {
            let d = dmc::OneWayDistribution::from_joint(pmf)?;
            Ok(json!({
                "model": "oneway-dmc",
                "schemes": [
                    record("cf_nobinning", &dmc::oneway_cf_nobinning(&d)?),
                    record("cf_original", &dmc::oneway_cf_original(&d)?),
                ],
            }))
        }
        "twrc-dmc" => {
            let d = dmc::TwoWayDistribution::from_joint(pmf)?;
            let (strict, relaxed) = dmc::twrc_simultaneous_bounds(&d)?;
            Ok(json!({
                "model": "twrc-dmc",
                "schemes": [
                    record("cf_nobinning", &dmc::twrc_cf_nobinning(&d)?),
                    record("cf_original", &dmc::twrc_cf_original(&d)?),
                    record("nnc", &dmc::twrc_nnc(&d)?),
                    record("relaxed_norepeat", &dmc::twrc_relaxed_norepeat(&d)?),
                    record("relaxed_repeat2", &dmc::twrc_relaxed_repeat2(&d)?),
                ],
                "simultaneous_r2_bounds": [strict, relaxed],
                "theorem6_equalities": dmc::theorem6_necessary_condition(&d)?,
            }))
        }
        other => Err(AppError::Validation(format!("unknown model `{other}`"))),
    }
}

fn record(name: &str, rates: &dmc::SchemeRates) -> serde_json::Value {
    let mut v = serde_json::to_value(rates).expect("serializable");
    v["scheme"] = json!(name);
    v
}

fn geometry_map(sc: &Scenario) -> Result<(), AppError> {
    let p = sc.geometry()?;
    let cfg = geometry::GeometryConfig {
        mode: p.mode,
        alpha: p.alpha,
        power: p.power,
        user1: p.user1,
        user2: p.user2,
        overrides: p.overrides,
    };
    let cells = geometry::sweep(&p.grid, &cfg);
    let gain_pair = p.mode != geometry::SymmetryMode::EqualPathloss || p.overrides.is_some();
    match output_format(sc) {
        OutputFormat::Csv => emit_text(sc, "geometry map", geometry::map_to_csv(&cells, gain_pair)),
        OutputFormat::Json => emit_json(sc, "geometry map", &serde_json::to_value(&cells).unwrap()),
    }
}

fn output_format(sc: &Scenario) -> OutputFormat {
    sc.output.as_ref().map_or(OutputFormat::Csv, |o| o.format)
}

fn emit_boundaries(
    sc: &Scenario,
    command: &str,
    boundaries: &[RegionBoundary],
) -> Result<(), AppError> {
    match output_format(sc) {
        OutputFormat::Csv => {
            let mut csv = String::from("sigma2,R1,R2,scheme\n");
            for b in boundaries {
                csv.push_str(b.to_csv().split_once('\n').map(|x| x.1).unwrap_or(""));
            }
            emit_text(sc, command, csv)
        }
        OutputFormat::Json => emit_json(sc, command, &serde_json::to_value(boundaries).unwrap()),
    }
}

fn emit_json(sc: &Scenario, command: &str, value: &serde_json::Value) -> Result<(), AppError> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    emit_text(sc, command, text)
}

fn emit_text(sc: &Scenario, command: &str, text: String) -> Result<(), AppError> {
    match &sc.output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(out) => {
            write_file(Path::new(&out.path), &text)?;
            let manifest = json!({
                "command": command,
                "scenario": sc,
                "output": out.path,
            });
            let manifest_path = format!("{}.manifest.json", out.path);
            write_file(
                Path::new(&manifest_path),
                &(serde_json::to_string_pretty(&manifest).unwrap() + "\n"),
            )
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), AppError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| AppError::Other(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, text)
        .map_err(|e| AppError::Other(format!("cannot write {}: {e}", path.display())))
}

fn embedded_scenario(target: ReproduceTarget) -> Result<Scenario, AppError> {
    let text = match target {
        ReproduceTarget::Fig3 => include_str!("../scenarios/fig3.json"),
        ReproduceTarget::Fig4 => include_str!("../scenarios/fig4.json"),
        ReproduceTarget::Sumrate => include_str!("../scenarios/sumrate.json"),
        ReproduceTarget::Fig5 => include_str!("../scenarios/fig5.json"),
        ReproduceTarget::Fig6 => include_str!("../scenarios/fig6.json"),
        ReproduceTarget::Fig7 => include_str!("../scenarios/fig7.json"),
    };
    Ok(Scenario::from_json(text)?)
}

fn reproduce(target: ReproduceTarget, out_dir: &Path) -> Result<(), AppError> {
    let mut sc = embedded_scenario(target)?;
    if let Some(out) = &mut sc.output {
        out.path = out_dir.join(&out.path).to_string_lossy().into_owned();
    }
    match target {
        ReproduceTarget::Fig3 | ReproduceTarget::Fig4 => {
            let p = sc.gaussian()?;
            let boundaries = sweep_boundaries(&p.schemes, |scheme| {
                gaussian::region(&p.channel, scheme, &p.grid.into())
            })?;
            emit_boundaries(&sc, "reproduce", &boundaries)
        }
        ReproduceTarget::Sumrate => {
            // sum rates of the three schemes over P in [1, 100], 20 points
            let p = sc.gaussian()?;
            let mut csv = String::from("P,cf_original,cf_nobinning,nnc\n");
            for i in 0..20 {
                let power = 1.0 + 99.0 * i as f64 / 19.0;
                let mut ch = p.channel;
                ch.power = power;
                let t = gaussian::thresholds(&ch)?;
                let rt = gaussian::rate_tuple(&ch, t.r)?;
                let ori = rt.r11.max(0.0) + rt.r21.max(0.0);
                let cfnb = gaussian::sumrate_cf_nobinning(&ch)?;
                let (_, nnc) = gaussian::optimal_sigma_nnc(&ch)?;
                csv.push_str(&format!("{power:.11e},{ori:.11e},{cfnb:.11e},{nnc:.11e}\n"));
            }
            emit_text(&sc, "reproduce", csv)
        }
        ReproduceTarget::Fig5 | ReproduceTarget::Fig6 | ReproduceTarget::Fig7 => geometry_map(&sc),
    }
}
