//! Scenario configuration: a flat TOML document merged with flag
//! overrides, then validated into typed model parameters.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use modgame::extensions::{EpidemicModel, EpidemicParams, IncentiveParams};
use modgame::ModelParams;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Standard,
    Incentives,
    Epidemic,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Standard => "standard",
            ModelKind::Incentives => "incentives",
            ModelKind::Epidemic => "epidemic",
        })
    }
}

/// Flags shared by every subcommand. Any value may instead come from a
/// config file; explicit flags win.
#[derive(Debug, Default, clap::Args)]
pub struct Options {
    /// Scenario config file (flat TOML); flags override file values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Model variant
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Ordinary-user proportion, in (0, 1)
    #[arg(long)]
    pub np: Option<f64>,
    /// Punishment (standard) or incentive scale, > 0
    #[arg(long)]
    pub a: Option<f64>,
    /// Epidemic conversion rate (users becoming moderators)
    #[arg(long)]
    pub beta: Option<f64>,
    /// Epidemic recovery rate (moderators reverting to users)
    #[arg(long)]
    pub rho: Option<f64>,
    /// Epidemic turnover rate
    #[arg(long)]
    pub mu: Option<f64>,
    /// Epidemic inflow rate; defaults to mu (stable population)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Initial cooperating-user fraction
    #[arg(long)]
    pub x0: Option<f64>,
    /// Initial positive-moderator fraction
    #[arg(long)]
    pub z0: Option<f64>,
    /// Integration horizon
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    /// Integration step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Grid resolution per axis
    #[arg(long)]
    pub grid: Option<usize>,
    /// Record every k-th trajectory sample
    #[arg(long)]
    pub stride: Option<usize>,
    /// Output file path
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Also render an SVG (portrait only)
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Sweep range for n_p as min:max:count
    #[arg(long, value_name = "RANGE")]
    pub np_range: Option<String>,
    /// Sweep range for a as min:max:count
    #[arg(long, value_name = "RANGE")]
    pub a_range: Option<String>,
}

/// The config-file side of [`Options`]. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<ModelKind>,
    np: Option<f64>,
    a: Option<f64>,
    beta: Option<f64>,
    rho: Option<f64>,
    mu: Option<f64>,
    lambda: Option<f64>,
    x0: Option<f64>,
    z0: Option<f64>,
    #[serde(rename = "T")]
    t_final: Option<f64>,
    dt: Option<f64>,
    grid: Option<usize>,
    stride: Option<usize>,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    np_range: Option<String>,
    a_range: Option<String>,
}

/// Fully merged scenario values with defaults still unapplied.
#[derive(Debug)]
pub struct Scenario {
    pub model: ModelKind,
    pub np: Option<f64>,
    pub a: Option<f64>,
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub x0: Option<f64>,
    pub z0: Option<f64>,
    pub t_final: f64,
    pub dt: f64,
    pub grid: usize,
    pub stride: usize,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub np_range: Option<String>,
    pub a_range: Option<String>,
}

pub const DEFAULT_T: f64 = 200.0;
pub const DEFAULT_GRID: usize = 21;

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}

impl Scenario {
    /// Loads the config file (if any) and overlays explicit flags.
    pub fn resolve(opts: &Options) -> Result<Self, CliError> {
        let file = match &opts.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let stride = opts.stride.or(file.stride).unwrap_or(1);
        if stride == 0 {
            return Err(CliError::Config("stride must be at least 1".into()));
        }
        Ok(Scenario {
            model: opts.model.or(file.model).unwrap_or(ModelKind::Standard),
            np: opts.np.or(file.np),
            a: opts.a.or(file.a),
            beta: opts.beta.or(file.beta),
            rho: opts.rho.or(file.rho),
            mu: opts.mu.or(file.mu),
            lambda: opts.lambda.or(file.lambda),
            x0: opts.x0.or(file.x0),
            z0: opts.z0.or(file.z0),
            t_final: opts.t_final.or(file.t_final).unwrap_or(DEFAULT_T),
            dt: opts
                .dt
                .or(file.dt)
                .unwrap_or(modgame::integrate::DEFAULT_DT),
            grid: opts.grid.or(file.grid).unwrap_or(DEFAULT_GRID),
            stride,
            out: opts.out.clone().or(file.out),
            svg: opts.svg.clone().or(file.svg),
            np_range: opts.np_range.clone().or(file.np_range),
            a_range: opts.a_range.clone().or(file.a_range),
        })
    }

    fn require(&self, value: Option<f64>, name: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| {
            CliError::Config(format!(
                "missing required parameter `{name}` (flag or config)"
            ))
        })
    }

    pub fn np(&self) -> Result<f64, CliError> {
        self.require(self.np, "np")
    }

    pub fn a(&self) -> Result<f64, CliError> {
        self.require(self.a, "a")
    }

    pub fn standard_params(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(self.np()?, self.a()?).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn incentive_params(&self) -> Result<IncentiveParams, CliError> {
        IncentiveParams::new(self.np()?, self.a()?).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Epidemic rates; missing rates default to zero and a missing inflow
    /// defaults to the turnover rate (stable population).
    pub fn epidemic_rates(&self) -> Result<EpidemicParams, CliError> {
        let beta = self.beta.unwrap_or(0.0);
        let rho = self.rho.unwrap_or(0.0);
        let mu = self.mu.unwrap_or(0.0);
        let lambda = self.lambda.unwrap_or(mu);
        EpidemicParams::new(beta, rho, mu, lambda).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn epidemic_model(&self) -> Result<EpidemicModel, CliError> {
        EpidemicModel::new(self.a()?, self.epidemic_rates()?)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn initial_state(&self) -> Result<(f64, f64), CliError> {
        let x0 = self.require(self.x0, "x0")?;
        let z0 = self.require(self.z0, "z0")?;
        Ok((x0, z0))
    }

    pub fn out_or(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }
}

/// Parses a sweep range written `min:max:count`.
pub fn parse_range(text: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || {
        CliError::Config(format!(
            "invalid {name} range `{text}`; expected min:max:count"
        ))
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].parse().map_err(|_| bad())?;
    let max: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 || max < min {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    Ok((0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0.9:0.9:1", "np").unwrap(), vec![0.9]);
        let r = parse_range("5:11:61", "a").unwrap();
        assert_eq!(r.len(), 61);
        assert_eq!(r[0], 5.0);
        assert_eq!(r[60], 11.0);
        assert!((r[1] - 5.1).abs() < 1e-12);
        assert!(parse_range("5:11", "a").is_err());
        assert!(parse_range("5:4:3", "a").is_err());
        assert!(parse_range("x:4:3", "a").is_err());
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let err = toml::from_str::<FileConfig>("np = 0.9\nwhatever = 1\n").unwrap_err();
        assert!(err.to_string().contains("whatever"));
    }

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join("modgame-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.toml");
        std::fs::write(&path, "np = 0.9\na = 7.0\nmodel = \"standard\"\n").unwrap();
        let opts = Options {
            config: Some(path),
            a: Some(12.0),
            ..Default::default()
        };
        let s = Scenario::resolve(&opts).unwrap();
        assert_eq!(s.np, Some(0.9));
        assert_eq!(s.a, Some(12.0));
        assert_eq!(s.model, ModelKind::Standard);
    }
}
