//! Flags, the optional JSON configuration document, and their merge into a
//! validated [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use nalgebra::DMatrix;
use restricted_hpd::models::{Family, ModelDescriptor, Noise};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// HPD interval for one data set
    Interval,
    /// Theoretical coverage bounds of a model
    Bounds,
    /// Monte Carlo coverage over a grid of true values
    Coverage,
    /// Numeric check of the skewness condition on the pivot law
    CheckSkew,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Location,
    LocationScale,
    MultivariateLocation,
    MultivariateLocationScale,
    LognormalScale,
    GammaScale,
    ScaleRatio,
    ExponentialLocation,
    SphericalConditional,
}

impl ModelName {
    pub fn label(self) -> String {
        self.to_possible_value().map_or_else(String::new, |v| v.get_name().to_owned())
    }

    fn is_scale(self) -> bool {
        matches!(self, Self::LognormalScale | Self::GammaScale | Self::ScaleRatio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseName {
    Normal,
    Laplace,
    Logistic,
    Cauchy,
    Student,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Human,
}

/// HPD credible intervals for lower-bounded parameters.
#[derive(Debug, Parser)]
#[command(name = "rhpd", version)]
pub struct Args {
    /// What to compute (may instead come from --config)
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON document with any of the fields below; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    /// Credible level is 1 - alpha
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Observations, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub data: Option<Vec<f64>>,
    /// File of observations separated by whitespace or commas
    #[arg(long)]
    pub data_file: Option<PathBuf>,
    /// Lower bound on the parameter of interest
    #[arg(long, allow_hyphen_values = true)]
    pub lower_bound: Option<f64>,
    /// Gamma shape
    #[arg(long)]
    pub r: Option<f64>,
    /// Degrees of freedom; two values for scale-ratio
    #[arg(long, value_delimiter = ',')]
    pub df: Option<Vec<f64>>,
    /// Sample size
    #[arg(long)]
    pub n: Option<usize>,
    /// Lognormal shape delta
    #[arg(long)]
    pub delta_shape: Option<f64>,
    /// Linear-combination weights, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,
    /// Noise or nuisance scale
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Covariance matrix, row-major and comma separated (default identity)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub covariance: Option<Vec<f64>>,
    /// Noise law of the location model
    #[arg(long, value_enum)]
    pub noise: Option<NoiseName>,
    /// Grid of true tau values, start:stop:step
    #[arg(long)]
    pub tau_grid: Option<String>,
    /// Replications per grid point
    #[arg(long)]
    pub reps: Option<usize>,
    /// Random seed (required for coverage)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid resolution for check-skew
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Output file (default stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Configuration document; same fields as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<Command>,
    pub model: Option<ModelName>,
    pub alpha: Option<f64>,
    pub data: Option<Vec<f64>>,
    pub data_file: Option<PathBuf>,
    pub lower_bound: Option<f64>,
    pub r: Option<f64>,
    pub df: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub delta_shape: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub sigma: Option<f64>,
    pub covariance: Option<Vec<f64>>,
    pub noise: Option<NoiseName>,
    pub tau_grid: Option<String>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub resolution: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Validated request.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub model_name: ModelName,
    pub model: ModelDescriptor,
    pub alpha: f64,
    pub data: Option<Vec<f64>>,
    pub tau_grid: Vec<f64>,
    pub reps: usize,
    pub seed: Option<u64>,
    pub resolution: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub const DEFAULT_REPS: usize = 100_000;
pub const DEFAULT_RESOLUTION: usize = 10_000;

fn config<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

/// Parses `start:stop:step` into the grid `start, start + step, …` up to and
/// including `stop`.
pub fn parse_tau_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return config(format!("tau grid must be start:stop:step, got {spec:?}"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("bad number {s:?} in tau grid")))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || !step.is_finite() {
        return config(format!("tau grid needs finite bounds and a positive step, got {spec:?}"));
    }
    if start > stop {
        return config(format!("tau grid {spec:?} is empty"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return config(format!("tau grid {spec:?} has {count} points"));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

fn read_data_file(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Config(format!("{}: not a number: {s:?}", path.display())))
        })
        .collect()
}

struct Merged {
    a: Args,
    f: FileConfig,
}

macro_rules! pick {
    ($m:expr, $field:ident) => {
        $m.a.$field.clone().or_else(|| $m.f.$field.clone())
    };
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let m = Merged { a: args, f: file };

        let command = pick!(m, command).ok_or_else(|| {
            CliError::Config("no command given (interval, bounds, coverage or check-skew)".into())
        })?;
        let model_name = pick!(m, model).ok_or_else(|| CliError::Config("--model is required".into()))?;
        let alpha = pick!(m, alpha).unwrap_or(0.05);

        let data = match (pick!(m, data), pick!(m, data_file)) {
            (Some(_), Some(_)) => return config("give either --data or --data-file, not both"),
            (Some(d), None) => Some(d),
            (None, Some(p)) => Some(read_data_file(&p)?),
            (None, None) => None,
        };
        if command == Command::Interval && data.is_none() {
            return config("interval needs --data or --data-file");
        }

        let needs_bound = matches!(command, Command::Interval | Command::Coverage);
        let lower_bound = match pick!(m, lower_bound) {
            Some(a) => a,
            None if model_name.is_scale() && needs_bound => {
                return config("scale models need an explicit positive --lower-bound")
            }
            // the bound does not enter bounds or check-skew
            None if model_name.is_scale() => 1.0,
            None => 0.0,
        };

        let family = build_family(&m, model_name, data.as_deref())?;
        let model = ModelDescriptor::new(family, lower_bound)?;

        let tau_grid = match (command, pick!(m, tau_grid)) {
            (Command::Coverage, Some(g)) => parse_tau_grid(&g)?,
            (Command::Coverage, None) => return config("coverage needs --tau-grid start:stop:step"),
            _ => Vec::new(),
        };
        let seed = pick!(m, seed);
        if command == Command::Coverage && seed.is_none() {
            return config("coverage needs an explicit --seed");
        }
        let format = pick!(m, format).unwrap_or(match command {
            Command::Coverage => Format::Csv,
            _ => Format::Human,
        });
        let resolution = pick!(m, resolution).unwrap_or(DEFAULT_RESOLUTION);
        if resolution == 0 {
            return config("--resolution must be positive");
        }

        Ok(Self {
            command,
            model_name,
            model,
            alpha,
            data,
            tau_grid,
            reps: pick!(m, reps).unwrap_or(DEFAULT_REPS),
            seed,
            resolution,
            out: pick!(m, out),
            format,
        })
    }
}

fn build_family(m: &Merged, name: ModelName, data: Option<&[f64]>) -> Result<Family, CliError> {
    let sigma = pick!(m, sigma).unwrap_or(1.0);
    let df = pick!(m, df);
    let single_df = |what: &str| -> Result<f64, CliError> {
        match df.as_deref() {
            Some([v]) => Ok(*v),
            Some(_) => config(format!("{what} takes a single --df")),
            None => config(format!("{what} needs --df")),
        }
    };
    // sample size defaults to the number of observations when data are given
    let n = || -> Result<usize, CliError> {
        pick!(m, n)
            .or(data.map(<[f64]>::len))
            .ok_or_else(|| CliError::Config(format!("{} needs --n", name.label())))
    };
    let weights = || pick!(m, weights).ok_or_else(|| CliError::Config("--weights is required".into()));
    Ok(match name {
        ModelName::Location => {
            let noise = match pick!(m, noise).unwrap_or(NoiseName::Normal) {
                NoiseName::Normal => Noise::Normal,
                NoiseName::Laplace => Noise::Laplace,
                NoiseName::Logistic => Noise::Logistic,
                NoiseName::Cauchy => Noise::Cauchy,
                NoiseName::Student => Noise::Student {
                    df: single_df("student noise")?,
                },
            };
            Family::Location { noise, sigma }
        }
        ModelName::LocationScale => Family::LocationScale { n: n()?, sigma },
        ModelName::MultivariateLocation => {
            let weights = weights()?;
            let p = weights.len();
            let covariance = match pick!(m, covariance) {
                Some(c) if c.len() == p * p => DMatrix::from_row_slice(p, p, &c),
                Some(c) => {
                    return config(format!(
                        "covariance has {} entries but {p} weights need {}",
                        c.len(),
                        p * p
                    ))
                }
                None => DMatrix::identity(p, p),
            };
            Family::MultivariateLocation { weights, covariance }
        }
        ModelName::MultivariateLocationScale => Family::MultivariateLocationScale {
            weights: weights()?,
            df: single_df("multivariate-location-scale")?,
            sigma,
        },
        ModelName::LognormalScale => Family::LognormalScale {
            delta: pick!(m, delta_shape)
                .ok_or_else(|| CliError::Config("lognormal-scale needs --delta-shape".into()))?,
        },
        ModelName::GammaScale => Family::GammaScale {
            shape: pick!(m, r).ok_or_else(|| CliError::Config("gamma-scale needs --r".into()))?,
        },
        ModelName::ScaleRatio => match df.as_deref() {
            Some([df1, df2]) => Family::ScaleRatio { df1: *df1, df2: *df2 },
            _ => return config("scale-ratio needs --df df1,df2"),
        },
        ModelName::ExponentialLocation => Family::ExponentialLocation,
        ModelName::SphericalConditional => Family::SphericalConditional {
            d: single_df("spherical-conditional")?,
            n: n()?,
            sigma,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_tau_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_tau_grid("2:2:1").unwrap(), vec![2.0]);
        assert_eq!(parse_tau_grid("0:0.3:0.1").unwrap().len(), 4);
        for bad in ["1:0:0.1", "0:1:0", "0:1:-1", "0:1", "a:1:1", "0:1:nan"] {
            assert!(matches!(parse_tau_grid(bad), Err(CliError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn flags_override_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        std::io::Write::write_all(
            &mut f,
            br#"{"command": "bounds", "model": "gamma-scale", "r": 2.0, "alpha": 0.1}"#,
        )
        .unwrap();
        let args = Args::parse_from(["rhpd", "--config", f.path().to_str().unwrap(), "--r", "3"]);
        let cfg = RunConfig::from_args(args).unwrap();
        assert_eq!(cfg.command, Command::Bounds);
        assert_eq!(cfg.alpha, 0.1);
        assert_eq!(cfg.model.family(), &Family::GammaScale { shape: 3.0 });
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        std::io::Write::write_all(&mut f, br#"{"modle": "location"}"#).unwrap();
        let args = Args::parse_from(["rhpd", "bounds", "--config", f.path().to_str().unwrap()]);
        assert!(matches!(RunConfig::from_args(args), Err(CliError::Config(_))));
    }

    #[test]
    fn coverage_requires_seed_and_grid() {
        let args = Args::parse_from(["rhpd", "coverage", "--model", "location", "--tau-grid", "0:1:0.5"]);
        assert!(matches!(RunConfig::from_args(args), Err(CliError::Config(m)) if m.contains("seed")));
        let args = Args::parse_from(["rhpd", "coverage", "--model", "location", "--seed", "1"]);
        assert!(matches!(RunConfig::from_args(args), Err(CliError::Config(m)) if m.contains("grid")));
    }

    #[test]
    fn sample_size_follows_data() {
        let args = Args::parse_from(["rhpd", "interval", "--model", "location-scale", "--data", "1,2,4"]);
        let cfg = RunConfig::from_args(args).unwrap();
        assert_eq!(cfg.model.family(), &Family::LocationScale { n: 3, sigma: 1.0 });
    }
}
