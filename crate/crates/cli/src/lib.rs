//! Library side of the `rhpd` binary: configuration, the four commands and
//! their output formats.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;

use restricted_hpd::asymmetric::check_skew_condition;
use restricted_hpd::coverage::{estimate_coverage, verify_bounds, CoverageReport, Verdict};
use restricted_hpd::models::ParameterInterval;
use restricted_hpd::{
    BoundDirection, Branch, CoverageBounds, Hpd, HpdError, IntervalSpec, PivotLaw, SkewClass,
};
use serde::Serialize;
use thiserror::Error;

pub use config::{Args, Command, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Hpd(#[from] HpdError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Hpd(e) => match e {
                HpdError::Domain(_) | HpdError::Registration(_) => 2,
                HpdError::Convergence(_) | HpdError::OracleResolution(_) => 3,
                HpdError::DegenerateData(_) | HpdError::DegeneratePosterior(_) => 4,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub model: String,
    pub pivot: String,
    pub alpha: f64,
    pub a1: f64,
    pub a2: f64,
    pub t: f64,
    pub class: SkewClass,
    pub threshold: Option<f64>,
    pub branch: Branch,
    pub hpd: bool,
    pub lower: f64,
    pub upper: f64,
    pub parameter: ParameterInterval,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub model: String,
    pub pivot: String,
    pub alpha: f64,
    pub class: SkewClass,
    /// Set when the symmetric construction applies; the threshold is then d0.
    pub symmetric: bool,
    pub threshold: Option<f64>,
    pub uniform_bound: f64,
    pub direction: BoundDirection,
    pub boundary_value: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkewReport {
    pub model: String,
    pub pivot: String,
    pub resolution: usize,
    pub holds: bool,
    pub worst_z: f64,
    pub worst_margin: f64,
}

#[derive(Debug, Clone)]
pub enum Report {
    Interval(IntervalReport),
    Bounds(BoundsReport),
    Coverage(CoverageReport, Verdict),
    Skew(SkewReport),
}

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = IntervalSpec::new(cfg.alpha)?;
    let model = cfg.model_name.label();
    Ok(match cfg.command {
        Command::Interval => {
            let data = cfg
                .data
                .as_deref()
                .ok_or_else(|| CliError::Config("interval needs data".into()))?;
            let binding = cfg.model.bind(data)?;
            let pivot = binding.pivot.name();
            let hpd = Hpd::new(binding.pivot, spec)?;
            let iv = hpd.interval(binding.pair)?;
            Report::Interval(IntervalReport {
                model,
                pivot,
                alpha: cfg.alpha,
                a1: binding.pair.a1(),
                a2: binding.pair.a2(),
                t: binding.pair.t(),
                class: hpd.class(),
                threshold: hpd.threshold(),
                branch: iv.branch,
                hpd: iv.hpd,
                lower: iv.lower,
                upper: iv.upper,
                parameter: binding.back_transform_interval(&iv),
            })
        }
        Command::Bounds => {
            let law = cfg.model.pivot();
            let pivot = law.name();
            let hpd = Hpd::new(law, spec)?;
            let CoverageBounds {
                uniform_bound,
                direction,
                boundary_value,
                limit,
            } = hpd.bounds();
            Report::Bounds(BoundsReport {
                model,
                pivot,
                alpha: cfg.alpha,
                class: hpd.class(),
                symmetric: matches!(hpd, Hpd::Symmetric(_)),
                threshold: hpd.threshold(),
                uniform_bound,
                direction,
                boundary_value,
                limit,
            })
        }
        Command::Coverage => {
            let seed = cfg
                .seed
                .ok_or_else(|| CliError::Config("coverage needs an explicit --seed".into()))?;
            let report = estimate_coverage(&cfg.model, spec, &cfg.tau_grid, cfg.reps, seed)?;
            let verdict = verify_bounds(&report);
            Report::Coverage(report, verdict)
        }
        Command::CheckSkew => {
            let law = cfg.model.pivot();
            let c = check_skew_condition(&law, cfg.resolution)?;
            Report::Skew(SkewReport {
                model,
                pivot: law.name(),
                resolution: cfg.resolution,
                holds: c.holds,
                worst_z: c.worst_z,
                worst_margin: c.worst_margin,
            })
        }
    })
}

/// Parses, runs and writes; the binary maps the error to an exit code.
pub fn run(args: Args) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(args)?;
    let report = execute(&cfg)?;
    let text = output::render(&report, cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
