//! Run configuration and function specifications for the command-line
//! front end. A run is described by one JSON config file of record; flags
//! override individual fields so runs stay reproducible.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::fps::FracPowerSeries;
use crate::specfun::Tolerance;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "IAB_OUT_DIR";

/// Everything a run needs; serialized into every report for reproducibility.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Multiplier selected by name; only "one" ships by default.
    pub multiplier: String,
    pub interval: [f64; 2],
    pub n_points: usize,
    pub tolerance: Tolerance,
    /// Seed for the randomized verification suites.
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 1.0,
            multiplier: "one".into(),
            interval: [0.0, 1.0],
            n_points: 1001,
            tolerance: Tolerance::default(),
            seed: 42,
            out_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::Config(format!(
                "alpha must lie in [0, 1), got {}",
                self.alpha
            )));
        }
        if !self.beta.is_finite() {
            return Err(Error::Config(format!("beta must be finite, got {}", self.beta)));
        }
        if !(self.interval[0] < self.interval[1]) {
            return Err(Error::Config(format!(
                "interval must satisfy a < b, got [{}, {}]",
                self.interval[0], self.interval[1]
            )));
        }
        if self.n_points < 5 {
            return Err(Error::Config(format!(
                "n_points must be at least 5, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    /// Output directory resolution order: explicit config, then the
    /// environment, then the working directory.
    pub fn resolve_out_dir(&self) -> PathBuf {
        if let Some(dir) = &self.out_dir {
            return dir.clone();
        }
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir);
            }
        }
        PathBuf::from(".")
    }
}

/// A test function for `eval`: a constant, a power `t^mu`, or a series.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionSpec {
    Const { value: f64 },
    Power { mu: f64 },
    Fps { alpha: f64, coeffs: Vec<f64> },
}

impl FunctionSpec {
    /// Parse the compact CLI syntax: `const:5`, `power:0.5`, or
    /// `fps:0.5:1,0,2` (base order, then coefficients).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("function spec '{text}': {msg}"));
        let mut parts = text.splitn(2, ':');
        let kind = parts.next().unwrap_or_default();
        let rest = parts.next().ok_or_else(|| bad("missing parameters"))?;
        match kind {
            "const" => {
                let value = rest.parse().map_err(|_| bad("bad constant"))?;
                Ok(Self::Const { value })
            }
            "power" => {
                let mu = rest.parse().map_err(|_| bad("bad exponent"))?;
                Ok(Self::Power { mu })
            }
            "fps" => {
                let mut inner = rest.splitn(2, ':');
                let alpha = inner
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("bad base order"))?;
                let coeffs = inner
                    .next()
                    .ok_or_else(|| bad("missing coefficients"))?
                    .split(',')
                    .map(|c| c.trim().parse().map_err(|_| bad("bad coefficient")))
                    .collect::<Result<Vec<f64>>>()?;
                Ok(Self::Fps { alpha, coeffs })
            }
            other => Err(bad(&format!("unknown kind '{other}'"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Const { value } => {
                if !value.is_finite() {
                    return Err(Error::Config("constant must be finite".into()));
                }
            }
            Self::Power { mu } => {
                if !(*mu >= 0.0) {
                    return Err(Error::Config(format!(
                        "power exponent must be nonnegative, got {mu}"
                    )));
                }
            }
            Self::Fps { alpha, coeffs } => {
                FracPowerSeries::new(*alpha, 0.0, coeffs.clone())?;
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Const { value } => *value,
            Self::Power { mu } => t.powf(*mu),
            Self::Fps { alpha, coeffs } => {
                let u = t.powf(*alpha);
                coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Const { value } => format!("const {value}"),
            Self::Power { mu } => format!("t^{mu}"),
            Self::Fps { alpha, coeffs } => format!("series(alpha={alpha}, {} coeffs)", coeffs.len()),
        }
    }
}

/// Flat JSON form of a solved equation, written by `solve`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SolutionReport {
    pub alpha: f64,
    pub beta: f64,
    pub coeffs: Vec<f64>,
    pub residual_max: f64,
    pub branch: Option<String>,
}
