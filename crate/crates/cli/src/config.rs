//! Declarative TOML run configuration.
//!
//! ```toml
//! [model]
//! system = "qubit"          # or "oscillator"
//! statistics = "bosonic"    # or "fermionic"
//! temperature = 0.5         # k_BT in units of omega0 (or beta = ...)
//! kappa0 = 2.0
//! omega_c = 5.0
//! sinc = 0.628              # or delta_t = ..., or coarse_graining = "secular" | "redfield"
//!
//! [[series]]                # optional; each entry overrides [model] fields
//! label = "sa"
//! sinc = 0.0
//!
//! [times]
//! stop = 10.0
//! points = 400
//!
//! [output]
//! path = "out_{label}.csv"
//! ```

use std::path::PathBuf;

use psa_core::bath::Statistics;
use psa_core::dipole::{DipoleModel, SystemKind};
use psa_core::generator::{CoarseGraining, DeltaT};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_TIME_POINTS: usize = 400;
pub const DEFAULT_LEVELS: usize = 30;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: toml::Table,
    #[serde(default)]
    pub series: Vec<toml::Table>,
    pub sweep: Option<SweepConfig>,
    pub times: Option<GridConfig>,
    pub synthetic: Option<SyntheticConfig>,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default = "default_system")]
    pub system: SystemKind,
    #[serde(default = "default_statistics")]
    pub statistics: Statistics,
    #[serde(default = "one")]
    pub omega0: f64,
    pub temperature: Option<f64>,
    pub beta: Option<f64>,
    pub kappa0: f64,
    pub omega_c: f64,
    pub n_max: Option<usize>,
    pub sinc: Option<f64>,
    pub delta_t: Option<f64>,
    pub coarse_graining: Option<String>,
    pub integration_cutoff: Option<f64>,
}

fn default_system() -> SystemKind {
    SystemKind::Qubit
}

fn default_statistics() -> Statistics {
    Statistics::Bosonic
}

fn one() -> f64 {
    1.0
}

/// Either explicit `values` or `points` samples from `start` to `stop`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// `temperature` (k_BT) or `beta`
    pub parameter: String,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
}

/// Random Ω set on given gaps, for `certify` without a physical model.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticConfig {
    pub gaps: Vec<f64>,
    #[serde(default = "one_usize")]
    pub channels: usize,
    #[serde(default)]
    pub seed: u64,
    pub delta_t: Option<f64>,
    pub sinc: Option<f64>,
    pub coarse_graining: Option<String>,
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// cross-check against the independent solution (qubit closed form,
    /// oscillator density-matrix evolution)
    #[serde(default = "yes")]
    pub verify: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self { verify: true }
    }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// may contain `{label}` to separate series
    pub path: Option<PathBuf>,
}

/// One resolved run of a command.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub model: ModelConfig,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| invalid(format!("config: {e}")))
    }

    /// The `[model]` block merged with each `[[series]]` entry.
    pub fn series(&self) -> Result<Vec<Series>, CliError> {
        if self.series.is_empty() {
            return Ok(vec![Series {
                label: String::new(),
                model: model_from(self.model.clone())?,
            }]);
        }
        let mut out = Vec::with_capacity(self.series.len());
        for (k, overrides) in self.series.iter().enumerate() {
            let mut table = self.model.clone();
            let mut label = format!("{k}");
            for (key, value) in overrides {
                if key == "label" {
                    label = value
                        .as_str()
                        .ok_or_else(|| invalid(format!("series[{k}].label must be a string")))?
                        .to_string();
                } else {
                    table.insert(key.clone(), value.clone());
                }
            }
            if out.iter().any(|s: &Series| s.label == label) {
                return Err(invalid(format!("duplicate series label '{label}'")));
            }
            let model = model_from(table).map_err(|e| invalid(format!("series '{label}': {e}")))?;
            out.push(Series { label, model });
        }
        Ok(out)
    }

    pub fn time_grid(&self, default_stop: f64) -> Result<Vec<f64>, CliError> {
        match &self.times {
            None => resolve_grid("times", None, Some(0.0), Some(default_stop), Some(DEFAULT_TIME_POINTS)),
            Some(g) => resolve_grid(
                "times",
                g.values.clone(),
                Some(g.start.unwrap_or(0.0)),
                g.stop.or(Some(default_stop)),
                Some(g.points.unwrap_or(DEFAULT_TIME_POINTS)),
            ),
        }
    }
}

fn model_from(table: toml::Table) -> Result<ModelConfig, CliError> {
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| invalid(format!("model: {}", e.message())))
}

/// Validate a grid: nonempty, finite, strictly increasing.
pub fn resolve_grid(
    what: &str,
    values: Option<Vec<f64>>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
) -> Result<Vec<f64>, CliError> {
    let grid = match values {
        Some(v) => v,
        None => {
            let (start, stop, points) = match (start, stop, points) {
                (Some(a), Some(b), Some(n)) => (a, b, n),
                _ => return Err(invalid(format!("{what}: give `values` or `start`, `stop` and `points`"))),
            };
            match points {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect(),
            }
        }
    };
    if grid.is_empty() {
        return Err(invalid(format!("{what}: grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(invalid(format!("{what}: grid values must be finite")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("{what}: grid must be strictly increasing")));
    }
    Ok(grid)
}

pub fn coarse_graining(
    sinc: Option<f64>,
    delta_t: Option<f64>,
    named: Option<&str>,
) -> Result<CoarseGraining, CliError> {
    match (sinc, delta_t, named) {
        (None, None, None) => Ok(CoarseGraining::secular()),
        (Some(s), None, None) => Ok(CoarseGraining::Sinc(s)),
        (None, Some(dt), None) => Ok(CoarseGraining::Time(DeltaT::new(dt)?)),
        (None, None, Some("secular")) => Ok(CoarseGraining::secular()),
        (None, None, Some("redfield")) => Ok(CoarseGraining::redfield()),
        (None, None, Some(other)) => Err(invalid(format!(
            "coarse_graining '{other}' is not one of secular, redfield"
        ))),
        _ => Err(invalid("set at most one of sinc, delta_t, coarse_graining")),
    }
}

impl ModelConfig {
    /// β from `beta` or `temperature`; `None` if neither is set.
    pub fn beta(&self) -> Result<Option<f64>, CliError> {
        match (self.beta, self.temperature) {
            (Some(_), Some(_)) => Err(invalid("set only one of beta and temperature")),
            (Some(b), None) => Ok(Some(b)),
            (None, Some(t)) if t >= 0.0 => Ok(Some(if t == 0.0 { f64::INFINITY } else { 1.0 / t })),
            (None, Some(t)) => Err(invalid(format!("temperature {t} must be >= 0"))),
            (None, None) => Ok(None),
        }
    }

    pub fn dipole(&self, beta: Option<f64>) -> Result<DipoleModel, CliError> {
        let beta = match beta {
            Some(b) => b,
            None => self
                .beta()?
                .ok_or_else(|| invalid("model needs beta or temperature"))?,
        };
        let base = match self.system {
            SystemKind::Qubit => DipoleModel::qubit(self.statistics, self.omega0, beta, self.kappa0, self.omega_c)?,
            SystemKind::Oscillator => DipoleModel::oscillator(
                self.statistics,
                self.omega0,
                beta,
                self.kappa0,
                self.omega_c,
                self.n_max.unwrap_or(DEFAULT_LEVELS),
            )?,
        };
        let mut model = base.with_coarse_graining(coarse_graining(
            self.sinc,
            self.delta_t,
            self.coarse_graining.as_deref(),
        )?);
        model.integration_cutoff = self.integration_cutoff;
        Ok(model.validated()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        [model]
        temperature = 0.5
        kappa0 = 2.0
        omega_c = 5.0
    "#;

    #[test]
    fn series_override_model_fields() {
        let text = format!("{BASE}\n[[series]]\nlabel = \"sa\"\nsinc = 0.0\n[[series]]\nlabel = \"red\"\ncoarse_graining = \"redfield\"\n");
        let cfg = RunConfig::parse(&text).unwrap();
        let series = cfg.series().unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].label, "sa");
        let red = series[1].model.dipole(None).unwrap();
        assert_eq!(red.coarse_graining, CoarseGraining::redfield());
        assert_eq!(red.beta, 2.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("[model]\nkappa0 = 1.0\nomega_c = 5.0\nbogus = 1\n")
            .unwrap()
            .series()
            .is_err());
        let both = format!("{BASE}sinc = 0.5\ndelta_t = 1.0\n");
        assert!(RunConfig::parse(&both).unwrap().series().unwrap()[0].model.dipole(None).is_err());
        let dup = format!("{BASE}[[series]]\nlabel = \"a\"\n[[series]]\nlabel = \"a\"\n");
        assert!(RunConfig::parse(&dup).unwrap().series().is_err());
    }

    #[test]
    fn grids_must_increase() {
        assert_eq!(resolve_grid("g", None, Some(0.0), Some(1.0), Some(3)).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(resolve_grid("g", Some(vec![1.0, 1.0]), None, None, None).is_err());
        assert!(resolve_grid("g", Some(vec![]), None, None, None).is_err());
        assert!(resolve_grid("g", None, Some(0.0), None, Some(3)).is_err());
    }

    #[test]
    fn default_time_grid() {
        let cfg = RunConfig::parse(BASE).unwrap();
        let t = cfg.time_grid(10.0).unwrap();
        assert_eq!(t.len(), DEFAULT_TIME_POINTS);
        assert_eq!((t[0], t[t.len() - 1]), (0.0, 10.0));
    }
}
