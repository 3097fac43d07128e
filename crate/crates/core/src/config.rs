//! TOML run configuration. Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::continuation::{linear_grid, SweepOptions};
use crate::diagnostics::DiagnosticsOptions;
use crate::error::{Error, Result};
use crate::nonlinearity::{Nonlinearity, TabulatedNonlinearity};
use crate::radial::SolverOptions;
use crate::spectrum::SpectrumOptions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearitySpec {
    // braces so that stray keys are rejected
    Exponential {},
    ShiftedPower { alpha: f64, p: f64 },
    /// CSV of `t, f(t)` and optionally `f'(t)`; relative paths resolve
    /// against the config file's directory.
    Table { path: PathBuf },
}

impl NonlinearitySpec {
    pub fn build(&self, base: &Path) -> Result<Nonlinearity> {
        match self {
            NonlinearitySpec::Exponential {} => Ok(Nonlinearity::exponential()),
            NonlinearitySpec::ShiftedPower { alpha, p } => Nonlinearity::shifted_power(*alpha, *p),
            NonlinearitySpec::Table { path } => {
                let path = if path.is_relative() {
                    base.join(path)
                } else {
                    path.clone()
                };
                Ok(Nonlinearity::table(TabulatedNonlinearity::from_csv(&path)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
    pub values: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        match (self.min, self.max, self.count, &self.values) {
            (None, None, None, Some(v)) => {
                if v.is_empty() {
                    return Err(Error::Config("sweep.values is empty".into()));
                }
                Ok(v.clone())
            }
            (Some(min), Some(max), Some(count), None) => {
                if count == 0 {
                    return Err(Error::Config("sweep.count must be >= 1".into()));
                }
                if !(min.is_finite() && max.is_finite() && (max > min || count == 1)) {
                    return Err(Error::Config(format!(
                        "sweep range [{min}, {max}] is not a finite increasing interval"
                    )));
                }
                Ok(linear_grid(min, max, count))
            }
            _ => Err(Error::Config(
                "sweep needs either min, max and count, or values".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthSpec {
    pub epsilon: f64,
    /// Discovered by scanning when absent.
    pub t0: Option<f64>,
    pub t_lo: f64,
    pub t_max: f64,
    pub samples: usize,
}

impl Default for GrowthSpec {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            t0: None,
            t_lo: 1e-2,
            t_max: 1e3,
            samples: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    pub nonlinearity: NonlinearitySpec,
    pub sweep: Option<GridSpec>,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub spectrum: SpectrumOptions,
    #[serde(default)]
    pub diagnostics: DiagnosticsOptions,
    #[serde(default)]
    pub growth: GrowthSpec,
    #[serde(default)]
    pub output: OutputSpec,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    /// Parses and validates. Parse errors carry line and column.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::Config(format!(
                "dimension must be >= 2, got {}",
                self.dimension
            )));
        }
        self.solver.validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.spectrum.degeneracy_tol > 0.0 && self.spectrum.residual_tol > 0.0) {
            return Err(Error::Config("spectrum tolerances must be > 0".into()));
        }
        let g = &self.growth;
        if !(g.epsilon > 0.0 && g.t_lo > 0.0 && g.t_max > g.t_lo) {
            return Err(Error::Config(
                "growth needs epsilon > 0 and 0 < t_lo < t_max".into(),
            ));
        }
        if let Some(grid) = &self.sweep {
            grid.values()?;
        }
        Ok(())
    }

    pub fn build_nonlinearity(&self) -> Result<Nonlinearity> {
        self.nonlinearity.build(&self.base_dir)
    }

    pub fn a_grid(&self) -> Result<Vec<f64>> {
        self.sweep
            .as_ref()
            .ok_or_else(|| Error::Config("missing [sweep] section".into()))?
            .values()
    }

    pub fn sweep_options(&self, jobs: Option<usize>) -> SweepOptions {
        SweepOptions {
            solver: self.solver,
            spectrum: self.spectrum,
            diagnostics: self.diagnostics.clone(),
            jobs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
dimension = 3

[nonlinearity]
kind = "exponential"

[sweep]
min = 0.0
max = 30.0
count = 601

[solver]
rk_tol = 1e-11
"#;

    #[test]
    fn parses_basic_config() {
        let cfg = RunConfig::from_toml_str(BASIC).unwrap();
        assert_eq!(cfg.dimension, 3);
        assert_eq!(cfg.nonlinearity, NonlinearitySpec::Exponential {});
        assert_eq!(cfg.solver.rk_tol, 1e-11);
        assert_eq!(cfg.solver.grid_points, SolverOptions::default().grid_points);
        assert_eq!(cfg.a_grid().unwrap().len(), 601);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = BASIC.replace("rk_tol = 1e-11", "rk_tol = 1e-11\nrk_tl = 3");
        assert!(RunConfig::from_toml_str(&bad).is_err());
        let bad = BASIC.replace("kind = \"exponential\"", "kind = \"exponential\"\np = 3");
        assert!(RunConfig::from_toml_str(&bad).is_err());
        let bad = format!("{BASIC}\n[extra]\nx = 1\n");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn low_dimension_is_rejected() {
        let bad = BASIC.replace("dimension = 3", "dimension = 1");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn parse_error_has_location() {
        let err = RunConfig::from_toml_str("dimension = \n").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn explicit_values_and_shifted_power() {
        let text = r#"
dimension = 3
[nonlinearity]
kind = "shifted_power"
alpha = 1.0
p = 7.0
[sweep]
values = [0.5, 1.0, 2.0]
[growth]
epsilon = 1.5
t0 = 8.0
"#;
        let cfg = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.a_grid().unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(cfg.growth.t0, Some(8.0));
        let f = cfg.build_nonlinearity().unwrap();
        assert_eq!(f.f(1.0), 128.0);
    }

    #[test]
    fn mixed_grid_spec_is_rejected() {
        let bad = BASIC.replace("count = 601", "count = 601\nvalues = [1.0]");
        assert!(RunConfig::from_toml_str(&bad).is_err());
        let bad = BASIC.replace("count = 601", "count = 0");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }
}
