//! Experiment configuration files.
//!
//! A configuration is a TOML document. Every physical quantity carries its
//! unit, and is converted to SI on load:
//!
//! ```toml
//! name = "example1-gravity"
//!
//! [surface]
//! kind = "example1"            # example1 | example2 | flat | plane | mesh-file
//!
//! [pressure]
//! kind = "log-well"            # none | log-well | nodal-file
//! strength = { value = 4000.0, unit = "Pa" }
//! center = [{ value = 110.0, unit = "m" }, { value = -10.0, unit = "m" }]
//!
//! [fluid]
//! a = { value = 1307.1, unit = "kg/(m^3 s)" }
//! rho = { value = 100.0, unit = "kg/m^3" }
//! g = { value = 9.81, unit = "m/s^2" }
//! depth = { value = 0.01, unit = "m" }
//! gamma = { value = 0.03, unit = "1" }
//!
//! [mesh]
//! target_elements = 322
//! seed = 1
//!
//! [output]
//! dir = "out/example1-gravity"
//!
//! [times]
//! unit = "s"
//! grid = [0.0, 0.5, 1.0, 2.0]
//! elements = [0, 10, 20]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::darcy::FluidParams;
use crate::error::{Error, Result};
use crate::observables::ExitTimeMean;
use crate::presets::Placement;
use crate::Vec2;

/// Physical dimension of a configured quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Density,
    Acceleration,
    Pressure,
    /// Pressure gradient per unit velocity, kg/(m³·s).
    Resistance,
    Dimensionless,
}

/// Factor converting `unit` to the SI unit of `dim`.
pub fn si_factor(dim: Dimension, unit: &str) -> Result<f64> {
    let u: String = unit.chars().filter(|c| !c.is_whitespace()).collect();
    let f = match (dim, u.as_str()) {
        (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "cm") => 1e-2,
        (Dimension::Length, "mm") => 1e-3,
        (Dimension::Length, "km") => 1e3,
        (Dimension::Time, "s") => 1.0,
        (Dimension::Time, "min") => 60.0,
        (Dimension::Time, "h") => 3600.0,
        (Dimension::Density, "kg/m^3") => 1.0,
        (Dimension::Density, "g/cm^3") => 1e3,
        (Dimension::Acceleration, "m/s^2") => 1.0,
        (Dimension::Acceleration, "cm/s^2") => 1e-2,
        (Dimension::Pressure, "Pa") => 1.0,
        (Dimension::Pressure, "kPa") => 1e3,
        (Dimension::Pressure, "dyn/cm^2") => 0.1,
        (Dimension::Resistance, "kg/(m^3s)") | (Dimension::Resistance, "Pas/m^2") => 1.0,
        (Dimension::Resistance, "g/(cm^3s)") => 1e3,
        (Dimension::Dimensionless, "1") | (Dimension::Dimensionless, "") => 1.0,
        _ => {
            return Err(Error::Config(format!("unit `{unit}` is not a known {dim:?} unit")));
        }
    };
    Ok(f)
}

/// A number with an explicit unit string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Self { value, unit: unit.to_string() }
    }

    /// Value in SI units, checked to be finite.
    pub fn si(&self, dim: Dimension) -> Result<f64> {
        let v = self.value * si_factor(dim, &self.unit)?;
        if !v.is_finite() {
            return Err(Error::Config(format!("non-finite quantity {} {}", self.value, self.unit)));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Example1,
    Example2,
    Flat,
    /// `ζ = s₁ x + s₂ y`.
    Plane { slope: [f64; 2] },
    /// Points, heights and optional connectivity from a mesh file (lengths in m).
    MeshFile { path: PathBuf },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PressureConfig {
    #[default]
    #[serde(rename = "none")]
    Zero,
    LogWell { strength: Quantity, center: [Quantity; 2] },
    /// One value per mesh vertex, whitespace separated.
    NodalFile { path: PathBuf, unit: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FluidConfig {
    pub a: Quantity,
    pub rho: Quantity,
    pub g: Quantity,
    pub depth: Quantity,
    pub gamma: Quantity,
}

impl Default for FluidConfig {
    fn default() -> Self {
        let p = FluidParams::default();
        Self {
            a: Quantity::new(p.a, "kg/(m^3 s)"),
            rho: Quantity::new(p.rho, "kg/m^3"),
            g: Quantity::new(p.g, "m/s^2"),
            depth: Quantity::new(p.depth, "m"),
            gamma: Quantity::new(p.gamma, "1"),
        }
    }
}

impl FluidConfig {
    pub fn to_params(&self) -> Result<FluidParams> {
        let params = FluidParams {
            a: self.a.si(Dimension::Resistance)?,
            rho: self.rho.si(Dimension::Density)?,
            g: self.g.si(Dimension::Acceleration)?,
            depth: self.depth.si(Dimension::Length)?,
            gamma: self.gamma.si(Dimension::Dimensionless)?,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    /// Minimum number of triangles of the generated mesh.
    pub target_elements: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub placement: Placement,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { target_elements: 322, seed: Some(1), placement: Placement::Random }
    }
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    #[serde(default = "yes")]
    pub vtk: bool,
    /// `v.csv`, `u.csv` and `p0.csv`.
    #[serde(default = "yes")]
    pub fields: bool,
    #[serde(default = "yes")]
    pub psi: bool,
    #[serde(default = "yes")]
    pub phi: bool,
    #[serde(default = "yes")]
    pub report: bool,
    /// Characterizing matrix in Matrix Market format.
    #[serde(default)]
    pub matrix: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            vtk: true,
            fields: true,
            psi: true,
            phi: true,
            report: true,
            matrix: false,
        }
    }
}

fn seconds() -> String {
    "s".into()
}

/// Survival-curve export. An empty grid means 41 equally spaced times up to
/// four times the mean finite exit time; no elements means five spread
/// evenly over the mesh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimesConfig {
    #[serde(default = "seconds")]
    pub unit: String,
    #[serde(default)]
    pub grid: Vec<f64>,
    #[serde(default)]
    pub elements: Vec<usize>,
}

impl Default for TimesConfig {
    fn default() -> Self {
        Self { unit: seconds(), grid: Vec::new(), elements: Vec::new() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    #[serde(default)]
    pub exit_time_mean: ExitTimeMean,
}

/// A complete experiment: surface, forcing, fluid, mesh and outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub pressure: PressureConfig,
    #[serde(default)]
    pub fluid: FluidConfig,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub times: TimesConfig,
    #[serde(default)]
    pub report: ReportConfig,
}

/// The two reference experiments on the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceExample {
    /// `0.8 (sin 2πx e^{−2πy} + y)`, 322 elements, well at (110, −10).
    Ridge,
    /// `0.5 x sin 2πx + 0.5 x + 0.075 sin 6πy`, 1046 elements, well at (110, 110).
    Ripple,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a configuration file; relative paths inside it are taken
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let Some(base) = path.parent() {
            cfg.resolve_paths(base);
        }
        Ok(cfg)
    }

    /// Makes every relative path absolute with respect to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let SurfaceConfig::MeshFile { path } = &mut self.surface {
            fix(path);
        }
        if let PressureConfig::NodalFile { path, .. } = &mut self.pressure {
            fix(path);
        }
        fix(&mut self.output.dir);
    }

    /// Checks everything that can be checked without building the mesh.
    pub fn validate(&self) -> Result<()> {
        self.fluid.to_params()?;
        let generated = !matches!(self.surface, SurfaceConfig::MeshFile { .. });
        if generated {
            if self.mesh.target_elements < 1 {
                return Err(Error::Config("mesh.target_elements must be at least 1".into()));
            }
            if self.mesh.placement == Placement::Random && self.mesh.seed.is_none() {
                return Err(Error::Config("random mesh placement requires mesh.seed".into()));
            }
        }
        if let SurfaceConfig::Plane { slope } = &self.surface {
            if !slope.iter().all(|s| s.is_finite()) {
                return Err(Error::Config("plane slope must be finite".into()));
            }
        }
        match &self.pressure {
            PressureConfig::Zero => {}
            PressureConfig::LogWell { strength, .. } => {
                strength.si(Dimension::Pressure)?;
                self.well_center()?;
            }
            PressureConfig::NodalFile { unit, .. } => {
                si_factor(Dimension::Pressure, unit)?;
            }
        }
        si_factor(Dimension::Time, &self.times.unit)?;
        if self.times.grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::Config("times.grid must hold finite non-negative times".into()));
        }
        Ok(())
    }

    /// Well centre in metres, when a log-well is configured.
    pub fn well_center(&self) -> Result<Option<Vec2>> {
        match &self.pressure {
            PressureConfig::LogWell { center, .. } => Ok(Some(Vec2::new(
                center[0].si(Dimension::Length)?,
                center[1].si(Dimension::Length)?,
            ))),
            _ => Ok(None),
        }
    }

    /// Time grid for the survival curves, in seconds.
    pub fn time_grid_si(&self) -> Result<Vec<f64>> {
        let f = si_factor(Dimension::Time, &self.times.unit)?;
        Ok(self.times.grid.iter().map(|t| t * f).collect())
    }

    /// One of the reference experiments with its published parameters.
    pub fn reference_example(which: ReferenceExample, well: bool, seed: u64) -> Self {
        let (name, surface, target, center) = match which {
            ReferenceExample::Ridge => ("example1", SurfaceConfig::Example1, 322, (110.0, -10.0)),
            ReferenceExample::Ripple => ("example2", SurfaceConfig::Example2, 1046, (110.0, 110.0)),
        };
        let pressure = if well {
            PressureConfig::LogWell {
                strength: Quantity::new(4000.0, "Pa"),
                center: [Quantity::new(center.0, "m"), Quantity::new(center.1, "m")],
            }
        } else {
            PressureConfig::Zero
        };
        let name = format!("{name}-{}", if well { "well" } else { "gravity" });
        Self {
            output: OutputConfig { dir: PathBuf::from("out").join(&name), ..Default::default() },
            name,
            surface,
            pressure,
            fluid: FluidConfig::default(),
            mesh: MeshConfig { target_elements: target, seed: Some(seed), placement: Placement::Random },
            times: TimesConfig::default(),
            report: ReportConfig::default(),
        }
    }
}
