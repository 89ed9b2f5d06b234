//! Run options shared by the command line and TOML config files.
//!
//! Every field is optional. [`RunOptions::or`] layers two sources, the
//! receiver winning, and the `resolve_*` methods fill in defaults.
//!
//! ```toml
//! theta = "3pi/8"
//! omega = 0.2
//! direction = "x"
//! spin = "one"
//! steps = 50
//! half-width = 25
//! boundary = "bounded"
//! grid = "0:pi:629"
//! ```

use std::path::Path;

use magwalk_core::{FieldSpec, LatticeSpec, LinearGrid, PhysicalConstants, SphereGrid, WalkConfig};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::export::Format;
use crate::parse::{parse_angle, parse_direction, parse_grid, parse_spin};

/// An angle as written in a config file: a number of radians or text such
/// as `"3pi/8"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Radians(f64),
    Text(String),
}

impl AngleValue {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Self::Radians(r) if r.is_finite() => Ok(*r),
            Self::Radians(r) => Err(Error::parse("angle", &r.to_string(), "not finite")),
            Self::Text(t) => parse_angle(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryName {
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    Omega,
    Theta,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunOptions {
    pub theta: Option<AngleValue>,
    pub omega: Option<AngleValue>,
    pub direction: Option<String>,
    pub spin: Option<String>,
    pub steps: Option<usize>,
    pub half_width: Option<usize>,
    pub boundary: Option<BoundaryName>,
    pub grid: Option<String>,
    pub axis: Option<AxisName>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub measurements: Option<u64>,
    pub g_factor: Option<f64>,
    pub polar_count: Option<usize>,
    pub azimuth_count: Option<usize>,
    pub fisher: Option<f64>,
    pub tolerance: Option<f64>,
}

pub const DEFAULT_THETA: &str = "3pi/8";
pub const DEFAULT_STEPS: usize = 50;

impl RunOptions {
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|source| Error::Config { path: path.to_owned(), source })
    }

    /// Field-by-field `self.or(fallback)`.
    pub fn or(self, fallback: RunOptions) -> RunOptions {
        RunOptions {
            theta: self.theta.or(fallback.theta),
            omega: self.omega.or(fallback.omega),
            direction: self.direction.or(fallback.direction),
            spin: self.spin.or(fallback.spin),
            steps: self.steps.or(fallback.steps),
            half_width: self.half_width.or(fallback.half_width),
            boundary: self.boundary.or(fallback.boundary),
            grid: self.grid.or(fallback.grid),
            axis: self.axis.or(fallback.axis),
            format: self.format.or(fallback.format),
            workers: self.workers.or(fallback.workers),
            measurements: self.measurements.or(fallback.measurements),
            g_factor: self.g_factor.or(fallback.g_factor),
            polar_count: self.polar_count.or(fallback.polar_count),
            azimuth_count: self.azimuth_count.or(fallback.azimuth_count),
            fisher: self.fisher.or(fallback.fisher),
            tolerance: self.tolerance.or(fallback.tolerance),
        }
    }

    /// Defaults: `θ = 3π/8`, `ω = 0`, `x̂`, `|+⟩`, `T = 50`, half width `T`,
    /// bounded.
    pub fn resolve_walk(&self) -> Result<WalkConfig> {
        let theta = match &self.theta {
            Some(a) => a.radians()?,
            None => parse_angle(DEFAULT_THETA)?,
        };
        let omega = self.omega.as_ref().map(AngleValue::radians).transpose()?.unwrap_or(0.0);
        let direction = parse_direction(self.direction.as_deref().unwrap_or("x"))?;
        let spin = parse_spin(self.spin.as_deref().unwrap_or("plus"))?;
        let steps = self.steps.unwrap_or(DEFAULT_STEPS);
        let half_width = self.half_width.unwrap_or(steps);
        let lattice = match self.boundary.unwrap_or(BoundaryName::Bounded) {
            BoundaryName::Bounded => LatticeSpec::bounded(half_width),
            BoundaryName::Unbounded => LatticeSpec::unbounded(half_width),
        };
        Ok(WalkConfig::new(theta, FieldSpec::new(omega, direction), spin, steps, lattice)?)
    }

    pub fn resolve_grid(&self, default: &str) -> Result<LinearGrid> {
        parse_grid(self.grid.as_deref().unwrap_or(default))
    }

    pub fn resolve_sphere(&self) -> Result<SphereGrid> {
        Ok(SphereGrid::new(
            self.polar_count.unwrap_or(SphereGrid::DEFAULT_POLAR),
            self.azimuth_count.unwrap_or(SphereGrid::DEFAULT_AZIMUTH),
        )?)
    }

    pub fn resolve_constants(&self) -> PhysicalConstants {
        let k = PhysicalConstants::electron();
        match self.g_factor {
            Some(g) => k.with_g_factor(g),
            None => k,
        }
    }

    /// 0 lets the pool pick one worker per core.
    pub fn resolve_workers(&self) -> usize {
        self.workers.unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use magwalk_core::{BoundaryMode, Direction, SpinVector};
    use std::f64::consts::PI;

    #[test]
    fn defaults() {
        let c = RunOptions::default().resolve_walk().unwrap();
        assert_eq!(c.theta, 3.0 * PI / 8.0);
        assert_eq!(c.field, FieldSpec::new(0.0, Direction::X));
        assert_eq!(c.initial_spin, SpinVector::plus());
        assert_eq!((c.steps, c.lattice.half_width()), (50, 50));
        assert_eq!(c.lattice.boundary(), BoundaryMode::Bounded);
    }

    #[test]
    fn toml_document() {
        let o = RunOptions::from_toml_str(
            "theta = \"pi/4\"\nomega = 0.5\nspin = \"one\"\nsteps = 20\nhalf-width = 10\nboundary = \"bounded\"\nformat = \"json\"\n",
        )
        .unwrap();
        let c = o.resolve_walk().unwrap();
        assert_eq!((c.theta, c.field.omega), (PI / 4.0, 0.5));
        assert_eq!(c.lattice.half_width(), 10);
        assert_eq!(o.format, Some(Format::Json));
        assert!(RunOptions::from_toml_str("colour = 1").is_err());
    }

    #[test]
    fn first_source_wins() {
        let flags = RunOptions { steps: Some(7), ..Default::default() };
        let file = RunOptions { steps: Some(9), half_width: Some(12), ..Default::default() };
        let o = flags.or(file);
        assert_eq!((o.steps, o.half_width), (Some(7), Some(12)));
    }

    #[test]
    fn unbounded_needs_room() {
        let o = RunOptions {
            boundary: Some(BoundaryName::Unbounded),
            steps: Some(10),
            half_width: Some(5),
            ..Default::default()
        };
        assert!(o.resolve_walk().is_err());
    }
}
