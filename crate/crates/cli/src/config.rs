//! Run configuration: a flat TOML file, overridden key by key by flags.
//!
//! Every key doubles as a long flag (`wall_ratio` ↔ `--wall-ratio`). The
//! resolved [`Settings`] are echoed into each output so that a result file
//! carries the exact configuration that produced it.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

/// `ω_q/ω_p`, or a perfectly conducting wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WallRatio {
    Perfect,
    Ratio(f64),
}

impl FromStr for WallRatio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("perfect") {
            return Ok(WallRatio::Perfect);
        }
        s.parse::<f64>().map(WallRatio::Ratio).map_err(|_| format!("expected a number or \"perfect\", got {s:?}"))
    }
}

impl fmt::Display for WallRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WallRatio::Perfect => f.write_str("perfect"),
            WallRatio::Ratio(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for WallRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            WallRatio::Perfect => serializer.serialize_str("perfect"),
            WallRatio::Ratio(x) => serializer.serialize_f64(x),
        }
    }
}

impl<'de> Deserialize<'de> for WallRatio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(x) => Ok(WallRatio::Ratio(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Sphere response: the Drude polarizability or a constant `α_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarizabilityChoice {
    #[default]
    Drude,
    Static,
}

/// Raw configuration as read from a file or from flags. Unset keys are
/// `None`; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Wall plasma frequency in units of the sphere's, or "perfect".
    #[arg(long, global = true, value_name = "RATIO|perfect")]
    pub wall_ratio: Option<WallRatio>,
    /// Sphere damping γ_s/ω_p.
    #[arg(long, global = true)]
    pub gamma_s: Option<f64>,
    /// Wall damping γ_w/ω_p.
    #[arg(long, global = true)]
    pub gamma_w: Option<f64>,
    /// Inverse temperature β ω_p; unset means zero temperature.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Sphere radius a ω_p (enters the validity warnings only).
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    #[arg(long, global = true)]
    pub polarizability: Option<PolarizabilityChoice>,
    #[arg(long, global = true)]
    pub z_min: Option<f64>,
    #[arg(long, global = true)]
    pub z_max: Option<f64>,
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Add the perfect-wall force column.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub reference: Option<bool>,
    /// Separation for the spectrum command (defaults to z_min).
    #[arg(long, global = true)]
    pub z: Option<f64>,
    #[arg(long, global = true)]
    pub omega_min: Option<f64>,
    #[arg(long, global = true)]
    pub omega_max: Option<f64>,
    #[arg(long, global = true)]
    pub omega_points: Option<usize>,
    /// Explicit interval for the activation barrier report.
    #[arg(long, global = true)]
    pub barrier_from: Option<f64>,
    #[arg(long, global = true)]
    pub barrier_to: Option<f64>,
    /// Sphere plasma energy ħω_p in eV (lab units).
    #[arg(long, global = true)]
    pub omega_p_ev: Option<f64>,
    /// Sphere density in g/cm³ (lab units).
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Sphere radius in nm (lab units).
    #[arg(long, global = true)]
    pub radius_nm: Option<f64>,
    /// Separation in μm for the levitation estimate.
    #[arg(long, global = true)]
    pub z_um: Option<f64>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    pub fn parse_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_toml(&text)
    }

    /// Keys set in `top` win.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(
            base,
            top,
            wall_ratio,
            gamma_s,
            gamma_w,
            beta,
            radius,
            polarizability,
            z_min,
            z_max,
            points,
            rel_tol,
            reference,
            z,
            omega_min,
            omega_max,
            omega_points,
            barrier_from,
            barrier_to,
            omega_p_ev,
            rho,
            radius_nm,
            z_um,
            format,
            out
        )
    }
}

/// Fully resolved configuration. Optional entries stay optional; the rest
/// carry defaults. `format` and `out` are not echoed since they do not
/// change the numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub wall_ratio: WallRatio,
    pub gamma_s: f64,
    pub gamma_w: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub radius: f64,
    pub polarizability: PolarizabilityChoice,
    pub z_min: f64,
    pub z_max: f64,
    pub points: usize,
    pub rel_tol: f64,
    pub reference: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barrier_from: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barrier_to: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p_ev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_um: Option<f64>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings::from(RunConfig::default())
    }
}

impl From<RunConfig> for Settings {
    fn from(c: RunConfig) -> Self {
        Settings {
            wall_ratio: c.wall_ratio.unwrap_or(WallRatio::Ratio(2.0)),
            gamma_s: c.gamma_s.unwrap_or(0.0),
            gamma_w: c.gamma_w.unwrap_or(0.0),
            beta: c.beta,
            radius: c.radius.unwrap_or(0.01),
            polarizability: c.polarizability.unwrap_or_default(),
            z_min: c.z_min.unwrap_or(2.0),
            z_max: c.z_max.unwrap_or(16.0),
            points: c.points.unwrap_or(200),
            rel_tol: c.rel_tol.unwrap_or(1e-8),
            reference: c.reference.unwrap_or(false),
            z: c.z,
            omega_min: c.omega_min.unwrap_or(0.0),
            omega_max: c.omega_max.unwrap_or(10.0),
            omega_points: c.omega_points.unwrap_or(201),
            barrier_from: c.barrier_from,
            barrier_to: c.barrier_to,
            omega_p_ev: c.omega_p_ev,
            rho: c.rho,
            radius_nm: c.radius_nm,
            z_um: c.z_um,
            format: c.format.unwrap_or_default(),
            out: c.out,
        }
    }
}

impl Settings {
    /// The echoed keys as TOML, one `key = value` per line.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat settings always serialize")
    }

    /// Both ends of the barrier interval, or neither.
    pub fn barrier_interval(&self) -> Result<Option<(f64, f64)>, CliError> {
        match (self.barrier_from, self.barrier_to) {
            (Some(a), Some(b)) => Ok(Some((a, b))),
            (None, None) => Ok(None),
            _ => Err(CliError::Config("barrier_from and barrier_to must be given together".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_ratio_forms() {
        let c = RunConfig::parse_toml("wall_ratio = 2").unwrap();
        assert_eq!(c.wall_ratio, Some(WallRatio::Ratio(2.0)));
        let c = RunConfig::parse_toml("wall_ratio = \"perfect\"").unwrap();
        assert_eq!(c.wall_ratio, Some(WallRatio::Perfect));
        assert!(RunConfig::parse_toml("wall_ratio = \"mirror\"").is_err());
        assert_eq!("0.5".parse::<WallRatio>().unwrap(), WallRatio::Ratio(0.5));
    }

    #[test]
    fn unknown_and_nested_keys_are_rejected() {
        assert!(RunConfig::parse_toml("wall_ratio = 2\ntemperature = 3").is_err());
        assert!(RunConfig::parse_toml("[scenario]\nwall_ratio = 2").is_err());
    }

    #[test]
    fn overlay_prefers_the_top_layer() {
        let base = RunConfig::parse_toml("points = 10\nz_min = 3.0").unwrap();
        let top = RunConfig { points: Some(20), ..RunConfig::default() };
        let s = Settings::from(base.overlay(top));
        assert_eq!((s.points, s.z_min, s.z_max), (20, 3.0, 16.0));
    }

    #[test]
    fn echo_omits_output_keys() {
        let c = RunConfig::parse_toml("format = \"json\"\nout = \"x.json\"").unwrap();
        let s = Settings::from(c);
        assert_eq!(s.format, Format::Json);
        let echo = s.to_toml();
        assert!(!echo.contains("format") && !echo.contains("out ="));
        assert_eq!(
            Settings::from(RunConfig::parse_toml(&echo).unwrap()),
            Settings { format: Format::Csv, out: None, ..s }
        );
    }
}
