//! Run configuration: one JSON file per run.
//!
//! ```json
//! {
//!   "equation": "dirac1d",
//!   "model": {"family": "soler_power", "k": 1, "m": 1.0},
//!   "omega": 0.8,
//!   "grid": {"L": 30.0, "N": 1024, "scheme": {"kind": "fourier_periodic"}}
//! }
//! ```
//!
//! Every other key has a default. The effective config written next to the
//! outputs spells all of them out.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::nonlinearity::{ModelSpec, NonlinearityModel, WaveNonlinearity};
use crate::profiles::Equation;
use crate::stability::{linspace, ScanOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Profile,
    Spectrum,
    Scan,
    Virial,
    Derrick,
    Verify,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::Spectrum => "spectrum",
            Command::Scan => "scan",
            Command::Virial => "virial",
            Command::Derrick => "derrick",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: String,
    pub formats: Vec<Format>,
    /// Also write the assembled `JL` matrix in text form (spectrum only).
    pub write_matrix: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: "out".into(), formats: vec![Format::Csv, Format::Json, Format::Svg], write_matrix: false }
    }
}

impl OutputSpec {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// Pass thresholds of the `verify` table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyTolerances {
    pub kernel: f64,
    pub alpha0: f64,
    pub virial: f64,
    pub charge: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { kernel: 1e-6, alpha0: 1e-8, virial: 1e-6, charge: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub scan: ScanOptions,
    /// Bisection width when a scan brackets a sign change of `dQ/dω`.
    pub omega_star: f64,
    /// Distance from `ω*` of the two side rows.
    pub side_offset: f64,
    pub verify: VerifyTolerances,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { scan: ScanOptions::default(), omega_star: 1e-4, side_offset: 5e-3, verify: VerifyTolerances::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header: Option<serde_json::Value>,
    #[serde(default)]
    pub command: Option<Command>,
    pub equation: Equation,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub wave_model: Option<WaveNonlinearity>,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub omega_grid: Option<OmegaGrid>,
    pub grid: GridSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                Error::Config(inner.to_string())
            } else {
                Error::Config(format!("{path}: {inner}"))
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks cross-field requirements and fills in the command and defaults.
    pub fn effective(&self, command: Command) -> Result<Self> {
        if let Some(c) = self.command {
            if c != command {
                return Err(Error::Config(format!(
                    "command: config says {} but {} was requested",
                    c.as_str(),
                    command.as_str()
                )));
            }
        }
        let mut cfg = self.clone();
        cfg.header = None;
        cfg.command = Some(command);
        if cfg.grid.n_points < 8 || !cfg.grid.n_points.is_multiple_of(2) {
            return Err(Error::Config(format!("grid.N: need an even count of at least 8, got {}", cfg.grid.n_points)));
        }
        if let Some(l) = cfg.grid.half_width {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Config(format!("grid.L: must be positive, got {l}")));
            }
        }
        match (cfg.equation, command) {
            (Equation::Nlw, Command::Derrick | Command::Profile | Command::Verify) => {
                if cfg.model.is_some() {
                    return Err(Error::Config("model: nlw takes wave_model".into()));
                }
                cfg.wave_model.get_or_insert_with(WaveNonlinearity::default);
                WaveNonlinearity::new(cfg.wave_model.clone().unwrap_or_default().coefficients)
                    .map_err(|e| Error::Config(format!("wave_model: {e}")))?;
                return Ok(cfg);
            }
            (Equation::Nlw, c) => {
                return Err(Error::Config(format!("equation: {} is not available for nlw", c.as_str())));
            }
            (_, Command::Derrick) => {
                return Err(Error::Config("equation: derrick needs nlw".into()));
            }
            (Equation::Nls, Command::Virial) => {
                return Err(Error::Config("equation: virial needs dirac1d".into()));
            }
            _ => {}
        }
        if cfg.wave_model.is_some() {
            return Err(Error::Config("wave_model: only used with nlw".into()));
        }
        let spec = cfg.model.as_ref().ok_or_else(|| Error::Config("model: missing".into()))?;
        let model = NonlinearityModel::from_spec(spec).map_err(|e| Error::Config(format!("model: {e}")))?;
        if command == Command::Scan {
            let g = cfg.omega_grid.ok_or_else(|| Error::Config("omega_grid: required for scan".into()))?;
            if g.count == 0 {
                return Err(Error::Config("omega_grid.count: must be positive".into()));
            }
            for w in linspace(g.start, g.stop, g.count) {
                check_omega(w, model.mass(), "omega_grid")?;
            }
        } else {
            let w = cfg.omega.ok_or_else(|| Error::Config("omega: required".into()))?;
            check_omega(w, model.mass(), "omega")?;
        }
        Ok(cfg)
    }

    pub fn scalar_model(&self) -> Result<NonlinearityModel> {
        let spec = self.model.as_ref().ok_or_else(|| Error::Config("model: missing".into()))?;
        NonlinearityModel::from_spec(spec)
    }

    pub fn omegas(&self) -> Vec<f64> {
        match (self.omega_grid, self.omega) {
            (Some(g), _) => linspace(g.start, g.stop, g.count),
            (None, Some(w)) => vec![w],
            (None, None) => Vec::new(),
        }
    }

    /// SHA-256 of the compact effective config without the output section,
    /// so the hash depends only on what determines the numbers.
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).unwrap_or_default();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("output");
            obj.remove("header");
        }
        let digest = Sha256::digest(v.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn check_omega(w: f64, m: f64, field: &str) -> Result<()> {
    if !w.is_finite() || w.abs() >= m {
        return Err(Error::Config(format!("{field}: ω = {w} must satisfy |ω| < m = {m}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIRAC: &str = r#"{
        "equation": "dirac1d",
        "model": {"family": "soler_power", "k": 1, "m": 1.0},
        "omega": 0.8,
        "grid": {"L": 30.0, "N": 1024}
    }"#;

    #[test]
    fn minimal_config_materializes() {
        let c = RunConfig::from_json(DIRAC).unwrap();
        let e = c.effective(Command::Verify).unwrap();
        assert_eq!(e.command, Some(Command::Verify));
        assert_eq!(e.tolerances, Tolerances::default());
        let text = serde_json::to_string_pretty(&e).unwrap();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.hash(), e.hash());
    }

    #[test]
    fn unknown_key_is_named() {
        let bad = DIRAC.replace("\"omega\"", "\"omgea\"");
        let msg = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(msg.contains("omgea"), "{msg}");
        let bad = DIRAC.replace("\"N\": 1024}", "\"N\": 1024, \"M\": 3}");
        let msg = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(msg.contains("grid") && msg.contains("`M`"), "{msg}");
    }

    #[test]
    fn negative_n_names_the_field() {
        let msg = RunConfig::from_json(&DIRAC.replace("1024", "-4")).unwrap_err().to_string();
        assert!(msg.contains("grid.N"), "{msg}");
    }

    #[test]
    fn cross_field_checks() {
        let c = RunConfig::from_json(DIRAC).unwrap();
        assert!(c.effective(Command::Scan).unwrap_err().to_string().contains("omega_grid"));
        assert!(c.effective(Command::Derrick).is_err());
        let far = RunConfig::from_json(&DIRAC.replace("0.8", "1.2")).unwrap();
        assert!(far.effective(Command::Profile).unwrap_err().to_string().starts_with("config error: omega"));
    }

    #[test]
    fn hash_ignores_output() {
        let a = RunConfig::from_json(DIRAC).unwrap().effective(Command::Profile).unwrap();
        let mut b = a.clone();
        b.output.dir = "elsewhere".into();
        assert_eq!(a.hash(), b.hash());
        b.omega = Some(0.7);
        assert_ne!(a.hash(), b.hash());
    }
}
