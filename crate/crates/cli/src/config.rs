use std::fs;
use std::path::{Path, PathBuf};

use oscdeform_core::moments::LambdaGrid;
use oscdeform_core::{preset_params, CParams, PresetId, PresetKind};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;
pub const MIN_QUAD_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything a subcommand needs. Stored as JSON with `schema: 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub schema: u32,
    #[serde(default)]
    pub preset: Option<PresetKind>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub c: Option<[f64; 6]>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default)]
    pub lambda_grid: Option<LambdaGrid>,
    #[serde(default = "default_quad_order")]
    pub quad_order: usize,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_n_max() -> usize {
    5
}

fn default_quad_order() -> usize {
    oscdeform_core::DEFAULT_QUAD_ORDER
}

fn default_dim() -> usize {
    80
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA,
            preset: None,
            lambda: None,
            c: None,
            n_max: default_n_max(),
            lambda_grid: None,
            quad_order: default_quad_order(),
            dim: default_dim(),
            format: Format::default(),
            out: None,
        }
    }
}

/// A configuration problem; always exit status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl From<oscdeform_core::Error> for ConfigError {
    fn from(e: oscdeform_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// Where the deformation parameters come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Preset(PresetId),
    Explicit(CParams),
}

impl Source {
    pub fn params(&self) -> CParams {
        match self {
            Source::Preset(id) => preset_params(id.kind, id.lambda).expect("validated"),
            Source::Explicit(c) => *c,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Source::Preset(id) => id.to_string(),
            Source::Explicit(c) => {
                let c = c.to_array();
                format!(
                    "c = ({}, {}, {}, {}, {}, {})",
                    c[0], c[1], c[2], c[3], c[4], c[5]
                )
            }
        }
    }

    pub fn preset(&self) -> Option<PresetId> {
        match self {
            Source::Preset(id) => Some(*id),
            Source::Explicit(_) => None,
        }
    }
}

impl ScanConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let config: ScanConfig = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        if config.schema != SCHEMA {
            return Err(ConfigError(format!(
                "unsupported config schema {} (expected {SCHEMA})",
                config.schema
            )));
        }
        Ok(config)
    }

    pub fn validate_common(&self) -> Result<(), ConfigError> {
        if self.quad_order < MIN_QUAD_ORDER {
            return Err(ConfigError(format!(
                "quadrature order {} below minimum {MIN_QUAD_ORDER}",
                self.quad_order
            )));
        }
        if self.dim < oscdeform_core::fockspace::MIN_DIM {
            return Err(ConfigError(format!(
                "truncation dimension {} below minimum {}",
                self.dim,
                oscdeform_core::fockspace::MIN_DIM
            )));
        }
        Ok(())
    }

    /// A single admissible parameter set, from `preset`+`lambda` or `c`.
    ///
    /// Presets are checked for admissibility before their `lambda` range so
    /// that a bad `lambda` is reported by the inequality it breaks.
    pub fn source(&self) -> Result<Source, ConfigError> {
        let source = match (self.preset, self.c) {
            (Some(_), Some(_)) => {
                return Err(ConfigError("give either a preset or --c, not both".into()))
            }
            (None, None) => return Err(ConfigError("no parameters: give --preset or --c".into())),
            (None, Some(c)) => {
                if self.lambda.is_some() {
                    return Err(ConfigError("--lambda needs --preset".into()));
                }
                Source::Explicit(CParams::new(c)?)
            }
            (Some(kind), None) => {
                let lambda = match (kind, self.lambda) {
                    (_, Some(l)) => l,
                    (PresetKind::Harmonic, None) => 0.0,
                    (_, None) => return Err(ConfigError(format!("preset {kind} needs --lambda"))),
                };
                // case_ii takes sqrt(lambda); nothing to test for admissibility there
                if !lambda.is_finite() || (kind == PresetKind::CaseII && lambda <= 0.0) {
                    kind.check_lambda(lambda)?;
                }
                let c = preset_params(kind, lambda)?;
                c.coeffs().check_admissible()?;
                kind.check_lambda(lambda)?;
                Source::Preset(PresetId { kind, lambda })
            }
        };
        source.params().coeffs().check_admissible()?;
        Ok(source)
    }

    /// The preset and grid of a scan. Without an explicit grid each preset
    /// gets a default range inside its validity interval.
    pub fn scan_target(&self) -> Result<(PresetKind, LambdaGrid), ConfigError> {
        if self.c.is_some() {
            return Err(ConfigError(
                "scan needs a preset; explicit --c has no lambda to vary".into(),
            ));
        }
        let kind = self
            .preset
            .ok_or_else(|| ConfigError("scan needs --preset".into()))?;
        if self.lambda.is_some() {
            return Err(ConfigError("scan takes a lambda grid, not --lambda".into()));
        }
        let grid = self.lambda_grid.unwrap_or_else(|| default_grid(kind));
        grid.validate_for(kind)?;
        Ok((kind, grid))
    }
}

pub fn default_grid(kind: PresetKind) -> LambdaGrid {
    let (min, max, steps) = match kind {
        PresetKind::Harmonic => (0.0, 1.0, 2),
        PresetKind::LambdaShift => (-3.0, 3.0, 61),
        PresetKind::CaseI => (-1.0, 1.0, 21),
        PresetKind::CaseII => (1.0, 15.0, 15),
        PresetKind::CaseIII => (-0.9, 0.9, 19),
    };
    LambdaGrid { min, max, steps }
}
